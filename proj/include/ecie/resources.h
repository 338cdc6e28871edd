#ifndef ECIE_RESOURCES_H_
#define ECIE_RESOURCES_H_

#include <string_view>

// Text resources compiled in from resources/ at build time.
namespace ecie::resources {

std::string_view TagVocabulary();
std::string_view RelationTypes();
std::string_view TypeHierarchy();
std::string_view ConsistencyRules();

}  // namespace ecie::resources

#endif  // ECIE_RESOURCES_H_
