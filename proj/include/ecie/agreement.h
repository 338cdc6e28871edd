#ifndef ECIE_AGREEMENT_H_
#define ECIE_AGREEMENT_H_

// Cohen's kappa between two annotators, and corpus-level agreement for the
// entity, coreference, linking and relation annotation layers.

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ecie/corpus.h"

namespace ecie {

// Aligned labels of annotator 1 and annotator 2 over the same items.
struct AnnotationPair {
  std::vector<std::pair<std::string, std::string>> items;
};

// All three throw Error("EMPTY_ANNOTATION") when there are no items.
double ObservedAgreement(const AnnotationPair &pair);
double ExpectedAgreement(const AnnotationPair &pair);

// (p_o - p_e) / (1 - p_e). When p_e == 1 the value is 1 if p_o == 1, and
// Error("KAPPA_UNDEFINED") is thrown otherwise.
double CohenKappa(const AnnotationPair &pair);

// Presence of one label per item for each annotator.
struct BinaryLabelItems {
  std::string label;
  std::vector<std::pair<bool, bool>> items;

  // Occurrences of the label across both annotators.
  double Support() const;
  AnnotationPair ToPair() const;
};

// Mean of per-label binary kappas weighted by label support. Throws
// Error("EMPTY_ANNOTATION") if there are no labels or the total support is 0.
double MultilabelKappa(const std::vector<BinaryLabelItems> &labels);

enum class AgreementTask { kEntity, kCoref, kLinking, kRelation };

// Throws Error("USAGE") for unknown names.
AgreementTask ParseAgreementTask(std::string_view name);

struct KappaRow {
  std::string label;
  double support = 0;
  double p_o = 0;
  double p_e = 0;
  double kappa = 0;
};

struct AgreementReport {
  std::size_t items = 0;
  // For multi-label layers p_o and p_e are support-weighted means of the
  // per-label values and kappa is MultilabelKappa.
  double p_o = 0;
  double p_e = 0;
  double kappa = 0;
  // Detection-only agreement (annotated vs. absent), for entity and relation.
  bool has_detection = false;
  KappaRow detection;
  std::vector<KappaRow> per_label;
};

// Aligns the two annotations by (document id, span) for mentions and by
// (document id, head span, tail span) for relation mention pairs; an item
// annotated by only one side gets the label "absent" on the other. With
// `conditioned`, label agreement for entity and relation layers is restricted
// to items both annotators detected.
//
//   entity    per-tag presence over mentions (multi-label)
//   coref     mention pairs labelled "same" / "different" / "absent"
//   linking   mentions labelled with the cluster's KB link ("NIL", "absent")
//   relation  per-type presence over related mention pairs (multi-label)
AgreementReport CorpusAgreement(const std::vector<Document> &a,
                                const std::vector<Document> &b,
                                AgreementTask task, bool conditioned = false);

}  // namespace ecie

#endif  // ECIE_AGREEMENT_H_
