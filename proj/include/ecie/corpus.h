#ifndef ECIE_CORPUS_H_
#define ECIE_CORPUS_H_

// Entity-centric document model: token sequence, sentence boundaries, entity
// clusters carrying all labels, and relations between clusters.

#include <compare>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "ecie/error.h"
#include "json.hpp"

namespace ecie {

// Half-open token interval [begin, end).
struct Span {
  int begin = 0;
  int end = 0;

  int width() const { return end - begin; }
  friend auto operator<=>(const Span &, const Span &) = default;
};

using Mention = Span;

enum class Split { kTrain, kTest, kUnsplit };

std::string_view SplitName(Split split);

// Knowledge-base link of a cluster. An unannotated link is distinct from an
// explicit NIL (the entity has no KB counterpart).
struct KbLink {
  enum class State { kUnannotated, kNil, kEntity };

  State state = State::kUnannotated;
  std::string id;

  static KbLink Nil() { return {State::kNil, ""}; }
  static KbLink To(std::string id) { return {State::kEntity, std::move(id)}; }

  bool linked() const { return state == State::kEntity; }
  friend bool operator==(const KbLink &, const KbLink &) = default;
};

struct EntityCluster {
  std::string id;
  std::vector<Mention> mentions;
  std::vector<std::string> tags;
  KbLink link;

  bool HasTag(std::string_view tag) const;
  friend bool operator==(const EntityCluster &,
                         const EntityCluster &) = default;
};

struct RelationTriple {
  std::string head;
  std::string type;
  std::string tail;

  friend auto operator<=>(const RelationTriple &,
                          const RelationTriple &) = default;
};

struct Document {
  std::string id;
  Split split = Split::kUnsplit;
  std::vector<std::string> tokens;
  std::vector<Span> sentences;
  std::vector<EntityCluster> clusters;
  std::vector<RelationTriple> relations;

  const EntityCluster *FindCluster(std::string_view cluster_id) const;

  // Index of the sentence containing `token`, or -1.
  int SentenceOf(int token) const;

  // Tokens of `span` joined by single spaces.
  std::string SurfaceForm(Span span) const;

  friend bool operator==(const Document &, const Document &) = default;
};

struct Finding {
  std::string document_id;
  std::string code;
  std::string message;

  friend bool operator==(const Finding &, const Finding &) = default;
};

struct ValidationReport {
  std::vector<Finding> errors;
  std::vector<Finding> warnings;

  bool ok() const { return errors.empty(); }
  void Append(const ValidationReport &other);
  friend bool operator==(const ValidationReport &,
                         const ValidationReport &) = default;
};

// Raised when a corpus breaks a hard invariant during parsing.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<Finding> findings);
  const std::vector<Finding> &findings() const { return findings_; }

 private:
  std::vector<Finding> findings_;
};

// Declared tag and relation-type vocabularies. A vocabulary line ending in
// '*' admits every label with that prefix.
class Vocabulary {
 public:
  Vocabulary(std::string_view tag_text, std::string_view relation_text);

  // Vocabulary seeded from the bundled resource files.
  static const Vocabulary &Builtin();

  bool KnownTag(std::string_view tag) const;
  bool KnownRelationType(std::string_view type) const;

 private:
  struct Entries {
    std::unordered_set<std::string> exact;
    std::vector<std::string> prefixes;
    bool Contains(std::string_view label) const;
  };
  static Entries Load(std::string_view text);

  Entries tags_;
  Entries relation_types_;
};

enum class CorpusFormat { kJsonLines, kPerFile };

struct ParseOptions {
  // Check hard invariants and throw ValidationError on breach.
  bool validate = true;
};

// Reads a corpus. kJsonLines expects one document per line; kPerFile expects
// either a single JSON document file or a directory of *.json files (read in
// filename order).
std::vector<Document> ParseCorpus(const std::filesystem::path &path,
                                  CorpusFormat format,
                                  const ParseOptions &options = {});

// Parses JSON Lines text. Blank lines are skipped.
std::vector<Document> ParseCorpusText(std::string_view text,
                                      const ParseOptions &options = {});

// Throws Error("SCHEMA", ...) when the object does not match the schema.
Document DocumentFromJson(const nlohmann::json &object);
nlohmann::json DocumentToJson(const Document &document);

// One compact JSON object per line, newline-terminated.
std::string SerializeCorpus(const std::vector<Document> &documents);

ValidationReport ValidateDocument(
    const Document &document,
    const Vocabulary &vocabulary = Vocabulary::Builtin());

// Maps every mention to the id of its cluster. Throws
// Error("MENTION_MULTI_CLUSTER") if a span belongs to two clusters.
std::map<Mention, std::string> SpanIndex(const Document &document);

std::string ReadFile(const std::filesystem::path &path);

}  // namespace ecie

#endif  // ECIE_CORPUS_H_
