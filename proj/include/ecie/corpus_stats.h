#ifndef ECIE_CORPUS_STATS_H_
#define ECIE_CORPUS_STATS_H_

// Descriptive corpus statistics: size summary, entity-type and relation-type
// histograms, multi-label relation histogram, relation distance profiles and
// the train-prior entity-linking baseline.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ecie/corpus.h"

namespace ecie {

// Distances between the mentions of the two clusters of one relation. The
// token gap of two spans is the number of tokens strictly between them (0 for
// adjacent or overlapping spans); sentence distance is the absolute
// difference of sentence indices of the spans' first tokens.
struct RelationDistance {
  std::string document_id;
  RelationTriple relation;
  int min_token_gap = 0;
  int max_token_gap = 0;
  int min_sentence_distance = 0;
  int max_sentence_distance = 0;
};

struct DistanceProfile {
  std::vector<RelationDistance> relations;
  // Coverage at threshold d (index d): fraction of relations whose distance
  // is <= d. All four curves share the same length and end at 1.0.
  std::vector<double> cdf_min_tokens;
  std::vector<double> cdf_max_tokens;
  std::vector<double> cdf_min_sentences;
  std::vector<double> cdf_max_sentences;

  // Tab-separated plot data: threshold, cdf_min_tokens, cdf_max_tokens,
  // cdf_min_sent, cdf_max_sent (with a header line).
  std::string ToTsv() const;
};

int TokenGap(Span a, Span b);

// Throws Error("SHARED_MENTION") when a relation's clusters share a span, and
// Error("SENTENCE_COVERAGE") when a mention lies outside every sentence.
DistanceProfile RelationDistanceProfile(const std::vector<Document> &corpus);

// Entity type hierarchy, one tag per line, two spaces of indentation per
// level ('#' comments allowed).
class TypeHierarchy {
 public:
  explicit TypeHierarchy(std::string_view text);
  static const TypeHierarchy &Builtin();

  // Tags in file order.
  const std::vector<std::string> &tags() const { return order_; }
  int Depth(const std::string &tag) const;
  bool Contains(const std::string &tag) const { return parent_.count(tag); }
  // `tag` followed by its ancestors up to the root; just `tag` if unknown.
  std::vector<std::string> Lineage(const std::string &tag) const;

 private:
  std::vector<std::string> order_;
  std::map<std::string, std::string> parent_;  // roots map to ""
  std::map<std::string, int> depth_;
};

struct TagCount {
  std::int64_t clusters = 0;
  std::int64_t mentions = 0;
};

struct TypeHistogram {
  // Flat counts per tag as annotated.
  std::map<std::string, TagCount> per_tag;
  // Hierarchy node counts: a cluster counts once at every node that is one
  // of its tags or an ancestor of one.
  std::map<std::string, TagCount> rolled_up;
  TagCount total;  // all clusters / all mentions

  double ClusterPercent(const TagCount &count) const;
  double MentionPercent(const TagCount &count) const;
};

TypeHistogram EntityTypeHistogram(
    const std::vector<Document> &corpus,
    const TypeHierarchy &hierarchy = TypeHierarchy::Builtin());

struct PairCount {
  std::int64_t entity_pairs = 0;
  std::int64_t mention_pairs = 0;

  PairCount &operator+=(const PairCount &other) {
    entity_pairs += other.entity_pairs;
    mention_pairs += other.mention_pairs;
    return *this;
  }
};

// Per type: distinct (head, type, tail) triples and the sum over them of
// |mentions(head)| * |mentions(tail)|.
struct RelationTypeHistogram {
  std::map<std::string, PairCount> per_type;
  PairCount total;
};

RelationTypeHistogram RelationTypeHistogramOf(
    const std::vector<Document> &corpus);

// Related (head, tail) cluster pairs grouped by their number of distinct
// relation labels: buckets[0] = 1 label, ..., buckets[3] = 4 or more.
struct MultilabelHistogram {
  std::array<PairCount, 4> buckets{};
  PairCount total;
};

MultilabelHistogram MultilabelRelationHistogram(
    const std::vector<Document> &corpus);

struct CorpusSummary {
  std::int64_t documents = 0;
  std::int64_t tokens = 0;
  std::int64_t mentions = 0;
  std::int64_t clusters = 0;
  std::int64_t entity_types = 0;      // distinct tags in use
  std::int64_t relation_triples = 0;  // distinct (head, type, tail)
  std::int64_t relation_types = 0;    // distinct types in use
  std::int64_t relation_mention_pairs = 0;
  std::int64_t linked_mentions = 0;   // mentions of clusters with a KB id
  std::int64_t linked_clusters = 0;
  double singleton_fraction = 0;      // 0 for an empty corpus
  double mean_labels_per_entity = 0;
};

CorpusSummary Summarize(const std::vector<Document> &corpus);

// Most-frequent-link baseline: surface form (tokens joined by spaces) ->
// most frequent KB id among linked training mentions, ties broken by the
// smallest id. Accuracy over test mentions whose cluster is linked; unseen
// surfaces predict NIL. Throws Error("NO_LINKED_MENTIONS") if the test side
// has no linked mention.
struct PriorLinkResult {
  double accuracy = 0;
  std::int64_t evaluated = 0;
  std::int64_t correct = 0;
  std::int64_t unseen = 0;
};

PriorLinkResult PriorLinkBaseline(const std::vector<Document> &train,
                                  const std::vector<Document> &test);

}  // namespace ecie

#endif  // ECIE_CORPUS_STATS_H_
