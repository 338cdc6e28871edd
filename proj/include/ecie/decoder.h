#ifndef ECIE_DECODER_H_
#define ECIE_DECODER_H_

// Entity-centric decoding: lifts mention-level predictions (span clusters,
// tagged spans, span-pair relations) to cluster-level entities and relations.

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ecie/corpus.h"
#include "json.hpp"

namespace ecie {

struct MentionRelation {
  Mention head;
  std::string type;
  Mention tail;

  friend bool operator==(const MentionRelation &,
                         const MentionRelation &) = default;
};

using ClusterMap = std::map<std::string, std::vector<Mention>>;
using ClusterPair = std::pair<std::string, std::string>;

struct DecodeInput {
  ClusterMap clusters;                                   // predicted clusters
  std::vector<std::pair<Mention, std::string>> mentions; // tagged spans
  std::vector<MentionRelation> relations;                // span-pair relations
};

struct DecodeOutput {
  ClusterMap clusters;
  std::map<std::string, std::set<std::string>> entities;
  std::map<ClusterPair, std::set<std::string>> relations;
  // Span-pair relations dropped because an endpoint is in no cluster.
  int discarded_relations = 0;

  friend bool operator==(const DecodeOutput &, const DecodeOutput &) = default;
};

// Tagged spans outside every cluster become fresh singleton clusters named
// "gen-<k>", k counting up in order of first appearance (ids already used by
// the input are skipped). Throws Error("MENTION_MULTI_CLUSTER") if a span is
// listed under two cluster ids, Error("SPAN_ORDER") for spans with
// begin >= end or begin < 0, Error("EMPTY_CLUSTER") for empty clusters.
DecodeOutput DecodeEntityCentric(const DecodeInput &input);

// {"p_cl": {id: [[b,e],...]}, "p_men": [[[b,e],tag],...],
//  "p_rel": [[[b,e],type,[b,e]],...]}
DecodeInput DecodeInputFromJson(const nlohmann::json &object);
nlohmann::json DecodeOutputToJson(const DecodeOutput &output);

// Re-expresses decoded output as predictions: every cluster span with each of
// its cluster's tags, and each cluster relation anchored on first mentions.
DecodeInput ReprojectOutput(const DecodeOutput &output);

// Canonical document view of a decoded prediction, suitable for scoring.
// Clusters keep their ids; links are left unannotated. Relations from a
// cluster to itself are dropped, since documents forbid head == tail.
Document ToDocument(const DecodeOutput &output, std::string id,
                    std::vector<std::string> tokens = {},
                    std::vector<Span> sentences = {});

}  // namespace ecie

#endif  // ECIE_DECODER_H_
