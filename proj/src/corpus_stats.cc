#include "ecie/corpus_stats.h"

#include <algorithm>
#include <limits>
#include <set>
#include <sstream>

#include "ecie/resources.h"

namespace ecie {

namespace {

std::vector<double> Coverage(const std::vector<int> &values, int max_value) {
  std::vector<std::int64_t> hist(max_value + 1, 0);
  for (int v : values) ++hist[v];
  std::vector<double> cdf(max_value + 1, 0.0);
  std::int64_t running = 0;
  for (int d = 0; d <= max_value; ++d) {
    running += hist[d];
    cdf[d] = static_cast<double>(running) / static_cast<double>(values.size());
  }
  return cdf;
}

// Distinct relation triples per document, with resolved clusters.
template <typename Fn>
void ForEachDistinctRelation(const Document &d, Fn fn) {
  std::set<RelationTriple> seen;
  for (const RelationTriple &r : d.relations) {
    if (!seen.insert(r).second) continue;
    const EntityCluster *head = d.FindCluster(r.head);
    const EntityCluster *tail = d.FindCluster(r.tail);
    if (head == nullptr || tail == nullptr) {
      throw Error("DANGLING_RELATION",
                  d.id + ": relation references a missing cluster");
    }
    fn(r, *head, *tail);
  }
}

std::int64_t MentionPairs(const EntityCluster &a, const EntityCluster &b) {
  return static_cast<std::int64_t>(a.mentions.size()) *
         static_cast<std::int64_t>(b.mentions.size());
}

}  // namespace

int TokenGap(Span a, Span b) {
  if (b.begin < a.begin) std::swap(a, b);
  return std::max(0, b.begin - a.end);
}

std::string DistanceProfile::ToTsv() const {
  std::ostringstream out;
  out << "threshold\tcdf_min_tokens\tcdf_max_tokens\tcdf_min_sent\t"
         "cdf_max_sent\n";
  auto at = [](const std::vector<double> &cdf, std::size_t d) {
    return d < cdf.size() ? cdf[d] : 1.0;
  };
  const std::size_t n = std::max(cdf_max_tokens.size(), cdf_max_sentences.size());
  for (std::size_t d = 0; d < n; ++d) {
    out << d << '\t' << at(cdf_min_tokens, d) << '\t' << at(cdf_max_tokens, d)
        << '\t' << at(cdf_min_sentences, d) << '\t'
        << at(cdf_max_sentences, d) << '\n';
  }
  return out.str();
}

DistanceProfile RelationDistanceProfile(const std::vector<Document> &corpus) {
  DistanceProfile profile;
  std::vector<int> min_tok, max_tok, min_sent, max_sent;
  for (const Document &d : corpus) {
    ForEachDistinctRelation(d, [&](const RelationTriple &r,
                                   const EntityCluster &head,
                                   const EntityCluster &tail) {
      RelationDistance rd{d.id, r, std::numeric_limits<int>::max(), 0,
                          std::numeric_limits<int>::max(), 0};
      for (Mention h : head.mentions) {
        const int sh = d.SentenceOf(h.begin);
        for (Mention t : tail.mentions) {
          if (h == t) {
            throw Error("SHARED_MENTION",
                        d.id + ": clusters '" + r.head + "' and '" + r.tail +
                            "' share a mention");
          }
          const int st = d.SentenceOf(t.begin);
          if (sh < 0 || st < 0) {
            throw Error("SENTENCE_COVERAGE",
                        d.id + ": mention outside every sentence");
          }
          const int gap = TokenGap(h, t);
          const int sd = std::abs(sh - st);
          rd.min_token_gap = std::min(rd.min_token_gap, gap);
          rd.max_token_gap = std::max(rd.max_token_gap, gap);
          rd.min_sentence_distance = std::min(rd.min_sentence_distance, sd);
          rd.max_sentence_distance = std::max(rd.max_sentence_distance, sd);
        }
      }
      min_tok.push_back(rd.min_token_gap);
      max_tok.push_back(rd.max_token_gap);
      min_sent.push_back(rd.min_sentence_distance);
      max_sent.push_back(rd.max_sentence_distance);
      profile.relations.push_back(std::move(rd));
    });
  }
  if (profile.relations.empty()) return profile;
  const int tok_hi = *std::max_element(max_tok.begin(), max_tok.end());
  const int sent_hi = *std::max_element(max_sent.begin(), max_sent.end());
  profile.cdf_min_tokens = Coverage(min_tok, tok_hi);
  profile.cdf_max_tokens = Coverage(max_tok, tok_hi);
  profile.cdf_min_sentences = Coverage(min_sent, sent_hi);
  profile.cdf_max_sentences = Coverage(max_sent, sent_hi);
  return profile;
}

TypeHierarchy::TypeHierarchy(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::vector<std::string> stack;  // stack[k] = current node at depth k
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(' ');
    if (first == std::string::npos || line[first] == '#') continue;
    if (first % 2 != 0) {
      throw Error("HIERARCHY", "odd indentation in type hierarchy: " + line);
    }
    const int depth = static_cast<int>(first / 2);
    if (depth > static_cast<int>(stack.size())) {
      throw Error("HIERARCHY", "indentation skips a level: " + line);
    }
    std::string tag = line.substr(first);
    stack.resize(depth);
    if (parent_.count(tag)) {
      throw Error("HIERARCHY", "tag listed twice in hierarchy: " + tag);
    }
    parent_[tag] = depth == 0 ? "" : stack.back();
    depth_[tag] = depth;
    order_.push_back(tag);
    stack.push_back(tag);
  }
}

const TypeHierarchy &TypeHierarchy::Builtin() {
  static const TypeHierarchy hierarchy(resources::TypeHierarchy());
  return hierarchy;
}

int TypeHierarchy::Depth(const std::string &tag) const {
  auto it = depth_.find(tag);
  return it == depth_.end() ? -1 : it->second;
}

std::vector<std::string> TypeHierarchy::Lineage(const std::string &tag) const {
  std::vector<std::string> lineage{tag};
  auto it = parent_.find(tag);
  while (it != parent_.end() && !it->second.empty()) {
    lineage.push_back(it->second);
    it = parent_.find(it->second);
  }
  return lineage;
}

double TypeHistogram::ClusterPercent(const TagCount &count) const {
  return total.clusters == 0 ? 0.0
                             : 100.0 * static_cast<double>(count.clusters) /
                                   static_cast<double>(total.clusters);
}

double TypeHistogram::MentionPercent(const TagCount &count) const {
  return total.mentions == 0 ? 0.0
                             : 100.0 * static_cast<double>(count.mentions) /
                                   static_cast<double>(total.mentions);
}

TypeHistogram EntityTypeHistogram(const std::vector<Document> &corpus,
                                  const TypeHierarchy &hierarchy) {
  TypeHistogram histogram;
  for (const std::string &tag : hierarchy.tags()) histogram.rolled_up[tag];
  for (const Document &d : corpus) {
    for (const EntityCluster &c : d.clusters) {
      const auto mentions = static_cast<std::int64_t>(c.mentions.size());
      histogram.total.clusters += 1;
      histogram.total.mentions += mentions;
      std::set<std::string> tags(c.tags.begin(), c.tags.end());
      std::set<std::string> nodes;
      for (const std::string &tag : tags) {
        TagCount &flat = histogram.per_tag[tag];
        flat.clusters += 1;
        flat.mentions += mentions;
        if (!hierarchy.Contains(tag)) continue;
        for (const std::string &node : hierarchy.Lineage(tag)) {
          nodes.insert(node);
        }
      }
      for (const std::string &node : nodes) {
        TagCount &rolled = histogram.rolled_up[node];
        rolled.clusters += 1;
        rolled.mentions += mentions;
      }
    }
  }
  return histogram;
}

RelationTypeHistogram RelationTypeHistogramOf(
    const std::vector<Document> &corpus) {
  RelationTypeHistogram histogram;
  for (const Document &d : corpus) {
    ForEachDistinctRelation(d, [&](const RelationTriple &r,
                                   const EntityCluster &head,
                                   const EntityCluster &tail) {
      PairCount count{1, MentionPairs(head, tail)};
      histogram.per_type[r.type] += count;
      histogram.total += count;
    });
  }
  return histogram;
}

MultilabelHistogram MultilabelRelationHistogram(
    const std::vector<Document> &corpus) {
  MultilabelHistogram histogram;
  for (const Document &d : corpus) {
    std::map<std::pair<std::string, std::string>, std::set<std::string>> pairs;
    std::map<std::pair<std::string, std::string>, std::int64_t> mention_pairs;
    ForEachDistinctRelation(d, [&](const RelationTriple &r,
                                   const EntityCluster &head,
                                   const EntityCluster &tail) {
      pairs[{r.head, r.tail}].insert(r.type);
      mention_pairs[{r.head, r.tail}] = MentionPairs(head, tail);
    });
    for (const auto &[pair, types] : pairs) {
      const std::size_t bucket = std::min<std::size_t>(types.size(), 4) - 1;
      PairCount count{1, mention_pairs[pair]};
      histogram.buckets[bucket] += count;
      histogram.total += count;
    }
  }
  return histogram;
}

CorpusSummary Summarize(const std::vector<Document> &corpus) {
  CorpusSummary summary;
  std::set<std::string> tags, types;
  std::int64_t singletons = 0, labels = 0;
  for (const Document &d : corpus) {
    summary.documents += 1;
    summary.tokens += static_cast<std::int64_t>(d.tokens.size());
    for (const EntityCluster &c : d.clusters) {
      const auto mentions = static_cast<std::int64_t>(c.mentions.size());
      summary.clusters += 1;
      summary.mentions += mentions;
      singletons += mentions == 1;
      std::set<std::string> cluster_tags(c.tags.begin(), c.tags.end());
      labels += static_cast<std::int64_t>(cluster_tags.size());
      tags.insert(cluster_tags.begin(), cluster_tags.end());
      if (c.link.linked()) {
        summary.linked_clusters += 1;
        summary.linked_mentions += mentions;
      }
    }
    ForEachDistinctRelation(d, [&](const RelationTriple &r,
                                   const EntityCluster &head,
                                   const EntityCluster &tail) {
      summary.relation_triples += 1;
      summary.relation_mention_pairs += MentionPairs(head, tail);
      types.insert(r.type);
    });
  }
  summary.entity_types = static_cast<std::int64_t>(tags.size());
  summary.relation_types = static_cast<std::int64_t>(types.size());
  if (summary.clusters > 0) {
    summary.singleton_fraction = static_cast<double>(singletons) /
                                 static_cast<double>(summary.clusters);
    summary.mean_labels_per_entity =
        static_cast<double>(labels) / static_cast<double>(summary.clusters);
  }
  return summary;
}

PriorLinkResult PriorLinkBaseline(const std::vector<Document> &train,
                                  const std::vector<Document> &test) {
  std::map<std::string, std::map<std::string, std::int64_t>> link_counts;
  for (const Document &d : train) {
    for (const EntityCluster &c : d.clusters) {
      if (!c.link.linked()) continue;
      for (Mention m : c.mentions) ++link_counts[d.SurfaceForm(m)][c.link.id];
    }
  }
  std::map<std::string, std::string> prior;
  for (const auto &[surface, counts] : link_counts) {
    // std::map iterates ids in ascending order, so strict '>' keeps the
    // smallest id among equally frequent links.
    const std::string *best = nullptr;
    std::int64_t best_count = 0;
    for (const auto &[id, count] : counts) {
      if (count > best_count) {
        best = &id;
        best_count = count;
      }
    }
    prior[surface] = *best;
  }

  PriorLinkResult result;
  for (const Document &d : test) {
    for (const EntityCluster &c : d.clusters) {
      if (!c.link.linked()) continue;
      for (Mention m : c.mentions) {
        result.evaluated += 1;
        auto it = prior.find(d.SurfaceForm(m));
        if (it == prior.end()) {
          result.unseen += 1;
        } else if (it->second == c.link.id) {
          result.correct += 1;
        }
      }
    }
  }
  if (result.evaluated == 0) {
    throw Error("NO_LINKED_MENTIONS", "test corpus has no linked mentions");
  }
  result.accuracy = static_cast<double>(result.correct) /
                    static_cast<double>(result.evaluated);
  return result;
}

}  // namespace ecie
