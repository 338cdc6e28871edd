#include "ecie/decoder.h"

#include <algorithm>

namespace ecie {

using nlohmann::json;

namespace {

void CheckSpan(Mention m) {
  if (m.begin < 0 || m.begin >= m.end) {
    throw Error("SPAN_ORDER", "malformed span [" + std::to_string(m.begin) +
                                  "," + std::to_string(m.end) + ")");
  }
}

Mention SpanFromJson(const json &value) {
  if (!value.is_array() || value.size() != 2 || !value[0].is_number_integer() ||
      !value[1].is_number_integer()) {
    throw Error("SCHEMA", "span must be a pair of integers: " + value.dump());
  }
  return {value[0].get<int>(), value[1].get<int>()};
}

json SpanToJson(Mention m) { return json::array({m.begin, m.end}); }

}  // namespace

DecodeOutput DecodeEntityCentric(const DecodeInput &input) {
  DecodeOutput out;
  out.clusters = input.clusters;

  std::map<Mention, std::string> cluster_of;
  for (const auto &[id, spans] : input.clusters) {
    if (spans.empty()) {
      throw Error("EMPTY_CLUSTER", "predicted cluster '" + id + "' is empty");
    }
    for (Mention m : spans) {
      CheckSpan(m);
      auto [it, inserted] = cluster_of.emplace(m, id);
      if (!inserted && it->second != id) {
        throw Error("MENTION_MULTI_CLUSTER",
                    "span [" + std::to_string(m.begin) + "," +
                        std::to_string(m.end) + ") predicted in clusters '" +
                        it->second + "' and '" + id + "'");
      }
    }
  }

  int next_fresh = 0;
  auto fresh_id = [&] {
    std::string id;
    do {
      id = "gen-" + std::to_string(next_fresh++);
    } while (out.clusters.count(id));
    return id;
  };

  for (const auto &[span, tag] : input.mentions) {
    CheckSpan(span);
    auto it = cluster_of.find(span);
    if (it == cluster_of.end()) {
      std::string id = fresh_id();
      it = cluster_of.emplace(span, id).first;
      out.clusters[id] = {span};
    }
    out.entities[it->second].insert(tag);
  }

  for (const MentionRelation &r : input.relations) {
    CheckSpan(r.head);
    CheckSpan(r.tail);
    auto head = cluster_of.find(r.head);
    auto tail = cluster_of.find(r.tail);
    if (head == cluster_of.end() || tail == cluster_of.end()) {
      ++out.discarded_relations;
      continue;
    }
    out.relations[{head->second, tail->second}].insert(r.type);
  }
  return out;
}

DecodeInput DecodeInputFromJson(const json &object) {
  if (!object.is_object()) throw Error("SCHEMA", "prediction must be an object");
  DecodeInput input;
  if (auto it = object.find("p_cl"); it != object.end()) {
    if (!it->is_object()) throw Error("SCHEMA", "p_cl must be an object");
    for (const auto &[id, spans] : it->items()) {
      if (!spans.is_array()) throw Error("SCHEMA", "p_cl entries must be arrays");
      std::vector<Mention> &list = input.clusters[id];
      for (const json &span : spans) list.push_back(SpanFromJson(span));
    }
  }
  if (auto it = object.find("p_men"); it != object.end()) {
    for (const json &item : *it) {
      if (!item.is_array() || item.size() != 2 || !item[1].is_string()) {
        throw Error("SCHEMA", "p_men entries are [[b,e],tag]: " + item.dump());
      }
      input.mentions.emplace_back(SpanFromJson(item[0]),
                                  item[1].get<std::string>());
    }
  }
  if (auto it = object.find("p_rel"); it != object.end()) {
    for (const json &item : *it) {
      if (!item.is_array() || item.size() != 3 || !item[1].is_string()) {
        throw Error("SCHEMA",
                    "p_rel entries are [[b,e],type,[b,e]]: " + item.dump());
      }
      input.relations.push_back({SpanFromJson(item[0]),
                                 item[1].get<std::string>(),
                                 SpanFromJson(item[2])});
    }
  }
  return input;
}

json DecodeOutputToJson(const DecodeOutput &output) {
  json clusters = json::object();
  for (const auto &[id, spans] : output.clusters) {
    json list = json::array();
    for (Mention m : spans) list.push_back(SpanToJson(m));
    clusters[id] = std::move(list);
  }
  json entities = json::object();
  for (const auto &[id, tags] : output.entities) entities[id] = tags;
  json relations = json::array();
  for (const auto &[pair, types] : output.relations) {
    relations.push_back({{"head", pair.first},
                         {"tail", pair.second},
                         {"types", types}});
  }
  return {{"clusters", std::move(clusters)},
          {"d_ent", std::move(entities)},
          {"d_rel", std::move(relations)},
          {"discarded_relations", output.discarded_relations}};
}

DecodeInput ReprojectOutput(const DecodeOutput &output) {
  DecodeInput input;
  input.clusters = output.clusters;
  for (const auto &[id, tags] : output.entities) {
    for (Mention m : output.clusters.at(id)) {
      for (const std::string &tag : tags) input.mentions.emplace_back(m, tag);
    }
  }
  for (const auto &[pair, types] : output.relations) {
    Mention head = output.clusters.at(pair.first).front();
    Mention tail = output.clusters.at(pair.second).front();
    for (const std::string &type : types) {
      input.relations.push_back({head, type, tail});
    }
  }
  return input;
}

Document ToDocument(const DecodeOutput &output, std::string id,
                    std::vector<std::string> tokens,
                    std::vector<Span> sentences) {
  Document document;
  document.id = std::move(id);
  document.tokens = std::move(tokens);
  document.sentences = std::move(sentences);
  for (const auto &[cluster_id, spans] : output.clusters) {
    EntityCluster cluster;
    cluster.id = cluster_id;
    cluster.mentions = spans;
    std::sort(cluster.mentions.begin(), cluster.mentions.end());
    cluster.mentions.erase(
        std::unique(cluster.mentions.begin(), cluster.mentions.end()),
        cluster.mentions.end());
    if (auto it = output.entities.find(cluster_id);
        it != output.entities.end()) {
      cluster.tags.assign(it->second.begin(), it->second.end());
    }
    document.clusters.push_back(std::move(cluster));
  }
  for (const auto &[pair, types] : output.relations) {
    if (pair.first == pair.second) continue;
    for (const std::string &type : types) {
      document.relations.push_back({pair.first, type, pair.second});
    }
  }
  return document;
}

}  // namespace ecie
