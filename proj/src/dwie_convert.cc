#include "ecie/dwie_convert.h"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

namespace ecie {

namespace {

struct Token {
  std::size_t begin;  // byte offsets into content
  std::size_t end;
  bool line_break_before;
};

// Byte offset of each code point (plus one past the end).
std::vector<std::size_t> CodePointOffsets(const std::string &text) {
  std::vector<std::size_t> offsets;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if ((static_cast<unsigned char>(text[i]) & 0xC0) != 0x80) offsets.push_back(i);
  }
  offsets.push_back(text.size());
  return offsets;
}

bool IsSpace(char c) { return std::isspace(static_cast<unsigned char>(c)); }
bool IsPunct(char c) { return std::ispunct(static_cast<unsigned char>(c)); }

std::vector<Token> Tokenize(const std::string &text,
                            const std::set<std::size_t> &cuts) {
  std::vector<Token> tokens;
  bool line_break = false;
  std::size_t i = 0;
  while (i < text.size()) {
    if (IsSpace(text[i])) {
      line_break |= text[i] == '\n';
      ++i;
      continue;
    }
    std::size_t end = i + 1;
    if (!IsPunct(text[i])) {
      while (end < text.size() && !IsSpace(text[end]) && !IsPunct(text[end]) &&
             !cuts.count(end)) {
        ++end;
      }
    }
    tokens.push_back({i, end, line_break});
    line_break = false;
    i = end;
  }
  return tokens;
}

std::vector<Span> Sentences(const std::string &text,
                            const std::vector<Token> &tokens) {
  std::vector<Span> sentences;
  int start = 0;
  for (int t = 0; t < static_cast<int>(tokens.size()); ++t) {
    if (t > start && tokens[t].line_break_before) {
      sentences.push_back({start, t});
      start = t;
    }
    const Token &tok = tokens[t];
    const char c = text[tok.begin];
    if (tok.end - tok.begin == 1 && (c == '.' || c == '!' || c == '?')) {
      sentences.push_back({start, t + 1});
      start = t + 1;
    }
  }
  if (start < static_cast<int>(tokens.size())) {
    sentences.push_back({start, static_cast<int>(tokens.size())});
  }
  return sentences;
}

std::string MapTag(const std::string &tag) {
  static const std::string kType = "type::";
  if (tag.rfind(kType, 0) != 0) return tag;
  std::string bare = tag.substr(kType.size());
  if (bare == "entity") return "ENTITY";
  if (bare == "value") return "VALUE";
  if (bare == "other") return "OTHER";
  return bare;
}

std::string ConceptId(const nlohmann::json &value) {
  return value.is_string() ? value.get<std::string>() : value.dump();
}

}  // namespace

DwieConversionStats &DwieConversionStats::operator+=(
    const DwieConversionStats &other) {
  documents += other.documents;
  skipped_documents += other.skipped_documents;
  dropped_concepts += other.dropped_concepts;
  dropped_mentions += other.dropped_mentions;
  dropped_relations += other.dropped_relations;
  return *this;
}

Document DocumentFromDwie(const nlohmann::json &object,
                          DwieConversionStats *stats) {
  DwieConversionStats local;
  Document doc;
  doc.id = object.value("id", std::string());
  if (!object.contains("content") || !object["content"].is_string()) {
    throw Error("DWIE", doc.id + ": document has no content");
  }
  const std::string text = object["content"].get<std::string>();
  const std::vector<std::size_t> cp = CodePointOffsets(text);
  const auto byte_at = [&](long long offset) -> std::size_t {
    if (offset < 0 || offset >= static_cast<long long>(cp.size())) {
      throw Error("DWIE", doc.id + ": mention offset outside content");
    }
    return cp[offset];
  };

  for (const auto &tag : object.value("tags", nlohmann::json::array())) {
    if (tag == "train") doc.split = Split::kTrain;
    if (tag == "test") doc.split = Split::kTest;
  }

  // Character spans per concept, in file order.
  struct ByteMention {
    std::size_t begin, end;
  };
  std::map<std::string, std::vector<ByteMention>> concept_mentions;
  std::set<std::size_t> cuts;
  for (const auto &m : object.value("mentions", nlohmann::json::array())) {
    ByteMention bm{byte_at(m.at("begin").get<long long>()),
                   byte_at(m.at("end").get<long long>())};
    concept_mentions[ConceptId(m.at("concept"))].push_back(bm);
    cuts.insert(bm.begin);
    cuts.insert(bm.end);
  }

  const std::vector<Token> tokens = Tokenize(text, cuts);
  for (const Token &t : tokens) {
    doc.tokens.push_back(text.substr(t.begin, t.end - t.begin));
  }
  doc.sentences = Sentences(text, tokens);

  auto to_span = [&](const ByteMention &bm) -> Span {
    auto first = std::lower_bound(
        tokens.begin(), tokens.end(), bm.begin,
        [](const Token &t, std::size_t off) { return t.begin < off; });
    auto last = std::lower_bound(
        tokens.begin(), tokens.end(), bm.end,
        [](const Token &t, std::size_t off) { return t.end <= off; });
    return {static_cast<int>(first - tokens.begin()),
            static_cast<int>(last - tokens.begin())};
  };

  std::set<Span> taken;
  std::set<std::string> kept;
  for (const auto &c : object.value("concepts", nlohmann::json::array())) {
    EntityCluster cluster;
    cluster.id = ConceptId(c.at("concept"));
    for (const ByteMention &bm : concept_mentions[cluster.id]) {
      const Span span = to_span(bm);
      if (span.begin >= span.end || !taken.insert(span).second) {
        ++local.dropped_mentions;
        continue;
      }
      cluster.mentions.push_back(span);
    }
    if (cluster.mentions.empty()) {
      ++local.dropped_concepts;
      continue;
    }
    std::sort(cluster.mentions.begin(), cluster.mentions.end());
    std::set<std::string> seen;
    if (c.contains("tags") && c["tags"].is_array()) {
      for (const auto &tag : c["tags"]) {
        std::string mapped = MapTag(tag.get<std::string>());
        if (seen.insert(mapped).second) cluster.tags.push_back(std::move(mapped));
      }
    }
    if (c.contains("link") && c["link"].is_string()) {
      cluster.link = KbLink::To(c["link"].get<std::string>());
    } else {
      cluster.link = KbLink::Nil();
    }
    kept.insert(cluster.id);
    doc.clusters.push_back(std::move(cluster));
  }

  std::set<RelationTriple> relations;
  for (const auto &r : object.value("relations", nlohmann::json::array())) {
    RelationTriple triple{ConceptId(r.at("s")), r.at("p").get<std::string>(),
                          ConceptId(r.at("o"))};
    if (!kept.count(triple.head) || !kept.count(triple.tail) ||
        triple.head == triple.tail) {
      ++local.dropped_relations;
      continue;
    }
    if (relations.insert(triple).second) doc.relations.push_back(std::move(triple));
  }

  local.documents = 1;
  if (stats != nullptr) *stats += local;
  return doc;
}

std::vector<Document> ConvertDwie(const std::filesystem::path &path,
                                  DwieConversionStats *stats) {
  std::vector<std::filesystem::path> files;
  if (std::filesystem::is_directory(path)) {
    for (const auto &entry : std::filesystem::directory_iterator(path)) {
      if (entry.path().extension() == ".json") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
  } else {
    files.push_back(path);
  }
  DwieConversionStats local;
  std::vector<Document> docs;
  for (const auto &file : files) {
    nlohmann::json object;
    try {
      object = nlohmann::json::parse(ReadFile(file));
    } catch (const nlohmann::json::parse_error &e) {
      throw ParseError(file.string() + ": " + e.what(), e.byte);
    }
    if (!object.contains("content") || !object["content"].is_string()) {
      ++local.skipped_documents;
      continue;
    }
    docs.push_back(DocumentFromDwie(object, &local));
  }
  if (stats != nullptr) *stats += local;
  return docs;
}

}  // namespace ecie
