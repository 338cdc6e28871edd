#include "ecie/corpus.h"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "ecie/resources.h"

namespace ecie {

using nlohmann::json;

namespace {

std::string SpanText(Span span) {
  return "[" + std::to_string(span.begin) + "," + std::to_string(span.end) +
         ")";
}

[[noreturn]] void SchemaError(const std::string &message) {
  throw Error("SCHEMA", message);
}

const json &Require(const json &object, const char *key) {
  auto it = object.find(key);
  if (it == object.end()) SchemaError(std::string("missing field '") + key + "'");
  return *it;
}

std::string RequireString(const json &value, const std::string &what) {
  if (!value.is_string()) SchemaError(what + " must be a string");
  return value.get<std::string>();
}

Span ParseSpan(const json &value, const std::string &what) {
  if (!value.is_array() || value.size() != 2 || !value[0].is_number_integer() ||
      !value[1].is_number_integer()) {
    SchemaError(what + " must be a pair of integers");
  }
  return {value[0].get<int>(), value[1].get<int>()};
}

std::vector<Span> ParseSpans(const json &value, const std::string &what) {
  if (!value.is_array()) SchemaError(what + " must be an array");
  std::vector<Span> spans;
  spans.reserve(value.size());
  for (const json &item : value) spans.push_back(ParseSpan(item, what));
  return spans;
}

Split ParseSplit(const json &value) {
  std::string name = RequireString(value, "split");
  if (name == "train") return Split::kTrain;
  if (name == "test") return Split::kTest;
  if (name == "unsplit") return Split::kUnsplit;
  SchemaError("unknown split '" + name + "'");
}

json SpanToJson(Span span) { return json::array({span.begin, span.end}); }

// Byte offset of the first non-whitespace character of `line`, used to point
// schema errors at the offending document.
std::size_t FirstContentOffset(std::string_view line) {
  std::size_t i = 0;
  while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
  return i;
}

bool IsBlank(std::string_view line) {
  return std::all_of(line.begin(), line.end(), [](char c) {
    return c == ' ' || c == '\t' || c == '\r';
  });
}

Document ParseDocumentText(std::string_view text, std::size_t base_offset) {
  json object;
  try {
    object = json::parse(text);
  } catch (const json::parse_error &e) {
    // nlohmann reports 1-based byte positions.
    std::size_t local = e.byte > 0 ? e.byte - 1 : 0;
    throw ParseError("malformed JSON", base_offset + local);
  }
  try {
    return DocumentFromJson(object);
  } catch (const Error &e) {
    throw ParseError(e.what(), base_offset + FirstContentOffset(text));
  }
}

void ValidateOrThrow(const std::vector<Document> &documents) {
  std::vector<Finding> errors;
  for (const Document &document : documents) {
    ValidationReport report = ValidateDocument(document);
    errors.insert(errors.end(), report.errors.begin(), report.errors.end());
  }
  if (!errors.empty()) throw ValidationError(std::move(errors));
}

}  // namespace

std::string_view SplitName(Split split) {
  switch (split) {
    case Split::kTrain:
      return "train";
    case Split::kTest:
      return "test";
    case Split::kUnsplit:
      return "unsplit";
  }
  return "unsplit";
}

bool EntityCluster::HasTag(std::string_view tag) const {
  return std::find(tags.begin(), tags.end(), tag) != tags.end();
}

const EntityCluster *Document::FindCluster(std::string_view cluster_id) const {
  for (const EntityCluster &cluster : clusters) {
    if (cluster.id == cluster_id) return &cluster;
  }
  return nullptr;
}

int Document::SentenceOf(int token) const {
  auto it = std::upper_bound(
      sentences.begin(), sentences.end(), token,
      [](int t, const Span &sentence) { return t < sentence.begin; });
  if (it == sentences.begin()) return -1;
  --it;
  if (token >= it->end) return -1;
  return static_cast<int>(it - sentences.begin());
}

std::string Document::SurfaceForm(Span span) const {
  std::string surface;
  for (int i = span.begin; i < span.end; ++i) {
    if (i > span.begin) surface += ' ';
    surface += tokens.at(i);
  }
  return surface;
}

void ValidationReport::Append(const ValidationReport &other) {
  errors.insert(errors.end(), other.errors.begin(), other.errors.end());
  warnings.insert(warnings.end(), other.warnings.begin(),
                  other.warnings.end());
}

ValidationError::ValidationError(std::vector<Finding> findings)
    : Error(findings.empty() ? "VALIDATION" : findings.front().code,
            [&findings] {
              std::string message = "validation failed:";
              for (const Finding &f : findings) {
                message += "\n  " + f.document_id + ": " + f.code + ": " +
                           f.message;
              }
              return message;
            }()),
      findings_(std::move(findings)) {}

// Vocabulary.

bool Vocabulary::Entries::Contains(std::string_view label) const {
  if (exact.count(std::string(label))) return true;
  for (const std::string &prefix : prefixes) {
    if (label.substr(0, prefix.size()) == prefix) return true;
  }
  return false;
}

Vocabulary::Entries Vocabulary::Load(std::string_view text) {
  Entries entries;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    auto last = line.find_last_not_of(" \t\r");
    std::string label = line.substr(first, last - first + 1);
    if (label.back() == '*') {
      label.pop_back();
      entries.prefixes.push_back(label);
    } else {
      entries.exact.insert(label);
    }
  }
  return entries;
}

Vocabulary::Vocabulary(std::string_view tag_text,
                       std::string_view relation_text)
    : tags_(Load(tag_text)), relation_types_(Load(relation_text)) {}

const Vocabulary &Vocabulary::Builtin() {
  static const Vocabulary vocabulary(resources::TagVocabulary(),
                                     resources::RelationTypes());
  return vocabulary;
}

bool Vocabulary::KnownTag(std::string_view tag) const {
  return tags_.Contains(tag);
}

bool Vocabulary::KnownRelationType(std::string_view type) const {
  return relation_types_.Contains(type);
}

// JSON mapping.

Document DocumentFromJson(const json &object) {
  if (!object.is_object()) SchemaError("document must be a JSON object");
  Document document;
  document.id = RequireString(Require(object, "id"), "id");
  if (auto it = object.find("split"); it != object.end()) {
    document.split = ParseSplit(*it);
  }

  const json &tokens = Require(object, "tokens");
  if (!tokens.is_array()) SchemaError("tokens must be an array");
  document.tokens.reserve(tokens.size());
  for (const json &token : tokens) {
    document.tokens.push_back(RequireString(token, "token"));
  }
  document.sentences = ParseSpans(Require(object, "sentences"), "sentence");

  const json &clusters = Require(object, "clusters");
  if (!clusters.is_array()) SchemaError("clusters must be an array");
  for (const json &item : clusters) {
    if (!item.is_object()) SchemaError("cluster must be an object");
    EntityCluster cluster;
    cluster.id = RequireString(Require(item, "id"), "cluster id");
    cluster.mentions = ParseSpans(Require(item, "mentions"), "mention");
    if (auto it = item.find("tags"); it != item.end()) {
      if (!it->is_array()) SchemaError("tags must be an array");
      for (const json &tag : *it) {
        cluster.tags.push_back(RequireString(tag, "tag"));
      }
    }
    if (auto it = item.find("link"); it != item.end()) {
      if (it->is_null()) {
        cluster.link = KbLink::Nil();
      } else {
        cluster.link = KbLink::To(RequireString(*it, "link"));
      }
    }
    document.clusters.push_back(std::move(cluster));
  }

  if (auto it = object.find("relations"); it != object.end()) {
    if (!it->is_array()) SchemaError("relations must be an array");
    for (const json &item : *it) {
      if (!item.is_object()) SchemaError("relation must be an object");
      document.relations.push_back(
          {RequireString(Require(item, "head"), "relation head"),
           RequireString(Require(item, "type"), "relation type"),
           RequireString(Require(item, "tail"), "relation tail")});
    }
  }
  return document;
}

json DocumentToJson(const Document &document) {
  json object = json::object();
  object["id"] = document.id;
  object["split"] = std::string(SplitName(document.split));
  object["tokens"] = document.tokens;
  json sentences = json::array();
  for (Span s : document.sentences) sentences.push_back(SpanToJson(s));
  object["sentences"] = std::move(sentences);

  json clusters = json::array();
  for (const EntityCluster &cluster : document.clusters) {
    json item = json::object();
    item["id"] = cluster.id;
    json mentions = json::array();
    for (Mention m : cluster.mentions) mentions.push_back(SpanToJson(m));
    item["mentions"] = std::move(mentions);
    item["tags"] = cluster.tags;
    switch (cluster.link.state) {
      case KbLink::State::kUnannotated:
        break;
      case KbLink::State::kNil:
        item["link"] = nullptr;
        break;
      case KbLink::State::kEntity:
        item["link"] = cluster.link.id;
        break;
    }
    clusters.push_back(std::move(item));
  }
  object["clusters"] = std::move(clusters);

  json relations = json::array();
  for (const RelationTriple &r : document.relations) {
    relations.push_back({{"head", r.head}, {"type", r.type}, {"tail", r.tail}});
  }
  object["relations"] = std::move(relations);
  return object;
}

std::string SerializeCorpus(const std::vector<Document> &documents) {
  std::string out;
  for (const Document &document : documents) {
    out += DocumentToJson(document).dump();
    out += '\n';
  }
  return out;
}

std::string ReadFile(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("IO", "cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::vector<Document> ParseCorpusText(std::string_view text,
                                      const ParseOptions &options) {
  std::vector<Document> documents;
  std::size_t offset = 0;
  while (offset < text.size()) {
    std::size_t newline = text.find('\n', offset);
    std::size_t end = newline == std::string_view::npos ? text.size() : newline;
    std::string_view line = text.substr(offset, end - offset);
    if (!IsBlank(line)) documents.push_back(ParseDocumentText(line, offset));
    offset = end + 1;
  }
  if (options.validate) ValidateOrThrow(documents);
  return documents;
}

std::vector<Document> ParseCorpus(const std::filesystem::path &path,
                                  CorpusFormat format,
                                  const ParseOptions &options) {
  if (format == CorpusFormat::kJsonLines) {
    return ParseCorpusText(ReadFile(path), options);
  }
  std::vector<std::filesystem::path> files;
  if (std::filesystem::is_directory(path)) {
    for (const auto &entry : std::filesystem::directory_iterator(path)) {
      if (entry.is_regular_file() && entry.path().extension() == ".json") {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end());
  } else {
    files.push_back(path);
  }
  std::vector<Document> documents;
  for (const auto &file : files) {
    try {
      documents.push_back(ParseDocumentText(ReadFile(file), 0));
    } catch (const ParseError &e) {
      throw ParseError(file.string() + ": " + e.what(), e.byte_offset());
    }
  }
  if (options.validate) ValidateOrThrow(documents);
  return documents;
}

// Validation.

ValidationReport ValidateDocument(const Document &document,
                                  const Vocabulary &vocabulary) {
  ValidationReport report;
  auto error = [&](const std::string &code, const std::string &message) {
    report.errors.push_back({document.id, code, message});
  };
  auto warn = [&](const std::string &code, const std::string &message) {
    report.warnings.push_back({document.id, code, message});
  };
  const int num_tokens = static_cast<int>(document.tokens.size());

  int expected_begin = 0;
  for (std::size_t i = 0; i < document.sentences.size(); ++i) {
    Span s = document.sentences[i];
    if (s.begin != expected_begin || s.end <= s.begin || s.end > num_tokens) {
      error("SENTENCE_COVERAGE", "sentences[" + std::to_string(i) + "] = " +
                                     SpanText(s) +
                                     " breaks the token partition");
      break;
    }
    expected_begin = s.end;
  }
  if (expected_begin != num_tokens && report.errors.empty()) {
    error("SENTENCE_COVERAGE", "sentences cover [0," +
                                   std::to_string(expected_begin) + ") of " +
                                   std::to_string(num_tokens) + " tokens");
  }

  std::map<std::string, int> cluster_ids;
  std::map<Mention, std::string> owner;
  for (const EntityCluster &cluster : document.clusters) {
    const std::string where = "cluster '" + cluster.id + "'";
    if (++cluster_ids[cluster.id] == 2) {
      error("DUPLICATE_CLUSTER_ID", where + " is declared more than once");
    }
    if (cluster.mentions.empty()) {
      error("EMPTY_CLUSTER", where + " has no mentions");
    }
    std::set<Mention> seen;
    for (Mention m : cluster.mentions) {
      if (m.begin >= m.end) {
        error("SPAN_ORDER", where + " mention " + SpanText(m) +
                                " has begin >= end");
        continue;
      }
      if (m.begin < 0 || m.end > num_tokens) {
        error("SPAN_BOUNDS", where + " mention " + SpanText(m) +
                                 " outside [0," + std::to_string(num_tokens) +
                                 ")");
        continue;
      }
      if (!seen.insert(m).second) {
        error("DUPLICATE_MENTION",
              where + " lists mention " + SpanText(m) + " twice");
        continue;
      }
      auto [it, inserted] = owner.emplace(m, cluster.id);
      if (!inserted && it->second != cluster.id) {
        error("MENTION_MULTI_CLUSTER", "mention " + SpanText(m) +
                                           " belongs to clusters '" +
                                           it->second + "' and '" +
                                           cluster.id + "'");
      }
    }
    std::set<std::string_view> tags;
    for (const std::string &tag : cluster.tags) {
      if (!tags.insert(tag).second) {
        warn("DUPLICATE_TAG", where + " repeats tag '" + tag + "'");
      } else if (!vocabulary.KnownTag(tag)) {
        warn("UNKNOWN_TAG", where + " has undeclared tag '" + tag + "'");
      }
    }
  }

  std::set<RelationTriple> relations;
  for (const RelationTriple &r : document.relations) {
    const std::string what =
        "relation (" + r.head + ", " + r.type + ", " + r.tail + ")";
    if (!cluster_ids.count(r.head) || !cluster_ids.count(r.tail)) {
      error("DANGLING_RELATION", what + " references a missing cluster");
    } else if (r.head == r.tail) {
      error("SELF_RELATION", what + " has head == tail");
    }
    if (!vocabulary.KnownRelationType(r.type)) {
      warn("UNKNOWN_RELATION_TYPE", what + " has undeclared type");
    }
    if (!relations.insert(r).second) {
      warn("DUPLICATE_RELATION", what + " is listed twice");
    }
  }
  return report;
}

std::map<Mention, std::string> SpanIndex(const Document &document) {
  std::map<Mention, std::string> index;
  for (const EntityCluster &cluster : document.clusters) {
    for (Mention m : cluster.mentions) {
      auto [it, inserted] = index.emplace(m, cluster.id);
      if (!inserted && it->second != cluster.id) {
        throw Error("MENTION_MULTI_CLUSTER",
                    document.id + ": mention " + SpanText(m) +
                        " belongs to clusters '" + it->second + "' and '" +
                        cluster.id + "'");
      }
    }
  }
  return index;
}

}  // namespace ecie
