// ecie: command-line front end for corpus validation, statistics, scoring,
// decoding, rule checks, annotator agreement and kernel self-tests.
//
// Payloads are JSON on stdout (or --out FILE); diagnostics go to stderr.
// Exit codes: 0 ok, 1 findings under --strict (or failed checks), 2 usage
// error, 3 input or data error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ecie/agreement.h"
#include "ecie/coref_metrics.h"
#include "ecie/corpus.h"
#include "ecie/corpus_stats.h"
#include "ecie/decoder.h"
#include "ecie/dwie_convert.h"
#include "ecie/ie_metrics.h"
#include "ecie/kernel_selftest.h"
#include "ecie/resources.h"
#include "ecie/rules.h"
#include "json.hpp"

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr int kSchemaVersion = 1;
constexpr double kSelftestTolerance = 1e-9;

enum ExitCode { kOk = 0, kFindings = 1, kUsage = 2, kDataError = 3 };

json Payload() { return json{{"schema_version", kSchemaVersion}}; }

void Emit(const json &payload, const std::string &out) {
  if (out.empty()) {
    std::cout << payload.dump(2) << '\n';
    return;
  }
  std::ofstream file(out);
  if (!file) throw ecie::Error("IO", "cannot write " + out);
  file << payload.dump(2) << '\n';
}

void WriteText(const std::string &path, const std::string &text) {
  std::ofstream file(path);
  if (!file) throw ecie::Error("IO", "cannot write " + path);
  file << text;
}

std::vector<ecie::Document> LoadCorpus(const std::string &path,
                                       bool validate = true) {
  const ecie::CorpusFormat format =
      fs::is_directory(path) || fs::path(path).extension() == ".json"
          ? ecie::CorpusFormat::kPerFile
          : ecie::CorpusFormat::kJsonLines;
  return ecie::ParseCorpus(path, format, {validate});
}

json FindingsJson(const std::vector<ecie::Finding> &findings) {
  json out = json::array();
  for (const ecie::Finding &f : findings) {
    out.push_back({{"document", f.document_id},
                   {"code", f.code},
                   {"message", f.message}});
  }
  return out;
}

json PrfJson(const ecie::Prf &prf) {
  return {{"precision", prf.precision}, {"recall", prf.recall}, {"f1", prf.f1}};
}

// ---- validate

int RunValidate(const std::string &corpus, bool strict, const std::string &out) {
  ecie::ValidationReport report;
  std::size_t documents = 0;
  for (const ecie::Document &doc : LoadCorpus(corpus, false)) {
    report.Append(ecie::ValidateDocument(doc));
    ++documents;
  }
  json payload = Payload();
  payload["documents"] = documents;
  payload["errors"] = FindingsJson(report.errors);
  payload["warnings"] = FindingsJson(report.warnings);
  Emit(payload, out);
  if (!report.errors.empty()) return kFindings;
  return strict && !report.warnings.empty() ? kFindings : kOk;
}

// ---- stats

json CountJson(const ecie::TypeHistogram &h, const ecie::TagCount &c) {
  return {{"clusters", c.clusters},
          {"mentions", c.mentions},
          {"cluster_pct", h.ClusterPercent(c)},
          {"mention_pct", h.MentionPercent(c)}};
}

json PairJson(const ecie::PairCount &c) {
  return {{"entity_pairs", c.entity_pairs}, {"mention_pairs", c.mention_pairs}};
}

int RunStats(const std::string &corpus, const std::string &out,
             const std::string &plot_data) {
  const std::vector<ecie::Document> docs = LoadCorpus(corpus);
  json payload = Payload();

  const ecie::CorpusSummary s = ecie::Summarize(docs);
  payload["summary"] = {
      {"documents", s.documents},
      {"tokens", s.tokens},
      {"mentions", s.mentions},
      {"clusters", s.clusters},
      {"entity_types", s.entity_types},
      {"relation_triples", s.relation_triples},
      {"relation_types", s.relation_types},
      {"relation_mention_pairs", s.relation_mention_pairs},
      {"relation_mention_convention",
       "sum over distinct triples of |head mentions| * |tail mentions|"},
      {"linked_mentions", s.linked_mentions},
      {"linked_clusters", s.linked_clusters},
      {"singleton_fraction", s.singleton_fraction},
      {"mean_labels_per_entity", s.mean_labels_per_entity}};

  const ecie::TypeHierarchy &hierarchy = ecie::TypeHierarchy::Builtin();
  const ecie::TypeHistogram types = ecie::EntityTypeHistogram(docs, hierarchy);
  json hierarchical = json::array();
  for (const std::string &tag : hierarchy.tags()) {
    json row = CountJson(types, types.rolled_up.at(tag));
    row["tag"] = tag;
    row["depth"] = hierarchy.Depth(tag);
    hierarchical.push_back(std::move(row));
  }
  json flat = json::object();
  for (const auto &[tag, count] : types.per_tag) flat[tag] = CountJson(types, count);
  payload["entity_types"] = {{"hierarchy", hierarchical},
                             {"per_tag", flat},
                             {"total", CountJson(types, types.total)}};

  const ecie::RelationTypeHistogram rel = ecie::RelationTypeHistogramOf(docs);
  json per_type = json::object();
  for (const auto &[type, count] : rel.per_type) per_type[type] = PairJson(count);
  payload["relation_types"] = {{"per_type", per_type},
                               {"total", PairJson(rel.total)}};

  const ecie::MultilabelHistogram ml = ecie::MultilabelRelationHistogram(docs);
  json buckets = json::array();
  const char *names[] = {"1", "2", "3", "4+"};
  for (int b = 0; b < 4; ++b) {
    json row = PairJson(ml.buckets[b]);
    row["labels"] = names[b];
    row["pct"] = ml.total.entity_pairs == 0
                     ? 0.0
                     : 100.0 * static_cast<double>(ml.buckets[b].entity_pairs) /
                           static_cast<double>(ml.total.entity_pairs);
    buckets.push_back(std::move(row));
  }
  payload["multilabel_relations"] = {{"buckets", buckets},
                                     {"total", PairJson(ml.total)}};

  const ecie::DistanceProfile profile = ecie::RelationDistanceProfile(docs);
  payload["relation_distance"] = {
      {"relations", profile.relations.size()},
      {"token_gap_convention", "tokens strictly between the two spans"},
      {"cdf_min_tokens", profile.cdf_min_tokens},
      {"cdf_max_tokens", profile.cdf_max_tokens},
      {"cdf_min_sent", profile.cdf_min_sentences},
      {"cdf_max_sent", profile.cdf_max_sentences}};
  if (!plot_data.empty()) WriteText(plot_data, profile.ToTsv());

  std::vector<ecie::Document> train, test;
  for (const ecie::Document &d : docs) {
    if (d.split == ecie::Split::kTrain) train.push_back(d);
    if (d.split == ecie::Split::kTest) test.push_back(d);
  }
  try {
    const ecie::PriorLinkResult prior = ecie::PriorLinkBaseline(train, test);
    payload["prior_link_baseline"] = {{"accuracy", prior.accuracy},
                                      {"evaluated", prior.evaluated},
                                      {"correct", prior.correct},
                                      {"unseen_surface", prior.unseen}};
  } catch (const ecie::Error &e) {
    payload["prior_link_baseline"] = nullptr;
    std::cerr << "note: prior link baseline skipped: " << e.what() << '\n';
  }
  Emit(payload, out);
  return kOk;
}

// ---- score

// Gold and predicted documents aligned by id; a side missing a document
// gets an empty stand-in over the same tokens.
std::vector<std::pair<ecie::Document, ecie::Document>> Align(
    const std::vector<ecie::Document> &gold,
    const std::vector<ecie::Document> &pred) {
  std::map<std::string, const ecie::Document *> by_id;
  for (const ecie::Document &d : pred) {
    if (!by_id.emplace(d.id, &d).second) {
      throw ecie::Error("DUPLICATE_DOCUMENT", "duplicate predicted document " + d.id);
    }
  }
  std::vector<std::pair<ecie::Document, ecie::Document>> pairs;
  std::set<std::string> seen;
  auto stand_in = [](const ecie::Document &d) {
    ecie::Document empty;
    empty.id = d.id;
    empty.tokens = d.tokens;
    empty.sentences = d.sentences;
    return empty;
  };
  for (const ecie::Document &g : gold) {
    if (!seen.insert(g.id).second) {
      throw ecie::Error("DUPLICATE_DOCUMENT", "duplicate gold document " + g.id);
    }
    auto it = by_id.find(g.id);
    pairs.emplace_back(g, it == by_id.end() ? stand_in(g) : *it->second);
  }
  for (const ecie::Document &p : pred) {
    if (!seen.count(p.id)) pairs.emplace_back(stand_in(p), p);
  }
  return pairs;
}

json ScoreIe(const std::vector<std::pair<ecie::Document, ecie::Document>> &pairs,
             ecie::Task task, const std::vector<ecie::Level> &levels,
             bool per_label) {
  ecie::CorpusScorer scorer(task);
  for (const auto &[gold, pred] : pairs) scorer.Add(gold, pred);
  json out = json::object();
  for (ecie::Level level : levels) {
    out[std::string(ecie::LevelName(level))] = PrfJson(scorer.Report(level));
  }
  if (per_label) {
    json labels = json::object();
    for (const std::string &label : scorer.Labels()) {
      json row = json::object();
      for (ecie::Level level : levels) {
        row[std::string(ecie::LevelName(level))] =
            PrfJson(scorer.LabelReport(label, level));
      }
      labels[label] = std::move(row);
    }
    out["per_label"] = std::move(labels);
  }
  return out;
}

int RunScore(const std::string &task, const std::string &gold_path,
             const std::string &pred_path, const std::string &level,
             bool per_label, const std::string &out) {
  std::vector<ecie::Level> levels;
  if (level == "mention" || level == "all") levels.push_back(ecie::Level::kMention);
  if (level == "hard" || level == "all") levels.push_back(ecie::Level::kHard);
  if (level == "soft" || level == "all") levels.push_back(ecie::Level::kSoft);

  const auto gold = LoadCorpus(gold_path);
  const auto pred = LoadCorpus(pred_path);
  const auto pairs = Align(gold, pred);
  json payload = Payload();
  if (task == "ner" || task == "all") {
    payload["ner"] = ScoreIe(pairs, ecie::Task::kNer, levels, per_label);
  }
  if (task == "re" || task == "all") {
    payload["re"] = ScoreIe(pairs, ecie::Task::kRe, levels, per_label);
  }
  if (task == "coref" || task == "all") {
    std::vector<ecie::Document> g, p;
    for (const auto &[gd, pd] : pairs) {
      g.push_back(gd);
      p.push_back(pd);
    }
    ecie::MentionInterner interner;
    const ecie::Partition gold_partition = ecie::PartitionOf(g, interner);
    const ecie::Partition pred_partition = ecie::PartitionOf(p, interner);
    const ecie::CorefScores scores =
        ecie::ScoreCoreference(gold_partition, pred_partition);
    payload["coref"] = {{"muc", PrfJson(scores.muc)},
                        {"b3", PrfJson(scores.b_cubed)},
                        {"ceafe", PrfJson(scores.ceaf_e)},
                        {"avg_f1", scores.average_f1}};
  }
  Emit(payload, out);
  return kOk;
}

// ---- decode

std::vector<json> ReadJsonObjects(const std::string &path) {
  const std::string text = ecie::ReadFile(path);
  std::vector<json> objects;
  json whole = json::parse(text, nullptr, false);
  if (!whole.is_discarded()) {
    if (whole.is_array()) {
      for (json &item : whole) objects.push_back(std::move(item));
    } else {
      objects.push_back(std::move(whole));
    }
    return objects;
  }
  std::size_t offset = 0;
  while (offset < text.size()) {
    std::size_t end = text.find('\n', offset);
    if (end == std::string::npos) end = text.size();
    const std::string line = text.substr(offset, end - offset);
    if (line.find_first_not_of(" \t\r") != std::string::npos) {
      try {
        objects.push_back(json::parse(line));
      } catch (const json::parse_error &e) {
        throw ecie::ParseError(e.what(), offset + (e.byte > 0 ? e.byte - 1 : 0));
      }
    }
    offset = end + 1;
  }
  return objects;
}

int RunDecode(const std::string &pred, const std::string &out, bool as_corpus) {
  std::vector<ecie::Document> corpus;
  std::string lines;
  int index = 0;
  for (const json &object : ReadJsonObjects(pred)) {
    const std::string id =
        object.contains("id") ? object["id"].get<std::string>()
                              : "doc-" + std::to_string(index);
    ++index;
    const ecie::DecodeOutput decoded =
        ecie::DecodeEntityCentric(ecie::DecodeInputFromJson(object));
    if (decoded.discarded_relations > 0) {
      std::cerr << id << ": discarded " << decoded.discarded_relations
                << " relation(s) with an unmapped endpoint\n";
    }
    if (as_corpus) {
      std::vector<std::string> tokens =
          object.value("tokens", std::vector<std::string>{});
      std::vector<ecie::Span> sentences;
      for (const auto &s : object.value("sentences", json::array())) {
        sentences.push_back({s.at(0).get<int>(), s.at(1).get<int>()});
      }
      corpus.push_back(ecie::ToDocument(decoded, id, std::move(tokens),
                                        std::move(sentences)));
    } else {
      json row = ecie::DecodeOutputToJson(decoded);
      row["id"] = id;
      row["schema_version"] = kSchemaVersion;
      lines += row.dump() + '\n';
    }
  }
  WriteText(out, as_corpus ? ecie::SerializeCorpus(corpus) : lines);
  return kOk;
}

// ---- rules

json BindingsJson(const ecie::Substitution &sub) {
  json out = json::object();
  for (const auto &[var, value] : sub) out[var] = value;
  return out;
}

int RunRulesCheck(const std::string &corpus, const std::string &rules_path,
                  bool closure, bool strict, const std::string &out) {
  const std::vector<ecie::Rule> custom =
      rules_path.empty() ? std::vector<ecie::Rule>{}
                         : ecie::ParseRules(ecie::ReadFile(rules_path));
  const std::vector<ecie::Rule> &rules =
      rules_path.empty() ? ecie::BuiltinRuleset() : custom;

  json violations = json::array();
  json derived = json::array();
  std::size_t firings = 0, derived_total = 0;
  std::map<int, std::size_t> per_rule;
  for (const ecie::Document &doc : LoadCorpus(corpus)) {
    const ecie::FactBase facts = ecie::FactsFromDocument(doc);
    const ecie::ViolationReport report = ecie::CheckViolations(facts, rules);
    firings += report.firings;
    for (const ecie::Violation &v : report.violations) {
      ++per_rule[v.rule_id];
      violations.push_back(
          {{"document", doc.id},
           {"rule", v.rule_id},
           {"rule_text", ecie::FormatRule(rules[v.rule_id - 1])},
           {"missing",
            {{"head", v.missing.head},
             {"type", v.missing.predicate},
             {"tail", v.missing.tail}}},
           {"bindings", BindingsJson(v.substitution)}});
    }
    if (closure) {
      ecie::ClosureStats stats;
      const ecie::FactBase closed = ecie::Closure(facts, rules, &stats);
      json added = json::array();
      for (const ecie::BinaryFact &f : closed.binary) {
        if (facts.binary.count(f)) continue;
        added.push_back({{"head", f.head}, {"type", f.predicate}, {"tail", f.tail}});
      }
      derived_total += added.size();
      derived.push_back({{"document", doc.id},
                         {"rounds", stats.rounds},
                         {"derived", std::move(added)}});
    }
  }
  json payload = Payload();
  payload["rules"] = rules.size();
  payload["firings"] = firings;
  payload["violation_count"] = violations.size();
  payload["violation_rate"] =
      firings == 0 ? 0.0
                   : static_cast<double>(violations.size()) /
                         static_cast<double>(firings);
  json by_rule = json::object();
  for (const auto &[id, count] : per_rule) by_rule[std::to_string(id)] = count;
  payload["violations_by_rule"] = by_rule;
  payload["violations"] = violations;
  if (closure) {
    payload["closure"] = {{"derived_total", derived_total},
                          {"documents", derived}};
  }
  Emit(payload, out);
  return strict && !violations.empty() ? kFindings : kOk;
}

// ---- kappa

json RowJson(const ecie::KappaRow &row) {
  return {{"label", row.label},
          {"support", row.support},
          {"p_o", row.p_o},
          {"p_e", row.p_e},
          {"kappa", row.kappa}};
}

int RunKappa(const std::string &a, const std::string &b,
             const std::string &task, bool conditioned, const std::string &out) {
  const ecie::AgreementTask t = ecie::ParseAgreementTask(task);
  const ecie::AgreementReport report =
      ecie::CorpusAgreement(LoadCorpus(a), LoadCorpus(b), t, conditioned);
  json payload = Payload();
  payload["task"] = task;
  payload["conditioned"] = conditioned;
  payload["items"] = report.items;
  payload["p_o"] = report.p_o;
  payload["p_e"] = report.p_e;
  payload["kappa"] = report.kappa;
  if (report.has_detection) payload["detection"] = RowJson(report.detection);
  json rows = json::array();
  for (const ecie::KappaRow &row : report.per_label) rows.push_back(RowJson(row));
  payload["per_label"] = rows;
  Emit(payload, out);
  return kOk;
}

// ---- kernels

int RunKernelSelftest(const std::string &out) {
  json rows = json::array();
  bool passed = true;
  for (const ecie::KernelCheck &check : ecie::RunKernelSelftest()) {
    passed &= check.max_abs_deviation <= kSelftestTolerance;
    rows.push_back({{"kernel", check.kernel},
                    {"cases", check.cases},
                    {"max_abs_deviation", check.max_abs_deviation}});
  }
  json payload = Payload();
  payload["tolerance"] = kSelftestTolerance;
  payload["kernels"] = rows;
  payload["passed"] = passed;
  Emit(payload, out);
  return passed ? kOk : kFindings;
}

// ---- convert-dwie

int RunConvertDwie(const std::string &input, const std::string &out) {
  ecie::DwieConversionStats stats;
  const std::vector<ecie::Document> docs = ecie::ConvertDwie(input, &stats);
  WriteText(out, ecie::SerializeCorpus(docs));
  std::cerr << "converted " << stats.documents << " documents ("
            << stats.skipped_documents << " without content skipped); dropped "
            << stats.dropped_concepts << " concepts without mentions, "
            << stats.dropped_mentions << " mentions, "
            << stats.dropped_relations << " relations\n";
  return kOk;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Entity-centric information extraction toolkit"};
  app.require_subcommand(1);
  std::string out;

  std::string corpus;
  bool strict = false;
  auto *validate = app.add_subcommand("validate", "Check corpus invariants");
  validate->add_option("corpus", corpus, "JSON Lines corpus or directory")
      ->required();
  validate->add_flag("--strict", strict, "Exit 1 on warnings as well");
  validate->add_option("--out", out, "Write the report to FILE");

  std::string plot_data;
  auto *stats = app.add_subcommand("stats", "Corpus statistics");
  stats->add_option("corpus", corpus, "JSON Lines corpus or directory")
      ->required();
  stats->add_option("--out", out, "Write the report to FILE");
  stats->add_option("--plot-data", plot_data,
                    "Write relation-distance CDFs as TSV to FILE");

  std::string task, gold, pred, level = "all";
  bool per_label = false;
  auto *score = app.add_subcommand("score", "Score predictions against gold");
  score->add_option("--task", task, "ner, re, coref or all")
      ->required()
      ->check(CLI::IsMember({"ner", "re", "coref", "all"}));
  score->add_option("--gold", gold, "Gold corpus")->required();
  score->add_option("--pred", pred, "Predicted corpus")->required();
  score->add_option("--level", level, "mention, hard, soft or all")
      ->check(CLI::IsMember({"mention", "hard", "soft", "all"}));
  score->add_flag("--per-label", per_label, "Add per-label scores");
  score->add_option("--out", out, "Write the report to FILE");

  bool as_corpus = false;
  auto *decode = app.add_subcommand("decode", "Entity-centric decoding");
  decode->add_option("--pred", pred, "Mention-level predictions")->required();
  decode->add_option("--out", out, "Output file")->required();
  decode->add_flag("--as-corpus", as_corpus,
                   "Write decoded documents in corpus format");

  bool closure = false;
  std::string rules_path;
  auto *rules = app.add_subcommand("rules", "Consistency rules");
  rules->require_subcommand(1);
  auto *check = rules->add_subcommand("check", "Report rule violations");
  check->add_option("corpus", corpus, "JSON Lines corpus or directory")
      ->required();
  check->add_flag("--closure", closure, "Also report the rule closure");
  check->add_flag("--strict", strict, "Exit 1 if any rule is violated");
  check->add_option("--rules", rules_path, "Rule file (default: built-in)");
  check->add_option("--out", out, "Write the report to FILE");

  std::string a, b;
  bool conditioned = false;
  auto *kappa = app.add_subcommand("kappa", "Inter-annotator agreement");
  kappa->add_option("--a", a, "First annotation")->required();
  kappa->add_option("--b", b, "Second annotation")->required();
  kappa->add_option("--task", task, "entity, coref, linking or relation")
      ->required()
      ->check(CLI::IsMember({"entity", "coref", "linking", "relation"}));
  kappa->add_flag("--conditioned", conditioned,
                  "Score labels only on items both annotators marked");
  kappa->add_option("--out", out, "Write the report to FILE");

  auto *kernels = app.add_subcommand("kernels", "Score kernels");
  kernels->require_subcommand(1);
  auto *selftest =
      kernels->add_subcommand("selftest", "Compare kernels with loop oracles");
  selftest->add_option("--out", out, "Write the report to FILE");

  std::string input;
  auto *convert =
      app.add_subcommand("convert-dwie", "Convert DWIE annotation files");
  convert->add_option("input", input, "DWIE file or directory")->required();
  convert->add_option("--out", out, "Output corpus (JSON Lines)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kUsage;
  }

  try {
    if (*validate) return RunValidate(corpus, strict, out);
    if (*stats) return RunStats(corpus, out, plot_data);
    if (*score) return RunScore(task, gold, pred, level, per_label, out);
    if (*decode) return RunDecode(pred, out, as_corpus);
    if (*check) return RunRulesCheck(corpus, rules_path, closure, strict, out);
    if (*kappa) return RunKappa(a, b, task, conditioned, out);
    if (*selftest) return RunKernelSelftest(out);
    if (*convert) return RunConvertDwie(input, out);
  } catch (const ecie::Error &e) {
    std::cerr << "error [" << e.code() << "]: " << e.what() << '\n';
    return e.code() == "USAGE" ? kUsage : kDataError;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDataError;
  }
  std::cerr << app.help();
  return kUsage;
}
