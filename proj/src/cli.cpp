#include "amrex/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "amrex/amr.hpp"
#include "amrex/dataset.hpp"
#include "amrex/entailment.hpp"
#include "amrex/evaluation.hpp"
#include "amrex/explain.hpp"
#include "amrex/similarity.hpp"
#include "amrex/smatch.hpp"
#include "amrex/verdict.hpp"

namespace amrex::cli {

using ojson = nlohmann::ordered_json;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

AmrGraph read_graph(const std::string& path) {
  try {
    return parse_penman(slurp(path));
  } catch (const ParseError& e) {
    throw DataError(path + ": " + e.what());
  } catch (const GraphError& e) {
    throw DataError(path + ": " + e.what());
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "1" || value == "true" || value == "yes" || value == "on") return true;
  if (value == "0" || value == "false" || value == "no" || value == "off") return false;
  throw UsageError("setting '" + key + "' expects a boolean, got '" + value + "'");
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  std::istringstream in(value);
  T v{};
  in >> v;
  if (!in || !in.eof()) throw UsageError("setting '" + key + "' expects a number, got '" + value + "'");
  return v;
}

std::string env_name(const std::string& key) {
  std::string out = "AMREX_";
  for (char c : key) out += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

std::string format_double(double v) {
  std::ostringstream out;
  out.precision(15);
  out << v;
  return out.str();
}

unsigned resolve_jobs(unsigned jobs) {
  if (jobs != 0) return jobs;
  return std::max(1U, std::thread::hardware_concurrency());
}

AlignmentConfig alignment_of(const RunConfig& cfg) {
  AlignmentConfig a;
  a.include_top = cfg.include_top;
  a.top_match = cfg.top_match == "concept" ? TopMatch::kRootAndConcept : TopMatch::kRoot;
  a.restarts = cfg.restarts;
  a.seed = cfg.seed;
  return a;
}

VerifyConfig verify_config_of(const RunConfig& cfg) {
  VerifyConfig v;
  v.scoring.alignment = alignment_of(cfg);
  v.scoring.entailment_threshold = cfg.entailment_threshold;
  v.empty_policy = parse_empty_policy(cfg.empty_evidence);
  return v;
}

std::vector<JoinedRecord> load_joined(const RunConfig& cfg, const std::string& claims,
                                      const std::string& amrs) {
  auto dataset = parse_dataset(cfg.dataset);
  auto records = load_claims(dataset, claims, parse_question_mode(cfg.question_mode));
  return join_amrs(records, load_amr_bundle(amrs), cfg.strict);
}

ojson mapping_json(const VariableMapping& mapping) {
  ojson pairs = ojson::array();
  for (const auto& [h, p] : mapping.pairs) pairs.push_back(ojson::array({h, p}));
  return pairs;
}

ojson verdict_json(const ClaimVerdict& v, const ClaimRecord& record, double lambda) {
  ojson j;
  j["claim_id"] = v.claim_id;
  j["label"] = short_name(v.label.label());
  j["gold"] = short_name(record.gold_label.label());
  j["e"] = v.e.value();
  j["lambda"] = lambda;
  ojson pairs = ojson::array();
  for (const auto& p : v.per_evidence) {
    ojson pj;
    pj["evidence_id"] = p.evidence_id;
    pj["f"] = p.score.f_value;
    pj["smatch_p"] = p.score.smatch_p;
    pj["cosine"] = p.score.cosine_sim;
    pj["decision"] = to_int(p.score.decision);
    pj["mapping"] = mapping_json(p.score.mapping);
    pairs.push_back(std::move(pj));
  }
  j["pairs"] = std::move(pairs);
  return j;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path + "'");
  return out;
}

// Options every subcommand shares.
void add_common(CLI::App& sub, RunConfig& cfg, std::string& config_path, bool& no_top,
                std::string& lambda_text) {
  sub.add_option("--config", config_path, "key=value configuration file");
  sub.add_option("--dataset", cfg.dataset, "fever | averitec");
  sub.add_option("--lambda", lambda_text, "weight of Smatch precision in [0,1]");
  sub.add_option("--select", cfg.select, "accuracy | macro-f1 (chooses the default lambda)");
  sub.add_option("--restarts", cfg.restarts, "hill-climbing restarts");
  sub.add_option("--seed", cfg.seed, "global alignment seed");
  sub.add_flag("--no-top", no_top, "leave the top triple out of Smatch");
  sub.add_option("--top-match", cfg.top_match, "root | concept");
  sub.add_option("--backend", cfg.backend, "hash[:dim] | file:<path> | service:<url>, comma-chained");
  sub.add_option("--empty-evidence", cfg.empty_evidence, "error | label-N");
  sub.add_option("--question-mode", cfg.question_mode, "answer-only | question-plus-answer");
  sub.add_option("--jobs", cfg.jobs, "worker threads (0 = all cores)");
  sub.add_option("--experimental-entailment-threshold", cfg.entailment_threshold,
                 "pair-level threshold (0.6 unless experimenting)");
}

std::optional<std::string> find_config_flag(const std::vector<std::string>& args) {
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
    if (args[i].starts_with("--config=")) return args[i].substr(9);
  }
  return std::nullopt;
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "dataset",  "lambda",         "select",        "restarts",
      "seed",     "include-top",    "top-match",     "backend",
      "empty-evidence", "question-mode", "strict",   "jobs",
      "experimental-entailment-threshold"};
  return keys;
}

void apply_setting(RunConfig& cfg, const std::string& raw_key, const std::string& value) {
  std::string key = raw_key;
  for (char& c : key) c = c == '_' ? '-' : static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (key == "dataset") {
    cfg.dataset = value;
  } else if (key == "lambda") {
    cfg.lambda = parse_number<double>(key, value);
  } else if (key == "select") {
    cfg.select = value;
  } else if (key == "restarts") {
    cfg.restarts = parse_number<int>(key, value);
  } else if (key == "seed") {
    cfg.seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "include-top") {
    cfg.include_top = parse_bool(key, value);
  } else if (key == "top-match") {
    cfg.top_match = value;
  } else if (key == "backend") {
    cfg.backend = value;
  } else if (key == "empty-evidence") {
    cfg.empty_evidence = value;
  } else if (key == "question-mode") {
    cfg.question_mode = value;
  } else if (key == "strict") {
    cfg.strict = parse_bool(key, value);
  } else if (key == "jobs") {
    cfg.jobs = parse_number<unsigned>(key, value);
  } else if (key == "experimental-entailment-threshold") {
    cfg.entailment_threshold = parse_number<double>(key, value);
  } else {
    throw UsageError("unknown setting '" + raw_key + "'");
  }
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file '" + path + "'");
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t line_no = 0;
  auto trim = [](std::string s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError(path + ":" + std::to_string(line_no) + ": expected key=value");
    }
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

double effective_lambda(const RunConfig& cfg) {
  if (cfg.lambda) return *cfg.lambda;
  if (parse_dataset(cfg.dataset) == Dataset::kAveritec && cfg.select == "accuracy") return 0.9;
  return 0.0;
}

std::string describe(const RunConfig& cfg) {
  std::ostringstream out;
  out << "dataset=" << cfg.dataset << " lambda=" << format_double(effective_lambda(cfg))
      << " select=" << cfg.select << " restarts=" << cfg.restarts << " seed=" << cfg.seed
      << " include-top=" << (cfg.include_top ? "true" : "false") << " top-match=" << cfg.top_match
      << " backend=" << cfg.backend << " empty-evidence=" << cfg.empty_evidence
      << " question-mode=" << cfg.question_mode << " strict=" << (cfg.strict ? "true" : "false")
      << " jobs=" << resolve_jobs(cfg.jobs)
      << " experimental-entailment-threshold=" << format_double(cfg.entailment_threshold);
  return out.str();
}

namespace {

void validate(const RunConfig& cfg) {
  try {
    parse_dataset(cfg.dataset);
    parse_empty_policy(cfg.empty_evidence);
    parse_question_mode(cfg.question_mode);
  } catch (const ValueError& e) {
    throw UsageError(e.what());
  }
  if (cfg.top_match != "root" && cfg.top_match != "concept") {
    throw UsageError("--top-match must be 'root' or 'concept'");
  }
  if (cfg.select != "accuracy" && cfg.select != "macro-f1") {
    throw UsageError("--select must be 'accuracy' or 'macro-f1'");
  }
  if (cfg.restarts < 1) throw UsageError("--restarts must be at least 1");
  double lambda = effective_lambda(cfg);
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw UsageError("--lambda must lie in [0, 1]");
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  try {
    if (auto path = find_config_flag(args)) {
      for (const auto& [k, v] : read_config_file(*path)) apply_setting(cfg, k, v);
    }
    for (const auto& key : config_keys()) {
      if (const char* v = std::getenv(env_name(key).c_str())) apply_setting(cfg, key, v);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  CLI::App app{"Explainable AMR-based claim verification"};
  app.name(args.empty() ? "amrex" : std::filesystem::path(args[0]).filename().string());
  app.require_subcommand(1);
  std::string config_path;
  bool no_top = false;
  std::string lambda_text;

  // parse
  std::string parse_in;
  std::string parse_format = "penman";
  bool compact = false;
  auto* parse_cmd = app.add_subcommand("parse", "Parse a Penman graph and print it or its triples");
  parse_cmd->add_option("--in", parse_in, "Penman file")->required();
  parse_cmd->add_option("--format", parse_format, "penman | triples | json");
  parse_cmd->add_flag("--compact", compact, "single-line Penman output");
  add_common(*parse_cmd, cfg, config_path, no_top, lambda_text);

  // smatch
  std::string premise_path, hypothesis_path;
  bool json_out = false;
  bool exhaustive = false;
  auto* smatch_cmd = app.add_subcommand("smatch", "Align two graphs and report Smatch scores");
  smatch_cmd->add_option("--premise", premise_path, "premise (evidence) Penman file")->required();
  smatch_cmd->add_option("--hypothesis", hypothesis_path, "hypothesis (claim) Penman file")->required();
  smatch_cmd->add_flag("--json", json_out, "JSON output");
  smatch_cmd->add_flag("--exhaustive", exhaustive, "exact search (small graphs only)");
  add_common(*smatch_cmd, cfg, config_path, no_top, lambda_text);

  // score-pair
  std::string claim_amr, evidence_amr, claim_text, evidence_text;
  auto* pair_cmd = app.add_subcommand("score-pair", "Entailment score of one claim/evidence pair");
  pair_cmd->add_option("--claim-amr", claim_amr)->required();
  pair_cmd->add_option("--evidence-amr", evidence_amr)->required();
  pair_cmd->add_option("--claim-text", claim_text)->required();
  pair_cmd->add_option("--evidence-text", evidence_text)->required();
  pair_cmd->add_flag("--json", json_out, "JSON output");
  add_common(*pair_cmd, cfg, config_path, no_top, lambda_text);

  // verify
  std::string claims_path, amrs_path, out_path;
  bool non_strict = false;
  auto* verify_cmd = app.add_subcommand("verify", "Predict a veracity label for every claim");
  verify_cmd->add_option("--claims", claims_path, "normalised claims JSONL")->required();
  verify_cmd->add_option("--amrs", amrs_path, "AMR bundle JSONL")->required();
  verify_cmd->add_option("--out", out_path, "verdict JSONL (default: stdout)");
  verify_cmd->add_flag("--non-strict", non_strict, "tolerate AMR bundle gaps until they are needed");
  add_common(*verify_cmd, cfg, config_path, no_top, lambda_text);

  // evaluate
  std::string sweep_text = "0:1:0.1";
  std::string report_dir;
  auto* eval_cmd = app.add_subcommand("evaluate", "Lambda sweep with accuracy / F1 reports");
  eval_cmd->add_option("--claims", claims_path, "normalised claims JSONL")->required();
  eval_cmd->add_option("--amrs", amrs_path, "AMR bundle JSONL")->required();
  eval_cmd->add_option("--sweep", sweep_text, "start:stop:step or comma list");
  eval_cmd->add_option("--report", report_dir, "directory for per-lambda JSON and table.md");
  eval_cmd->add_flag("--non-strict", non_strict, "tolerate AMR bundle gaps until they are needed");
  add_common(*eval_cmd, cfg, config_path, no_top, lambda_text);

  // ingest
  std::string ingest_in, ingest_from = "normalized";
  bool stats = false;
  auto* ingest_cmd = app.add_subcommand("ingest", "Normalise and filter a dataset file");
  ingest_cmd->add_option("--in", ingest_in, "input file")->required();
  ingest_cmd->add_option("--out", out_path, "normalised JSONL output");
  ingest_cmd->add_option("--from", ingest_from, "normalized | release");
  ingest_cmd->add_flag("--stats", stats, "print the label distribution");
  add_common(*ingest_cmd, cfg, config_path, no_top, lambda_text);

  // explain
  std::string pair_spec, explain_format = "text", template_path, service_url;
  bool generate = false;
  auto* explain_cmd = app.add_subcommand("explain", "Render the node-mapping explanation of a pair");
  explain_cmd->add_option("--pair", pair_spec, "<verdict.jsonl>#<claim_id>/<evidence_id>")->required();
  explain_cmd->add_option("--claims", claims_path, "normalised claims JSONL")->required();
  explain_cmd->add_option("--amrs", amrs_path, "AMR bundle JSONL")->required();
  explain_cmd->add_option("--format", explain_format, "text | markdown | prompt");
  explain_cmd->add_option("--template", template_path, "prompt template file");
  explain_cmd->add_flag("--generate", generate, "send the prompt to a generation service");
  explain_cmd->add_option("--service", service_url, "generation service base URL");
  add_common(*explain_cmd, cfg, config_path, no_top, lambda_text);

  std::vector<std::string> rest(args.begin() + (args.empty() ? 0 : 1), args.end());
  std::reverse(rest.begin(), rest.end());
  try {
    app.parse(rest);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return 2;
  }

  try {
    if (no_top) cfg.include_top = false;
    if (non_strict) cfg.strict = false;
    if (!lambda_text.empty()) apply_setting(cfg, "lambda", lambda_text);
    validate(cfg);
    CLI::App* sub = app.get_subcommands().front();
    err << "# amrex " << sub->get_name() << " " << describe(cfg) << "\n";
    const double lambda = effective_lambda(cfg);

    if (sub == parse_cmd) {
      auto graph = read_graph(parse_in);
      if (parse_format == "penman") {
        out << serialize_penman(graph, compact ? PenmanStyle::kCompact : PenmanStyle::kIndented) << "\n";
      } else if (parse_format == "triples") {
        for (const auto& t : extract_triples(graph, cfg.include_top)) out << to_string(t) << "\n";
      } else if (parse_format == "json") {
        ojson j;
        j["root"] = graph.root();
        ojson nodes = ojson::object();
        for (const auto& n : graph.nodes()) nodes[n.variable] = n.concept_name;
        j["nodes"] = nodes;
        ojson edges = ojson::array();
        for (const auto& e : graph.edges()) edges.push_back(ojson::array({e.source, e.role, e.target}));
        j["edges"] = edges;
        ojson attrs = ojson::array();
        for (const auto& a : graph.attributes()) attrs.push_back(ojson::array({a.source, a.role, a.value}));
        j["attributes"] = attrs;
        out << j.dump() << "\n";
      } else {
        throw UsageError("--format must be penman, triples or json");
      }
    } else if (sub == smatch_cmd) {
      auto premise = read_graph(premise_path);
      auto hypothesis = read_graph(hypothesis_path);
      auto align = alignment_of(cfg);
      auto r = exhaustive ? align_exhaustive(premise, hypothesis, align)
                          : smatch_precision(premise, hypothesis, align);
      if (json_out) {
        ojson j;
        j["precision"] = r.precision;
        j["recall"] = r.recall;
        j["f1"] = r.f1;
        j["matched"] = r.matched;
        j["hyp_total"] = r.hyp_total;
        j["prem_total"] = r.prem_total;
        j["mapping"] = mapping_json(r.mapping);
        out << j.dump() << "\n";
      } else {
        for (const auto& line : mapping_lines(premise, hypothesis, r.mapping)) out << line << "\n";
        out << "matched " << r.matched << " of " << r.hyp_total << " hypothesis triples ("
            << r.prem_total << " premise)\n";
        out << "precision " << format_double(r.precision) << "\nrecall " << format_double(r.recall)
            << "\nf1 " << format_double(r.f1) << "\n";
      }
    } else if (sub == pair_cmd) {
      auto claim = read_graph(claim_amr);
      auto evidence = read_graph(evidence_amr);
      auto embedder = Embedder::from_spec(cfg.backend);
      ScoringConfig scoring;
      scoring.alignment = alignment_of(cfg);
      scoring.entailment_threshold = cfg.entailment_threshold;
      auto s = nli_pair(evidence_text, evidence, claim_text, claim, lambda, embedder, scoring);
      if (json_out) {
        ojson j;
        j["lambda"] = s.lambda;
        j["smatch_p"] = s.smatch_p;
        j["cosine_sim"] = s.cosine_sim;
        j["f_value"] = s.f_value;
        j["decision"] = to_int(s.decision);
        j["mapping"] = mapping_json(s.mapping);
        out << j.dump() << "\n";
      } else {
        for (const auto& line : mapping_lines(evidence, claim, s.mapping)) out << line << "\n";
        out << "smatch_p " << format_double(s.smatch_p) << "\ncosine " << format_double(s.cosine_sim)
            << "\nf " << format_double(s.f_value) << "\ndecision " << to_int(s.decision) << "\n";
      }
    } else if (sub == verify_cmd) {
      auto joined = load_joined(cfg, claims_path, amrs_path);
      auto embedder = Embedder::from_spec(cfg.backend);
      auto verdicts = verify_all(joined, lambda, embedder, verify_config_of(cfg), resolve_jobs(cfg.jobs));
      std::ostringstream buffer;
      for (std::size_t i = 0; i < verdicts.size(); ++i) {
        buffer << verdict_json(verdicts[i], joined[i].record, lambda).dump() << "\n";
      }
      if (out_path.empty()) {
        out << buffer.str();
      } else {
        auto file = open_output(out_path);
        file << buffer.str();
      }
    } else if (sub == eval_cmd) {
      auto joined = load_joined(cfg, claims_path, amrs_path);
      auto embedder = Embedder::from_spec(cfg.backend);
      std::vector<double> lambdas;
      try {
        lambdas = parse_sweep(sweep_text);
      } catch (const ValueError& e) {
        throw UsageError(e.what());
      }
      auto points = lambda_sweep(joined, lambdas, embedder, verify_config_of(cfg), resolve_jobs(cfg.jobs));
      std::vector<EvaluationReport> reports;
      for (const auto& p : points) reports.push_back(p.report);
      auto table = markdown_table(reports);
      if (!report_dir.empty()) {
        std::filesystem::create_directories(report_dir);
        for (const auto& p : points) {
          char name[64];
          std::snprintf(name, sizeof name, "report_lambda_%.2f.json", p.lambda);
          auto file = open_output((std::filesystem::path(report_dir) / name).string());
          file << report_json(p.report) << "\n";
        }
        auto file = open_output((std::filesystem::path(report_dir) / "table.md").string());
        file << table;
      }
      out << table;
    } else if (sub == ingest_cmd) {
      auto dataset = parse_dataset(cfg.dataset);
      auto mode = parse_question_mode(cfg.question_mode);
      std::vector<ClaimRecord> records;
      if (ingest_from == "normalized") {
        records = load_claims(dataset, ingest_in, mode);
      } else if (ingest_from == "release") {
        std::ifstream in(ingest_in);
        if (!in) throw DataError("cannot open '" + ingest_in + "'");
        records = dataset == Dataset::kFever ? convert_fever_release(in)
                                             : convert_averitec_release(in, mode);
      } else {
        throw UsageError("--from must be 'normalized' or 'release'");
      }
      if (!out_path.empty()) {
        auto file = open_output(out_path);
        write_claims(file, records);
      }
      if (stats) {
        auto counts = label_counts(records);
        auto reference = reference_label_counts(dataset);
        auto labels = labels_of(dataset);
        std::size_t total = 0, ref_total = 0;
        bool all_match = true;
        out << "label\tobserved\treference\n";
        for (std::size_t i = 0; i < labels.size(); ++i) {
          std::size_t observed = counts.count(labels[i]) ? counts.at(labels[i]) : 0;
          total += observed;
          ref_total += reference[i];
          all_match = all_match && observed == reference[i];
          out << short_name(labels[i]) << "\t" << observed << "\t" << reference[i] << "\n";
        }
        out << "total\t" << total << "\t" << ref_total << "\n";
        out << (all_match ? "matches reference distribution\n" : "differs from reference distribution\n");
      }
      if (out_path.empty() && !stats) write_claims(out, records);
    } else if (sub == explain_cmd) {
      auto hash = pair_spec.rfind('#');
      auto slash = pair_spec.rfind('/');
      if (hash == std::string::npos || slash == std::string::npos || slash < hash) {
        throw UsageError("--pair must look like <verdict.jsonl>#<claim_id>/<evidence_id>");
      }
      std::string verdict_path = pair_spec.substr(0, hash);
      std::string claim_id = pair_spec.substr(hash + 1, slash - hash - 1);
      std::string evidence_id = pair_spec.substr(slash + 1);

      std::optional<nlohmann::json> line_json;
      {
        std::ifstream in(verdict_path);
        if (!in) throw DataError("cannot open '" + verdict_path + "'");
        std::string line;
        while (std::getline(in, line)) {
          if (line.empty()) continue;
          auto j = nlohmann::json::parse(line);
          if (j.at("claim_id").get<std::string>() == claim_id) {
            line_json = std::move(j);
            break;
          }
        }
      }
      if (!line_json) throw DataError("claim '" + claim_id + "' not in " + verdict_path);
      const nlohmann::json* pair_json = nullptr;
      for (const auto& p : line_json->at("pairs")) {
        if (p.at("evidence_id").get<std::string>() == evidence_id) pair_json = &p;
      }
      if (!pair_json) throw DataError("evidence '" + evidence_id + "' not in claim '" + claim_id + "'");

      cfg.strict = false;
      auto joined = load_joined(cfg, claims_path, amrs_path);
      const JoinedRecord* rec = nullptr;
      for (const auto& j : joined) {
        if (j.record.claim_id == claim_id) rec = &j;
      }
      if (!rec) throw DataError("claim '" + claim_id + "' not in " + claims_path);
      std::size_t idx = rec->record.evidence.size();
      for (std::size_t i = 0; i < rec->record.evidence.size(); ++i) {
        if (rec->record.evidence[i].evidence_id == evidence_id) idx = i;
      }
      if (idx == rec->record.evidence.size()) {
        throw DataError("evidence '" + evidence_id + "' not in claim '" + claim_id + "'");
      }
      if (!rec->claim_amr) throw DataError("missing AMR for claim '" + claim_id + "'");
      if (!rec->evidence_amrs[idx]) throw DataError("missing AMR for evidence '" + evidence_id + "'");

      EntailmentScore score;
      score.lambda = line_json->value("lambda", lambda);
      score.f_value = pair_json->at("f").get<double>();
      score.smatch_p = pair_json->at("smatch_p").get<double>();
      score.cosine_sim = pair_json->at("cosine").get<double>();
      score.decision = pair_json->at("decision").get<int>() > 0 ? Decision::kEntailed : Decision::kNotEntailed;
      for (const auto& m : pair_json->at("mapping")) {
        score.mapping.pairs.emplace_back(m.at(0).get<std::string>(), m.at(1).get<std::string>());
      }
      auto label = parse_label(rec->record.dataset, line_json->at("label").get<std::string>());
      auto bundle = make_bundle(rec->record.claim_text, *rec->claim_amr,
                                rec->record.evidence[idx].text, *rec->evidence_amrs[idx], score, label);
      std::string rendered;
      if (explain_format == "text") {
        rendered = render_mapping(bundle);
      } else if (explain_format == "markdown") {
        rendered = render_markdown(bundle);
      } else if (explain_format == "prompt") {
        rendered = build_prompt(bundle, template_path.empty() ? kDefaultPromptTemplate : slurp(template_path));
      } else {
        throw UsageError("--format must be text, markdown or prompt");
      }
      if (generate) {
        if (service_url.empty()) throw UsageError("--generate needs --service <url>");
        std::string prompt = explain_format == "prompt"
                                 ? rendered
                                 : build_prompt(bundle, template_path.empty() ? kDefaultPromptTemplate
                                                                              : slurp(template_path));
        out << generate_explanation(prompt, GenerationServiceConfig{service_url}) << "\n";
      } else {
        out << rendered;
        if (!rendered.empty() && rendered.back() != '\n') out << "\n";
      }
    }
    return 0;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace amrex::cli
