#include "amrex/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "amrex/errors.hpp"

namespace amrex {

namespace {

std::size_t label_index(Dataset dataset, Label label) {
  auto labels = labels_of(dataset);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == label) return i;
  }
  throw ValueError("label " + std::string(short_name(label)) + " is not a " +
                   std::string(to_string(dataset)) + " label");
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

EvaluationReport score_predictions(std::span<const VerdictLabel> gold,
                                   std::span<const VerdictLabel> pred,
                                   std::optional<double> lambda) {
  if (gold.size() != pred.size()) {
    throw ValueError("gold has " + std::to_string(gold.size()) + " labels, predictions " +
                     std::to_string(pred.size()));
  }
  if (gold.empty()) throw ValueError("cannot score an empty prediction set");
  const Dataset dataset = gold.front().dataset();
  EvaluationReport report;
  report.dataset = dataset;
  report.lambda = lambda;
  report.n_claims = gold.size();
  const auto labels = labels_of(dataset);
  const std::size_t k = labels.size();
  report.confusion.assign(k, std::vector<std::size_t>(k, 0));
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (gold[i].dataset() != dataset || pred[i].dataset() != dataset) {
      throw ValueError("mixed dataset tags at position " + std::to_string(i));
    }
    ++report.confusion[label_index(dataset, gold[i].label())][label_index(dataset, pred[i].label())];
  }

  std::size_t correct = 0;
  for (std::size_t i = 0; i < k; ++i) correct += report.confusion[i][i];
  report.accuracy = static_cast<double>(correct) / static_cast<double>(gold.size());

  double f1_sum = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t tp = report.confusion[c][c];
    std::size_t gold_c = 0, pred_c = 0;
    for (std::size_t j = 0; j < k; ++j) {
      gold_c += report.confusion[c][j];
      pred_c += report.confusion[j][c];
    }
    double precision = pred_c == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(pred_c);
    double recall = gold_c == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(gold_c);
    double f1 = precision + recall == 0.0 ? 0.0 : 2.0 * precision * recall / (precision + recall);
    report.per_label_f1[labels[c]] = f1;
    f1_sum += f1;
  }
  report.macro_f1 = f1_sum / static_cast<double>(k);
  return report;
}

std::vector<SweepPoint> lambda_sweep(const std::vector<JoinedRecord>& records,
                                     std::span<const double> lambdas, Embedder& embedder,
                                     const VerifyConfig& cfg, unsigned jobs) {
  if (lambdas.empty()) throw ValueError("lambda sweep needs at least one value");
  for (double l : lambdas) combined_score(l, 0.0, 0.0);
  if (records.empty()) throw ValueError("lambda sweep needs at least one claim");

  std::vector<std::string> texts;
  for (const auto& r : records) {
    texts.push_back(r.record.claim_text);
    for (const auto& e : r.record.evidence) texts.push_back(e.text);
  }
  embedder.prefetch(texts);

  std::vector<std::vector<PairComponents>> components(records.size());
  parallel_for(records.size(), jobs, [&](std::size_t i) {
    if (!records[i].record.evidence.empty()) {
      components[i] = claim_components(records[i], embedder, cfg.scoring.alignment);
    }
  });

  std::vector<VerdictLabel> gold;
  gold.reserve(records.size());
  for (const auto& r : records) gold.push_back(r.record.gold_label);

  std::vector<SweepPoint> out;
  for (double lambda : lambdas) {
    SweepPoint point;
    point.lambda = lambda;
    std::vector<VerdictLabel> pred;
    for (std::size_t i = 0; i < records.size(); ++i) {
      point.verdicts.push_back(decide_claim(records[i], components[i], lambda, cfg));
      pred.push_back(point.verdicts.back().label);
    }
    point.report = score_predictions(gold, pred, lambda);
    out.push_back(std::move(point));
  }
  return out;
}

std::vector<double> parse_sweep(const std::string& text) {
  auto number = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      double v = std::stod(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw ValueError("bad number '" + s + "' in sweep '" + text + "'");
    }
  };
  auto round12 = [](double v) { return std::round(v * 1e12) / 1e12; };

  std::vector<double> out;
  if (std::count(text.begin(), text.end(), ':') == 2) {
    auto a = text.find(':');
    auto b = text.find(':', a + 1);
    double start = number(text.substr(0, a));
    double stop = number(text.substr(a + 1, b - a - 1));
    double step = number(text.substr(b + 1));
    if (!(step > 0.0)) throw ValueError("sweep step must be positive in '" + text + "'");
    for (long k = 0;; ++k) {
      double v = round12(start + static_cast<double>(k) * step);
      if (v > stop + 1e-9) break;
      out.push_back(v);
    }
  } else {
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (!item.empty()) out.push_back(number(item));
    }
  }
  if (out.empty()) throw ValueError("empty lambda sweep '" + text + "'");
  for (double v : out) combined_score(v, 0.0, 0.0);
  return out;
}

std::string report_json(const EvaluationReport& report) {
  nlohmann::ordered_json j;
  j["dataset"] = to_string(report.dataset);
  if (report.lambda) {
    j["lambda"] = *report.lambda;
  } else {
    j["lambda"] = nullptr;
  }
  j["n_claims"] = report.n_claims;
  j["accuracy"] = report.accuracy;
  j["macro_f1"] = report.macro_f1;
  nlohmann::ordered_json f1 = nlohmann::ordered_json::object();
  for (Label l : labels_of(report.dataset)) f1[std::string(short_name(l))] = report.per_label_f1.at(l);
  j["per_label_f1"] = f1;
  nlohmann::ordered_json labels = nlohmann::ordered_json::array();
  for (Label l : labels_of(report.dataset)) labels.push_back(short_name(l));
  j["labels"] = labels;
  j["confusion"] = report.confusion;
  return j.dump();
}

std::string markdown_table(std::span<const EvaluationReport> reports) {
  std::ostringstream out;
  out << "| Model | lambda | S | R | N | C | Macro F1 | Acc. |\n";
  out << "|---|---|---|---|---|---|---|---|\n";
  for (const auto& r : reports) {
    out << "| " << to_string(r.dataset) << " | " << (r.lambda ? fixed(*r.lambda, 2) : "_");
    for (Label l : kAveritecLabels) {
      auto it = r.per_label_f1.find(l);
      out << " | " << (it == r.per_label_f1.end() ? "_" : fixed(it->second, 2));
    }
    out << " | " << fixed(r.macro_f1, 2) << " | " << fixed(r.accuracy, 2) << " |\n";
  }
  return out.str();
}

}  // namespace amrex
