#include "gestauth/eval/report.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "gestauth/error.hpp"

namespace gestauth::eval {

namespace {

using nlohmann::json;

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json envelope_json(const Envelope& e) {
  return {{"mean", opt(e.mean)}, {"min", opt(e.min)}, {"max", opt(e.max)}, {"defined", e.defined}};
}

json quartiles_json(const Quartiles& q) { return {{"q1", q.q1}, {"median", q.median}, {"q3", q.q3}}; }

std::string cell(const json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_float()) {
    std::ostringstream os;
    os.precision(17);
    os << v.get<double>();
    return os.str();
  }
  return v.dump();
}

// Rows are flat JSON objects sharing the column list.
std::string to_csv(const std::vector<std::string>& columns, const json& rows) {
  std::ostringstream os;
  for (std::size_t c = 0; c < columns.size(); ++c) os << (c ? "," : "") << columns[c];
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < columns.size(); ++c) os << (c ? "," : "") << cell(row.value(columns[c], json()));
    os << '\n';
  }
  return os.str();
}

json summary_rows(const EvalReport& r) {
  json rows = json::array();
  for (const auto& g : r.groups) {
    for (const auto& t : g.at_thresholds) {
      rows.push_back({{"group", g.group},
                      {"passwords", g.passwords},
                      {"threshold", t.threshold},
                      {"tp", t.pooled.tp},
                      {"fp", t.pooled.fp},
                      {"tn", t.pooled.tn},
                      {"fn", t.pooled.fn},
                      {"tpr_mean", opt(t.tpr.mean)},
                      {"tpr_min", opt(t.tpr.min)},
                      {"tpr_max", opt(t.tpr.max)},
                      {"fpr_mean", opt(t.fpr.mean)},
                      {"fpr_min", opt(t.fpr.min)},
                      {"fpr_max", opt(t.fpr.max)},
                      {"precision_mean", opt(t.precision.mean)},
                      {"auc_mean", opt(g.auc.mean)},
                      {"auc_min", opt(g.auc.min)},
                      {"auc_max", opt(g.auc.max)},
                      {"recall_at_full_precision_mean", opt(g.recall_at_full_precision.mean)},
                      {"recall_at_full_precision_min", opt(g.recall_at_full_precision.min)},
                      {"precision_at_75_recall_mean", opt(g.precision_at_75_recall.mean)}});
    }
  }
  return rows;
}

json password_rows(const EvalReport& r) {
  json rows = json::array();
  for (const auto& p : r.passwords) {
    for (const auto& t : p.at_thresholds) {
      rows.push_back({{"label", p.label},
                      {"persona", p.persona},
                      {"finger_count", p.finger_count},
                      {"positives", p.positives},
                      {"negatives", p.negatives},
                      {"threshold", t.threshold},
                      {"tpr", opt(t.metrics.tpr)},
                      {"fpr", opt(t.metrics.fpr)},
                      {"precision", opt(t.metrics.precision)},
                      {"auc", opt(p.auc)},
                      {"recall_at_full_precision", opt(p.recall_at_full_precision)},
                      {"precision_at_75_recall", opt(p.precision_at_75_recall)},
                      {"operating_threshold", opt(p.operating_threshold)},
                      {"enroll_ms", p.enroll_ms}});
    }
  }
  return rows;
}

json roc_rows(const EvalReport& r) {
  json rows = json::array();
  for (const auto& p : r.passwords) {
    for (const auto& pt : p.roc) {
      rows.push_back({{"label", p.label}, {"threshold", pt.threshold}, {"fpr", pt.fpr}, {"tpr", pt.tpr}});
    }
  }
  return rows;
}

json pr_rows(const EvalReport& r) {
  json rows = json::array();
  for (const auto& p : r.passwords) {
    for (const auto& pt : p.pr) {
      rows.push_back(
          {{"label", p.label}, {"threshold", pt.threshold}, {"recall", pt.recall}, {"precision", pt.precision}});
    }
  }
  return rows;
}

json attack_rows(const EvalReport& r) {
  json rows = json::array();
  for (const auto& a : r.attacks) {
    rows.push_back({{"group", a.group},
                    {"level", std::string(to_string(a.level))},
                    {"observations", a.observations},
                    {"victims", a.victims},
                    {"attempts", a.attempts},
                    {"acceptance_at_half", a.acceptance_at_half},
                    {"acceptance_at_operating", a.acceptance_at_operating}});
  }
  return rows;
}

json ks_rows(const EvalReport& r) {
  json rows = json::array();
  for (const auto& k : r.ks) {
    rows.push_back({{"feature", std::string(kFeatureNames[static_cast<std::size_t>(k.feature)])},
                    {"within_tests", k.within_tests},
                    {"across_tests", k.across_tests},
                    {"within_p_q1", k.within_p.q1},
                    {"within_p_median", k.within_p.median},
                    {"within_p_q3", k.within_p.q3},
                    {"across_p_q1", k.across_p.q1},
                    {"across_p_median", k.across_p.median},
                    {"across_p_q3", k.across_p.q3},
                    {"separated", k.separated}});
  }
  return rows;
}

json timing_rows(const EvalReport& r) {
  json rows = json::array();
  for (const auto& h : r.timings) {
    for (std::size_t b = 0; b < h.counts.size(); ++b) {
      rows.push_back({{"name", h.name},
                      {"bin_lo", h.edges[b]},
                      {"bin_hi", h.edges[b + 1]},
                      {"count", h.counts[b]},
                      {"mean", h.mean},
                      {"max", h.max}});
    }
  }
  return rows;
}

const std::map<std::string, std::vector<std::string>>& table_columns() {
  static const std::map<std::string, std::vector<std::string>> columns = {
      {"summary",
       {"group", "passwords", "threshold", "tp", "fp", "tn", "fn", "tpr_mean", "tpr_min", "tpr_max", "fpr_mean",
        "fpr_min", "fpr_max", "precision_mean", "auc_mean", "auc_min", "auc_max", "recall_at_full_precision_mean",
        "recall_at_full_precision_min", "precision_at_75_recall_mean"}},
      {"passwords",
       {"label", "persona", "finger_count", "positives", "negatives", "threshold", "tpr", "fpr", "precision", "auc",
        "recall_at_full_precision", "precision_at_75_recall", "operating_threshold", "enroll_ms"}},
      {"roc_points", {"label", "threshold", "fpr", "tpr"}},
      {"pr_points", {"label", "threshold", "recall", "precision"}},
      {"attacks",
       {"group", "level", "observations", "victims", "attempts", "acceptance_at_half", "acceptance_at_operating"}},
      {"ks",
       {"feature", "within_tests", "across_tests", "within_p_q1", "within_p_median", "within_p_q3", "across_p_q1",
        "across_p_median", "across_p_q3", "separated"}},
      {"timings", {"name", "bin_lo", "bin_hi", "count", "mean", "max"}},
  };
  return columns;
}

}  // namespace

nlohmann::json report_to_json(const EvalReport& report) {
  json groups = json::array();
  for (const auto& g : report.groups) {
    json thresholds = json::array();
    for (const auto& t : g.at_thresholds) {
      thresholds.push_back({{"threshold", t.threshold},
                            {"tp", t.pooled.tp},
                            {"fp", t.pooled.fp},
                            {"tn", t.pooled.tn},
                            {"fn", t.pooled.fn},
                            {"tpr", envelope_json(t.tpr)},
                            {"fpr", envelope_json(t.fpr)},
                            {"precision", envelope_json(t.precision)}});
    }
    groups.push_back({{"group", g.group},
                      {"passwords", g.passwords},
                      {"finger_count_min", g.finger_count_min},
                      {"finger_count_max", g.finger_count_max},
                      {"thresholds", thresholds},
                      {"auc", envelope_json(g.auc)},
                      {"recall_at_full_precision", envelope_json(g.recall_at_full_precision)},
                      {"precision_at_75_recall", envelope_json(g.precision_at_75_recall)}});
  }
  json ks = json::array();
  for (const auto& k : report.ks) {
    ks.push_back({{"feature", std::string(kFeatureNames[static_cast<std::size_t>(k.feature)])},
                  {"within_tests", k.within_tests},
                  {"across_tests", k.across_tests},
                  {"within_p", quartiles_json(k.within_p)},
                  {"across_p", quartiles_json(k.across_p)},
                  {"separated", k.separated}});
  }
  json timings = json::array();
  for (const auto& h : report.timings) {
    timings.push_back({{"name", h.name}, {"edges", h.edges}, {"counts", h.counts}, {"mean", h.mean}, {"max", h.max}});
  }
  return {{"omega", report.config.omega},
          {"thresholds", report.config.thresholds},
          {"seed", report.config.seed},
          {"groups", groups},
          {"tables",
           {{"summary", summary_rows(report)},
            {"passwords", password_rows(report)},
            {"roc_points", roc_rows(report)},
            {"pr_points", pr_rows(report)},
            {"attacks", attack_rows(report)},
            {"ks", ks_rows(report)},
            {"timings", timing_rows(report)}}},
          {"ks", ks},
          {"timings", timings}};
}

std::map<std::string, std::string> report_tables_csv(const EvalReport& report) {
  const json doc = report_to_json(report);
  std::map<std::string, std::string> out;
  for (const auto& [name, columns] : table_columns()) out[name] = to_csv(columns, doc.at("tables").at(name));
  return out;
}

void write_report(const std::string& dir, const EvalReport& report) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::not_found, "cannot create report directory " + dir);
  auto write = [&](const std::string& name, const std::string& text) {
    std::ofstream out(fs::path(dir) / name, std::ios::binary);
    if (!out) throw Error(ErrorKind::not_found, "cannot write " + name);
    out << text;
  };
  write("report.json", report_to_json(report).dump(2) + "\n");
  for (const auto& [name, text] : report_tables_csv(report)) write(name + ".csv", text);
}

}  // namespace gestauth::eval
