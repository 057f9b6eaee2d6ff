#include "moelab/report.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <functional>
#include <iomanip>
#include <sstream>

namespace moelab {

using nlohmann::json;

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

json to_json(const SeedSpec& seed) {
  return json{{"master_seed", seed.master_seed}, {"stream_id", seed.stream_id}};
}

json to_json(const SetParams& params) {
  return json{{"D", params.D}, {"N", params.N}, {"c", params.c}, {"a", params.a}};
}

json to_json(const ExperimentConfig& config) {
  return json{{"dim_a", config.dim_a},
              {"dim_b", config.dim_b},
              {"trials", config.trials},
              {"seed", to_json(config.seed)},
              {"params", to_json(config.params)},
              {"confidence_level", config.confidence_level}};
}

json to_json(const CheckResult& check) {
  return json{{"name", check.name},         {"value", check.value},
              {"reference", check.reference}, {"relation", check.relation},
              {"satisfied", check.satisfied}, {"vacuous", check.vacuous},
              {"note", check.note}};
}

json to_json(const ExperimentReport& report) {
  json checks = json::array();
  for (const auto& check : report.checks) checks.push_back(to_json(check));
  json j{{"suite", report.suite},
         {"config", to_json(report.config)},
         {"estimate", report.estimate},
         {"ci_low", report.ci_low},
         {"ci_high", report.ci_high},
         {"analytic_bound", report.analytic_bound},
         {"bound_satisfied", report.bound_satisfied},
         {"all_passed", report.all_passed},
         {"checks", checks},
         {"runtime_seconds", report.runtime_seconds},
         {"notes", report.notes}};
  if (std::isnan(report.analytic_bound)) j["analytic_bound"] = nullptr;
  if (report.csv_path) j["csv_path"] = *report.csv_path;
  return j;
}

json to_json(const MinEntResult& result) {
  std::vector<double> re(result.argmin.dim()), im(result.argmin.dim());
  for (int i = 0; i < result.argmin.dim(); ++i) {
    re[i] = result.argmin[i].real();
    im[i] = result.argmin[i].imag();
  }
  return json{{"value", result.value},
              {"argmin_real", re},
              {"argmin_imag", im},
              {"starts", result.starts},
              {"converged_starts", result.converged_starts},
              {"best_gradient_norm", result.best_gradient_norm}};
}

json to_json(const PipelineRow& row) {
  return json{{"unitary", row.unitary_index},
              {"s_min_e", row.s_min_e},
              {"s_min_ebar", row.s_min_ebar},
              {"converged_e", row.converged_e},
              {"converged_ebar", row.converged_ebar},
              {"hayden_entropy", row.hayden_entropy},
              {"hayden_bound", row.hayden_bound},
              {"hayden_exact_bound", row.hayden_exact_bound},
              {"hayden_overlap", row.hayden_overlap},
              {"product_opt", row.product_opt},
              {"product_upper", row.product_upper},
              {"additivity_gap", row.additivity_gap},
              {"delta_s_min", row.delta_s_min},
              {"lemma2_event", row.lemma2_event},
              {"freq_in_y", row.freq_in_y},
              {"freq_in_x", row.freq_in_x},
              {"freq_in_xy", row.freq_in_xy},
              {"bound_ok", row.bound_ok},
              {"exact_bound_ok", row.exact_bound_ok},
              {"subadditive_ok", row.subadditive_ok}};
}

json to_json(const PipelineResult& result) {
  json rows = json::array();
  for (const auto& row : result.rows) rows.push_back(to_json(row));
  json j{{"config",
          json{{"dim_a", result.config.dim_a},
               {"dim_b", result.config.dim_b},
               {"unitary_samples", result.config.unitary_samples},
               {"starts", result.config.starts},
               {"product_starts", result.config.product_starts},
               {"witness_trials", result.config.witness_trials},
               {"c", result.config.c},
               {"a", result.config.a},
               {"tube_n", result.config.tube_n},
               {"seed", to_json(result.config.seed)},
               {"unitary_kind", result.config.unitary_kind}}},
         {"rows", rows},
         {"gap_min", result.gap_min},
         {"gap_max", result.gap_max},
         {"gap_mean", result.gap_mean},
         {"lemma2_event_count", result.lemma2_event_count},
         {"bound_violations", result.bound_violations},
         {"exact_bound_violations", result.exact_bound_violations},
         {"subadditivity_violations", result.subadditivity_violations},
         {"all_passed", result.all_passed},
         {"runtime_seconds", result.runtime_seconds},
         {"notes", result.notes}};
  if (result.csv_path) j["csv_path"] = *result.csv_path;
  return j;
}

json to_json(const RunManifest& manifest) {
  return json{{"command", manifest.command},
              {"arguments", manifest.arguments},
              {"version", manifest.version},
              {"seed", to_json(manifest.seed)},
              {"started_at", manifest.started_at},
              {"finished_at", manifest.finished_at},
              {"output_paths", manifest.output_paths}};
}

json numeric_payload(json document) {
  if (document.contains("manifest")) {
    auto& manifest = document["manifest"];
    manifest.erase("started_at");
    manifest.erase("finished_at");
    manifest.erase("output_paths");
    manifest.erase("arguments");
  }
  std::function<void(json&)> scrub = [&](json& node) {
    if (node.is_object()) {
      node.erase("runtime_seconds");
      node.erase("csv_path");
      for (auto& [key, value] : node.items()) scrub(value);
    } else if (node.is_array()) {
      for (auto& value : node) scrub(value);
    }
  };
  scrub(document);
  return document;
}

}  // namespace moelab
