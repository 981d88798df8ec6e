#include "fsor/serialize.hpp"

#include <json.hpp>

#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fsor {

namespace {

using nlohmann::json;

json vec_json(const Vector& v) {
  return json(std::vector<double>(v.data(), v.data() + v.size()));
}

std::string shortest(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace

std::string fsor_result_json(const FsorResult& result, const FsorConfig& config,
                             bool normalized) {
  json j;
  j["method"] = "fsor";
  j["theta"] = vec_json(result.theta);
  j["ranking"] = result.ranking;
  j["objective_trace"] = result.objective_trace;
  j["bias"] = vec_json(result.bias);
  j["converged"] = result.converged;
  j["iterations"] = result.iterations;
  j["config"] = {
      {"outer_max_iter", config.outer_max_iter},
      {"outer_tol", config.outer_tol},
      {"seed", config.seed},
      {"normalized", normalized},
      {"gpi", {{"alpha_safety", config.gpi.alpha_safety},
               {"max_iter", config.gpi.max_iter},
               {"tol", config.gpi.tol}}},
      {"alm", {{"rho", config.alm.rho},
               {"mu0", config.alm.mu0},
               {"max_iter", config.alm.max_iter},
               {"feas_tol", config.alm.feas_tol}}},
  };
  return j.dump(2) + "\n";
}

std::string feature_scores_json(const FeatureScores& scores) {
  json j;
  j["method"] = scores.method_name;
  j["scores"] = vec_json(scores.scores);
  j["ranking"] = scores.ranking;
  return j.dump(2) + "\n";
}

std::string eval_report_json(const EvalReport& report, const SplitSpec& split,
                             int k_neighbors, bool normalized) {
  json j;
  j["classifier"] = report.classifier_name;
  j["k_neighbors"] = k_neighbors;
  j["train_fraction"] = split.train_fraction;
  j["n_trials"] = split.n_trials;
  j["seed"] = split.seed;
  j["stratified"] = split.stratified;
  j["normalized"] = normalized;
  j["excluded_class_trials"] = report.excluded_class_trials;
  j["per_size"] = json::array();
  for (const SizeMetrics& sm : report.per_size) {
    j["per_size"].push_back({{"m", sm.m},
                             {"mean_accuracy", sm.mean_accuracy},
                             {"std_accuracy", sm.std_accuracy},
                             {"macro_sensitivity", sm.macro_sensitivity},
                             {"macro_specificity", sm.macro_specificity}});
  }
  return j.dump(2) + "\n";
}

std::string eval_report_csv(const EvalReport& report) {
  std::ostringstream out;
  out << "m,metric,value\n";
  for (const SizeMetrics& sm : report.per_size) {
    out << sm.m << ",mean_accuracy," << shortest(sm.mean_accuracy) << '\n';
    out << sm.m << ",std_accuracy," << shortest(sm.std_accuracy) << '\n';
    out << sm.m << ",macro_sensitivity," << shortest(sm.macro_sensitivity)
        << '\n';
    out << sm.m << ",macro_specificity," << shortest(sm.macro_specificity)
        << '\n';
  }
  return out.str();
}

std::string trace_csv(const std::vector<double>& objective_trace) {
  std::ostringstream out;
  out << "iter,objective\n";
  for (std::size_t i = 0; i < objective_trace.size(); ++i)
    out << (i + 1) << ',' << shortest(objective_trace[i]) << '\n';
  return out.str();
}

std::vector<int> load_ranking_file(const std::string& path, Eigen::Index d) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open ranking file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw DataError("invalid JSON in " + path + ": " + e.what());
  }
  if (!j.contains("ranking") || !j["ranking"].is_array())
    throw DataError("ranking file " + path + " lacks a \"ranking\" array");
  std::vector<int> ranking;
  for (const auto& v : j["ranking"]) {
    if (!v.is_number_integer())
      throw DataError("ranking file " + path + " has a non-integer entry");
    ranking.push_back(v.get<int>());
  }
  if (!is_permutation(ranking, d))
    throw DataError("ranking in " + path + " is not a permutation of 0.." +
                    std::to_string(d - 1));
  return ranking;
}

void emit_output(const std::string& content, const std::string& path) {
  if (path.empty()) {
    std::cout << content;
    std::cout.flush();
    return;
  }
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path);
  out << content;
  if (!out) throw DataError("write failed: " + path);
}

}  // namespace fsor
