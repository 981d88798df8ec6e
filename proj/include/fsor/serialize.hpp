#pragma once

#include "fsor/baselines.hpp"
#include "fsor/evalkit.hpp"
#include "fsor/model.hpp"

#include <string>

namespace fsor {

/// FsorResult document with the fixed field names "theta", "ranking",
/// "objective_trace", "bias", "converged", "iterations" plus a config echo.
std::string fsor_result_json(const FsorResult& result, const FsorConfig& config,
                             bool normalized);

/// Baseline scores in the same envelope (shares the "ranking" field).
std::string feature_scores_json(const FeatureScores& scores);

std::string eval_report_json(const EvalReport& report, const SplitSpec& split,
                             int k_neighbors, bool normalized);

/// Tidy CSV, one row per (m, metric): header "m,metric,value".
std::string eval_report_csv(const EvalReport& report);

/// Objective trace CSV with header "iter,objective".
std::string trace_csv(const std::vector<double>& objective_trace);

/// Reads {"ranking": [...]} and validates it as a permutation of 0..d-1.
/// Throws DataError on parse failure or invalid content.
std::vector<int> load_ranking_file(const std::string& path, Eigen::Index d);

/// Writes to the file when path is nonempty, else to stdout.
void emit_output(const std::string& content, const std::string& path);

}  // namespace fsor
