// Command-line front end: select (rank features), trace (objective per
// iteration), eval (KNN accuracy sweep over feature-set sizes), synth
// (generate labeled data). Data goes to stdout or --output; logs to stderr.
//
// Exit codes: 0 success, 2 bad flags or invalid parameters, 3 data errors,
// 4 non-convergence (result still written with converged=false).

#include "fsor/baselines.hpp"
#include "fsor/dataset.hpp"
#include "fsor/evalkit.hpp"
#include "fsor/logging.hpp"
#include "fsor/model.hpp"
#include "fsor/serialize.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

namespace {

struct CommonOpts {
  std::string input;
  std::string label;
  bool header = true;
  std::uint64_t seed = 0;
  bool normalize = false;
  std::string output;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool input_required = true) {
  auto* in = cmd->add_option("--input", o.input, "input CSV path");
  auto* lab = cmd->add_option(
      "--label", o.label, "label column (header name or zero-based index)");
  if (input_required) {
    in->required();
    lab->required();
  }
  cmd->add_option("--header", o.header, "input has a header row")
      ->capture_default_str();
  cmd->add_option("--seed", o.seed, "random seed")->capture_default_str();
  cmd->add_flag("--normalize", o.normalize,
                "z-score features (select/trace: whole dataset; eval: "
                "training-split statistics only)");
  cmd->add_option("--output", o.output, "output path (default: stdout)");
}

std::vector<int> parse_sizes(const std::string& text, Eigen::Index d) {
  std::vector<int> sizes;
  if (text == "all") {
    for (int m = 1; m <= static_cast<int>(d); ++m) sizes.push_back(m);
    return sizes;
  }
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    const std::string tok = text.substr(pos, comma - pos);
    const std::size_t dash = tok.find('-', 1);
    try {
      if (dash != std::string::npos) {
        const int lo = std::stoi(tok.substr(0, dash));
        const int hi = std::stoi(tok.substr(dash + 1));
        for (int m = lo; m <= hi; ++m) sizes.push_back(m);
      } else {
        sizes.push_back(std::stoi(tok));
      }
    } catch (const std::exception&) {
      throw std::invalid_argument("cannot parse --sizes entry '" + tok + "'");
    }
    pos = comma + 1;
  }
  if (sizes.empty()) throw std::invalid_argument("--sizes is empty");
  return sizes;
}

fsor::Dataset load_input(const CommonOpts& o, bool normalize_whole) {
  fsor::Dataset ds = fsor::load_csv(o.input, o.label, o.header);
  fsor::logging::info("loaded " + o.input + ": d=" + std::to_string(ds.d()) +
                      " n=" + std::to_string(ds.n()) +
                      " k=" + std::to_string(ds.k()));
  if (normalize_whole && o.normalize) ds = fsor::zscore_features(ds);
  return ds;
}

std::vector<int> ranking_by_method(const fsor::Dataset& ds,
                                   const std::string& method,
                                   std::uint64_t seed) {
  if (method == "fisher") return fsor::fisher_score(ds).ranking;
  if (method == "cc") return fsor::correlation_score(ds).ranking;
  fsor::FsorConfig cfg;
  cfg.seed = seed;
  return fsor::fit(ds, cfg).ranking;
}

int run_select(const CommonOpts& o, const std::string& method, int outer_iters,
               double outer_tol) {
  const fsor::Dataset ds = load_input(o, true);
  if (method == "fisher") {
    fsor::emit_output(fsor::feature_scores_json(fsor::fisher_score(ds)),
                      o.output);
    return 0;
  }
  if (method == "cc") {
    fsor::emit_output(fsor::feature_scores_json(fsor::correlation_score(ds)),
                      o.output);
    return 0;
  }
  fsor::FsorConfig cfg;
  cfg.seed = o.seed;
  cfg.outer_max_iter = outer_iters;
  cfg.outer_tol = outer_tol;
  const fsor::FsorResult res = fsor::fit(ds, cfg);
  fsor::emit_output(fsor::fsor_result_json(res, cfg, o.normalize), o.output);
  if (!res.converged) {
    fsor::logging::warn("fit did not converge in " +
                        std::to_string(res.iterations) + " iterations");
    return 4;
  }
  return 0;
}

int run_trace(const CommonOpts& o, int iters) {
  const fsor::Dataset ds = load_input(o, true);
  fsor::FsorConfig cfg;
  cfg.seed = o.seed;
  cfg.outer_max_iter = iters;
  cfg.outer_tol = 0.0;  // fixed-length trace: exactly `iters` rows
  const fsor::FsorResult res = fsor::fit(ds, cfg);
  fsor::emit_output(fsor::trace_csv(res.objective_trace), o.output);
  return 0;
}

int run_eval(const CommonOpts& o, const std::string& ranking_file,
             const std::string& method, const std::string& sizes_text,
             int trials, int knn, double train_fraction, bool stratified,
             const std::string& format) {
  const fsor::Dataset ds = load_input(o, false);
  const std::vector<int> sizes = parse_sizes(sizes_text, ds.d());
  for (int m : sizes)
    if (m < 1 || m > ds.d())
      throw fsor::DataError("--sizes entry " + std::to_string(m) +
                            " outside 1.." + std::to_string(ds.d()));

  std::vector<int> ranking;
  if (!ranking_file.empty())
    ranking = fsor::load_ranking_file(ranking_file, ds.d());
  else
    ranking = ranking_by_method(ds, method, o.seed);

  fsor::SplitSpec split;
  split.train_fraction = train_fraction;
  split.n_trials = trials;
  split.seed = o.seed;
  split.stratified = stratified;
  const fsor::EvalReport rep =
      fsor::evaluate_ranking(ds, ranking, sizes, split, knn, o.normalize);
  if (format == "json")
    fsor::emit_output(fsor::eval_report_json(rep, split, knn, o.normalize),
                      o.output);
  else
    fsor::emit_output(fsor::eval_report_csv(rep), o.output);
  return 0;
}

int run_synth(const fsor::SynthSpec& spec, const std::string& output) {
  const fsor::Dataset ds = fsor::synthesize(spec);
  fsor::save_csv(ds, output);
  std::vector<int> informative;
  for (int j = 0; j < spec.n_informative; ++j) informative.push_back(j);
  std::string msg = "{\"informative\": [";
  for (std::size_t i = 0; i < informative.size(); ++i) {
    if (i) msg += ", ";
    msg += std::to_string(informative[i]);
  }
  msg += "]}\n";
  std::cout << msg;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fsor: supervised feature selection by orthogonal regression"};
  app.require_subcommand(1);

  CommonOpts sel_o;
  std::string sel_method = "fsor";
  int sel_iters = 100;
  double sel_tol = 1e-6;
  std::string sel_format = "json";
  auto* sel = app.add_subcommand("select", "rank features and write weights");
  add_common(sel, sel_o);
  sel->add_option("--method", sel_method, "fsor | fisher | cc")
      ->check(CLI::IsMember({"fsor", "fisher", "cc"}))
      ->capture_default_str();
  sel->add_option("--outer-iters", sel_iters, "outer iteration cap")
      ->capture_default_str();
  sel->add_option("--outer-tol", sel_tol, "relative objective tolerance")
      ->capture_default_str();
  sel->add_option("--format", sel_format, "output format")
      ->check(CLI::IsMember({"json"}));

  CommonOpts tr_o;
  int tr_iters = 100;
  auto* tr = app.add_subcommand("trace", "objective value per outer iteration");
  add_common(tr, tr_o);
  tr->add_option("--iters", tr_iters, "number of outer iterations")
      ->capture_default_str();

  CommonOpts ev_o;
  std::string ev_ranking, ev_method = "fsor", ev_sizes = "all",
              ev_format = "csv";
  int ev_trials = 100, ev_knn = 5;
  double ev_frac = 0.7;
  bool ev_stratified = true;
  auto* ev = app.add_subcommand("eval", "KNN accuracy sweep over feature sizes");
  add_common(ev, ev_o);
  ev->add_option("--ranking", ev_ranking,
                 "JSON file with a \"ranking\" array (overrides --method)");
  ev->add_option("--method", ev_method, "fsor | fisher | cc")
      ->check(CLI::IsMember({"fsor", "fisher", "cc"}))
      ->capture_default_str();
  ev->add_option("--sizes", ev_sizes, "comma list, a-b ranges, or 'all'")
      ->capture_default_str();
  ev->add_option("--trials", ev_trials, "random splits per size")
      ->capture_default_str();
  ev->add_option("--knn", ev_knn, "neighbor count")->capture_default_str();
  ev->add_option("--train-fraction", ev_frac, "training fraction per split")
      ->capture_default_str();
  ev->add_option("--stratified", ev_stratified, "stratify splits by class")
      ->capture_default_str();
  ev->add_option("--format", ev_format, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();

  fsor::SynthSpec sy_spec;
  std::string sy_output;
  auto* sy = app.add_subcommand("synth", "generate a labeled CSV dataset");
  sy->add_option("--samples", sy_spec.n_samples, "sample count")->required();
  sy->add_option("--features", sy_spec.n_features, "feature count")->required();
  sy->add_option("--informative", sy_spec.n_informative,
                 "informative feature count")
      ->required();
  sy->add_option("--classes", sy_spec.n_classes, "class count")->required();
  sy->add_option("--sep", sy_spec.class_separation, "class mean separation")
      ->capture_default_str();
  sy->add_option("--noise", sy_spec.noise_std, "noise standard deviation")
      ->capture_default_str();
  sy->add_option("--seed", sy_spec.seed, "random seed")->capture_default_str();
  sy->add_option("--output", sy_output, "output CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::CallForVersion& e) {
    std::cout << app.version() << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (*sel) return run_select(sel_o, sel_method, sel_iters, sel_tol);
    if (*tr) return run_trace(tr_o, tr_iters);
    if (*ev)
      return run_eval(ev_o, ev_ranking, ev_method, ev_sizes, ev_trials, ev_knn,
                      ev_frac, ev_stratified, ev_format);
    if (*sy) return run_synth(sy_spec, sy_output);
  } catch (const fsor::DataError& e) {
    fsor::logging::error(e.what());
    return 3;
  } catch (const std::invalid_argument& e) {
    fsor::logging::error(e.what());
    return 2;
  } catch (const std::exception& e) {
    fsor::logging::error(std::string("unexpected: ") + e.what());
    return 1;
  }
  return 0;
}
