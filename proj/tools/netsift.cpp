// netsift command-line interface: direct structure extraction from a CSV
// network plus config-driven experiment runs.
//
// Exit codes: 0 success, 1 configuration error, 2 data error, 3 solver
// budget exhausted.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "netsift/netsift.hpp"

namespace {

struct DirectArgs {
  std::string input;
  std::optional<std::string> out;
  double theta = 0.0;
  std::int64_t node_limit = netsift::CliqueSolverBudget{}.node_limit;
  double time_limit = netsift::CliqueSolverBudget{}.time_limit_seconds;
};

struct ExperimentArgs {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::optional<std::string> out_dir;
};

netsift::WeightedNetwork load_input_network(const std::string& path) {
  netsift::ExperimentConfig probe;
  probe.reference_source = path;
  return netsift::load_reference(probe);
}

void emit_structure(const netsift::NetworkStructure& structure,
                    const netsift::WeightedNetwork& network,
                    const std::optional<std::string>& out) {
  const auto json = netsift::structure_to_json(structure, network.labels());
  if (out) {
    std::ofstream file(*out, std::ios::binary);
    if (!file) {
      throw netsift::data_error("cannot write '" + *out + "'");
    }
    file << json.dump(2) << '\n';
  } else {
    std::cout << json.dump(2) << std::endl;
  }
}

void run_direct(netsift::StructureKind kind, const DirectArgs& args) {
  const netsift::WeightedNetwork network = load_input_network(args.input);
  netsift::CliqueSolverBudget budget{args.node_limit, args.time_limit};
  bool lex_tie = false;
  std::optional<double> theta;
  if (netsift::kind_uses_theta(kind)) theta = args.theta;
  const netsift::NetworkStructure structure =
      netsift::build_structure(network, kind, theta, budget, &lex_tie);
  if (lex_tie) {
    std::cerr << "note: lexicographic tie-break chose among equal-weight optima\n";
  }
  emit_structure(structure, network, args.out);
}

void run_experiment(netsift::ExperimentType type, const ExperimentArgs& args) {
  netsift::ExperimentConfig cfg = netsift::load_config(args.config_path);
  cfg.experiment = type;  // the subcommand is authoritative
  if (args.seed) cfg.seed = *args.seed;
  if (args.trials) cfg.trials = *args.trials;
  if (args.out_dir) cfg.output_dir = *args.out_dir;
  const netsift::RunSummary summary = netsift::run_config(cfg);
  for (const auto& warning : summary.warnings) {
    std::cerr << "warning: " << warning << '\n';
  }
  std::cout << summary.summary_path << std::endl;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Correlation-network filtration and statistical uncertainty toolkit"};
  app.require_subcommand(1);

  DirectArgs direct;
  ExperimentArgs experiment;

  const auto add_direct = [&](const std::string& name, const std::string& desc,
                              bool with_theta) {
    CLI::App* sub = app.add_subcommand(name, desc);
    sub->add_option("-i,--input", direct.input,
                    "matrix or price CSV holding the network")
        ->required();
    sub->add_option("-o,--out", direct.out, "write the structure JSON here");
    if (with_theta) {
      sub->add_option("--theta", direct.theta, "similarity threshold in [-1, 1]")
          ->required();
      sub->add_option("--node-limit", direct.node_limit, "solver node budget");
      sub->add_option("--time-limit", direct.time_limit,
                      "solver time budget, seconds");
    }
    return sub;
  };

  CLI::App* c_mst = add_direct("mst", "maximum-weight spanning tree", false);
  CLI::App* c_pmfg = add_direct("pmfg", "planar maximally filtered graph", false);
  CLI::App* c_mg = add_direct("mg", "market graph at a threshold", true);
  CLI::App* c_mcmw = add_direct("mcmw", "maximum clique of maximal weight", true);
  CLI::App* c_mismw =
      add_direct("mismw", "maximum independent set of minimal weight", true);

  const auto add_experiment = [&](const std::string& name, const std::string& desc) {
    CLI::App* sub = app.add_subcommand(name, desc);
    sub->add_option("--config", experiment.config_path, "experiment config JSON")
        ->required();
    sub->add_option("--seed", experiment.seed, "override the config seed");
    sub->add_option("--trials", experiment.trials, "override the config trials");
    sub->add_option("--out", experiment.out_dir, "override the output directory");
    return sub;
  };

  CLI::App* c_extract = add_experiment("extract", "write reference structures");
  CLI::App* c_curve = add_experiment("curve", "uncertainty curve over an n-grid");
  CLI::App* c_nsearch =
      add_experiment("nsearch", "observations needed to reach a level");
  CLI::App* c_degfreq =
      add_experiment("degfreq", "sample-MST degree-vector frequencies");
  CLI::App* c_hist = add_experiment("hist", "edge-weight histograms");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (c_mst->parsed()) run_direct(netsift::StructureKind::mst, direct);
    if (c_pmfg->parsed()) run_direct(netsift::StructureKind::pmfg, direct);
    if (c_mg->parsed()) run_direct(netsift::StructureKind::mg, direct);
    if (c_mcmw->parsed()) run_direct(netsift::StructureKind::mcmw, direct);
    if (c_mismw->parsed()) run_direct(netsift::StructureKind::mismw, direct);
    if (c_extract->parsed())
      run_experiment(netsift::ExperimentType::extract, experiment);
    if (c_curve->parsed())
      run_experiment(netsift::ExperimentType::curve, experiment);
    if (c_nsearch->parsed())
      run_experiment(netsift::ExperimentType::n_search, experiment);
    if (c_degfreq->parsed())
      run_experiment(netsift::ExperimentType::degree_freq, experiment);
    if (c_hist->parsed())
      run_experiment(netsift::ExperimentType::histogram, experiment);
  } catch (const netsift::config_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const netsift::budget_error& e) {
    std::cerr << "budget error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
