#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "netsift/io.hpp"
#include "netsift/uncertainty.hpp"

namespace netsift {

enum class ExperimentType { extract, curve, n_search, degree_freq, histogram };

inline const char* to_string(ExperimentType type) {
  switch (type) {
    case ExperimentType::extract: return "extract";
    case ExperimentType::curve: return "curve";
    case ExperimentType::n_search: return "n_search";
    case ExperimentType::degree_freq: return "degree_freq";
    case ExperimentType::histogram: return "histogram";
  }
  return "?";
}

inline ExperimentType experiment_type_from_string(const std::string& name) {
  if (name == "extract") return ExperimentType::extract;
  if (name == "curve") return ExperimentType::curve;
  if (name == "n_search" || name == "nsearch") return ExperimentType::n_search;
  if (name == "degree_freq" || name == "degfreq") return ExperimentType::degree_freq;
  if (name == "histogram" || name == "hist") return ExperimentType::histogram;
  throw config_error("unknown experiment '" + name +
                     "' (expected extract, curve, n_search, degree_freq or histogram)");
}

/// Declarative description of one experiment. One seed drives all
/// randomness, so a config identifies its outputs byte for byte.
struct ExperimentConfig {
  std::string reference_source;
  std::optional<std::string> reference_format;  // "matrix" | "prices"; default auto
  ExperimentType experiment = ExperimentType::extract;
  std::optional<StructureKind> kind;
  std::vector<double> theta_grid;
  std::vector<int> n_grid;
  int trials = 1;
  double e0 = 0.1;
  std::uint64_t seed = 0;
  std::optional<std::string> losses_path;
  CliqueSolverBudget budget;
  std::string output_dir;
  double bin_width = 0.05;  // histogram experiments
};

namespace detail {

inline const nlohmann::json& require_field(const nlohmann::json& j,
                                           const std::string& name) {
  if (!j.contains(name)) {
    throw config_error("config field '" + name + "' is required");
  }
  return j.at(name);
}

template <typename T>
T get_as(const nlohmann::json& j, const std::string& path, const char* expected) {
  try {
    return j.get<T>();
  } catch (const nlohmann::json::exception&) {
    throw config_error("config field '" + path + "': expected " + expected);
  }
}

}  // namespace detail

inline ExperimentConfig parse_config(const nlohmann::json& j) {
  if (!j.is_object()) {
    throw config_error("config must be a JSON object");
  }
  static const std::set<std::string> known = {
      "reference_source", "reference_format", "experiment", "kind",
      "theta_grid", "n_grid", "trials", "e0", "seed", "losses",
      "budget", "output_dir", "bin_width"};
  for (const auto& [key, _] : j.items()) {
    if (!known.count(key)) {
      throw config_error("config field '" + key + "' is not recognized");
    }
  }

  ExperimentConfig cfg;
  cfg.reference_source = detail::get_as<std::string>(
      detail::require_field(j, "reference_source"), "reference_source", "a path string");
  if (j.contains("reference_format")) {
    const auto fmt = detail::get_as<std::string>(j.at("reference_format"),
                                                 "reference_format", "a string");
    if (fmt != "matrix" && fmt != "prices") {
      throw config_error("config field 'reference_format': expected 'matrix' or 'prices'");
    }
    cfg.reference_format = fmt;
  }
  cfg.experiment = experiment_type_from_string(detail::get_as<std::string>(
      detail::require_field(j, "experiment"), "experiment", "a string"));
  if (j.contains("kind")) {
    cfg.kind = structure_kind_from_string(
        detail::get_as<std::string>(j.at("kind"), "kind", "a string"));
  }
  if (j.contains("theta_grid")) {
    cfg.theta_grid = detail::get_as<std::vector<double>>(
        j.at("theta_grid"), "theta_grid", "an array of numbers");
  }
  if (j.contains("n_grid")) {
    cfg.n_grid = detail::get_as<std::vector<int>>(j.at("n_grid"), "n_grid",
                                                  "an array of integers");
  }
  if (j.contains("trials")) {
    cfg.trials = detail::get_as<int>(j.at("trials"), "trials", "an integer");
  }
  if (j.contains("e0")) {
    cfg.e0 = detail::get_as<double>(j.at("e0"), "e0", "a number");
  }
  if (j.contains("seed")) {
    cfg.seed = detail::get_as<std::uint64_t>(j.at("seed"), "seed",
                                             "a nonnegative integer");
  }
  if (j.contains("losses")) {
    cfg.losses_path = detail::get_as<std::string>(j.at("losses"), "losses",
                                                  "a path string");
  }
  if (j.contains("budget")) {
    const auto& b = j.at("budget");
    if (!b.is_object()) {
      throw config_error("config field 'budget': expected an object");
    }
    if (b.contains("node_limit")) {
      cfg.budget.node_limit = detail::get_as<std::int64_t>(
          b.at("node_limit"), "budget.node_limit", "an integer");
    }
    if (b.contains("time_limit")) {
      cfg.budget.time_limit_seconds = detail::get_as<double>(
          b.at("time_limit"), "budget.time_limit", "a number of seconds");
    }
  }
  cfg.output_dir = detail::get_as<std::string>(
      detail::require_field(j, "output_dir"), "output_dir", "a path string");
  if (j.contains("bin_width")) {
    cfg.bin_width = detail::get_as<double>(j.at("bin_width"), "bin_width", "a number");
  }
  return cfg;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw config_error("cannot open config '" + path + "'");
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw config_error("config '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

inline void validate_config(const ExperimentConfig& cfg) {
  const auto require_sorted_grid = [&](const std::vector<int>& grid) {
    if (grid.empty()) {
      throw config_error("config field 'n_grid': must be non-empty");
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (grid[i] < 2) {
        throw config_error("config field 'n_grid': entries must be >= 2");
      }
      if (i > 0 && grid[i] <= grid[i - 1]) {
        throw config_error("config field 'n_grid': must be strictly ascending");
      }
    }
  };
  const bool needs_kind = cfg.experiment == ExperimentType::extract ||
                          cfg.experiment == ExperimentType::curve ||
                          cfg.experiment == ExperimentType::n_search;
  if (needs_kind && !cfg.kind) {
    throw config_error("config field 'kind': required for this experiment");
  }
  if (cfg.kind) {
    if (kind_uses_theta(*cfg.kind)) {
      if (needs_kind && cfg.theta_grid.empty()) {
        throw config_error("config field 'theta_grid': must be non-empty for kind " +
                           std::string(to_string(*cfg.kind)));
      }
      for (std::size_t i = 0; i < cfg.theta_grid.size(); ++i) {
        if (!(cfg.theta_grid[i] >= -1.0 && cfg.theta_grid[i] <= 1.0)) {
          throw config_error("config field 'theta_grid': entries must lie in [-1, 1]");
        }
        if (i > 0 && cfg.theta_grid[i] <= cfg.theta_grid[i - 1]) {
          throw config_error("config field 'theta_grid': must be strictly ascending");
        }
      }
    } else if (!cfg.theta_grid.empty()) {
      throw config_error("config field 'theta_grid': must be empty for kind " +
                         std::string(to_string(*cfg.kind)));
    }
  }
  switch (cfg.experiment) {
    case ExperimentType::extract:
      break;
    case ExperimentType::curve:
    case ExperimentType::n_search:
    case ExperimentType::degree_freq:
    case ExperimentType::histogram:
      require_sorted_grid(cfg.n_grid);
      break;
  }
  if (cfg.trials < 1) {
    throw config_error("config field 'trials': must be at least 1");
  }
  if (cfg.experiment == ExperimentType::n_search && !(cfg.e0 > 0.0 && cfg.e0 < 1.0)) {
    throw config_error("config field 'e0': must lie in (0, 1)");
  }
  if (cfg.experiment == ExperimentType::histogram &&
      !(cfg.bin_width > 0.0 && cfg.bin_width <= 2.0)) {
    throw config_error("config field 'bin_width': must lie in (0, 2]");
  }
  validate_budget(cfg.budget);
  if (cfg.losses_path &&
      (cfg.kind == StructureKind::mcmw || cfg.kind == StructureKind::mismw)) {
    throw config_error("config field 'losses': conditional risk is not defined "
                       "for MCMW/MISMW");
  }
}

/// Reference network from a price CSV: log returns, sample moments, and the
/// resulting correlation matrix as weights.
inline WeightedNetwork ingest_prices(const std::string& path) {
  const LabeledMatrix prices = read_price_csv(path);
  if (prices.values.rows() < 3) {
    throw data_error("price CSV '" + path +
                     "' needs at least 3 price rows for a correlation estimate");
  }
  const ReturnsMatrix returns = log_returns(prices.values);
  // Name the degenerate instrument before the moments computation trips on it.
  for (Eigen::Index k = 0; k < returns.values.cols(); ++k) {
    const double first = returns.values(0, k);
    bool constant = true;
    for (Eigen::Index t = 1; t < returns.values.rows(); ++t) {
      if (returns.values(t, k) != first) {
        constant = false;
        break;
      }
    }
    if (constant) {
      throw data_error("instrument '" + prices.labels[static_cast<std::size_t>(k)] +
                       "' has zero return variance");
    }
  }
  const SampleMoments moments = sample_moments(returns);
  return WeightedNetwork(prices.labels, moments.correlation, NetworkKind::reference);
}

namespace detail {

inline bool looks_like_price_csv(const std::string& path) {
  const auto lines = read_nonempty_lines(path);
  if (lines.size() < 2) {
    throw data_error("'" + path + "' has no data rows");
  }
  const auto fields = split_csv_line(lines[1]);
  if (fields.empty()) return false;
  double value = 0.0;
  const auto res =
      std::from_chars(fields[0].data(), fields[0].data() + fields[0].size(), value);
  return res.ec == std::errc{} && res.ptr == fields[0].data() + fields[0].size();
}

}  // namespace detail

inline WeightedNetwork load_reference(const ExperimentConfig& cfg) {
  bool prices = false;
  if (cfg.reference_format) {
    prices = *cfg.reference_format == "prices";
  } else {
    prices = detail::looks_like_price_csv(cfg.reference_source);
  }
  if (prices) {
    return ingest_prices(cfg.reference_source);
  }
  LabeledMatrix m = read_matrix_csv(cfg.reference_source);
  return WeightedNetwork(std::move(m.labels), std::move(m.values),
                         NetworkKind::reference);
}

inline LossSpec load_losses(const std::string& path, int n) {
  std::ifstream in(path);
  if (!in) {
    throw data_error("cannot open losses file '" + path + "'");
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw data_error("losses file '" + path + "' is not valid JSON: " + e.what());
  }
  const auto parse_matrix = [&](const char* key) {
    const auto rows = j.at(key).get<std::vector<std::vector<double>>>();
    if (static_cast<int>(rows.size()) != n) {
      throw data_error(std::string("losses matrix '") + key + "' must be " +
                       std::to_string(n) + "x" + std::to_string(n));
    }
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i) {
      if (static_cast<int>(rows[static_cast<std::size_t>(i)].size()) != n) {
        throw data_error(std::string("losses matrix '") + key + "' must be square");
      }
      for (int jj = 0; jj < n; ++jj) {
        m(i, jj) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(jj)];
      }
    }
    return m;
  };
  return make_loss_spec(parse_matrix("a"), parse_matrix("b"));
}

struct RunSummary {
  std::vector<std::string> outputs;  // file names relative to output_dir
  std::vector<std::string> warnings;
  std::string summary_path;
};

namespace detail {

class OutputWriter {
 public:
  explicit OutputWriter(const std::filesystem::path& dir) : dir_(dir) {
    std::filesystem::create_directories(dir_);
  }

  std::ofstream open(const std::string& name) {
    std::ofstream out(dir_ / name, std::ios::binary);
    if (!out) {
      throw data_error("cannot write '" + (dir_ / name).string() + "'");
    }
    names_.push_back(name);
    return out;
  }

  const std::vector<std::string>& names() const { return names_; }

 private:
  std::filesystem::path dir_;
  std::vector<std::string> names_;
};

inline std::string kind_file_tag(StructureKind kind) {
  std::string tag = to_string(kind);
  std::transform(tag.begin(), tag.end(), tag.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return tag;
}

inline std::string curve_csv_row(StructureKind kind, std::optional<double> theta,
                                 const CurvePoint& p, std::uint64_t seed) {
  std::ostringstream row;
  row << to_string(kind) << ',' << (theta ? format_double(*theta) : "") << ','
      << p.n << ',' << format_double(p.mean_x) << ','
      << format_double(p.mean_x1_ratio) << ',' << format_double(p.mean_x2_ratio)
      << ',' << format_double(p.std_error) << ',' << p.trials << ',' << seed
      << '\n';
  return row.str();
}

inline std::vector<double> uniform_bins(double width) {
  const int bins = std::max(1, static_cast<int>(std::llround(2.0 / width)));
  std::vector<double> edges(static_cast<std::size_t>(bins) + 1);
  for (int i = 0; i <= bins; ++i) {
    edges[static_cast<std::size_t>(i)] = -1.0 + 2.0 * i / bins;
  }
  edges.front() = -1.0;
  edges.back() = 1.0;
  return edges;
}

inline void write_histogram_csv(std::ofstream out, const std::vector<double>& edges,
                                const std::vector<long long>& counts) {
  out << "bin_lo,bin_hi,count\n";
  for (std::size_t b = 0; b < counts.size(); ++b) {
    out << format_double(edges[b]) << ',' << format_double(edges[b + 1]) << ','
        << counts[b] << '\n';
  }
}

inline std::string join_degrees(const std::vector<int>& degrees) {
  std::string s;
  for (std::size_t i = 0; i < degrees.size(); ++i) {
    if (i) s += '-';
    s += std::to_string(degrees[i]);
  }
  return s;
}

}  // namespace detail

/// Runs one experiment end to end and writes its artifacts plus a
/// summary.json that lists every produced file. Deterministic for a fixed
/// (config, seed) whatever the worker count.
inline RunSummary run_config(const ExperimentConfig& cfg) {
  validate_config(cfg);
  const WeightedNetwork reference = load_reference(cfg);
  const int size = reference.size();

  RunSummary summary;
  const double bound = min_observation_bound(size);
  for (const int n : cfg.n_grid) {
    if (static_cast<double>(n) < bound) {
      summary.warnings.push_back(
          "n=" + std::to_string(n) + " is below the minimum observation bound (N-1)/2 = " +
          format_double(bound) + " for N=" + std::to_string(size) +
          "; estimated correlations are functionally dependent");
    }
  }

  detail::OutputWriter writer(cfg.output_dir);
  // Theta loop collapses to a single pass for kinds without a threshold.
  const std::vector<std::optional<double>> thetas = [&] {
    std::vector<std::optional<double>> ts;
    if (cfg.kind && kind_uses_theta(*cfg.kind)) {
      for (const double t : cfg.theta_grid) ts.emplace_back(t);
    } else {
      ts.emplace_back(std::nullopt);
    }
    return ts;
  }();

  switch (cfg.experiment) {
    case ExperimentType::extract: {
      for (const auto& theta : thetas) {
        bool lex_tie = false;
        const NetworkStructure structure =
            build_structure(reference, *cfg.kind, theta, cfg.budget, &lex_tie);
        std::string name = "structure_" + detail::kind_file_tag(*cfg.kind);
        if (theta) name += "_theta" + format_double(*theta);
        name += ".json";
        writer.open(name) << structure_to_json(structure, reference.labels()).dump(2)
                          << '\n';
        if (lex_tie) {
          summary.warnings.push_back(
              std::string(to_string(*cfg.kind)) +
              (theta ? " theta=" + format_double(*theta) : "") +
              ": lexicographic tie-break chose among equal-weight optima");
        }
      }
      break;
    }
    case ExperimentType::curve: {
      std::optional<LossSpec> losses;
      if (cfg.losses_path) losses = load_losses(*cfg.losses_path, size);
      auto csv = writer.open("curve_" + detail::kind_file_tag(*cfg.kind) + ".csv");
      csv << "kind,theta,n,mean_X,mean_X1_over_M1,mean_X2_over_M2,stderr,trials,seed\n";
      std::ostringstream risk_rows;
      for (const auto& theta : thetas) {
        for (const int n : cfg.n_grid) {
          const UncertaintyEstimate est = estimate_uncertainty(
              reference, *cfg.kind, theta, n, cfg.trials, cfg.seed, cfg.budget);
          csv << detail::curve_csv_row(*cfg.kind, theta, est.point, cfg.seed);
          if (losses) {
            risk_rows << to_string(*cfg.kind) << ','
                      << (theta ? format_double(*theta) : "") << ',' << n << ','
                      << format_double(conditional_risk(*losses, est.probs)) << ','
                      << cfg.trials << ',' << cfg.seed << '\n';
          }
          if (est.lex_tie_trials > 0) {
            summary.warnings.push_back(
                std::string(to_string(*cfg.kind)) +
                (theta ? " theta=" + format_double(*theta) : "") +
                " n=" + std::to_string(n) + ": lexicographic tie-break used in " +
                std::to_string(est.lex_tie_trials) + " of " +
                std::to_string(cfg.trials) + " trials");
          }
        }
      }
      if (losses) {
        auto risk = writer.open("risk_" + detail::kind_file_tag(*cfg.kind) + ".csv");
        risk << "kind,theta,n,risk,trials,seed\n" << risk_rows.str();
      }
      break;
    }
    case ExperimentType::n_search: {
      auto csv = writer.open("nsearch_" + detail::kind_file_tag(*cfg.kind) + ".csv");
      csv << "kind,theta,level,n_E,reached,mean_X,stderr,trials,seed,monotone\n";
      auto curve_csv =
          writer.open("curve_" + detail::kind_file_tag(*cfg.kind) + ".csv");
      curve_csv
          << "kind,theta,n,mean_X,mean_X1_over_M1,mean_X2_over_M2,stderr,trials,seed\n";
      for (const auto& theta : thetas) {
        const LevelSearchResult res =
            find_n_for_level(reference, *cfg.kind, theta, cfg.e0, cfg.n_grid,
                             cfg.trials, cfg.seed, cfg.budget);
        const CurvePoint& last = res.curve.points.back();
        csv << to_string(*cfg.kind) << ',' << (theta ? format_double(*theta) : "")
            << ',' << format_double(cfg.e0) << ','
            << (res.n_level ? std::to_string(*res.n_level) : "") << ','
            << (res.n_level ? "true" : "false") << ','
            << format_double(last.mean_x) << ',' << format_double(last.std_error)
            << ',' << cfg.trials << ',' << cfg.seed << ','
            << (res.monotone ? "true" : "false") << '\n';
        for (const CurvePoint& p : res.curve.points) {
          curve_csv << detail::curve_csv_row(*cfg.kind, theta, p, cfg.seed);
        }
        if (!res.n_level) {
          summary.warnings.push_back(
              std::string(to_string(*cfg.kind)) +
              (theta ? " theta=" + format_double(*theta) : "") +
              ": level " + format_double(cfg.e0) +
              " not reached within the grid; final mean X = " +
              format_double(last.mean_x));
        }
        if (!res.monotone) {
          summary.warnings.push_back(
              std::string(to_string(*cfg.kind)) +
              (theta ? " theta=" + format_double(*theta) : "") +
              ": estimated curve is not monotone over the evaluated grid");
        }
        if (res.lex_tie_trials > 0) {
          summary.warnings.push_back(
              std::string(to_string(*cfg.kind)) +
              (theta ? " theta=" + format_double(*theta) : "") +
              ": lexicographic tie-break used in " +
              std::to_string(res.lex_tie_trials) + " trials");
        }
      }
      break;
    }
    case ExperimentType::degree_freq: {
      for (const int n : cfg.n_grid) {
        const auto freqs =
            degree_vector_frequencies(reference, n, cfg.trials, cfg.seed);
        // Highest frequency first, ties by ascending degree vector.
        std::vector<std::pair<std::vector<int>, double>> rows(freqs.begin(),
                                                              freqs.end());
        std::stable_sort(rows.begin(), rows.end(),
                         [](const auto& a, const auto& b) {
                           return a.second > b.second;
                         });
        auto csv = writer.open("degfreq_n" + std::to_string(n) + ".csv");
        csv << "degree_vector,frequency,trials\n";
        for (const auto& [vec, freq] : rows) {
          csv << detail::join_degrees(vec) << ',' << format_double(freq) << ','
              << cfg.trials << '\n';
        }
      }
      break;
    }
    case ExperimentType::histogram: {
      const std::vector<double> edges = detail::uniform_bins(cfg.bin_width);
      detail::write_histogram_csv(writer.open("hist_reference.csv"), edges,
                                  edge_weight_histogram(reference, edges));
      const Eigen::MatrixXd factor = cholesky_factor(reference.weights());
      for (std::size_t i = 0; i < cfg.n_grid.size(); ++i) {
        const int n = cfg.n_grid[i];
        const std::uint64_t stream =
            rng::derive_stream(cfg.seed, static_cast<std::uint64_t>(i));
        const SampleMoments moments =
            sample_moments(mvn_sample_rows(factor, n, stream));
        const WeightedNetwork net = sample_network(reference, moments);
        detail::write_histogram_csv(
            writer.open("hist_n" + std::to_string(n) + ".csv"), edges,
            edge_weight_histogram(net, edges));
      }
      break;
    }
  }

  nlohmann::ordered_json sj;
  sj["experiment"] = to_string(cfg.experiment);
  if (cfg.kind) sj["kind"] = to_string(*cfg.kind);
  sj["reference_source"] = cfg.reference_source;
  sj["n_vertices"] = size;
  sj["seed"] = cfg.seed;
  sj["trials"] = cfg.trials;
  if (!cfg.theta_grid.empty()) sj["theta_grid"] = cfg.theta_grid;
  if (!cfg.n_grid.empty()) sj["n_grid"] = cfg.n_grid;
  if (cfg.experiment == ExperimentType::n_search) sj["e0"] = cfg.e0;
  sj["outputs"] = writer.names();
  sj["warnings"] = summary.warnings;

  summary.outputs = writer.names();
  const auto summary_file = std::filesystem::path(cfg.output_dir) / "summary.json";
  std::ofstream out(summary_file, std::ios::binary);
  if (!out) {
    throw data_error("cannot write '" + summary_file.string() + "'");
  }
  out << sj.dump(2) << '\n';
  summary.summary_path = summary_file.string();
  return summary;
}

}  // namespace netsift
