#pragma once

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "json.hpp"

#include "netsift/network.hpp"

namespace netsift {

/// Shortest decimal form that parses back to the same double.
inline std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view text, const std::string& what) {
  double value = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw data_error("cannot parse " + what + " from '" + std::string(text) + "'");
  }
  return value;
}

inline long long parse_integer(std::string_view text, const std::string& what) {
  long long value = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw data_error("cannot parse " + what + " from '" + std::string(text) + "'");
  }
  return value;
}

namespace detail {

inline std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(trim(std::string_view(line).substr(start)));
      break;
    }
    fields.push_back(trim(std::string_view(line).substr(start, comma - start)));
    start = comma + 1;
  }
  return fields;
}

inline std::vector<std::string> read_nonempty_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw data_error("cannot open '" + path + "'");
  }
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!trim(line).empty()) lines.push_back(line);
  }
  return lines;
}

}  // namespace detail

struct LabeledMatrix {
  std::vector<std::string> labels;
  Eigen::MatrixXd values;
};

/// Matrix CSV: first row holds the N labels, then one row per vertex as
/// "label,w1,...,wN" with row labels in header order.
inline LabeledMatrix read_matrix_csv(const std::string& path) {
  const auto lines = detail::read_nonempty_lines(path);
  if (lines.size() < 2) {
    throw data_error("matrix CSV '" + path + "' has no data rows");
  }
  const auto labels = detail::split_csv_line(lines[0]);
  const auto n = labels.size();
  if (lines.size() != n + 1) {
    throw data_error("matrix CSV '" + path + "': expected " + std::to_string(n) +
                     " data rows, found " + std::to_string(lines.size() - 1));
  }
  Eigen::MatrixXd values(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto fields = detail::split_csv_line(lines[i + 1]);
    if (fields.size() != n + 1) {
      throw data_error("matrix CSV '" + path + "' row " + std::to_string(i + 1) +
                       ": expected " + std::to_string(n + 1) + " fields");
    }
    if (fields[0] != labels[i]) {
      throw data_error("matrix CSV '" + path + "' row " + std::to_string(i + 1) +
                       ": row label '" + fields[0] + "' does not match header '" +
                       labels[i] + "'");
    }
    for (std::size_t j = 0; j < n; ++j) {
      values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          parse_double(fields[j + 1], "matrix entry");
    }
  }
  return {labels, std::move(values)};
}

inline void write_matrix_csv(std::ostream& out, const WeightedNetwork& network) {
  const auto& labels = network.labels();
  for (std::size_t j = 0; j < labels.size(); ++j) {
    out << (j ? "," : "") << labels[j];
  }
  out << "\n";
  for (int i = 0; i < network.size(); ++i) {
    out << labels[static_cast<std::size_t>(i)];
    for (int j = 0; j < network.size(); ++j) {
      out << ',' << format_double(network.weight(i, j));
    }
    out << "\n";
  }
}

inline void write_matrix_csv(const std::string& path, const WeightedNetwork& network) {
  std::ofstream out(path);
  if (!out) {
    throw data_error("cannot write '" + path + "'");
  }
  write_matrix_csv(out, network);
}

/// Price CSV: header of instrument labels, then one all-numeric row per day.
inline LabeledMatrix read_price_csv(const std::string& path) {
  const auto lines = detail::read_nonempty_lines(path);
  if (lines.size() < 2) {
    throw data_error("price CSV '" + path + "' has no price rows");
  }
  const auto labels = detail::split_csv_line(lines[0]);
  const auto n = labels.size();
  Eigen::MatrixXd values(lines.size() - 1, n);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto fields = detail::split_csv_line(lines[i]);
    if (fields.size() != n) {
      throw data_error("price CSV '" + path + "' row " + std::to_string(i) +
                       ": expected " + std::to_string(n) + " fields");
    }
    for (std::size_t j = 0; j < n; ++j) {
      values(static_cast<Eigen::Index>(i - 1), static_cast<Eigen::Index>(j)) =
          parse_double(fields[j], "price");
    }
  }
  return {labels, std::move(values)};
}

inline nlohmann::ordered_json structure_to_json(const NetworkStructure& structure,
                                                const std::vector<std::string>& labels) {
  nlohmann::ordered_json j;
  j["kind"] = to_string(structure.kind);
  if (structure.theta) {
    j["theta"] = *structure.theta;
  }
  auto& vs = j["vertices"] = nlohmann::ordered_json::array();
  for (const int v : structure.vertices) {
    vs.push_back(labels.at(static_cast<std::size_t>(v)));
  }
  auto& es = j["edges"] = nlohmann::ordered_json::array();
  for (const auto& [u, v] : structure.edges) {
    es.push_back({labels.at(static_cast<std::size_t>(u)),
                  labels.at(static_cast<std::size_t>(v))});
  }
  return j;
}

inline NetworkStructure structure_from_json(const nlohmann::json& j,
                                            const std::vector<std::string>& labels) {
  const auto index_of = [&](const std::string& label) {
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == label) return static_cast<int>(i);
    }
    throw data_error("structure JSON references unknown label '" + label + "'");
  };
  const StructureKind kind = structure_kind_from_string(j.at("kind").get<std::string>());
  std::optional<double> theta;
  if (j.contains("theta")) theta = j.at("theta").get<double>();
  std::vector<int> vertices;
  for (const auto& v : j.at("vertices")) {
    vertices.push_back(index_of(v.get<std::string>()));
  }
  std::vector<VertexPair> edges;
  for (const auto& e : j.at("edges")) {
    edges.emplace_back(index_of(e.at(0).get<std::string>()),
                       index_of(e.at(1).get<std::string>()));
  }
  return make_structure(kind, theta, std::move(vertices), std::move(edges));
}

}  // namespace netsift
