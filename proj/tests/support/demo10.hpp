#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "netsift/network.hpp"

namespace testsupport {

// Ten-instrument demo correlation matrix shipped with the repository
// (data/demo10.csv); the fixture most tests build structures from.
inline const std::vector<std::string>& demo_labels() {
  static const std::vector<std::string> labels = {
      "A", "AA", "AAP", "AAPL", "AAWW", "ABAX", "ABD", "ABG", "ACWI", "ADX"};
  return labels;
}

inline const Eigen::MatrixXd& demo_matrix() {
  static const Eigen::MatrixXd m = [] {
    Eigen::MatrixXd w(10, 10);
    w << 1.0000, 0.7220, 0.4681, 0.4809, 0.6209, 0.5380, 0.6252, 0.6285, 0.7786, 0.7909,
         0.7220, 1.0000, 0.4395, 0.5979, 0.6381, 0.5725, 0.6666, 0.6266, 0.8583, 0.8640,
         0.4681, 0.4395, 1.0000, 0.3432, 0.3468, 0.2740, 0.4090, 0.4016, 0.4615, 0.4832,
         0.4809, 0.5979, 0.3432, 1.0000, 0.4518, 0.4460, 0.4635, 0.4940, 0.6447, 0.6601,
         0.6209, 0.6381, 0.3468, 0.4518, 1.0000, 0.5640, 0.5994, 0.5369, 0.7170, 0.7136,
         0.5380, 0.5725, 0.2740, 0.4460, 0.5640, 1.0000, 0.4969, 0.4775, 0.6439, 0.6242,
         0.6252, 0.6666, 0.4090, 0.4635, 0.5994, 0.4969, 1.0000, 0.6098, 0.7161, 0.7158,
         0.6285, 0.6266, 0.4016, 0.4940, 0.5369, 0.4775, 0.6098, 1.0000, 0.6805, 0.6748,
         0.7786, 0.8583, 0.4615, 0.6447, 0.7170, 0.6439, 0.7161, 0.6805, 1.0000, 0.9523,
         0.7909, 0.8640, 0.4832, 0.6601, 0.7136, 0.6242, 0.7158, 0.6748, 0.9523, 1.0000;
    return w;
  }();
  return m;
}

inline const netsift::WeightedNetwork& demo_network() {
  static const netsift::WeightedNetwork net(demo_labels(), demo_matrix(),
                                            netsift::NetworkKind::reference);
  return net;
}

}  // namespace testsupport
