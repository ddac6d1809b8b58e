#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "netsift/stats.hpp"

#include "support/demo10.hpp"
#include "support/oracles.hpp"

using namespace netsift;
using Catch::Matchers::WithinAbs;

TEST_CASE("log_returns") {
  SECTION("ln identity") {
    Eigen::MatrixXd prices(2, 1);
    prices << 100.0, 100.0 * std::exp(0.1);
    const auto r = log_returns(prices);
    REQUIRE(r.days() == 1);
    CHECK_THAT(r.values(0, 0), WithinAbs(0.1, 1e-14));
  }
  SECTION("constant prices give zero returns") {
    Eigen::MatrixXd prices(4, 2);
    prices << 3.0, 7.0, 3.0, 7.0, 3.0, 7.0, 3.0, 7.0;
    const auto r = log_returns(prices);
    CHECK(r.values.cwiseAbs().maxCoeff() == 0.0);
  }
  SECTION("doubling prices") {
    Eigen::MatrixXd prices(3, 1);
    prices << 2.0, 4.0, 8.0;
    const auto r = log_returns(prices);
    CHECK(r.values(0, 0) == std::log(2.0));
    CHECK(r.values(1, 0) == std::log(2.0));
  }
  SECTION("errors") {
    Eigen::MatrixXd one_row(1, 1);
    one_row << 1.0;
    CHECK_THROWS_AS(log_returns(one_row), data_error);
    Eigen::MatrixXd negative(2, 1);
    negative << 1.0, -2.0;
    CHECK_THROWS_AS(log_returns(negative), data_error);
  }
}

TEST_CASE("sample_moments") {
  SECTION("identical columns correlate at 1") {
    Eigen::MatrixXd values(4, 2);
    values << 0.1, 0.1, -0.3, -0.3, 0.2, 0.2, 0.05, 0.05;
    const auto m = sample_moments({values});
    CHECK_THAT(m.correlation(0, 1), WithinAbs(1.0, 1e-15));
    CHECK(m.correlation(0, 0) == 1.0);
  }
  SECTION("negated column correlates at -1") {
    Eigen::MatrixXd values(5, 2);
    values << 1.0, -1.0, 2.0, -2.0, -0.5, 0.5, 0.25, -0.25, 3.0, -3.0;
    const auto m = sample_moments({values});
    CHECK_THAT(m.correlation(0, 1), WithinAbs(-1.0, 1e-15));
  }
  SECTION("hand-evaluated zero covariance") {
    // points (0,0), (1,1), (2,0)
    Eigen::MatrixXd values(3, 2);
    values << 0.0, 0.0, 1.0, 1.0, 2.0, 0.0;
    const auto m = sample_moments({values});
    CHECK(m.covariance(0, 1) == 0.0);
    CHECK(m.correlation(0, 1) == 0.0);
  }
  SECTION("zero variance is an error") {
    Eigen::MatrixXd values(3, 2);
    values << 1.0, 0.5, 1.0, 0.7, 1.0, 0.9;
    CHECK_THROWS_AS(sample_moments({values}), data_error);
  }
  SECTION("single observation is an error") {
    Eigen::MatrixXd values(1, 2);
    values << 1.0, 2.0;
    CHECK_THROWS_AS(sample_moments({values}), data_error);
  }
}

TEST_CASE("sample_moments matches the direct formula") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd values(40, 4);
  for (Eigen::Index t = 0; t < values.rows(); ++t) {
    for (Eigen::Index k = 0; k < values.cols(); ++k) values(t, k) = normal(rng);
  }
  const auto m = sample_moments({values});
  const auto naive = testsupport::naive_moments(values);
  for (int i = 0; i < 4; ++i) {
    CHECK_THAT(m.means(i), WithinAbs(naive.means[i], 1e-13));
    for (int j = 0; j < 4; ++j) {
      CHECK_THAT(m.covariance(i, j), WithinAbs(naive.cov[i][j], 1e-13));
      CHECK_THAT(m.correlation(i, j), WithinAbs(naive.corr[i][j], 1e-13));
    }
  }
}

TEST_CASE("sample_moments is translation invariant") {
  std::mt19937_64 rng(6);
  std::normal_distribution<double> normal(0.0, 0.02);
  Eigen::MatrixXd values(30, 3);
  for (Eigen::Index t = 0; t < values.rows(); ++t) {
    for (Eigen::Index k = 0; k < values.cols(); ++k) values(t, k) = normal(rng);
  }
  const auto base = sample_moments({values});
  Eigen::MatrixXd shifted = values;
  shifted.col(1).array() += 0.5;
  const auto moved = sample_moments({shifted});
  CHECK((base.covariance - moved.covariance).cwiseAbs().maxCoeff() <= 1e-14);
  CHECK((base.correlation - moved.correlation).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("cholesky_factor") {
  SECTION("identity factors to identity") {
    const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(4, 4);
    CHECK(cholesky_factor(eye) == eye);
  }
  SECTION("2x2 closed form") {
    const double rho = 0.6;
    Eigen::MatrixXd corr(2, 2);
    corr << 1.0, rho, rho, 1.0;
    const auto lower = cholesky_factor(corr);
    CHECK(lower(0, 0) == 1.0);
    CHECK(lower(0, 1) == 0.0);
    CHECK(lower(1, 0) == rho);
    CHECK_THAT(lower(1, 1), WithinAbs(std::sqrt(1.0 - rho * rho), 1e-15));
  }
  SECTION("demo matrix reconstructs within 1e-8") {
    const auto lower = cholesky_factor(testsupport::demo_matrix());
    const double err = (lower * lower.transpose() - testsupport::demo_matrix())
                           .cwiseAbs()
                           .maxCoeff();
    CHECK(err <= 1e-8);
  }
  SECTION("indefinite matrix is rejected") {
    Eigen::MatrixXd bad(2, 2);
    bad << 1.0, 2.0, 2.0, 1.0;  // eigenvalues 3 and -1
    CHECK_THROWS_AS(cholesky_factor(bad), data_error);
  }
  SECTION("eigenvalues in the clip band are repaired") {
    // Householder reflector gives an exact orthonormal basis.
    Eigen::VectorXd v = Eigen::VectorXd::Ones(3).normalized();
    const Eigen::MatrixXd q = Eigen::MatrixXd::Identity(3, 3) - 2.0 * v * v.transpose();
    Eigen::VectorXd eigs(3);
    eigs << 1.5, 1.0, -5e-11;
    const Eigen::MatrixXd nearly = q * eigs.asDiagonal() * q.transpose();
    const Eigen::MatrixXd sym = ((nearly + nearly.transpose()) / 2.0).eval();
    const auto lower = cholesky_factor(sym);
    CHECK((lower * lower.transpose() - sym).cwiseAbs().maxCoeff() <= 1e-8);
    for (int i = 0; i < 3; ++i) {
      for (int j = i + 1; j < 3; ++j) CHECK(lower(i, j) == 0.0);
    }
  }
  SECTION("clearly negative eigenvalue is an error even if small") {
    Eigen::VectorXd v = Eigen::VectorXd::Ones(3).normalized();
    const Eigen::MatrixXd q = Eigen::MatrixXd::Identity(3, 3) - 2.0 * v * v.transpose();
    Eigen::VectorXd eigs(3);
    eigs << 1.5, 1.0, -5e-9;
    const Eigen::MatrixXd nearly = q * eigs.asDiagonal() * q.transpose();
    CHECK_THROWS_AS(cholesky_factor(((nearly + nearly.transpose()) / 2.0).eval()),
                    data_error);
  }
}

TEST_CASE("mvn_sample moments", "[statistical]") {
  SECTION("univariate mean stays near zero") {
    const WeightedNetwork net({"x", "y"}, Eigen::MatrixXd::Identity(2, 2),
                              NetworkKind::reference);
    const int n = 500000;
    const auto sample = mvn_sample(net, n, 77);
    CHECK(std::abs(sample.values.col(0).mean()) <= 4.0 / std::sqrt(double(n)));
    CHECK(std::abs(sample.values.col(1).mean()) <= 4.0 / std::sqrt(double(n)));
    // Regression pin for the fixed generator constants.
    CHECK_THAT(sample.values(0, 0), WithinAbs(0.58514616155049359, 1e-15));
  }
  SECTION("pair correlation near 0.9") {
    Eigen::MatrixXd corr(2, 2);
    corr << 1.0, 0.9, 0.9, 1.0;
    const WeightedNetwork net({"x", "y"}, corr, NetworkKind::reference);
    const auto sample = mvn_sample(net, 100000, 123);
    const auto m = sample_moments(sample);
    CHECK(m.correlation(0, 1) >= 0.88);
    CHECK(m.correlation(0, 1) <= 0.92);
  }
  SECTION("independent triple stays near zero") {
    const WeightedNetwork net({"x", "y", "z"}, Eigen::MatrixXd::Identity(3, 3),
                              NetworkKind::reference);
    const auto m = sample_moments(mvn_sample(net, 100000, 9));
    for (int i = 0; i < 3; ++i) {
      for (int j = i + 1; j < 3; ++j) {
        CHECK(std::abs(m.correlation(i, j)) <= 0.02);
      }
    }
  }
  SECTION("same seed reproduces, different seed differs") {
    const WeightedNetwork net({"x", "y"}, Eigen::MatrixXd::Identity(2, 2),
                              NetworkKind::reference);
    const auto a = mvn_sample(net, 16, 1001);
    const auto b = mvn_sample(net, 16, 1001);
    const auto c = mvn_sample(net, 16, 1002);
    CHECK(a.values == b.values);
    CHECK(a.values != c.values);
  }
  SECTION("shorter samples are prefixes of longer ones") {
    const WeightedNetwork net({"x", "y"}, Eigen::MatrixXd::Identity(2, 2),
                              NetworkKind::reference);
    const auto small = mvn_sample(net, 8, 55);
    const auto big = mvn_sample(net, 32, 55);
    CHECK(big.values.topRows(8) == small.values);
  }
}

TEST_CASE("sample covariance rank equals min(n-1, N)", "[statistical]") {
  std::mt19937_64 rng(21);
  const Eigen::MatrixXd corr = testsupport::random_correlation_matrix(6, rng);
  std::vector<std::string> labels = {"a", "b", "c", "d", "e", "f"};
  const WeightedNetwork net(labels, corr, NetworkKind::reference);
  for (const int n : {3, 4, 5, 6, 8, 20}) {
    const auto m = sample_moments(mvn_sample(net, n, 300 + n));
    CHECK(numerical_rank(m.covariance) == std::min(n - 1, 6));
  }
}

TEST_CASE("sample correlation converges to the reference", "[statistical]") {
  std::mt19937_64 rng(22);
  const Eigen::MatrixXd corr = testsupport::random_correlation_matrix(5, rng);
  const WeightedNetwork net({"a", "b", "c", "d", "e"}, corr,
                            NetworkKind::reference);
  const Eigen::MatrixXd factor = cholesky_factor(corr);
  double previous = 1e9;
  for (const int n : {100, 1000, 10000}) {
    double dev = 0.0;
    const int trials = 100;
    for (int t = 0; t < trials; ++t) {
      const auto m = sample_moments(
          mvn_sample_rows(factor, n, rng::derive_stream(99, t)));
      dev += (m.correlation - corr).cwiseAbs().sum() / (5 * 4);
    }
    dev /= trials;
    CHECK(dev < previous);
    previous = dev;
  }
}
