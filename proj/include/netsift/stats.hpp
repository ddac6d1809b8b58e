#pragma once

#include <Eigen/Dense>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include "netsift/errors.hpp"
#include "netsift/network.hpp"
#include "netsift/rng.hpp"

namespace netsift {

/// n x N matrix of log-returns: one row per day, one column per instrument.
struct ReturnsMatrix {
  Eigen::MatrixXd values;

  int days() const { return static_cast<int>(values.rows()); }
  int instruments() const { return static_cast<int>(values.cols()); }
};

struct SampleMoments {
  Eigen::VectorXd means;
  Eigen::MatrixXd covariance;
  Eigen::MatrixXd correlation;
};

/// values[t][k] = ln(prices[t+1][k] / prices[t][k]).
inline ReturnsMatrix log_returns(const Eigen::MatrixXd& prices) {
  if (prices.rows() < 2) {
    throw data_error("need at least 2 price rows to compute returns");
  }
  for (Eigen::Index t = 0; t < prices.rows(); ++t) {
    for (Eigen::Index k = 0; k < prices.cols(); ++k) {
      if (!(prices(t, k) > 0.0) || !std::isfinite(prices(t, k))) {
        throw data_error("non-positive price at row " + std::to_string(t) +
                         ", column " + std::to_string(k));
      }
    }
  }
  Eigen::MatrixXd values(prices.rows() - 1, prices.cols());
  for (Eigen::Index t = 0; t + 1 < prices.rows(); ++t) {
    for (Eigen::Index k = 0; k < prices.cols(); ++k) {
      values(t, k) = std::log(prices(t + 1, k) / prices(t, k));
    }
  }
  return {std::move(values)};
}

/// Unbiased covariance (divisor n-1) and the correlation it normalizes to.
/// Zero sample variance is an error rather than NaN.
inline SampleMoments sample_moments(const ReturnsMatrix& returns) {
  const Eigen::Index n = returns.values.rows();
  const Eigen::Index cols = returns.values.cols();
  if (n < 2) {
    throw data_error("need at least 2 observations for sample covariance");
  }
  SampleMoments out;
  out.means = returns.values.colwise().mean();
  const Eigen::MatrixXd centered =
      returns.values.rowwise() - out.means.transpose();
  // Explicit dot products keep the matrix bit-exactly symmetric.
  out.covariance.resize(cols, cols);
  for (Eigen::Index i = 0; i < cols; ++i) {
    for (Eigen::Index j = i; j < cols; ++j) {
      const double s =
          centered.col(i).dot(centered.col(j)) / static_cast<double>(n - 1);
      out.covariance(i, j) = s;
      out.covariance(j, i) = s;
    }
  }
  Eigen::VectorXd sd(cols);
  for (Eigen::Index i = 0; i < cols; ++i) {
    const double v = out.covariance(i, i);
    if (v == 0.0) {
      throw data_error("column " + std::to_string(i) +
                       " has zero sample variance; correlation undefined");
    }
    sd(i) = std::sqrt(v);
  }
  out.correlation.resize(cols, cols);
  for (Eigen::Index i = 0; i < cols; ++i) {
    out.correlation(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < cols; ++j) {
      const double r =
          std::clamp(out.covariance(i, j) / (sd(i) * sd(j)), -1.0, 1.0);
      out.correlation(i, j) = r;
      out.correlation(j, i) = r;
    }
  }
  return out;
}

/// Lower-triangular L with L L^T = corr, |L L^T - corr|_max <= 1e-8.
/// Eigenvalues in (-1e-10, 0] are clipped to 1e-12; anything below -1e-10 is
/// an indefinite matrix and an error.
inline Eigen::MatrixXd cholesky_factor(const Eigen::MatrixXd& corr) {
  if (corr.rows() != corr.cols()) {
    throw data_error("cholesky_factor needs a square matrix");
  }
  if ((corr - corr.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw data_error("cholesky_factor needs a symmetric matrix");
  }
  const auto reconstruction_error = [&](const Eigen::MatrixXd& lower) {
    return (lower * lower.transpose() - corr).cwiseAbs().maxCoeff();
  };

  Eigen::LLT<Eigen::MatrixXd> llt(corr);
  if (llt.info() == Eigen::Success) {
    Eigen::MatrixXd lower = llt.matrixL();
    if (reconstruction_error(lower) <= 1e-8) {
      return lower;
    }
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(corr);
  Eigen::VectorXd eigs = es.eigenvalues();
  if (eigs.minCoeff() <= -1e-10) {
    throw data_error("matrix is indefinite (smallest eigenvalue " +
                     std::to_string(eigs.minCoeff()) + ")");
  }
  for (Eigen::Index i = 0; i < eigs.size(); ++i) {
    if (eigs(i) <= 0.0) eigs(i) = 1e-12;
  }
  // L = R^T from the QR of B^T (with B B^T equal to the clipped matrix)
  // is lower-triangular with the required product.
  const Eigen::MatrixXd root =
      es.eigenvectors() * eigs.cwiseSqrt().asDiagonal();
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(root.transpose());
  Eigen::MatrixXd lower = Eigen::MatrixXd(
      qr.matrixQR().triangularView<Eigen::Upper>()).transpose();
  for (Eigen::Index i = 0; i < lower.cols(); ++i) {
    if (lower(i, i) < 0.0) lower.col(i) = -lower.col(i);
  }
  if (reconstruction_error(lower) > 1e-8) {
    throw data_error("cholesky reconstruction error above 1e-8");
  }
  return lower;
}

/// n rows of L*z with z standard normal; the whole sample is a pure function
/// of (factor, stream_seed).
inline ReturnsMatrix mvn_sample_rows(const Eigen::MatrixXd& factor, int n,
                                     std::uint64_t stream_seed) {
  if (n < 1) {
    throw data_error("sample size must be at least 1");
  }
  const Eigen::Index cols = factor.rows();
  rng::NormalStream normals(stream_seed);
  Eigen::MatrixXd values(n, cols);
  Eigen::VectorXd z(cols);
  for (int t = 0; t < n; ++t) {
    for (Eigen::Index k = 0; k < cols; ++k) {
      z(k) = normals.next();
    }
    values.row(t) = (factor.template triangularView<Eigen::Lower>() * z).transpose();
  }
  return {std::move(values)};
}

/// Zero-mean multivariate normal sample with the reference weights as the
/// correlation matrix.
inline ReturnsMatrix mvn_sample(const WeightedNetwork& reference, int n,
                                std::uint64_t stream_seed) {
  return mvn_sample_rows(cholesky_factor(reference.weights()), n, stream_seed);
}

/// Numerical rank of a symmetric matrix: eigenvalues below 1e-10 times the
/// largest magnitude count as zero.
inline int numerical_rank(const Eigen::MatrixXd& sym) {
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym,
                                                          Eigen::EigenvaluesOnly);
  const Eigen::VectorXd mags = es.eigenvalues().cwiseAbs();
  const double largest = mags.maxCoeff();
  if (largest == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < mags.size(); ++i) {
    if (mags(i) > 1e-10 * largest) ++rank;
  }
  return rank;
}

/// Sample-kind network holding the sample correlations, labels shared with
/// the reference.
inline WeightedNetwork sample_network(const WeightedNetwork& reference,
                                      const SampleMoments& moments) {
  return WeightedNetwork(reference.labels(), moments.correlation,
                         NetworkKind::sample);
}

}  // namespace netsift
