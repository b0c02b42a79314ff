#include "spectralfield/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "spectralfield/errors.hpp"

namespace spectralfield {

Eigen::MatrixXd requireSymmetric(const Eigen::MatrixXd& X) {
  if (X.rows() != X.cols()) throw DimensionError("matrix is not square");
  const double asym = (X - X.transpose()).norm();
  if (asym > 1e-12 * std::max(1.0, X.norm()))
    throw DimensionError("matrix is not symmetric within tolerance");
  return 0.5 * (X + X.transpose());
}

Spectrum eigSym(const Eigen::MatrixXd& Xin) {
  const Eigen::MatrixXd X = requireSymmetric(Xin);
  if (!X.allFinite()) throw DimensionError("matrix has non-finite entries");
  const int m = static_cast<int>(X.rows());

  Eigen::MatrixXd A = X;
  Eigen::MatrixXd U = Eigen::MatrixXd::Identity(m, m);
  const double norm = X.norm();
  const double off_target = 1e-14 * std::max(norm, std::numeric_limits<double>::min());

  auto offNorm = [&]() {
    double s = 0.0;
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) s += 2.0 * A(i, j) * A(i, j);
    return std::sqrt(s);
  };

  // Cyclic sweeps; desk-scale m makes convergence a non-issue.
  const int max_sweeps = 64;
  for (int sweep = 0; sweep < max_sweeps && offNorm() > off_target; ++sweep) {
    for (int p = 0; p < m - 1; ++p)
      for (int q = p + 1; q < m; ++q) {
        const double apq = A(p, q);
        if (std::abs(apq) <= 1e-300) continue;
        const double theta = (A(q, q) - A(p, p)) / (2.0 * apq);
        // Stable tangent of the rotation angle.
        double t;
        if (std::abs(theta) > 1e154) {
          t = 0.5 / theta;
        } else {
          t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
          if (theta < 0.0) t = -t;
        }
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        for (int i = 0; i < m; ++i) {
          const double aip = A(i, p), aiq = A(i, q);
          A(i, p) = c * aip - s * aiq;
          A(i, q) = s * aip + c * aiq;
        }
        for (int i = 0; i < m; ++i) {
          const double api = A(p, i), aqi = A(q, i);
          A(p, i) = c * api - s * aqi;
          A(q, i) = s * api + c * aqi;
        }
        A(p, q) = 0.0;
        A(q, p) = 0.0;
        for (int i = 0; i < m; ++i) {
          const double uip = U(i, p), uiq = U(i, q);
          U(i, p) = c * uip - s * uiq;
          U(i, q) = s * uip + c * uiq;
        }
      }
  }

  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return A(a, a) < A(b, b); });

  Spectrum out;
  out.values.resize(m);
  out.vectors.resize(m, m);
  for (int i = 0; i < m; ++i) {
    out.values[i] = A(order[i], order[i]);
    out.vectors.col(i) = U.col(order[i]);
  }
  return out;
}

int SpectralDecomposition::groupOf(int j) const {
  for (int g = 0; g < groupCount(); ++g)
    if (j >= groups[g].first && j <= groups[g].last) return g;
  throw DimensionError("repeated index out of range: " + std::to_string(j));
}

Eigen::MatrixXd SpectralDecomposition::groupBasis(int group_index) const {
  const EigenGroup& g = groups.at(group_index);
  return spectrum.vectors.middleCols(g.first, g.multiplicity);
}

SpectralDecomposition decompose(const Eigen::MatrixXd& X, const ClusterConfig& cfg) {
  if (cfg.relative_gap <= 0.0) throw DimensionError("relative_gap must be positive");
  SpectralDecomposition out;
  out.spectrum = eigSym(X);
  const int m = static_cast<int>(out.spectrum.values.size());
  const double threshold = cfg.relative_gap * std::max(1.0, X.norm());
  out.cluster_gap_used = threshold;

  int start = 0;
  for (int i = 1; i <= m; ++i) {
    const bool split =
        (i == m) || (out.spectrum.values[i] - out.spectrum.values[i - 1] > threshold);
    if (!split) continue;
    EigenGroup g;
    g.first = start;
    g.last = i - 1;
    g.multiplicity = i - start;
    g.value = out.spectrum.values.segment(start, g.multiplicity).mean();
    Eigen::MatrixXd Q = out.spectrum.vectors.middleCols(start, g.multiplicity);
    g.projection = Q * Q.transpose();
    g.projection = 0.5 * (g.projection + g.projection.transpose());
    out.groups.push_back(std::move(g));
    start = i;
  }

  double min_gap = std::numeric_limits<double>::infinity();
  for (size_t g = 1; g < out.groups.size(); ++g)
    min_gap = std::min(min_gap, out.groups[g].value - out.groups[g - 1].value);
  out.nearest_gap_margin = min_gap - threshold;
  return out;
}

std::vector<Eigen::MatrixXd> frobeniusCovariants(const Eigen::MatrixXd& Xin,
                                                 const SpectralDecomposition& decomp) {
  const Eigen::MatrixXd X = requireSymmetric(Xin);
  const int m = static_cast<int>(X.rows());
  const int s = decomp.groupCount();
  const double gap_floor = 1e-14 * X.norm();
  std::vector<Eigen::MatrixXd> out;
  out.reserve(s);
  for (int k = 0; k < s; ++k) {
    Eigen::MatrixXd P = Eigen::MatrixXd::Identity(m, m);
    for (int l = 0; l < s; ++l) {
      if (l == k) continue;
      const double denom = decomp.groups[k].value - decomp.groups[l].value;
      if (std::abs(denom) <= gap_floor)
        throw DegenerateGapError("group values too close for covariant product");
      P = P * (X - decomp.groups[l].value * Eigen::MatrixXd::Identity(m, m)) / denom;
    }
    out.push_back(0.5 * (P + P.transpose()));
  }
  return out;
}

Eigen::MatrixXd pseudoinverseAj(const SpectralDecomposition& decomp, int j) {
  const int m = decomp.size();
  if (j < 0 || j >= m) throw DimensionError("repeated index out of range");
  const int gj = decomp.groupOf(j);
  const double lambda_j = decomp.groups[gj].value;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m, m);
  for (int g = 0; g < decomp.groupCount(); ++g) {
    if (g == gj) continue;
    A += decomp.groups[g].projection / (lambda_j - decomp.groups[g].value);
  }
  return A;
}

KyFanResult kyFanSum(const Eigen::MatrixXd& X, int k, const SpectralDecomposition& decomp) {
  const int m = decomp.size();
  if (k < 0 || k > m) throw DimensionError("k out of range [0, m]");
  KyFanResult out;
  out.value = decomp.spectrum.values.head(k).sum();
  if (k == 0) {
    out.minimizer = Eigen::MatrixXd::Zero(m, m);
    return out;
  }
  // The minimizing set is a singleton iff k-1 is the last index of a group.
  for (int g = 0; g < decomp.groupCount(); ++g) {
    if (decomp.groups[g].last == k - 1) {
      Eigen::MatrixXd R = Eigen::MatrixXd::Zero(m, m);
      for (int l = 0; l <= g; ++l) R += decomp.groups[l].projection;
      out.minimizer = R;
      break;
    }
  }
  return out;
}

}  // namespace spectralfield
