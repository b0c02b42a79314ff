#include "spectralfield/oracle.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "spectralfield/calculus.hpp"
#include "spectralfield/errors.hpp"

namespace spectralfield {

namespace {

double lambdaAt(const PolyMatrixField& field, const Eigen::VectorXd& x, int j) {
  return eigSym(field.eval(x)).values[j];
}

// Gap between the group of j and its neighbours must dominate the step
// times the local rate of change, or sorted-index tracking can swap
// branches between stencil points.
void requireStableTracking(const PolyMatrixField& field, const Eigen::VectorXd& x, int j,
                           double h, const ClusterConfig& cluster) {
  const SpectralDecomposition d = decompose(field.eval(x), cluster);
  if (d.groupCount() < 2) return;  // nothing to confuse the group with
  const int g = d.groupOf(j);
  double gap = std::numeric_limits<double>::infinity();
  if (g > 0) gap = std::min(gap, d.groups[g].value - d.groups[g - 1].value);
  if (g + 1 < d.groupCount()) gap = std::min(gap, d.groups[g + 1].value - d.groups[g].value);

  const int n = field.ambientDim();
  double rate = 0.0;
  for (int a = 0; a < n; ++a)
    rate = std::max(rate, field.dirDeriv(Eigen::VectorXd::Unit(n, a), x).norm());
  rate *= std::sqrt(static_cast<double>(n));
  // An eigenvalue moves by roughly h * rate across the stencil; a factor
  // of two keeps branches from swapping in the sorted order.
  if (gap <= 2.0 * h * rate)
    throw UnstableTrackingError("spectral gap " + std::to_string(gap) +
                                " too small for finite-difference step " + std::to_string(h));
}

}  // namespace

Eigen::VectorXd fdGradLambda(const PolyMatrixField& field, const Eigen::VectorXd& x, int j,
                             const FDConfig& cfg) {
  if (cfg.h <= 0.0) throw DimensionError("finite-difference step must be positive");
  requireStableTracking(field, x, j, cfg.h, cfg.cluster);
  const int n = field.ambientDim();
  auto central = [&](int axis, double h) {
    const Eigen::VectorXd dx = h * Eigen::VectorXd::Unit(n, axis);
    return (lambdaAt(field, x + dx, j) - lambdaAt(field, x - dx, j)) / (2.0 * h);
  };
  Eigen::VectorXd g(n);
  for (int a = 0; a < n; ++a) {
    if (cfg.richardson)
      g[a] = (4.0 * central(a, cfg.h / 2.0) - central(a, cfg.h)) / 3.0;
    else
      g[a] = central(a, cfg.h);
  }
  return g;
}

Eigen::MatrixXd fdHessLambda(const PolyMatrixField& field, const Eigen::VectorXd& x, int j,
                             const FDConfig& cfg) {
  if (cfg.h <= 0.0) throw DimensionError("finite-difference step must be positive");
  const double hh = std::sqrt(cfg.h);
  requireStableTracking(field, x, j, hh, cfg.cluster);
  const int n = field.ambientDim();

  auto stencil = [&](int a, int b, double h) {
    const Eigen::VectorXd da = h * Eigen::VectorXd::Unit(n, a);
    const Eigen::VectorXd db = h * Eigen::VectorXd::Unit(n, b);
    if (a == b)
      return (lambdaAt(field, x + da, j) - 2.0 * lambdaAt(field, x, j) +
              lambdaAt(field, x - da, j)) /
             (h * h);
    return (lambdaAt(field, x + da + db, j) - lambdaAt(field, x + da - db, j) -
            lambdaAt(field, x - da + db, j) + lambdaAt(field, x - da - db, j)) /
           (4.0 * h * h);
  };

  Eigen::MatrixXd H(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) {
      double v;
      if (cfg.richardson)
        v = (4.0 * stencil(a, b, hh / 2.0) - stencil(a, b, hh)) / 3.0;
      else
        v = stencil(a, b, hh);
      H(a, b) = v;
      H(b, a) = v;
    }
  return 0.5 * (H + H.transpose());
}

Eigen::MatrixXd fdDProj(const PolyMatrixField& field, const Eigen::VectorXd& x, int j,
                        const Eigen::VectorXd& e, const FDConfig& cfg) {
  if (cfg.h <= 0.0) throw DimensionError("finite-difference step must be positive");
  requireStableTracking(field, x, j, cfg.h * std::max(1.0, e.norm()), cfg.cluster);

  const SpectralDecomposition base = decompose(field.eval(x), cfg.cluster);
  const int g = base.groupOf(j);
  const double value = base.groups[g].value;
  const int d = base.groups[g].multiplicity;

  auto projAt = [&](const Eigen::VectorXd& p) {
    const SpectralDecomposition dec = decompose(field.eval(p), cfg.cluster);
    int best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (int l = 0; l < dec.groupCount(); ++l) {
      const double dist = std::abs(dec.groups[l].value - value);
      if (dist < best_dist) { best_dist = dist; best = l; }
    }
    if (dec.groups[best].multiplicity != d)
      throw UnstableTrackingError("group matching across the step is ambiguous");
    return dec.groups[best].projection;
  };

  const Eigen::VectorXd dx = cfg.h * e;
  Eigen::MatrixXd DP = (projAt(x + dx) - projAt(x - dx)) / (2.0 * cfg.h);
  return 0.5 * (DP + DP.transpose());
}

double kyFanBruteForce(const Eigen::MatrixXd& Xin, int k, int n_samples, std::uint64_t seed) {
  const Eigen::MatrixXd X = requireSymmetric(Xin);
  const int m = static_cast<int>(X.rows());
  if (k < 0 || k > m) throw DimensionError("k out of range [0, m]");
  if (n_samples < 1) throw DimensionError("n_samples must be positive");
  if (k == 0) return 0.0;
  if (k == m) return X.trace();  // R = I is forced

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  double best = std::numeric_limits<double>::infinity();
  Eigen::MatrixXd G(m, k);
  for (int s = 0; s < n_samples; ++s) {
    for (int i = 0; i < m; ++i)
      for (int c = 0; c < k; ++c) G(i, c) = normal(rng);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(G);
    const Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(m, k);
    best = std::min(best, (Q.transpose() * X * Q).trace());
  }
  return best;
}

SlopeFit fitExpansionOrder(const PolyMatrixField& field, const Eigen::VectorXd& x, int j,
                           const Eigen::VectorXd& e, const std::vector<double>& steps,
                           const ClusterConfig& cfg) {
  for (size_t i = 1; i < steps.size(); ++i)
    if (steps[i] >= steps[i - 1] || steps[i] <= 0.0)
      throw DimensionError("steps must be strictly decreasing and positive");
  if (steps.size() < 2) throw DimensionError("need at least two steps");

  const EigenDerivativeContext ctx = makeContext(field, x, j, cfg);
  const Expansion2 exp2 = taylor2Lambda(ctx);

  SlopeFit out;
  out.steps = steps;
  double scale = std::max(1.0, std::abs(exp2.base));
  for (double h : steps) {
    const double actual = lambdaAt(field, x + h * e, j);
    out.residuals.push_back(std::abs(actual - exp2.predict(h * e)));
  }

  bool all_tiny = true;
  for (double r : out.residuals)
    if (r > 1e-12 * scale) { all_tiny = false; break; }
  if (all_tiny) {
    out.exact = true;
    out.fitted_order = std::numeric_limits<double>::infinity();
    return out;
  }

  // Least-squares slope of log residual vs log step.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (size_t i = 0; i < steps.size(); ++i) {
    if (out.residuals[i] <= 0.0) continue;
    const double lx = std::log(steps[i]);
    const double ly = std::log(out.residuals[i]);
    sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
    ++cnt;
  }
  out.fitted_order = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
  return out;
}

}  // namespace spectralfield
