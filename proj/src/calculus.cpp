#include "spectralfield/calculus.hpp"

#include <cmath>
#include <string>

#include "spectralfield/errors.hpp"

namespace spectralfield {

namespace {
constexpr double kCrossCheckTol = 1e-8;
}

EigenDerivativeContext makeContext(const PolyMatrixField& field, const Eigen::VectorXd& x,
                                   int j, const ClusterConfig& cfg) {
  if (x.size() != field.ambientDim()) throw DimensionError("point dimension does not match field");
  if (j < 0 || j >= field.rows()) throw DimensionError("repeated index out of range");
  EigenDerivativeContext ctx;
  ctx.field = std::make_shared<PolyMatrixField>(field);
  ctx.point = x;
  ctx.decomp = decompose(field.eval(x), cfg);
  ctx.j = j;
  ctx.group_index = ctx.decomp.groupOf(j);
  ctx.A = pseudoinverseAj(ctx.decomp, j);
  return ctx;
}

double dirDerivLambda(const EigenDerivativeContext& ctx, const Eigen::VectorXd& e) {
  const Eigen::MatrixXd DeH = ctx.field->dirDeriv(e, ctx.point);
  return (ctx.group().projection * DeH).trace() / ctx.multiplicity();
}

Eigen::RowVectorXd gradLambda(const EigenDerivativeContext& ctx, bool check) {
  const Eigen::VectorXd xi = ctx.xi();
  const Eigen::RowVectorXd g = xi.transpose() * ctx.field->jacDeriv(xi, ctx.point);
  if (check) {
    const int n = ctx.field->ambientDim();
    Eigen::RowVectorXd g_trace(n);
    for (int i = 0; i < n; ++i)
      g_trace[i] = dirDerivLambda(ctx, Eigen::VectorXd::Unit(n, i));
    const double disc = (g - g_trace).norm() / std::max(1.0, g_trace.norm());
    if (disc > kCrossCheckTol)
      throw InconsistentDerivativeError(
          "gradient routes disagree (discrepancy " + std::to_string(disc) +
              "): eigenvalue crossing or violated differentiability hypothesis",
          disc);
  }
  return g;
}

Eigen::MatrixXd hessLambda(const EigenDerivativeContext& ctx, bool check) {
  const Eigen::VectorXd xi = ctx.xi();
  const Eigen::MatrixXd J = ctx.field->jacDeriv(xi, ctx.point);  // grad_xi H, m x n
  Eigen::MatrixXd Hl = ctx.field->hessQuadForm(xi, ctx.point) + 2.0 * J.transpose() * ctx.A * J;
  Hl = 0.5 * (Hl + Hl.transpose());
  if (check) {
    const int n = ctx.field->ambientDim();
    Eigen::MatrixXd H_trace(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        H_trace(a, b) =
            secondDirLambda(ctx, Eigen::VectorXd::Unit(n, a), Eigen::VectorXd::Unit(n, b));
    H_trace = 0.5 * (H_trace + H_trace.transpose());
    const double disc = (Hl - H_trace).norm() / std::max(1.0, H_trace.norm());
    if (disc > kCrossCheckTol)
      throw InconsistentDerivativeError(
          "Hessian routes disagree (discrepancy " + std::to_string(disc) +
              "): eigenvalue crossing or violated differentiability hypothesis",
          disc);
  }
  return Hl;
}

double secondDirLambda(const EigenDerivativeContext& ctx, const Eigen::VectorXd& a,
                       const Eigen::VectorXd& b) {
  const Eigen::MatrixXd DaH = ctx.field->dirDeriv(a, ctx.point);
  const Eigen::MatrixXd DbH = ctx.field->dirDeriv(b, ctx.point);
  const Eigen::MatrixXd DbDaH = ctx.field->secondDir(a, b, ctx.point);
  const Eigen::MatrixXd& P = ctx.group().projection;
  return (P * (DbDaH + 2.0 * DaH * ctx.A * DbH)).trace() / ctx.multiplicity();
}

Eigen::MatrixXd dirDerivProj(const EigenDerivativeContext& ctx, const Eigen::VectorXd& e) {
  const Eigen::MatrixXd DeH = ctx.field->dirDeriv(e, ctx.point);
  const Eigen::MatrixXd& P = ctx.group().projection;
  Eigen::MatrixXd DP = P * DeH * ctx.A + ctx.A * DeH * P;
  return 0.5 * (DP + DP.transpose());
}

Eigen::MatrixXd jacDerivProj(const EigenDerivativeContext& ctx, const Eigen::VectorXd& q) {
  if (q.size() != ctx.field->rows()) throw DimensionError("vector dimension does not match m");
  const Eigen::MatrixXd& P = ctx.group().projection;
  return P * ctx.field->jacDeriv(ctx.A * q, ctx.point) +
         ctx.A * ctx.field->jacDeriv(P * q, ctx.point);
}

double curveDerivLambda(const PolyMatrixField& field, const std::vector<Polynomial>& curve,
                        double t, int j, const ClusterConfig& cfg) {
  const int n = field.ambientDim();
  if (static_cast<int>(curve.size()) != n)
    throw DimensionError("curve component count does not match ambient dimension");
  Eigen::VectorXd x(n), v(n);
  Eigen::VectorXd tv(1);
  tv[0] = t;
  for (int i = 0; i < n; ++i) {
    if (curve[i].dimension() != 1) throw DimensionError("curve components must be univariate");
    x[i] = curve[i].eval(tv);
    v[i] = curve[i].partial(0).eval(tv);
  }
  const EigenDerivativeContext ctx = makeContext(field, x, j, cfg);
  return dirDerivLambda(ctx, v);
}

OneSidedDerivative oneSidedSumDeriv(const PolyMatrixField& field, const Eigen::VectorXd& x,
                                    const Eigen::VectorXd& e, int k, const ClusterConfig& cfg) {
  const int m = field.rows();
  if (k < 1 || k > m) throw DimensionError("k out of range [1, m]");
  const SpectralDecomposition decomp = decompose(field.eval(x), cfg);
  const Eigen::MatrixXd DeH = field.dirDeriv(e, x);

  const int g = decomp.groupOf(k - 1);
  double below = 0.0;
  for (int l = 0; l < g; ++l) below += (decomp.groups[l].projection * DeH).trace();

  // Extremizing tr(R D_e H) over the Ky Fan minimizing set reduces to
  // picking r eigenvalues of the compressed matrix Q^T D_e H Q.
  const int r = (k - 1) - decomp.groups[g].first + 1;
  const Eigen::MatrixXd Q = decomp.groupBasis(g);
  const Spectrum compressed = eigSym(Q.transpose() * DeH * Q);

  OneSidedDerivative out;
  out.right = below + compressed.values.head(r).sum();
  out.left = below + compressed.values.tail(r).sum();
  return out;
}

Expansion2 taylor2Lambda(const EigenDerivativeContext& ctx, bool check) {
  Expansion2 out;
  out.base = ctx.lambda();
  out.linear = gradLambda(ctx, check);
  out.quadratic = hessLambda(ctx, check);
  return out;
}

}  // namespace spectralfield
