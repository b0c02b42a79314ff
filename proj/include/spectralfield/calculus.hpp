#ifndef SPECTRALFIELD_CALCULUS_HPP
#define SPECTRALFIELD_CALCULUS_HPP

#include <Eigen/Dense>
#include <memory>
#include <vector>

#include "spectralfield/field.hpp"
#include "spectralfield/polynomial.hpp"
#include "spectralfield/spectral.hpp"

namespace spectralfield {

/// Everything needed to differentiate lambda_j and P_j at one point:
/// the field, the decomposition there, the group covering the repeated
/// index j (0-based), and the pseudoinverse A_j.
struct EigenDerivativeContext {
  std::shared_ptr<const PolyMatrixField> field;  // owned copy; safe past the source's lifetime
  Eigen::VectorXd point;
  SpectralDecomposition decomp;
  int j = 0;            // 0-based repeated index
  int group_index = 0;  // index into decomp.groups
  Eigen::MatrixXd A;    // pseudoinverse of lambda_j I - H(x)

  const EigenGroup& group() const { return decomp.groups[group_index]; }
  double lambda() const { return group().value; }
  int multiplicity() const { return group().multiplicity; }
  /// Deterministic unit eigenvector choice: first column of the group basis.
  Eigen::VectorXd xi() const { return decomp.groupBasis(group_index).col(0); }
};

EigenDerivativeContext makeContext(const PolyMatrixField& field, const Eigen::VectorXd& x,
                                   int j, const ClusterConfig& cfg = {});

/// D_e lambda_j = (1/d_j) tr(P_j D_e H).
double dirDerivLambda(const EigenDerivativeContext& ctx, const Eigen::VectorXd& e);

/// Gradient row vector xi^T grad_xi H. Computed by both the xi-route and
/// the per-axis trace route; a discrepancy beyond 1e-8 (relative to the
/// gradient scale) throws InconsistentDerivativeError, the runtime signal
/// of a crossing. check=false skips the guard and returns the xi-route
/// value as-is (hypotheses unverified).
Eigen::RowVectorXd gradLambda(const EigenDerivativeContext& ctx, bool check = true);

/// Hessian grad_xi(grad_xi H)^T + 2 (grad_xi H)^T A_j grad_xi H,
/// cross-checked entrywise against the trace form.
Eigen::MatrixXd hessLambda(const EigenDerivativeContext& ctx, bool check = true);

/// D_b D_a lambda_j = (1/d_j) tr(P_j [D_b D_a H + 2 D_a H A_j D_b H]).
double secondDirLambda(const EigenDerivativeContext& ctx, const Eigen::VectorXd& a,
                       const Eigen::VectorXd& b);

/// D_e P_j = P_j D_e H A_j + A_j D_e H P_j; symmetric, trace zero.
Eigen::MatrixXd dirDerivProj(const EigenDerivativeContext& ctx, const Eigen::VectorXd& e);

/// grad_q P_j = P_j grad_{A_j q} H + A_j grad_{P_j q} H; m x n.
Eigen::MatrixXd jacDerivProj(const EigenDerivativeContext& ctx, const Eigen::VectorXd& q);

/// d/dt lambda_j(x(t)) along a polynomial curve, via exact x'(t) and the
/// trace formula. curve has one univariate polynomial per ambient axis.
double curveDerivLambda(const PolyMatrixField& field, const std::vector<Polynomial>& curve,
                        double t, int j, const ClusterConfig& cfg = {});

struct OneSidedDerivative {
  double right = 0.0;  // min over the Ky Fan minimizing set
  double left = 0.0;   // max over the same set
};

/// One-sided derivatives of ell_k(t) = sum of the k smallest eigenvalues
/// along t -> x + t e. k is 1-based, matching the partial-sum count.
OneSidedDerivative oneSidedSumDeriv(const PolyMatrixField& field, const Eigen::VectorXd& x,
                                    const Eigen::VectorXd& e, int k,
                                    const ClusterConfig& cfg = {});

/// Second-order expansion data of lambda_j around a point.
struct Expansion2 {
  double base = 0.0;
  Eigen::RowVectorXd linear;   // gradient
  Eigen::MatrixXd quadratic;   // Hessian

  double predict(const Eigen::VectorXd& y) const {
    return base + linear.dot(y) + 0.5 * y.dot(quadratic * y);
  }
  /// Directional form at displacement h*e.
  double predictDirectional(const Eigen::VectorXd& e, double h) const {
    return predict(h * e);
  }
};

Expansion2 taylor2Lambda(const EigenDerivativeContext& ctx, bool check = true);

}  // namespace spectralfield

#endif
