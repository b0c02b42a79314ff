#ifndef SPECTRALFIELD_ORACLE_HPP
#define SPECTRALFIELD_ORACLE_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "spectralfield/field.hpp"
#include "spectralfield/spectral.hpp"

namespace spectralfield {

struct FDConfig {
  double h = 1e-5;
  bool richardson = true;
  ClusterConfig cluster;
};

/// Central-difference gradient of lambda_j (0-based repeated index),
/// tracked by sorted index. Throws UnstableTrackingError when the
/// spectral gap is too small for the step.
Eigen::VectorXd fdGradLambda(const PolyMatrixField& field, const Eigen::VectorXd& x, int j,
                             const FDConfig& cfg = {});

/// Second-order central stencil on lambda_j, symmetrized. Uses step
/// sqrt(cfg.h) to balance truncation against roundoff.
Eigen::MatrixXd fdHessLambda(const PolyMatrixField& field, const Eigen::VectorXd& x, int j,
                             const FDConfig& cfg = {});

/// (P_j(x+he) - P_j(x-he)) / (2h) with groups matched across the step by
/// eigenvalue proximity; ambiguous matches raise UnstableTrackingError.
Eigen::MatrixXd fdDProj(const PolyMatrixField& field, const Eigen::VectorXd& x, int j,
                        const Eigen::VectorXd& e, const FDConfig& cfg = {});

/// Minimum of tr(R X) over n_samples random rank-k projections, R = QQ^T
/// with Q an orthonormalized standard-normal m x k frame. Deterministic
/// given the seed. Always an upper bound on the k-smallest eigenvalue sum.
double kyFanBruteForce(const Eigen::MatrixXd& X, int k, int n_samples, std::uint64_t seed);

struct SlopeFit {
  std::vector<double> steps;      // strictly decreasing
  std::vector<double> residuals;  // |lambda_j(x+he) - second-order prediction|
  double fitted_order = 0.0;      // log-log least-squares slope
  bool exact = false;             // residuals at rounding level; order is formally infinite
};

/// Empirical order of the second-order expansion remainder along x + h e.
SlopeFit fitExpansionOrder(const PolyMatrixField& field, const Eigen::VectorXd& x, int j,
                           const Eigen::VectorXd& e, const std::vector<double>& steps,
                           const ClusterConfig& cfg = {});

}  // namespace spectralfield

#endif
