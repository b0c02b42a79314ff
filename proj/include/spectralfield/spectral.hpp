#ifndef SPECTRALFIELD_SPECTRAL_HPP
#define SPECTRALFIELD_SPECTRAL_HPP

#include <Eigen/Dense>
#include <optional>
#include <vector>

namespace spectralfield {

/// Eigendecomposition of a symmetric matrix with repeated eigenvalues
/// sorted ascending and orthonormal eigenvectors as columns of U.
struct Spectrum {
  Eigen::VectorXd values;   // lambda_1 <= ... <= lambda_m
  Eigen::MatrixXd vectors;  // orthogonal U, column i pairs with values[i]
};

/// One distinct-eigenvalue cluster: its value, multiplicity, symmetric
/// eigenprojection and the inclusive 0-based range of repeated indices
/// it covers.
struct EigenGroup {
  double value = 0.0;
  int multiplicity = 0;
  Eigen::MatrixXd projection;
  int first = 0;  // j_* - 1
  int last = 0;   // j^* - 1
};

struct ClusterConfig {
  double relative_gap = 1e-8;
};

struct SpectralDecomposition {
  std::vector<EigenGroup> groups;  // values strictly increasing
  Spectrum spectrum;               // raw basis, kept for xi-selection
  double cluster_gap_used = 0.0;   // absolute merge threshold applied
  double nearest_gap_margin = 0.0; // smallest inter-group gap minus threshold

  int size() const { return static_cast<int>(spectrum.values.size()); }
  int groupCount() const { return static_cast<int>(groups.size()); }
  /// Index into groups of the group covering repeated index j (0-based).
  int groupOf(int j) const;
  /// Orthonormal basis (m x d) of the group's eigenspace.
  Eigen::MatrixXd groupBasis(int group_index) const;
};

/// Cyclic Jacobi-rotation diagonalization, run until the off-diagonal
/// norm drops below 1e-14 * ||X||.
Spectrum eigSym(const Eigen::MatrixXd& X);

/// Cluster the sorted eigenvalues by single-linkage with absolute gap
/// threshold relative_gap * max(1, ||X||_F) and build the projections.
SpectralDecomposition decompose(const Eigen::MatrixXd& X, const ClusterConfig& cfg = {});

/// P_alpha(k) = prod_{l != k} (X - lambda_l I)/(lambda_k - lambda_l);
/// the empty product (single group) is the identity.
std::vector<Eigen::MatrixXd> frobeniusCovariants(const Eigen::MatrixXd& X,
                                                 const SpectralDecomposition& decomp);

/// A_j = sum over groups with value != lambda_j of P / (lambda_j - value);
/// zero when there is a single group. j is a 0-based repeated index.
Eigen::MatrixXd pseudoinverseAj(const SpectralDecomposition& decomp, int j);

struct KyFanResult {
  double value = 0.0;
  std::optional<Eigen::MatrixXd> minimizer;  // present iff k is a group boundary
};

/// Sum of the k smallest eigenvalues. The minimizing rank-k projection is
/// unique exactly when k lands on a group boundary j^*; only then is it
/// returned.
KyFanResult kyFanSum(const Eigen::MatrixXd& X, int k, const SpectralDecomposition& decomp);

/// Enforce and check symmetry: throws if ||X - X^T|| exceeds
/// 1e-12 * max(1, ||X||), returns the symmetrized matrix otherwise.
Eigen::MatrixXd requireSymmetric(const Eigen::MatrixXd& X);

}  // namespace spectralfield

#endif
