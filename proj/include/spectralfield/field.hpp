#ifndef SPECTRALFIELD_FIELD_HPP
#define SPECTRALFIELD_FIELD_HPP

#include <Eigen/Dense>
#include <vector>

#include "spectralfield/polynomial.hpp"

namespace spectralfield {

/// Symmetric m x m matrix of polynomials in n variables, x -> H(x).
/// The entry grid is symmetric by construction; all exact derivative
/// tensors are computed symbolically entry by entry.
class PolyMatrixField {
public:
  /// Entries in row-major order, entries[i*m+j] == entries[j*m+i] required.
  PolyMatrixField(int m, int n, std::vector<Polynomial> entries);

  /// Hessian field of a scalar potential: entries[i][j] = d²u/dx_i dx_j,
  /// so m == n and the mixed-partial symmetries hold identically.
  static PolyMatrixField fromPotential(const Polynomial& u);

  static PolyMatrixField constant(const Eigen::MatrixXd& value, int n);

  int rows() const { return m_; }
  int ambientDim() const { return n_; }
  const Polynomial& entry(int i, int j) const { return entries_[i * m_ + j]; }

  /// H(x)
  Eigen::MatrixXd eval(const Eigen::VectorXd& x) const;
  /// D_e H(x) = sum_i e_i dH/dx_i(x); symmetric.
  Eigen::MatrixXd dirDeriv(const Eigen::VectorXd& e, const Eigen::VectorXd& x) const;
  /// Jacobian of x -> H(x) q; m x n.
  Eigen::MatrixXd jacDeriv(const Eigen::VectorXd& q, const Eigen::VectorXd& x) const;
  /// D_b D_a H(x); symmetric, and symmetric in (a, b).
  Eigen::MatrixXd secondDir(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                            const Eigen::VectorXd& x) const;
  /// Hessian of the scalar map x -> xi^T H(x) xi; n x n symmetric.
  Eigen::MatrixXd hessQuadForm(const Eigen::VectorXd& xi, const Eigen::VectorXd& x) const;

private:
  int m_;
  int n_;
  std::vector<Polynomial> entries_;           // row-major m x m
  std::vector<Polynomial> partials_;          // d entries / dx_k, [k][i*m+j]
};

/// Worked example fields: Hessians of u = (x³-3xy²)/6 and
/// u = (x⁴-6x²y²+y⁴)/12.
PolyMatrixField cubicField();
PolyMatrixField quarticField();

}  // namespace spectralfield

#endif
