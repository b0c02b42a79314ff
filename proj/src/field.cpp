#include "spectralfield/field.hpp"

#include <string>

#include "spectralfield/errors.hpp"

namespace spectralfield {

PolyMatrixField::PolyMatrixField(int m, int n, std::vector<Polynomial> entries)
    : m_(m), n_(n), entries_(std::move(entries)) {
  if (m < 1 || n < 1) throw DimensionError("field sizes must be positive");
  if (static_cast<int>(entries_.size()) != m * m)
    throw DimensionError("entry grid size does not match m x m");
  for (const auto& p : entries_)
    if (p.dimension() != n) throw DimensionError("entry polynomial dimension does not match n");
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      if (!(entry(i, j) == entry(j, i)))
        throw DimensionError("entry grid is not symmetric at (" + std::to_string(i) + "," +
                             std::to_string(j) + ")");
  partials_.reserve(static_cast<size_t>(n) * m * m);
  for (int k = 0; k < n; ++k)
    for (int ij = 0; ij < m * m; ++ij) partials_.push_back(entries_[ij].partial(k));
}

PolyMatrixField PolyMatrixField::fromPotential(const Polynomial& u) {
  const int n = u.dimension();
  std::vector<Polynomial> grad;
  grad.reserve(n);
  for (int i = 0; i < n; ++i) grad.push_back(u.partial(i));
  std::vector<Polynomial> entries;
  entries.reserve(static_cast<size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) entries.push_back(grad[i].partial(j));
  return PolyMatrixField(n, n, std::move(entries));
}

PolyMatrixField PolyMatrixField::constant(const Eigen::MatrixXd& value, int n) {
  const int m = static_cast<int>(value.rows());
  if (value.cols() != m) throw DimensionError("constant field value must be square");
  std::vector<Polynomial> entries;
  entries.reserve(static_cast<size_t>(m) * m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) entries.push_back(Polynomial::constant(n, value(i, j)));
  return PolyMatrixField(m, n, std::move(entries));
}

Eigen::MatrixXd PolyMatrixField::eval(const Eigen::VectorXd& x) const {
  Eigen::MatrixXd out(m_, m_);
  for (int i = 0; i < m_; ++i)
    for (int j = 0; j < m_; ++j) out(i, j) = entry(i, j).eval(x);
  return out;
}

Eigen::MatrixXd PolyMatrixField::dirDeriv(const Eigen::VectorXd& e,
                                          const Eigen::VectorXd& x) const {
  if (e.size() != n_) throw DimensionError("direction dimension does not match n");
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(m_, m_);
  for (int k = 0; k < n_; ++k) {
    if (e[k] == 0.0) continue;
    const Polynomial* dk = &partials_[static_cast<size_t>(k) * m_ * m_];
    for (int ij = 0; ij < m_ * m_; ++ij) out(ij / m_, ij % m_) += e[k] * dk[ij].eval(x);
  }
  return out;
}

Eigen::MatrixXd PolyMatrixField::jacDeriv(const Eigen::VectorXd& q,
                                          const Eigen::VectorXd& x) const {
  if (q.size() != m_) throw DimensionError("vector dimension does not match m");
  Eigen::MatrixXd out(m_, n_);
  for (int i = 0; i < m_; ++i)
    for (int k = 0; k < n_; ++k) {
      const Polynomial* dk = &partials_[static_cast<size_t>(k) * m_ * m_];
      double v = 0.0;
      for (int j = 0; j < m_; ++j) v += dk[i * m_ + j].eval(x) * q[j];
      out(i, k) = v;
    }
  return out;
}

Eigen::MatrixXd PolyMatrixField::secondDir(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                                           const Eigen::VectorXd& x) const {
  if (a.size() != n_ || b.size() != n_) throw DimensionError("direction dimension mismatch");
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(m_, m_);
  for (int i = 0; i < n_; ++i) {
    if (a[i] == 0.0) continue;
    const Polynomial* di = &partials_[static_cast<size_t>(i) * m_ * m_];
    for (int k = 0; k < n_; ++k) {
      const double w = a[i] * b[k];
      if (w == 0.0) continue;
      for (int ij = 0; ij < m_ * m_; ++ij)
        out(ij / m_, ij % m_) += w * di[ij].partial(k).eval(x);
    }
  }
  return out;
}

Eigen::MatrixXd PolyMatrixField::hessQuadForm(const Eigen::VectorXd& xi,
                                              const Eigen::VectorXd& x) const {
  if (xi.size() != m_) throw DimensionError("vector dimension does not match m");
  // Hessian of f(x) = xi^T H(x) xi: entry (i,k) = sum_{p,q} xi_p xi_q d²H_pq/dx_i dx_k.
  Eigen::MatrixXd out(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (int k = i; k < n_; ++k) {
      const Polynomial* di = &partials_[static_cast<size_t>(i) * m_ * m_];
      double v = 0.0;
      for (int p = 0; p < m_; ++p)
        for (int q = 0; q < m_; ++q) {
          const double w = xi[p] * xi[q];
          if (w == 0.0) continue;
          v += w * di[p * m_ + q].partial(k).eval(x);
        }
      out(i, k) = v;
      out(k, i) = v;
    }
  return out;
}

PolyMatrixField cubicField() {
  // u(x,y) = (x³ - 3xy²)/6
  Polynomial u = Polynomial::monomial(1.0 / 6.0, {3, 0}) + Polynomial::monomial(-0.5, {1, 2});
  return PolyMatrixField::fromPotential(u);
}

PolyMatrixField quarticField() {
  // u(x,y) = (x⁴ - 6x²y² + y⁴)/12
  Polynomial u = Polynomial::monomial(1.0 / 12.0, {4, 0}) +
                 Polynomial::monomial(-0.5, {2, 2}) + Polynomial::monomial(1.0 / 12.0, {0, 4});
  return PolyMatrixField::fromPotential(u);
}

}  // namespace spectralfield
