#ifndef SPECTRALFIELD_TEST_FIELDS_HPP
#define SPECTRALFIELD_TEST_FIELDS_HPP

#include <Eigen/Dense>
#include <random>
#include <vector>

#include "spectralfield/field.hpp"
#include "spectralfield/polynomial.hpp"
#include "spectralfield/spectral.hpp"

namespace spectralfield::testing {

inline Eigen::VectorXd randomVector(std::mt19937_64& rng, int n, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = normal(rng);
  return v;
}

inline Eigen::MatrixXd randomOrthogonal(std::mt19937_64& rng, int m) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd G(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) G(i, j) = normal(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(G);
  return qr.householderQ() * Eigen::MatrixXd::Identity(m, m);
}

inline Eigen::MatrixXd randomSymmetric(std::mt19937_64& rng, int m, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  Eigen::MatrixXd X(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) X(i, j) = X(j, i) = normal(rng);
  return X;
}

/// Random rank-k symmetric projection, QQ^T of an orthonormalized frame.
inline Eigen::MatrixXd randomProjection(std::mt19937_64& rng, int m, int k) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd G(m, k);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < k; ++j) G(i, j) = normal(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(G);
  const Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(m, k);
  return Q * Q.transpose();
}

inline Polynomial randomPolynomial(std::mt19937_64& rng, int n, int max_degree) {
  std::uniform_int_distribution<int> deg(0, max_degree);
  std::normal_distribution<double> coeff(0.0, 1.0);
  std::uniform_int_distribution<int> nterms(1, 4);
  std::vector<Monomial> terms;
  const int count = nterms(rng);
  for (int t = 0; t < count; ++t) {
    Monomial mono;
    mono.coeff = coeff(rng);
    mono.exponents.resize(n);
    int budget = deg(rng);
    for (int i = 0; i < n; ++i) {
      std::uniform_int_distribution<int> pick(0, budget);
      mono.exponents[i] = pick(rng);
      budget -= mono.exponents[i];
    }
    terms.push_back(std::move(mono));
  }
  return Polynomial(n, std::move(terms));
}

inline PolyMatrixField randomField(std::mt19937_64& rng, int m, int n, int max_degree) {
  std::vector<Polynomial> entries(static_cast<size_t>(m) * m, Polynomial::zero(n));
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) {
      Polynomial p = randomPolynomial(rng, n, max_degree);
      entries[i * m + j] = p;
      entries[j * m + i] = p;
    }
  return PolyMatrixField(m, n, std::move(entries));
}

/// 3x3 field Q diag(a(x), a(x), b(x)) Q^T with constant orthogonal Q and
/// polynomial a, b: the a-eigenvalue has multiplicity 2 everywhere.
inline PolyMatrixField multiplicityTwoField(std::mt19937_64& rng, int n, int max_degree) {
  const Eigen::MatrixXd Q = randomOrthogonal(rng, 3);
  const Polynomial a = randomPolynomial(rng, n, max_degree);
  const Polynomial b = randomPolynomial(rng, n, max_degree);
  std::vector<Polynomial> entries(9, Polynomial::zero(n));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const double wa = Q(i, 0) * Q(j, 0) + Q(i, 1) * Q(j, 1);
      const double wb = Q(i, 2) * Q(j, 2);
      entries[i * 3 + j] = a * wa + b * wb;
    }
  return PolyMatrixField(3, n, std::move(entries));
}

/// Minimal gap between distinct eigenvalue groups of H(x); +inf for one group.
inline double spectralGapAt(const PolyMatrixField& field, const Eigen::VectorXd& x) {
  const SpectralDecomposition d = decompose(field.eval(x));
  double gap = std::numeric_limits<double>::infinity();
  for (int g = 1; g < d.groupCount(); ++g)
    gap = std::min(gap, d.groups[g].value - d.groups[g - 1].value);
  return gap;
}

/// Draw (field, point) pairs until the spectral gap clears the floor.
struct SeparatedTrial {
  PolyMatrixField field;
  Eigen::VectorXd point;
};

inline SeparatedTrial separatedTrial(std::mt19937_64& rng, int m, int n, int max_degree,
                                     double min_gap) {
  for (;;) {
    PolyMatrixField f = randomField(rng, m, n, max_degree);
    const Eigen::VectorXd x = randomVector(rng, n);
    if (spectralGapAt(f, x) > min_gap) return {std::move(f), x};
  }
}

}  // namespace spectralfield::testing

#endif
