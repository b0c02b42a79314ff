#ifndef SPECTRALFIELD_POLYNOMIAL_HPP
#define SPECTRALFIELD_POLYNOMIAL_HPP

#include <Eigen/Dense>
#include <vector>

namespace spectralfield {

struct Monomial {
  double coeff = 0.0;
  std::vector<int> exponents;  // one entry per ambient variable
};

/// Exact multivariate polynomial with double coefficients and dense
/// non-negative integer exponent vectors. Terms are kept in a canonical
/// form: sorted by exponent vector, duplicates merged, negligible
/// coefficients dropped.
class Polynomial {
public:
  explicit Polynomial(int dimension);
  Polynomial(int dimension, std::vector<Monomial> terms);

  static Polynomial zero(int dimension) { return Polynomial(dimension); }
  static Polynomial constant(int dimension, double c);
  /// The coordinate function x_axis.
  static Polynomial variable(int dimension, int axis);
  /// c * x^e for a single exponent vector.
  static Polynomial monomial(double coeff, std::vector<int> exponents);

  int dimension() const { return dimension_; }
  const std::vector<Monomial>& terms() const { return terms_; }
  bool isZero() const { return terms_.empty(); }
  int degree() const;  // -1 for the zero polynomial

  double eval(const Eigen::VectorXd& x) const;
  /// Exact partial derivative along one axis.
  Polynomial partial(int axis) const;

  Polynomial operator+(const Polynomial& other) const;
  Polynomial operator-(const Polynomial& other) const;
  Polynomial operator*(const Polynomial& other) const;
  Polynomial operator*(double scalar) const;
  Polynomial operator-() const { return *this * -1.0; }

  bool operator==(const Polynomial& other) const;

private:
  void normalize();

  int dimension_;
  std::vector<Monomial> terms_;
};

inline Polynomial operator*(double scalar, const Polynomial& p) { return p * scalar; }

}  // namespace spectralfield

#endif
