#include "spectralfield/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "spectralfield/errors.hpp"

namespace spectralfield {

namespace {
constexpr double kDropTol = 1e-300;
}

Polynomial::Polynomial(int dimension) : dimension_(dimension) {
  if (dimension < 1) throw DimensionError("polynomial dimension must be positive");
}

Polynomial::Polynomial(int dimension, std::vector<Monomial> terms)
    : dimension_(dimension), terms_(std::move(terms)) {
  if (dimension < 1) throw DimensionError("polynomial dimension must be positive");
  for (const auto& t : terms_) {
    if (static_cast<int>(t.exponents.size()) != dimension_)
      throw DimensionError("monomial exponent vector length does not match dimension");
    for (int e : t.exponents)
      if (e < 0) throw DimensionError("negative exponent");
  }
  normalize();
}

Polynomial Polynomial::constant(int dimension, double c) {
  return Polynomial(dimension, {Monomial{c, std::vector<int>(dimension, 0)}});
}

Polynomial Polynomial::variable(int dimension, int axis) {
  if (axis < 0 || axis >= dimension) throw DimensionError("variable axis out of range");
  std::vector<int> e(dimension, 0);
  e[axis] = 1;
  return Polynomial(dimension, {Monomial{1.0, std::move(e)}});
}

Polynomial Polynomial::monomial(double coeff, std::vector<int> exponents) {
  const int n = static_cast<int>(exponents.size());
  return Polynomial(n, {Monomial{coeff, std::move(exponents)}});
}

int Polynomial::degree() const {
  int d = -1;
  for (const auto& t : terms_) {
    int total = 0;
    for (int e : t.exponents) total += e;
    d = std::max(d, total);
  }
  return d;
}

void Polynomial::normalize() {
  std::sort(terms_.begin(), terms_.end(),
            [](const Monomial& a, const Monomial& b) { return a.exponents < b.exponents; });
  std::vector<Monomial> merged;
  for (const auto& t : terms_) {
    if (!merged.empty() && merged.back().exponents == t.exponents)
      merged.back().coeff += t.coeff;
    else
      merged.push_back(t);
  }
  std::erase_if(merged, [](const Monomial& t) { return std::abs(t.coeff) < kDropTol; });
  terms_ = std::move(merged);
}

double Polynomial::eval(const Eigen::VectorXd& x) const {
  if (x.size() != dimension_)
    throw DimensionError("point dimension " + std::to_string(x.size()) +
                         " does not match polynomial dimension " + std::to_string(dimension_));
  double sum = 0.0;
  for (const auto& t : terms_) {
    double v = t.coeff;
    for (int i = 0; i < dimension_; ++i)
      for (int k = 0; k < t.exponents[i]; ++k) v *= x[i];
    sum += v;
  }
  return sum;
}

Polynomial Polynomial::partial(int axis) const {
  if (axis < 0 || axis >= dimension_) throw DimensionError("partial axis out of range");
  std::vector<Monomial> out;
  for (const auto& t : terms_) {
    if (t.exponents[axis] == 0) continue;
    Monomial d = t;
    d.coeff *= d.exponents[axis];
    d.exponents[axis] -= 1;
    out.push_back(std::move(d));
  }
  return Polynomial(dimension_, std::move(out));
}

Polynomial Polynomial::operator+(const Polynomial& other) const {
  if (other.dimension_ != dimension_) throw DimensionError("polynomial dimension mismatch in +");
  std::vector<Monomial> out = terms_;
  out.insert(out.end(), other.terms_.begin(), other.terms_.end());
  return Polynomial(dimension_, std::move(out));
}

Polynomial Polynomial::operator-(const Polynomial& other) const { return *this + (-other); }

Polynomial Polynomial::operator*(const Polynomial& other) const {
  if (other.dimension_ != dimension_) throw DimensionError("polynomial dimension mismatch in *");
  std::vector<Monomial> out;
  out.reserve(terms_.size() * other.terms_.size());
  for (const auto& a : terms_)
    for (const auto& b : other.terms_) {
      Monomial m;
      m.coeff = a.coeff * b.coeff;
      m.exponents.resize(dimension_);
      for (int i = 0; i < dimension_; ++i) m.exponents[i] = a.exponents[i] + b.exponents[i];
      out.push_back(std::move(m));
    }
  return Polynomial(dimension_, std::move(out));
}

Polynomial Polynomial::operator*(double scalar) const {
  std::vector<Monomial> out = terms_;
  for (auto& t : out) t.coeff *= scalar;
  return Polynomial(dimension_, std::move(out));
}

bool Polynomial::operator==(const Polynomial& other) const {
  if (dimension_ != other.dimension_ || terms_.size() != other.terms_.size()) return false;
  for (size_t i = 0; i < terms_.size(); ++i)
    if (terms_[i].exponents != other.terms_[i].exponents ||
        terms_[i].coeff != other.terms_[i].coeff)
      return false;
  return true;
}

}  // namespace spectralfield
