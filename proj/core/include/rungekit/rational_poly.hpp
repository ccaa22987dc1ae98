/*
 * Dense univariate polynomials over Q, lowest-degree coefficient first.
 * Carries exactly what the expansion and bound layers need: ring ops,
 * division, gcd, resultant/discriminant, projective coefficient height,
 * and a small text parser for CLI input ("x^2+1", "2*x + 6", "1/2x^3").
 */
#ifndef RUNGEKIT_RATIONAL_POLY_HPP
#define RUNGEKIT_RATIONAL_POLY_HPP

#include <gmpxx.h>

#include <string>
#include <utility>
#include <vector>

namespace rungekit {

struct PolyHeight {
  // Both are computed on the primitive integer form of the coefficient
  // vector; over Q they coincide (max absolute primitive coefficient).
  mpz_class height;
  mpz_class supnorm;
};

class RationalPoly {
 public:
  RationalPoly() = default;
  explicit RationalPoly(std::vector<mpq_class> coeffs);
  static RationalPoly zero() { return RationalPoly(); }
  static RationalPoly constant(const mpq_class& c);
  static RationalPoly x();  // the monomial x
  static RationalPoly parse(const std::string& text);

  // -1 for the zero polynomial.
  long degree() const { return static_cast<long>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  const std::vector<mpq_class>& coeffs() const { return coeffs_; }
  mpq_class coeff(std::size_t i) const;
  const mpq_class& leading_coeff() const;
  bool is_monic() const;
  bool has_integer_coeffs() const;

  RationalPoly operator+(const RationalPoly& o) const;
  RationalPoly operator-(const RationalPoly& o) const;
  RationalPoly operator*(const RationalPoly& o) const;
  RationalPoly operator-() const;
  RationalPoly scaled(const mpq_class& c) const;
  bool operator==(const RationalPoly& o) const = default;

  RationalPoly derivative() const;
  mpq_class eval(const mpq_class& x) const;

  // Quotient and remainder; divisor must be nonzero.
  std::pair<RationalPoly, RationalPoly> divmod(const RationalPoly& d) const;

  // Monic gcd (1 for coprime inputs, 0 only if both inputs are 0).
  static RationalPoly gcd(RationalPoly a, RationalPoly b);

  bool is_squarefree() const;

  std::string to_string() const;

 private:
  void trim();
  std::vector<mpq_class> coeffs_;
};

// Sylvester resultant computed by the Euclidean remainder recursion.
mpq_class resultant(const RationalPoly& f, const RationalPoly& g);

// (-1)^(d(d-1)/2) res(f, f') / lc(f); f must be non-constant.
mpq_class poly_discriminant(const RationalPoly& f);

// Clears to the primitive integer coefficient vector and reports the max
// absolute coefficient (projective height over Q, and the archimedean
// sup-norm, which agree here).
PolyHeight poly_height(const RationalPoly& f);

// True iff the polynomials are pairwise coprime and each is squarefree.
bool pairwise_coprime_squarefree(const std::vector<RationalPoly>& fs);

}  // namespace rungekit

#endif
