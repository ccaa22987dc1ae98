/*
 * Elements of Q(zeta_p), p prime, as rational coordinate vectors on the
 * power basis 1, zeta, ..., zeta^(p-2) modulo the p-th cyclotomic
 * polynomial.  p = 2 degenerates to plain rationals with zeta = -1.
 */
#ifndef RUNGEKIT_CYCLOTOMIC_HPP
#define RUNGEKIT_CYCLOTOMIC_HPP

#include <gmpxx.h>

#include <string>
#include <vector>

namespace rungekit {

class CycloNumber {
 public:
  // Zero element of Q(zeta_p); p must be prime.
  explicit CycloNumber(unsigned p);
  CycloNumber(unsigned p, const mpq_class& rational);

  static CycloNumber zeta_power(unsigned p, long j);

  unsigned order() const { return p_; }
  // Coordinates on 1, zeta, ..., zeta^(p-2).
  const std::vector<mpq_class>& coords() const { return c_; }

  bool is_zero() const;
  bool is_rational() const;
  mpq_class rational_value() const;  // throws unless is_rational()

  // All coordinate denominators are 1, i.e. the element lies in Z[zeta].
  bool is_integral() const;
  // gcd of the integer coordinates; requires is_integral() and != 0.
  mpz_class content() const;
  // max over coordinates of max(|num|, |den|); pivot-selection measure.
  mpz_class coord_height() const;

  CycloNumber operator+(const CycloNumber& o) const;
  CycloNumber operator-(const CycloNumber& o) const;
  CycloNumber operator*(const CycloNumber& o) const;
  CycloNumber operator-() const;
  CycloNumber scaled(const mpq_class& c) const;
  bool operator==(const CycloNumber& o) const = default;

  CycloNumber inverse() const;  // throws on zero
  CycloNumber operator/(const CycloNumber& o) const;

  // Product over all conjugates (resultant with the cyclotomic
  // polynomial); rational, multiplicative.
  mpq_class norm() const;

  std::string to_string() const;

 private:
  void require_same_field(const CycloNumber& o) const;
  unsigned p_;
  std::vector<mpq_class> c_;
};

}  // namespace rungekit

#endif
