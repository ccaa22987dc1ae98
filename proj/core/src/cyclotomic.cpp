#include "rungekit/cyclotomic.hpp"

#include <sstream>
#include <stdexcept>

#include "rungekit/integer_fns.hpp"
#include "rungekit/rational_poly.hpp"

namespace rungekit {
namespace {

void check_prime_order(unsigned p) {
  if (p < 2 || !is_prime(mpz_class(p)))
    throw std::invalid_argument("CycloNumber: order must be prime");
}

RationalPoly cyclotomic_poly(unsigned p) {
  // 1 + x + ... + x^(p-1)
  return RationalPoly(std::vector<mpq_class>(p, 1));
}

// Extended Euclid over Q[x]: returns (g, u) with u*a = g (mod b),
// g the monic gcd.  Enough for inversion modulo the cyclotomic poly.
std::pair<RationalPoly, RationalPoly> half_xgcd(RationalPoly a,
                                                RationalPoly b) {
  RationalPoly u0 = RationalPoly::constant(1);
  RationalPoly u1 = RationalPoly::zero();
  while (!b.is_zero()) {
    auto [q, r] = a.divmod(b);
    RationalPoly u2 = u0 - q * u1;
    a = std::move(b);
    b = std::move(r);
    u0 = std::move(u1);
    u1 = std::move(u2);
  }
  if (a.is_zero()) return {a, u0};
  mpq_class lc = a.leading_coeff();
  return {a.scaled(1 / lc), u0.scaled(1 / lc)};
}

}  // namespace

CycloNumber::CycloNumber(unsigned p) : p_(p), c_(p - 1, mpq_class(0)) {
  check_prime_order(p);
}

CycloNumber::CycloNumber(unsigned p, const mpq_class& rational)
    : CycloNumber(p) {
  c_[0] = rational;
}

CycloNumber CycloNumber::zeta_power(unsigned p, long j) {
  CycloNumber out(p);
  long r = j % static_cast<long>(p);
  if (r < 0) r += p;
  if (r == static_cast<long>(p) - 1) {
    // zeta^(p-1) = -(1 + zeta + ... + zeta^(p-2))
    for (auto& v : out.c_) v = -1;
  } else {
    out.c_[static_cast<std::size_t>(r)] = 1;
  }
  return out;
}

bool CycloNumber::is_zero() const {
  for (const auto& v : c_)
    if (v != 0) return false;
  return true;
}

bool CycloNumber::is_rational() const {
  for (std::size_t i = 1; i < c_.size(); ++i)
    if (c_[i] != 0) return false;
  return true;
}

mpq_class CycloNumber::rational_value() const {
  if (!is_rational())
    throw std::domain_error("CycloNumber: not a rational element");
  return c_[0];
}

bool CycloNumber::is_integral() const {
  for (const auto& v : c_)
    if (v.get_den() != 1) return false;
  return true;
}

mpz_class CycloNumber::content() const {
  if (!is_integral())
    throw std::domain_error("CycloNumber::content needs integral coords");
  mpz_class g = 0;
  for (const auto& v : c_)
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_num().get_mpz_t());
  if (g == 0) throw std::domain_error("CycloNumber::content of zero");
  return g;
}

mpz_class CycloNumber::coord_height() const {
  mpz_class h = 0;
  for (const auto& v : c_) {
    mpz_class a = abs(v.get_num());
    if (a > h) h = a;
    a = abs(mpz_class(v.get_den()));
    if (a > h) h = a;
  }
  return h;
}

void CycloNumber::require_same_field(const CycloNumber& o) const {
  if (p_ != o.p_)
    throw std::invalid_argument("CycloNumber: mixed cyclotomic orders");
}

CycloNumber CycloNumber::operator+(const CycloNumber& o) const {
  require_same_field(o);
  CycloNumber out(p_);
  for (std::size_t i = 0; i < c_.size(); ++i) out.c_[i] = c_[i] + o.c_[i];
  return out;
}

CycloNumber CycloNumber::operator-(const CycloNumber& o) const {
  require_same_field(o);
  CycloNumber out(p_);
  for (std::size_t i = 0; i < c_.size(); ++i) out.c_[i] = c_[i] - o.c_[i];
  return out;
}

CycloNumber CycloNumber::operator-() const {
  CycloNumber out(p_);
  for (std::size_t i = 0; i < c_.size(); ++i) out.c_[i] = -c_[i];
  return out;
}

CycloNumber CycloNumber::scaled(const mpq_class& s) const {
  CycloNumber out(p_);
  for (std::size_t i = 0; i < c_.size(); ++i) out.c_[i] = c_[i] * s;
  return out;
}

CycloNumber CycloNumber::operator*(const CycloNumber& o) const {
  require_same_field(o);
  // Convolve with exponents folded mod p, then eliminate zeta^(p-1)
  // through 1 + zeta + ... + zeta^(p-1) = 0.
  std::vector<mpq_class> acc(p_, 0);
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    for (std::size_t j = 0; j < o.c_.size(); ++j) {
      if (o.c_[j] == 0) continue;
      acc[(i + j) % p_] += c_[i] * o.c_[j];
    }
  }
  CycloNumber out(p_);
  const mpq_class& top = acc[p_ - 1];
  for (std::size_t i = 0; i + 1 < p_; ++i) out.c_[i] = acc[i] - top;
  return out;
}

CycloNumber CycloNumber::inverse() const {
  if (is_zero()) throw std::domain_error("CycloNumber: inverse of zero");
  if (is_rational()) return CycloNumber(p_, 1 / c_[0]);
  std::vector<mpq_class> coeffs(c_.begin(), c_.end());
  auto [g, u] = half_xgcd(RationalPoly(std::move(coeffs)),
                          cyclotomic_poly(p_));
  if (g.degree() != 0)
    throw std::domain_error("CycloNumber: element not invertible");
  // u * this == 1 (mod Phi_p); fold u back into coordinates.
  CycloNumber out(p_);
  for (long i = 0; i <= u.degree(); ++i) {
    if (u.coeff(i) == 0) continue;
    out = out + zeta_power(p_, i).scaled(u.coeff(i));
  }
  return out;
}

CycloNumber CycloNumber::operator/(const CycloNumber& o) const {
  return *this * o.inverse();
}

mpq_class CycloNumber::norm() const {
  std::vector<mpq_class> coeffs(c_.begin(), c_.end());
  return resultant(cyclotomic_poly(p_), RationalPoly(std::move(coeffs)));
}

std::string CycloNumber::to_string() const {
  std::ostringstream out;
  out << "(";
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (i) out << ",";
    out << c_[i].get_str();
  }
  out << ")";
  return out.str();
}

}  // namespace rungekit
