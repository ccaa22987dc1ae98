#include "rungekit/rounded.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>
#include <utility>

namespace rungekit {

unsigned default_precision() {
  static const unsigned prec = [] {
    const char* env = std::getenv("RUNGEKIT_PRECISION");
    if (!env) return 256u;
    long v = std::strtol(env, nullptr, 10);
    if (v < 64) v = 64;
    if (v > 1 << 20) v = 1 << 20;
    return static_cast<unsigned>(v);
  }();
  return prec;
}

namespace {
unsigned pick(unsigned prec) { return prec ? prec : default_precision(); }
}  // namespace

Rounded::Rounded() : Rounded(default_precision()) {}

Rounded::Rounded(unsigned prec) : prec_(pick(prec)) {
  mpfr_init2(lo_, prec_);
  mpfr_init2(hi_, prec_);
  mpfr_set_zero(lo_, 1);
  mpfr_set_zero(hi_, 1);
}

Rounded::Rounded(const Rounded& o) : prec_(o.prec_) {
  mpfr_init2(lo_, prec_);
  mpfr_init2(hi_, prec_);
  mpfr_set(lo_, o.lo_, MPFR_RNDD);  // same precision: exact
  mpfr_set(hi_, o.hi_, MPFR_RNDU);
}

Rounded::Rounded(Rounded&& o) noexcept : prec_(o.prec_) {
  mpfr_init2(lo_, prec_);
  mpfr_init2(hi_, prec_);
  mpfr_swap(lo_, o.lo_);
  mpfr_swap(hi_, o.hi_);
}

Rounded& Rounded::operator=(Rounded o) {
  std::swap(prec_, o.prec_);
  mpfr_swap(lo_, o.lo_);
  mpfr_swap(hi_, o.hi_);
  return *this;
}

Rounded::~Rounded() {
  mpfr_clear(lo_);
  mpfr_clear(hi_);
}

Rounded Rounded::exact(const mpz_class& v, unsigned prec) {
  Rounded out(pick(prec));
  mpfr_set_z(out.lo_, v.get_mpz_t(), MPFR_RNDD);
  mpfr_set_z(out.hi_, v.get_mpz_t(), MPFR_RNDU);
  return out;
}

Rounded Rounded::exact(const mpq_class& v, unsigned prec) {
  Rounded out(pick(prec));
  mpfr_set_q(out.lo_, v.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(out.hi_, v.get_mpq_t(), MPFR_RNDU);
  return out;
}

Rounded Rounded::exact_ui(unsigned long v, unsigned prec) {
  Rounded out(pick(prec));
  mpfr_set_ui(out.lo_, v, MPFR_RNDD);
  mpfr_set_ui(out.hi_, v, MPFR_RNDU);
  return out;
}

Rounded Rounded::log_of(const mpq_class& v, unsigned prec) {
  if (v <= 0) throw std::domain_error("log_of: needs a positive value");
  Rounded out(pick(prec));
  mpfr_set_q(out.lo_, v.get_mpq_t(), MPFR_RNDD);
  mpfr_log(out.lo_, out.lo_, MPFR_RNDD);
  mpfr_set_q(out.hi_, v.get_mpq_t(), MPFR_RNDU);
  mpfr_log(out.hi_, out.hi_, MPFR_RNDU);
  return out;
}

Rounded Rounded::log_of(const mpz_class& v, unsigned prec) {
  return log_of(mpq_class(v), prec);
}

Rounded Rounded::hull(const Rounded& a, const Rounded& b) {
  Rounded out(std::max(a.prec_, b.prec_));
  mpfr_min(out.lo_, a.lo_, b.lo_, MPFR_RNDD);
  mpfr_max(out.hi_, a.hi_, b.hi_, MPFR_RNDU);
  return out;
}

Rounded Rounded::operator+(const Rounded& o) const {
  Rounded out(std::max(prec_, o.prec_));
  mpfr_add(out.lo_, lo_, o.lo_, MPFR_RNDD);
  mpfr_add(out.hi_, hi_, o.hi_, MPFR_RNDU);
  return out;
}

Rounded Rounded::operator-(const Rounded& o) const {
  Rounded out(std::max(prec_, o.prec_));
  mpfr_sub(out.lo_, lo_, o.hi_, MPFR_RNDD);
  mpfr_sub(out.hi_, hi_, o.lo_, MPFR_RNDU);
  return out;
}

Rounded Rounded::operator*(const Rounded& o) const {
  // Full four-corner interval product; bounds in this project are mostly
  // nonnegative but eigenvalue arithmetic does go negative.
  Rounded out(std::max(prec_, o.prec_));
  mpfr_t t, best_lo, best_hi;
  mpfr_init2(t, out.prec_);
  mpfr_init2(best_lo, out.prec_);
  mpfr_init2(best_hi, out.prec_);
  const mpfr_srcptr a[2] = {lo_, hi_};
  const mpfr_srcptr b[2] = {o.lo_, o.hi_};
  bool first = true;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      mpfr_mul(t, a[i], b[j], MPFR_RNDD);
      if (first || mpfr_cmp(t, best_lo) < 0) mpfr_set(best_lo, t, MPFR_RNDD);
      mpfr_mul(t, a[i], b[j], MPFR_RNDU);
      if (first || mpfr_cmp(t, best_hi) > 0) mpfr_set(best_hi, t, MPFR_RNDU);
      first = false;
    }
  mpfr_set(out.lo_, best_lo, MPFR_RNDD);
  mpfr_set(out.hi_, best_hi, MPFR_RNDU);
  mpfr_clear(t);
  mpfr_clear(best_lo);
  mpfr_clear(best_hi);
  return out;
}

Rounded Rounded::sqrt_nonneg() const {
  Rounded out(prec_);
  if (mpfr_sgn(lo_) < 0)
    mpfr_set_zero(out.lo_, 1);
  else
    mpfr_sqrt(out.lo_, lo_, MPFR_RNDD);
  if (mpfr_sgn(hi_) < 0)
    throw std::domain_error("sqrt_nonneg: interval entirely negative");
  mpfr_sqrt(out.hi_, hi_, MPFR_RNDU);
  return out;
}

Rounded Rounded::log() const {
  if (mpfr_sgn(lo_) <= 0)
    throw std::domain_error("log: interval not strictly positive");
  Rounded out(prec_);
  mpfr_log(out.lo_, lo_, MPFR_RNDD);
  mpfr_log(out.hi_, hi_, MPFR_RNDU);
  return out;
}

double Rounded::lo_double() const { return mpfr_get_d(lo_, MPFR_RNDD); }
double Rounded::hi_double() const { return mpfr_get_d(hi_, MPFR_RNDU); }

double Rounded::relative_width() const {
  mpfr_t w, m;
  mpfr_init2(w, prec_);
  mpfr_init2(m, prec_);
  mpfr_sub(w, hi_, lo_, MPFR_RNDU);
  mpfr_abs(m, lo_, MPFR_RNDD);
  mpfr_t m2;
  mpfr_init2(m2, prec_);
  mpfr_abs(m2, hi_, MPFR_RNDD);
  if (mpfr_cmp(m2, m) > 0) mpfr_set(m, m2, MPFR_RNDD);
  double out;
  if (mpfr_zero_p(m))
    out = mpfr_zero_p(w) ? 0.0 : 1.0;
  else {
    mpfr_div(w, w, m, MPFR_RNDU);
    out = mpfr_get_d(w, MPFR_RNDU);
  }
  mpfr_clear(w);
  mpfr_clear(m);
  mpfr_clear(m2);
  return out;
}

bool Rounded::certainly_le(const Rounded& o) const {
  return mpfr_cmp(hi_, o.lo_) <= 0;
}

bool Rounded::certainly_ge(const Rounded& o) const {
  return mpfr_cmp(lo_, o.hi_) >= 0;
}

bool Rounded::certainly_positive() const { return mpfr_sgn(lo_) > 0; }

bool Rounded::contains(const mpq_class& v) const {
  return mpfr_cmp_q(lo_, v.get_mpq_t()) <= 0 &&
         mpfr_cmp_q(hi_, v.get_mpq_t()) >= 0;
}

std::string Rounded::str(int digits) const {
  char* lo_s = nullptr;
  char* hi_s = nullptr;
  mpfr_asprintf(&lo_s, "%.*RDe", digits, lo_);
  mpfr_asprintf(&hi_s, "%.*RUe", digits, hi_);
  std::string out = std::string("[") + lo_s + ", " + hi_s + "]";
  mpfr_free_str(lo_s);
  mpfr_free_str(hi_s);
  return out;
}

}  // namespace rungekit
