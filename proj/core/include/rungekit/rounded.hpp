/*
 * Directed-rounding real intervals on top of MPFR.  Every quantity that
 * cannot be kept exact (logarithms of huge bounds, archimedean norms)
 * travels as a [lo, hi] pair with lo rounded toward -inf and hi toward
 * +inf, so <=-comparisons between bounds are certified.
 *
 * Working precision defaults to 256 bits and can be overridden through
 * the RUNGEKIT_PRECISION environment variable.
 */
#ifndef RUNGEKIT_ROUNDED_HPP
#define RUNGEKIT_ROUNDED_HPP

#include <gmpxx.h>
#include <mpfr.h>

#include <string>

namespace rungekit {

unsigned default_precision();

class Rounded {
 public:
  Rounded();  // [0, 0] at default precision
  explicit Rounded(unsigned prec);
  Rounded(const Rounded& o);
  Rounded(Rounded&& o) noexcept;
  Rounded& operator=(Rounded o);
  ~Rounded();

  static Rounded exact(const mpz_class& v, unsigned prec = 0);
  static Rounded exact(const mpq_class& v, unsigned prec = 0);
  static Rounded exact_ui(unsigned long v, unsigned prec = 0);
  // Interval around ln(v); v must be positive.
  static Rounded log_of(const mpq_class& v, unsigned prec = 0);
  static Rounded log_of(const mpz_class& v, unsigned prec = 0);

  // Smallest interval containing both arguments.
  static Rounded hull(const Rounded& a, const Rounded& b);

  Rounded operator+(const Rounded& o) const;
  Rounded operator-(const Rounded& o) const;
  Rounded operator*(const Rounded& o) const;
  Rounded sqrt_nonneg() const;  // clamps a slightly negative lo to 0
  Rounded log() const;          // requires a strictly positive interval

  unsigned precision() const { return prec_; }
  double lo_double() const;  // rounded down
  double hi_double() const;  // rounded up

  // Relative width (hi - lo) / max(|lo|, |hi|); 0 for the point interval.
  double relative_width() const;

  bool certainly_le(const Rounded& o) const;   // hi <= o.lo
  bool certainly_ge(const Rounded& o) const;   // lo >= o.hi
  bool certainly_positive() const;             // lo > 0

  bool contains(const mpq_class& v) const;

  std::string str(int digits = 12) const;

  const mpfr_t& lo_raw() const { return lo_; }
  const mpfr_t& hi_raw() const { return hi_; }

 private:
  unsigned prec_;
  mpfr_t lo_, hi_;
};

// A certified natural-log value of some huge quantity, tagged with the
// formula that produced it.
struct LogBound {
  Rounded log_value;
  std::string provenance;
};

}  // namespace rungekit

#endif
