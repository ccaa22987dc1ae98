/*
 * Explicit height bounds and arithmetic criteria for integral points on
 * systems y_l^p = f_l(x), plus the specialization to squares in products
 * of arithmetic-progression terms.
 *
 * Every unbounded quantity is handled as a natural logarithm inside
 * directed-rounding intervals (Rounded); the arithmetic criteria
 * ("condition" fields) are decided exactly over the integers by
 * rewriting log_p T < R as T < p^R.
 */
#ifndef RUNGEKIT_BOUNDS_HPP
#define RUNGEKIT_BOUNDS_HPP

#include <vector>

#include "rungekit/rational_poly.hpp"
#include "rungekit/rounded.hpp"

namespace rungekit {

// Degree pattern of the factor system at infinity: whether p divides
// every deg f_l (split, unramified points at infinity) or not.
enum class DegreeDivisibility { some_coprime, all_divisible };

DegreeDivisibility classify_degrees(unsigned p,
                                    const std::vector<unsigned>& degs);

struct MainthParams {
  unsigned p = 2;                  // prime root order
  std::vector<unsigned> degs;      // deg f_1 .. deg f_r, each >= 1
  unsigned t = 1;                  // places distributed over branches
  mpq_class B = 2;                 // archimedean height product (H+1)
  Rounded disc_log;                // log |discriminant| of the coefficient
                                   // field with zeta_p adjoined

  unsigned r() const { return static_cast<unsigned>(degs.size()); }
  unsigned d() const;              // sum of degrees
  DegreeDivisibility kind() const { return classify_degrees(p, degs); }
};

// log |D_Q(zeta_p)| = (p-2) log p.
Rounded cyclotomic_disc_log(unsigned p, unsigned prec = 0);

// All exponent tuples (i0, i1, ..., ir) with i_l < p for l >= 1 and
// p*i0 + sum i_l degs[l] <= delta, in lexicographic order.
std::vector<std::vector<unsigned>> monomial_exponents(
    unsigned delta, unsigned p, const std::vector<unsigned>& degs);

// Closed-form count of the tuples above; throws std::domain_error
// outside the validity range (delta >= (p-1)(d-1)-1, resp.
// p*floor(delta/p) >= (p-1)(d-2)-1 in the all-divisible case).
mpz_class monomial_count_closed(unsigned delta, unsigned p,
                                const std::vector<unsigned>& degs);

// Genus of the full fiber-product curve of y_l^p = f_l(x).
mpz_class curve_genus(unsigned p, const std::vector<unsigned>& degs);

// Smallest vanishing degree delta making the auxiliary linear system
// sufficiently overdetermined: ceil((p^(r-1)((p-1)(d-1)-2)+t+2) /
// (p^(r-1)-t)) in the mixed case, with (d-2) and p^r - t in the
// all-divisible case.  Requires t < p^(r-1) (resp. t < p^r).
unsigned auxiliary_degree(const MainthParams& params);

struct MainHeightBound {
  unsigned delta = 0;
  mpz_class monomials;   // m(delta)
  LogBound sharp;        // assembled factor-by-factor bound
  LogBound simplified;   // |D|^(d p^2r) (2 d p^3 B)^(d^2 p^3r)
};

// Height bound for the auxiliary-function construction; sharp is
// certified <= simplified before returning.
MainHeightBound main_height_bound(const MainthParams& params,
                                  unsigned prec = 0);

struct SuperellipticBound {
  unsigned epsilon = 0;  // 0: p | every deg f_l; 1: gcd(d, p) = 1; 2: rest
  bool condition = false;
  LogBound bound;
};

// Criterion and height bound for S-integral points on y^p = prod g_l^n
// over Q; omega_aDf and S_size arrive as inputs (the discriminant data
// of the radical is the caller's).
SuperellipticBound superelliptic_bound(unsigned p,
                                       const std::vector<RationalPoly>& gs,
                                       unsigned n_power, unsigned omega_aDf,
                                       const mpz_class& S_size,
                                       const Rounded& disc_log,
                                       unsigned prec = 0);

struct OmegaCutoff {
  unsigned target = 0;  // guaranteed number of distinct prime divisors
  LogBound cutoff;      // beyond exp(cutoff), the target holds
};

// For x past the cutoff, the power-free part of prod f_l(x) has at
// least `target` distinct prime divisors (r - 1 in general, r when
// p divides every degree).
OmegaCutoff pfree_omega_cutoff(unsigned p,
                               const std::vector<RationalPoly>& fs,
                               unsigned prec = 0);

struct ProgressionBound {
  bool condition = false;
  LogBound bound;
};

// Squares b y^2 -> general p-th powers in progression products with k
// terms chosen among r: exact criterion
// omega((k-1)! b) + 1 + log_p(phi(2p)(p/2 + omega(d))) < r and the
// accompanying bound (2 k p^4 r)^(p^(3r) r^2).
ProgressionBound progression_square_bound(unsigned k, unsigned r, unsigned p,
                                          const mpz_class& b,
                                          unsigned omega_d,
                                          unsigned prec = 0);

// Quadratic-field variant over Q(sqrt(m)): criterion
// omega_L((k-1)! b) + omega(m) + log2(omega_L(d) + 2) + 4 < r with
// bound (16 k r)^(2^(3r) r^2).  m must be squarefree, not 0 or 1.
ProgressionBound progression_square_bound_quadratic(unsigned k, unsigned r,
                                                    const mpz_class& m,
                                                    const mpz_class& b,
                                                    unsigned omega_L_d,
                                                    unsigned prec = 0);

// Number of prime ideals of Q(sqrt(m)) above the prime divisors of n.
unsigned omega_quadratic(const mpz_class& n, const mpz_class& m);

// Largest omega(d) for which the progression criterion can hold at
// every d of that complexity: 2^(r - pi(k-1) - eps) - 3, or -1 when the
// exponent is <= 0 (no d qualifies).
mpz_class max_omega_d(unsigned k, unsigned r, unsigned eps);

struct OmegaTableRow {
  unsigned psi = 0;   // r = k - psi
  long max_omega = 0; // largest omega(d) solved completely at this psi
};

// Column of the solvability table for one k: rows from psi = 0 down to
// the last psi where even d = 1 (eps = 0) still qualifies.
std::vector<OmegaTableRow> solvable_omega_table(unsigned k);

// k - pi(k-1) - eps - floor(log2(omega(d) + 2)): how many terms of the
// progression block must carry a large prime divisor.
long large_prime_divisor_count(unsigned k, unsigned omega_d, unsigned eps);

// Siegel-lemma height bound for some nullspace basis vector of a
// system with n columns and the given rank over a degree-fd field:
// |D|^((n - rank)/(2 fd)) (sqrt(n) H(A))^rank, as a log.
LogBound siegel_lemma_bound(const mpz_class& n_cols, const mpz_class& rank,
                            const Rounded& log_HA, const Rounded& disc_log,
                            unsigned field_degree, unsigned prec = 0);

}  // namespace rungekit

#endif
