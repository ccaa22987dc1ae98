/*
 * Exact truncated Puiseux expansions at infinity of the p-th root of a
 * monic polynomial: for f of degree d,
 *
 *     (f(x))^(1/p) = x^(d/p) * (a_0 + a_1 x^-1 + a_2 x^-2 + ...)
 *
 * with a_0 = 1 on the principal branch and all a_k rational there.  The
 * other branches are the principal one scaled by a p-th root of unity,
 * so coefficients live in Q(zeta_p).  The expansion is computed by
 * Newton iteration for g^p = x^-d f on power series in 1/x, which
 * doubles the correct length each step.
 */
#ifndef RUNGEKIT_PUISEUX_HPP
#define RUNGEKIT_PUISEUX_HPP

#include <vector>

#include "rungekit/cyclotomic.hpp"
#include "rungekit/rational_poly.hpp"

namespace rungekit {

// x^(lead_num/p) * sum_k coeffs[k] x^-k, truncated after coeffs.back().
struct PuiseuxSeries {
  unsigned p = 2;
  long lead_num = 0;
  std::vector<CycloNumber> coeffs;

  // Number of stored coefficients minus one: coeffs run a_0..a_N.
  unsigned truncation() const {
    return static_cast<unsigned>(coeffs.size()) - 1;
  }
  // Numerator of the x-exponent of coeffs[k] over denominator p.
  long exponent_num(unsigned k) const {
    return lead_num - static_cast<long>(p) * static_cast<long>(k);
  }
};

// One branch choice j_l in [0, p) per polynomial factor.
using BranchAssignment = std::vector<unsigned>;

// Principal-branch expansion with n_terms + 1 coefficients a_0..a_n.
// f must be monic; p prime.
PuiseuxSeries expand_pth_root(const RationalPoly& f, unsigned p,
                              unsigned n_terms);

// Scales every coefficient by zeta_p^j: the j-th branch of the root.
PuiseuxSeries branch(const PuiseuxSeries& s, unsigned j);

// Truncated product; both factors must share p and truncation depth.
PuiseuxSeries series_product(const PuiseuxSeries& a, const PuiseuxSeries& b);

// Expansion of x^i0 * prod_l y_l^exps[l] where y_l is branch
// branches[l] of f_l^(1/p).  All vectors must have equal length.
PuiseuxSeries monomial_series(unsigned i0, const std::vector<unsigned>& exps,
                              const std::vector<RationalPoly>& fs,
                              const BranchAssignment& branches, unsigned p,
                              unsigned n_terms);

// Same, from precomputed branch-adjusted factor expansions (shared
// across the many monomials of one linear system).
PuiseuxSeries monomial_series_from(unsigned i0,
                                   const std::vector<unsigned>& exps,
                                   const std::vector<PuiseuxSeries>& ys);

// p^(2k-1) a_k integral for every k >= 1 (a_0 is a root of unity).
bool check_integrality(const PuiseuxSeries& s);

struct ConvergenceThreshold {
  bool archimedean = true;
  // Archimedean place: the series converges for |x| >= abs_bound
  // (max |coefficient of f| + 1).
  mpq_class abs_bound;
  // q-adic place: converges iff v_q(x) < max_valuation, i.e. 0 for
  // q != p and -2 at q = p.
  mpz_class q;
  long max_valuation = 0;
};

ConvergenceThreshold convergence_threshold(const RationalPoly& f, unsigned p);
ConvergenceThreshold convergence_threshold(const RationalPoly& f, unsigned p,
                                           const mpz_class& q);

}  // namespace rungekit

#endif
