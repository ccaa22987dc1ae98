#include "rungekit/bounds.hpp"

#include <stdexcept>

#include "rungekit/integer_fns.hpp"

namespace rungekit {

namespace {

mpz_class pow_z(unsigned long base, unsigned long e) {
  mpz_class out;
  mpz_ui_pow_ui(out.get_mpz_t(), base, e);
  return out;
}

void require_prime(unsigned p) {
  if (p < 2 || !is_prime(mpz_class(p)))
    throw std::invalid_argument("root order must be prime");
}

void require_degrees(const std::vector<unsigned>& degs) {
  if (degs.empty()) throw std::invalid_argument("empty degree list");
  for (unsigned d : degs)
    if (d == 0) throw std::invalid_argument("zero-degree factor");
}

mpq_class as_q(const mpz_class& num, const mpz_class& den) {
  mpq_class q(num);
  q /= mpq_class(den);
  return q;
}

void enumerate_rec(unsigned slot, unsigned budget, unsigned p,
                   const std::vector<unsigned>& degs,
                   std::vector<unsigned>& cur,
                   std::vector<std::vector<unsigned>>& out) {
  if (slot == degs.size() + 1) {
    out.push_back(cur);
    return;
  }
  // slot 0 consumes p per step, slot l >= 1 consumes degs[l-1], capped at p-1.
  unsigned step = slot == 0 ? p : degs[slot - 1];
  unsigned cap = slot == 0 ? budget / p : p - 1;
  for (unsigned i = 0; i <= cap && i * step <= budget; ++i) {
    cur[slot] = i;
    enumerate_rec(slot + 1, budget - i * step, p, degs, cur, out);
  }
  cur[slot] = 0;
}

}  // namespace

DegreeDivisibility classify_degrees(unsigned p,
                                    const std::vector<unsigned>& degs) {
  require_prime(p);
  require_degrees(degs);
  for (unsigned d : degs)
    if (d % p != 0) return DegreeDivisibility::some_coprime;
  return DegreeDivisibility::all_divisible;
}

unsigned MainthParams::d() const {
  unsigned s = 0;
  for (unsigned v : degs) s += v;
  return s;
}

Rounded cyclotomic_disc_log(unsigned p, unsigned prec) {
  require_prime(p);
  if (p == 2) return Rounded::exact_ui(0, prec);
  return Rounded::exact_ui(p - 2, prec) * Rounded::log_of(mpz_class(p), prec);
}

std::vector<std::vector<unsigned>> monomial_exponents(
    unsigned delta, unsigned p, const std::vector<unsigned>& degs) {
  require_prime(p);
  require_degrees(degs);
  std::vector<std::vector<unsigned>> out;
  std::vector<unsigned> cur(degs.size() + 1, 0);
  enumerate_rec(0, delta, p, degs, cur, out);
  return out;
}

mpz_class monomial_count_closed(unsigned delta, unsigned p,
                                const std::vector<unsigned>& degs) {
  DegreeDivisibility kind = classify_degrees(p, degs);
  unsigned d = 0;
  for (unsigned v : degs) d += v;
  unsigned r = static_cast<unsigned>(degs.size());
  mpz_class sheets = pow_z(p, r - 1);
  mpq_class count;
  if (kind == DegreeDivisibility::some_coprime) {
    // p^(r-1) (delta + 1 - (p-1)(d-1)/2), valid once every residue of the
    // weight filtration is populated.
    long validity = static_cast<long>(p - 1) * (static_cast<long>(d) - 1) - 1;
    if (static_cast<long>(delta) < validity)
      throw std::domain_error("vanishing degree below closed-form range");
    count = mpq_class(delta + 1) -
            as_q(mpz_class(p - 1) * (static_cast<long>(d) - 1), 2);
  } else {
    // All weights are multiples of p, so only floor(delta/p) matters.
    unsigned long block = static_cast<unsigned long>(p) * (delta / p);
    long validity = static_cast<long>(p - 1) * (static_cast<long>(d) - 2) - 1;
    if (static_cast<long>(block) < validity)
      throw std::domain_error("vanishing degree below closed-form range");
    count = mpq_class(block + 1) -
            as_q(mpz_class(p - 1) * (static_cast<long>(d) - 2), 2);
  }
  count *= mpq_class(sheets);
  mpq_class canon = count;
  canon.canonicalize();
  if (canon.get_den() != 1)
    throw std::logic_error("monomial count not integral");
  return canon.get_num();
}

mpz_class curve_genus(unsigned p, const std::vector<unsigned>& degs) {
  DegreeDivisibility kind = classify_degrees(p, degs);
  unsigned d = 0;
  for (unsigned v : degs) d += v;
  unsigned r = static_cast<unsigned>(degs.size());
  // Riemann-Hurwitz on the degree-p^r cover: every root of some factor
  // ramifies fully; infinity ramifies unless every degree splits.
  long shifted = kind == DegreeDivisibility::some_coprime
                     ? static_cast<long>(d) - 1
                     : static_cast<long>(d) - 2;
  mpq_class inner = as_q(mpz_class(p - 1) * shifted, 2) - 1;
  mpq_class g = mpq_class(pow_z(p, r - 1)) * inner + 1;
  g.canonicalize();
  if (g.get_den() != 1) throw std::logic_error("genus not integral");
  return g.get_num();
}

unsigned auxiliary_degree(const MainthParams& params) {
  unsigned p = params.p;
  DegreeDivisibility kind = classify_degrees(p, params.degs);
  unsigned d = params.d(), r = params.r(), t = params.t;
  if (t == 0) throw std::invalid_argument("no places to spread over branches");
  mpz_class sheets = pow_z(p, r - 1);
  mpz_class limit = kind == DegreeDivisibility::some_coprime
                        ? sheets
                        : mpz_class(sheets * p);
  if (mpz_class(t) >= limit)
    throw std::invalid_argument("too many places for the sheet count");
  long shifted = kind == DegreeDivisibility::some_coprime
                     ? static_cast<long>(p - 1) * (static_cast<long>(d) - 1) - 2
                     : static_cast<long>(p - 1) * (static_cast<long>(d) - 2) - 2;
  mpz_class num = sheets * shifted + t + 2;
  mpz_class den = limit - t;
  mpz_class delta;
  mpz_cdiv_q(delta.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  if (delta < 0) delta = 0;
  unsigned dl = static_cast<unsigned>(delta.get_ui());

  // The choice must land inside the closed-form range and leave the
  // vanishing system strictly underdetermined.
  unsigned count_at = kind == DegreeDivisibility::some_coprime ? dl : p * dl;
  mpz_class m = monomial_count_closed(count_at, p, params.degs);
  if (mpz_class(dl + 1) * t >= m)
    throw std::logic_error("vanishing degree fails to underdetermine");
  return dl;
}

MainHeightBound main_height_bound(const MainthParams& params, unsigned prec) {
  if (prec == 0) prec = default_precision();
  unsigned p = params.p, t = params.t, d = params.d(), r = params.r();
  if (params.B <= 0) throw std::invalid_argument("height product must be positive");
  DegreeDivisibility kind = params.kind();

  MainHeightBound out;
  out.delta = auxiliary_degree(params);
  unsigned long dl = out.delta;
  unsigned count_at = kind == DegreeDivisibility::some_coprime
                          ? out.delta
                          : p * out.delta;
  out.monomials = monomial_count_closed(count_at, p, params.degs);
  const mpz_class& m = out.monomials;

  Rounded log2 = Rounded::log_of(mpz_class(2), prec);
  Rounded logp = Rounded::log_of(mpz_class(p), prec);
  Rounded logm = Rounded::log_of(m, prec);
  Rounded logB = Rounded::log_of(params.B, prec);

  mpz_class c2, cp, cB;
  mpq_class cdisc, cm;
  if (kind == DegreeDivisibility::some_coprime) {
    cdisc = as_q(m * p, 2 * mpz_class(p - 1));
    c2 = mpz_class(dl + 1) * (mpz_class(dl) * t + 1) + 2 * p;
    cp = mpz_class(dl + 1) *
         (mpz_class(t) * (2 * static_cast<long>(dl) - p) + 2);
    cm = mpq_class(p) * (as_q(mpz_class(dl + 1) * t, 2) + 1);
    cB = mpz_class(dl) * (dl + 1) * t + 2 * dl + 1;
  } else {
    cdisc = as_q(m, 2 * mpz_class(p - 1));
    c2 = mpz_class(dl + 1) * (mpz_class(dl) * t + 1) + 1;
    cp = mpz_class(dl + 1) *
         (mpz_class(t) * (2 * static_cast<long>(dl) - 1) + 2);
    cm = as_q(mpz_class(dl + 1) * t, 2) + 1;
    cB = mpz_class(dl) * (dl + 1) * t + 2 * dl + 1;
  }
  out.sharp.log_value = Rounded::exact(cdisc, prec) * params.disc_log +
                        Rounded::exact(c2, prec) * log2 +
                        Rounded::exact(cp, prec) * logp +
                        Rounded::exact(cm, prec) * logm +
                        Rounded::exact(cB, prec) * logB;
  out.sharp.provenance = "assembled factor bound";

  mpz_class sd = mpz_class(d) * pow_z(p, 2ul * r);
  mpz_class se = mpz_class(d) * d * pow_z(p, 3ul * r);
  mpq_class arg = mpq_class(2 * mpz_class(d) * p * p * p) * params.B;
  out.simplified.log_value = Rounded::exact(sd, prec) * params.disc_log +
                             Rounded::exact(se, prec) *
                                 Rounded::log_of(arg, prec);
  out.simplified.provenance = "rounded-up closed form";

  if (!out.sharp.log_value.certainly_le(out.simplified.log_value))
    throw std::logic_error("sharp bound not certified below simplified form");
  return out;
}

SuperellipticBound superelliptic_bound(unsigned p,
                                       const std::vector<RationalPoly>& gs,
                                       unsigned n_power, unsigned omega_aDf,
                                       const mpz_class& S_size,
                                       const Rounded& disc_log,
                                       unsigned prec) {
  if (prec == 0) prec = default_precision();
  require_prime(p);
  if (gs.empty()) throw std::invalid_argument("empty factor list");
  if (n_power == 0 || n_power % p == 0)
    throw std::invalid_argument("inner power must be nonzero away from p");
  if (S_size < 1) throw std::invalid_argument("place set must be nonempty");
  if (!pairwise_coprime_squarefree(gs))
    throw std::invalid_argument("factors must be coprime and squarefree");
  unsigned r = static_cast<unsigned>(gs.size());
  unsigned dprime = 0;
  bool all_div = true;
  for (const RationalPoly& g : gs) {
    if (g.degree() < 1) throw std::invalid_argument("constant factor");
    unsigned dg = static_cast<unsigned>(g.degree());
    dprime += dg;
    if ((static_cast<unsigned long>(n_power) * dg) % p != 0) all_div = false;
  }
  unsigned long dtot = static_cast<unsigned long>(n_power) * dprime;

  SuperellipticBound out;
  if (all_div)
    out.epsilon = 0;
  else if (dtot % p != 0)
    out.epsilon = 1;
  else
    out.epsilon = 2;

  // omega + 1 + log_p |S| + eps < r, decided as |S| < p^(r-1-omega-eps).
  long e = static_cast<long>(r) - 1 - static_cast<long>(omega_aDf) -
           static_cast<long>(out.epsilon);
  out.condition = e > 0 && S_size < pow_z(p, static_cast<unsigned long>(e));

  mpz_class hprod = 1;
  for (const RationalPoly& g : gs) hprod *= poly_height(g).height;
  mpz_class c1 = mpz_class(dprime) * pow_z(p, 2ul * r);
  mpz_class c2 = mpz_class(dprime) * dprime * pow_z(p, 3ul * r);
  mpz_class arg = 4 * mpz_class(dprime) * p * p * p * hprod;
  out.bound.log_value = Rounded::exact(c1, prec) * disc_log +
                        Rounded::exact(c2, prec) * Rounded::log_of(arg, prec);
  out.bound.provenance = "radical factor bound";
  return out;
}

OmegaCutoff pfree_omega_cutoff(unsigned p,
                               const std::vector<RationalPoly>& fs,
                               unsigned prec) {
  if (prec == 0) prec = default_precision();
  require_prime(p);
  if (fs.empty()) throw std::invalid_argument("empty factor list");
  if (!pairwise_coprime_squarefree(fs))
    throw std::invalid_argument("factors must be coprime and squarefree");
  unsigned r = static_cast<unsigned>(fs.size());
  unsigned d = 0;
  bool all_div = true;
  mpz_class h = 1;
  for (const RationalPoly& f : fs) {
    if (f.degree() < 1) throw std::invalid_argument("constant factor");
    d += static_cast<unsigned>(f.degree());
    if (f.degree() % p != 0) all_div = false;
    mpz_class hf = poly_height(f).height;
    if (hf > h) h = hf;
  }
  OmegaCutoff out;
  out.target = all_div ? r : r - 1;
  mpz_class c = 2 * mpz_class(d) * d * pow_z(p, r + 1ul);
  mpz_class arg = 8 * mpz_class(d) * p * p * p * h;
  out.cutoff.log_value = Rounded::exact(c, prec) * Rounded::log_of(arg, prec);
  out.cutoff.provenance = "prime-divisor cutoff";
  return out;
}

ProgressionBound progression_square_bound(unsigned k, unsigned r, unsigned p,
                                          const mpz_class& b,
                                          unsigned omega_d, unsigned prec) {
  if (prec == 0) prec = default_precision();
  require_prime(p);
  if (k < 2 || r == 0) throw std::invalid_argument("need k >= 2 and r >= 1");
  if (b == 0) throw std::invalid_argument("zero progression coefficient");

  mpz_class fact;
  mpz_fac_ui(fact.get_mpz_t(), k - 1);
  unsigned omega0 = factorize(mpz_class(fact * abs(b))).omega();
  mpz_class phi2p = euler_phi(mpz_class(2) * p);

  // omega0 + 1 + log_p(phi(2p)(p/2 + omega(d))) < r, cleared of halves:
  // phi(2p)(p + 2 omega(d)) < 2 p^(r-1-omega0).
  long e = static_cast<long>(r) - 1 - static_cast<long>(omega0);
  ProgressionBound out;
  out.condition =
      e >= 0 && phi2p * (p + 2 * mpz_class(omega_d)) <
                    2 * pow_z(p, static_cast<unsigned long>(e));

  mpz_class c = pow_z(p, 3ul * r) * r * r;
  mpz_class arg = 2 * mpz_class(k) * p * p * p * p * r;
  out.bound.log_value = Rounded::exact(c, prec) * Rounded::log_of(arg, prec);
  out.bound.provenance = "progression block bound";
  return out;
}

unsigned omega_quadratic(const mpz_class& n, const mpz_class& m) {
  if (m == 0 || m == 1) throw std::invalid_argument("not a quadratic field");
  unsigned count = 0;
  FactoredInteger fn = factorize(n);
  for (const PrimePower& pp : fn.factors()) {
    const mpz_class& q = pp.prime;
    bool split;
    if (q == 2) {
      split = mpz_fdiv_ui(m.get_mpz_t(), 8) == 1;
    } else if (mpz_divisible_p(m.get_mpz_t(), q.get_mpz_t())) {
      split = false;  // ramified
    } else {
      split = mpz_kronecker(m.get_mpz_t(), q.get_mpz_t()) == 1;
    }
    count += split ? 2 : 1;
  }
  return count;
}

ProgressionBound progression_square_bound_quadratic(unsigned k, unsigned r,
                                                    const mpz_class& m,
                                                    const mpz_class& b,
                                                    unsigned omega_L_d,
                                                    unsigned prec) {
  if (prec == 0) prec = default_precision();
  if (k < 2 || r == 0) throw std::invalid_argument("need k >= 2 and r >= 1");
  if (b == 0) throw std::invalid_argument("zero progression coefficient");
  if (m == 0 || m == 1) throw std::invalid_argument("not a quadratic field");
  FactoredInteger mf = factorize(m);
  for (const PrimePower& pp : mf.factors())
    if (pp.exponent > 1)
      throw std::invalid_argument("field discriminant part must be squarefree");

  mpz_class fact;
  mpz_fac_ui(fact.get_mpz_t(), k - 1);
  unsigned omega0 = omega_quadratic(mpz_class(fact * abs(b)), m);
  unsigned omega_m = mf.omega();

  // omega_L((k-1)! b) + omega(m) + log2(omega_L(d) + 2) + 4 < r, i.e.
  // omega_L(d) + 2 < 2^(r - 4 - omega_L((k-1)!b) - omega(m)).
  long e = static_cast<long>(r) - 4 - static_cast<long>(omega0) -
           static_cast<long>(omega_m);
  ProgressionBound out;
  out.condition = e > 0 && mpz_class(omega_L_d) + 2 <
                               pow_z(2, static_cast<unsigned long>(e));

  mpz_class c = pow_z(2, 3ul * r) * r * r;
  mpz_class arg = 16 * mpz_class(k) * r;
  out.bound.log_value = Rounded::exact(c, prec) * Rounded::log_of(arg, prec);
  out.bound.provenance = "quadratic progression bound";
  return out;
}

mpz_class max_omega_d(unsigned k, unsigned r, unsigned eps) {
  if (k < 2) throw std::invalid_argument("need k >= 2");
  long e = static_cast<long>(r) -
           static_cast<long>(prime_pi(k - 1)) -
           static_cast<long>(eps);
  if (e <= 0) return mpz_class(-1);
  return mpz_class(pow_z(2, static_cast<unsigned long>(e)) - 3);
}

std::vector<OmegaTableRow> solvable_omega_table(unsigned k) {
  std::vector<OmegaTableRow> out;
  for (unsigned psi = 0; psi < k; ++psi) {
    unsigned r = k - psi;
    mpz_class w1 = max_omega_d(k, r, 1);
    if (w1 >= 1) {
      out.push_back({psi, w1.get_si()});
    } else if (max_omega_d(k, r, 0) >= 0) {
      out.push_back({psi, 0});  // only coefficient-free progressions remain
    } else {
      break;
    }
  }
  return out;
}

long large_prime_divisor_count(unsigned k, unsigned omega_d, unsigned eps) {
  if (k < 2) throw std::invalid_argument("need k >= 2");
  unsigned long w2 = static_cast<unsigned long>(omega_d) + 2;
  long lg = static_cast<long>(mpz_sizeinbase(mpz_class(w2).get_mpz_t(), 2)) - 1;
  return static_cast<long>(k) -
         static_cast<long>(prime_pi(k - 1)) -
         static_cast<long>(eps) - lg;
}

LogBound siegel_lemma_bound(const mpz_class& n_cols, const mpz_class& rank,
                            const Rounded& log_HA, const Rounded& disc_log,
                            unsigned field_degree, unsigned prec) {
  if (prec == 0) prec = default_precision();
  if (n_cols < 1 || rank < 0 || rank > n_cols || field_degree == 0)
    throw std::invalid_argument("bad system shape");
  LogBound out;
  mpq_class cdisc = as_q(n_cols - rank, 2 * mpz_class(field_degree));
  Rounded half_log_n =
      Rounded::exact(mpq_class(1, 2), prec) * Rounded::log_of(n_cols, prec);
  out.log_value = Rounded::exact(cdisc, prec) * disc_log +
                  Rounded::exact(mpq_class(rank), prec) * (half_log_n + log_HA);
  out.provenance = "small nullspace vector";
  return out;
}

}  // namespace rungekit
