#include "rungekit/puiseux.hpp"

#include <stdexcept>

#include "rungekit/integer_fns.hpp"

namespace rungekit {
namespace {

// Dense power series in u = 1/x over Q, truncated to a working length.
using SeriesQ = std::vector<mpq_class>;

SeriesQ mul_trunc(const SeriesQ& a, const SeriesQ& b, std::size_t n) {
  SeriesQ out(n, 0);
  for (std::size_t i = 0; i < a.size() && i < n; ++i) {
    if (a[i] == 0) continue;
    std::size_t jmax = std::min(b.size(), n - i);
    for (std::size_t j = 0; j < jmax; ++j) {
      if (b[j] == 0) continue;
      out[i + j] += a[i] * b[j];
    }
  }
  return out;
}

SeriesQ pow_trunc(const SeriesQ& a, unsigned e, std::size_t n) {
  SeriesQ out(1, 1);
  for (unsigned i = 0; i < e; ++i) out = mul_trunc(out, a, n);
  return out;
}

// Newton inversion: b <- b * (2 - a*b), doubling correct length.
SeriesQ inverse_trunc(const SeriesQ& a, std::size_t n) {
  if (a.empty() || a[0] == 0)
    throw std::domain_error("series inverse: zero constant term");
  SeriesQ b{1 / a[0]};
  for (std::size_t len = 1; len < n;) {
    len = std::min(2 * len, n);
    SeriesQ ab = mul_trunc(a, b, len);
    SeriesQ two_minus(len, 0);
    two_minus[0] = 2;
    for (std::size_t i = 0; i < len; ++i) two_minus[i] -= ab[i];
    b = mul_trunc(b, two_minus, len);
  }
  return b;
}

// g with g^p = T to O(u^n), T(0) = 1, by g <- g - (g^p - T)/(p g^(p-1)).
SeriesQ pth_root_trunc(const SeriesQ& T, unsigned p, std::size_t n) {
  SeriesQ g{1};
  for (std::size_t len = 1; len < n;) {
    len = std::min(2 * len, n);
    SeriesQ gpm1 = pow_trunc(g, p - 1, len);
    SeriesQ gp = mul_trunc(gpm1, g, len);
    SeriesQ num(len, 0);
    for (std::size_t i = 0; i < len; ++i) {
      num[i] = gp[i];
      if (i < T.size()) num[i] -= T[i];
    }
    SeriesQ den = gpm1;
    for (auto& v : den) v *= p;
    SeriesQ delta = mul_trunc(num, inverse_trunc(den, len), len);
    g.resize(len, 0);
    for (std::size_t i = 0; i < len; ++i) g[i] -= delta[i];
  }
  g.resize(n, 0);
  return g;
}

}  // namespace

PuiseuxSeries expand_pth_root(const RationalPoly& f, unsigned p,
                              unsigned n_terms) {
  if (!is_prime(mpz_class(p)))
    throw std::invalid_argument("expand_pth_root: p must be prime");
  if (f.is_zero() || !f.is_monic())
    throw std::invalid_argument("expand_pth_root: f must be monic");
  long d = f.degree();
  // T(u) = u^d f(1/u) = 1 + c_(d-1) u + ... + c_0 u^d.
  SeriesQ T(static_cast<std::size_t>(d) + 1, 0);
  for (long i = 0; i <= d; ++i) T[d - i] = f.coeff(i);
  SeriesQ g = pth_root_trunc(T, p, n_terms + 1);

  PuiseuxSeries out;
  out.p = p;
  out.lead_num = d;
  out.coeffs.reserve(n_terms + 1);
  for (const auto& c : g) out.coeffs.emplace_back(p, c);
  return out;
}

PuiseuxSeries branch(const PuiseuxSeries& s, unsigned j) {
  CycloNumber z = CycloNumber::zeta_power(s.p, j);
  PuiseuxSeries out;
  out.p = s.p;
  out.lead_num = s.lead_num;
  out.coeffs.reserve(s.coeffs.size());
  for (const auto& c : s.coeffs) out.coeffs.push_back(c * z);
  return out;
}

PuiseuxSeries series_product(const PuiseuxSeries& a, const PuiseuxSeries& b) {
  if (a.p != b.p)
    throw std::invalid_argument("series_product: mixed root orders");
  if (a.coeffs.size() != b.coeffs.size())
    throw std::invalid_argument("series_product: inconsistent truncations");
  PuiseuxSeries out;
  out.p = a.p;
  out.lead_num = a.lead_num + b.lead_num;
  out.coeffs.assign(a.coeffs.size(), CycloNumber(a.p));
  for (std::size_t i = 0; i < a.coeffs.size(); ++i) {
    if (a.coeffs[i].is_zero()) continue;
    for (std::size_t j = 0; i + j < b.coeffs.size(); ++j) {
      if (b.coeffs[j].is_zero()) continue;
      out.coeffs[i + j] = out.coeffs[i + j] + a.coeffs[i] * b.coeffs[j];
    }
  }
  return out;
}

PuiseuxSeries monomial_series_from(unsigned i0,
                                   const std::vector<unsigned>& exps,
                                   const std::vector<PuiseuxSeries>& ys) {
  if (exps.size() != ys.size())
    throw std::invalid_argument("monomial_series: exponent/factor mismatch");
  if (ys.empty())
    throw std::invalid_argument("monomial_series: no factors");
  unsigned p = ys[0].p;
  std::size_t len = ys[0].coeffs.size();
  PuiseuxSeries acc;
  acc.p = p;
  acc.lead_num = static_cast<long>(p) * static_cast<long>(i0);
  acc.coeffs.assign(len, CycloNumber(p));
  acc.coeffs[0] = CycloNumber(p, 1);
  for (std::size_t l = 0; l < ys.size(); ++l)
    for (unsigned e = 0; e < exps[l]; ++e) acc = series_product(acc, ys[l]);
  return acc;
}

PuiseuxSeries monomial_series(unsigned i0, const std::vector<unsigned>& exps,
                              const std::vector<RationalPoly>& fs,
                              const BranchAssignment& branches, unsigned p,
                              unsigned n_terms) {
  if (fs.size() != exps.size() || fs.size() != branches.size())
    throw std::invalid_argument("monomial_series: length mismatch");
  std::vector<PuiseuxSeries> ys;
  ys.reserve(fs.size());
  for (std::size_t l = 0; l < fs.size(); ++l)
    ys.push_back(branch(expand_pth_root(fs[l], p, n_terms), branches[l]));
  return monomial_series_from(i0, exps, ys);
}

bool check_integrality(const PuiseuxSeries& s) {
  // p^(2k-1) a_k must land in Z[zeta_p] for every k >= 1.
  mpz_class scale = s.p;  // p^(2k-1) tracked incrementally
  mpz_class p2 = mpz_class(s.p) * s.p;
  for (std::size_t k = 1; k < s.coeffs.size(); ++k) {
    if (!s.coeffs[k].scaled(mpq_class(scale)).is_integral()) return false;
    scale *= p2;
  }
  return true;
}

ConvergenceThreshold convergence_threshold(const RationalPoly& f, unsigned p) {
  (void)p;
  mpq_class sup = 0;
  for (const auto& c : f.coeffs()) {
    mpq_class a = abs(c);
    if (a > sup) sup = a;
  }
  ConvergenceThreshold out;
  out.archimedean = true;
  out.abs_bound = sup + 1;
  return out;
}

ConvergenceThreshold convergence_threshold(const RationalPoly& f, unsigned p,
                                           const mpz_class& q) {
  (void)f;
  if (!is_prime(q))
    throw std::invalid_argument("convergence_threshold: q must be prime");
  ConvergenceThreshold out;
  out.archimedean = false;
  out.q = q;
  // |x|_q > 1/|p|_q^2: strict valuation bound, only tightened at q = p.
  out.max_valuation = (q == p) ? -2 : 0;
  return out;
}

}  // namespace rungekit
