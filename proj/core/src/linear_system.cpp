#include "rungekit/linear_system.hpp"

#include <algorithm>
#include <stdexcept>

namespace rungekit {

namespace {

void require_assignment(const BranchAssignment& a, unsigned p,
                        std::size_t r) {
  if (a.size() != r) throw std::invalid_argument("branch assignment length");
  for (unsigned j : a)
    if (j >= p) throw std::invalid_argument("branch index out of range");
}

// Trace from Q(zeta_p) down to Q: Tr(1) = p-1, Tr(zeta^j) = -1 else.
mpq_class trace(const CycloNumber& a) {
  const std::vector<mpq_class>& c = a.coords();
  mpq_class t = mpq_class(a.order() - 1) * c[0];
  for (std::size_t j = 1; j < c.size(); ++j) t -= c[j];
  return t;
}

CycloNumber conjugate(const CycloNumber& a) {
  unsigned p = a.order();
  CycloNumber out(p);
  const std::vector<mpq_class>& c = a.coords();
  for (std::size_t j = 0; j < c.size(); ++j)
    out = out + CycloNumber::zeta_power(p, -static_cast<long>(j)).scaled(c[j]);
  return out;
}

// Running bracket for sup_{embeddings} |entry| over a set of entries.
struct SupBracket {
  mpq_class hi = 0;      // coordinate 1-norm dominates every embedding
  mpq_class lo_sq = 0;   // mean square of the conjugates is a lower bound
  bool any = false;

  void absorb(const CycloNumber& a) {
    if (a.is_zero()) return;
    any = true;
    mpq_class norm1 = 0;
    for (const mpq_class& c : a.coords()) norm1 += abs(c);
    if (norm1 > hi) hi = norm1;
    mpq_class ms = trace(a * conjugate(a)) / (a.order() - 1);
    if (ms > lo_sq) lo_sq = ms;
  }

  Rounded interval(unsigned prec) const {
    if (!any) throw std::invalid_argument("height of a zero matrix");
    return Rounded::hull(Rounded::exact(lo_sq, prec).sqrt_nonneg(),
                         Rounded::exact(hi, prec));
  }
};

}  // namespace

BranchAssignment canonical_branch(const BranchAssignment& a, unsigned p,
                                  const std::vector<unsigned>& degs) {
  if (a.size() != degs.size())
    throw std::invalid_argument("branch assignment length");
  require_assignment(a, p, degs.size());
  BranchAssignment best = a;
  BranchAssignment cand(a.size());
  for (unsigned c = 1; c < p; ++c) {
    for (std::size_t l = 0; l < a.size(); ++l)
      cand[l] = (a[l] + c * degs[l]) % p;
    if (cand < best) best = cand;
  }
  return best;
}

std::vector<BranchAssignment> branch_classes(
    unsigned p, const std::vector<unsigned>& degs) {
  if (degs.empty()) throw std::invalid_argument("empty degree list");
  std::vector<BranchAssignment> out;
  BranchAssignment cur(degs.size(), 0);
  for (;;) {
    if (canonical_branch(cur, p, degs) == cur) out.push_back(cur);
    // odometer, last index fastest
    std::size_t l = cur.size();
    while (l > 0 && ++cur[l - 1] == p) cur[--l] = 0;
    if (l == 0) break;
  }
  return out;
}

BranchMatrix build_branch_matrix(const std::vector<RationalPoly>& fs,
                                 unsigned p, unsigned delta,
                                 const std::vector<BranchAssignment>& places) {
  if (fs.empty()) throw std::invalid_argument("empty factor list");
  if (places.empty()) throw std::invalid_argument("no vanishing places");
  if (!pairwise_coprime_squarefree(fs))
    throw std::invalid_argument("factors must be coprime and squarefree");
  std::vector<unsigned> degs;
  for (const RationalPoly& f : fs) {
    if (!f.is_monic() || f.degree() < 1)
      throw std::invalid_argument("factors must be monic and nonconstant");
    degs.push_back(static_cast<unsigned>(f.degree()));
  }

  BranchMatrix out;
  out.p = p;
  out.delta = delta;
  out.degs = degs;
  out.monomials = monomial_exponents(delta, p, degs);

  // distinct points at infinity only: quotient by the deck rotation
  std::vector<BranchAssignment> unique_places;
  for (const BranchAssignment& js : places) {
    require_assignment(js, p, fs.size());
    BranchAssignment canon = canonical_branch(js, p, degs);
    bool seen = false;
    for (const BranchAssignment& u : unique_places)
      if (canonical_branch(u, p, degs) == canon) {
        seen = true;
        break;
      }
    if (!seen) unique_places.push_back(js);
  }

  unsigned n_terms = delta / p + 1;
  std::vector<PuiseuxSeries> principal;
  principal.reserve(fs.size());
  for (const RationalPoly& f : fs)
    principal.push_back(expand_pth_root(f, p, n_terms));

  for (const BranchAssignment& js : unique_places) {
    out.places.push_back(js);
    std::vector<PuiseuxSeries> ys;
    ys.reserve(fs.size());
    for (std::size_t l = 0; l < fs.size(); ++l)
      ys.push_back(branch(principal[l], js[l]));

    std::vector<std::vector<CycloNumber>> block(
        delta + 1, std::vector<CycloNumber>(out.monomials.size(),
                                            CycloNumber(p)));
    for (std::size_t col = 0; col < out.monomials.size(); ++col) {
      const std::vector<unsigned>& mu = out.monomials[col];
      std::vector<unsigned> exps(mu.begin() + 1, mu.end());
      PuiseuxSeries s = monomial_series_from(mu[0], exps, ys);
      for (unsigned e = 0; e <= delta; ++e) {
        long num = s.lead_num - static_cast<long>(e);
        if (num < 0 || num % p != 0) continue;
        unsigned long k = static_cast<unsigned long>(num) / p;
        if (k > s.truncation()) continue;
        block[e][col] = s.coeffs[k];
      }
    }
    for (std::vector<CycloNumber>& row : block)
      out.rows.push_back(std::move(row));
  }
  return out;
}

std::vector<std::vector<CycloNumber>> primitive_rows(
    std::vector<std::vector<CycloNumber>> rows) {
  for (std::vector<CycloNumber>& row : rows) {
    mpz_class den = 1;
    for (const CycloNumber& a : row)
      for (const mpq_class& c : a.coords())
        mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den().get_mpz_t());
    mpz_class content = 0;
    for (const CycloNumber& a : row)
      for (const mpq_class& c : a.coords())
        mpz_gcd(content.get_mpz_t(), content.get_mpz_t(),
                mpz_class(c * den).get_mpz_t());
    if (content == 0) continue;  // zero row
    mpq_class scale = mpq_class(den) / content;
    for (CycloNumber& a : row) a = a.scaled(scale);
  }
  return rows;
}

NullspaceResult cyclotomic_nullspace(std::vector<std::vector<CycloNumber>> rows,
                                     unsigned p) {
  std::size_t ncols = rows.empty() ? 0 : rows[0].size();
  for (const std::vector<CycloNumber>& row : rows)
    if (row.size() != ncols) throw std::invalid_argument("ragged matrix");
  rows = primitive_rows(std::move(rows));

  NullspaceResult out;
  CycloNumber prev(p, 1);
  for (std::size_t col = 0; col < ncols; ++col) {
    std::size_t pivot = rows.size();
    for (std::size_t i = out.rank; i < rows.size(); ++i) {
      if (rows[i][col].is_zero()) continue;
      if (pivot == rows.size() ||
          rows[i][col].coord_height() < rows[pivot][col].coord_height())
        pivot = i;
    }
    if (pivot == rows.size()) continue;
    std::swap(rows[out.rank], rows[pivot]);
    const std::vector<CycloNumber>& prow = rows[out.rank];
    for (std::size_t i = out.rank + 1; i < rows.size(); ++i) {
      if (rows[i][col].is_zero()) continue;
      CycloNumber factor = rows[i][col];
      for (std::size_t j = col + 1; j < ncols; ++j)
        rows[i][j] =
            (prow[col] * rows[i][j] - factor * prow[j]) / prev;
      rows[i][col] = CycloNumber(p);
    }
    prev = prow[col];
    out.pivot_columns.push_back(col);
    ++out.rank;
  }

  std::vector<bool> is_pivot(ncols, false);
  for (std::size_t c : out.pivot_columns) is_pivot[c] = true;
  for (std::size_t f = 0; f < ncols; ++f) {
    if (is_pivot[f]) continue;
    std::vector<CycloNumber> v(ncols, CycloNumber(p));
    v[f] = CycloNumber(p, 1);
    for (std::size_t ii = out.rank; ii-- > 0;) {
      std::size_t pc = out.pivot_columns[ii];
      CycloNumber acc(p);
      for (std::size_t j = pc + 1; j < ncols; ++j)
        if (!v[j].is_zero()) acc = acc + rows[ii][j] * v[j];
      v[pc] = -acc / rows[ii][pc];
    }

    // integral, content one, leading rational coordinate positive
    mpz_class den = 1;
    for (const CycloNumber& a : v)
      for (const mpq_class& c : a.coords())
        mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den().get_mpz_t());
    mpz_class content = 0;
    for (const CycloNumber& a : v)
      for (const mpq_class& c : a.coords())
        mpz_gcd(content.get_mpz_t(), content.get_mpz_t(),
                mpz_class(c * den).get_mpz_t());
    mpq_class scale = mpq_class(den) / content;
    for (const CycloNumber& a : v) {
      bool found = false;
      for (const mpq_class& c : a.coords())
        if (c != 0) {
          if (c < 0) scale = -scale;
          found = true;
          break;
        }
      if (found) break;
    }
    for (CycloNumber& a : v) a = a.scaled(scale);
    out.basis.push_back(std::move(v));
  }
  return out;
}

bool verify_vanishing(const BranchMatrix& a,
                      const std::vector<CycloNumber>& v) {
  if (v.size() != a.monomials.size())
    throw std::invalid_argument("vector length mismatch");
  for (const std::vector<CycloNumber>& row : a.rows) {
    CycloNumber acc(a.p);
    for (std::size_t j = 0; j < v.size(); ++j)
      if (!v[j].is_zero() && !row[j].is_zero()) acc = acc + row[j] * v[j];
    if (!acc.is_zero()) return false;
  }
  return true;
}

std::vector<AuxFunction> aux_functions(const BranchMatrix& a) {
  NullspaceResult ns = cyclotomic_nullspace(a.rows, a.p);
  std::vector<AuxFunction> out;
  out.reserve(ns.basis.size());
  for (std::vector<CycloNumber>& v : ns.basis) {
    AuxFunction g;
    g.p = a.p;
    g.delta = a.delta;
    g.monomials = a.monomials;
    g.coeffs = std::move(v);
    out.push_back(std::move(g));
  }
  return out;
}

bool verify_aux(const AuxFunction& g, const std::vector<RationalPoly>& fs,
                const std::vector<BranchAssignment>& places, unsigned depth) {
  if (depth <= g.delta)
    throw std::invalid_argument("verification depth does not cover delta");
  if (g.monomials.size() != g.coeffs.size())
    throw std::invalid_argument("coefficient count mismatch");
  std::vector<PuiseuxSeries> principal;
  for (const RationalPoly& f : fs)
    principal.push_back(expand_pth_root(f, g.p, depth));
  for (const BranchAssignment& js : places) {
    require_assignment(js, g.p, fs.size());
    std::vector<PuiseuxSeries> ys;
    for (std::size_t l = 0; l < fs.size(); ++l)
      ys.push_back(branch(principal[l], js[l]));
    // accumulate the combination's coefficients at exponents >= 0
    std::vector<CycloNumber> acc;
    for (std::size_t col = 0; col < g.monomials.size(); ++col) {
      if (g.coeffs[col].is_zero()) continue;
      const std::vector<unsigned>& mu = g.monomials[col];
      std::vector<unsigned> exps(mu.begin() + 1, mu.end());
      PuiseuxSeries s = monomial_series_from(mu[0], exps, ys);
      for (unsigned k = 0; k <= s.truncation(); ++k) {
        long e = s.exponent_num(k);
        if (e < 0) break;
        if (acc.size() <= static_cast<std::size_t>(e))
          acc.resize(e + 1, CycloNumber(g.p));
        acc[e] = acc[e] + g.coeffs[col] * s.coeffs[k];
      }
    }
    for (const CycloNumber& c : acc)
      if (!c.is_zero()) return false;
  }
  return true;
}

CycloNumber evaluate_aux(const AuxFunction& g, const mpq_class& x,
                         const std::vector<mpq_class>& ys) {
  CycloNumber acc(g.p);
  for (std::size_t col = 0; col < g.monomials.size(); ++col) {
    if (g.coeffs[col].is_zero()) continue;
    const std::vector<unsigned>& mu = g.monomials[col];
    if (mu.size() != ys.size() + 1)
      throw std::invalid_argument("root value count mismatch");
    mpq_class term = 1;
    for (unsigned e = 0; e < mu[0]; ++e) term *= x;
    for (std::size_t l = 0; l < ys.size(); ++l)
      for (unsigned e = 0; e < mu[l + 1]; ++e) term *= ys[l];
    acc = acc + g.coeffs[col].scaled(term);
  }
  return acc;
}

MatrixHeightReport matrix_height(const BranchMatrix& a, const mpq_class& B,
                                 unsigned prec) {
  if (prec == 0) prec = default_precision();
  if (B < 1) throw std::invalid_argument("coefficient bound below one");
  // clear the whole entry vector to integral coordinates, content one
  mpz_class den = 1;
  for (const std::vector<CycloNumber>& row : a.rows)
    for (const CycloNumber& e : row)
      for (const mpq_class& c : e.coords())
        mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den().get_mpz_t());
  mpz_class content = 0;
  for (const std::vector<CycloNumber>& row : a.rows)
    for (const CycloNumber& e : row)
      for (const mpq_class& c : e.coords())
        mpz_gcd(content.get_mpz_t(), content.get_mpz_t(),
                mpz_class(c * den).get_mpz_t());
  if (content == 0) throw std::invalid_argument("height of a zero matrix");
  mpq_class scale = mpq_class(den) / content;

  mpq_class max_norm = 0, max_onenorm = 0;
  for (const std::vector<CycloNumber>& row : a.rows)
    for (const CycloNumber& e : row) {
      if (e.is_zero()) continue;
      CycloNumber cleared = e.scaled(scale);
      mpq_class n = abs(cleared.norm());
      if (n > max_norm) max_norm = n;
      mpq_class s = 0;
      for (const mpq_class& c : cleared.coords()) s += abs(c);
      if (s > max_onenorm) max_onenorm = s;
    }

  MatrixHeightReport out;
  Rounded lo = Rounded::exact(mpq_class(1, a.p - 1 > 0 ? a.p - 1 : 1), prec) *
               Rounded::log_of(max_norm, prec);
  out.computed.log_value = Rounded::hull(lo, Rounded::log_of(max_onenorm, prec));
  out.computed.provenance = "cleared entry vector";
  // (2 p^2 B)^(delta/p) / p
  mpq_class arg = 2 * mpq_class(a.p) * a.p * B;
  out.a_priori.log_value =
      Rounded::exact(mpq_class(a.delta, a.p), prec) * Rounded::log_of(arg, prec) -
      Rounded::log_of(mpz_class(a.p), prec);
  out.a_priori.provenance = "expansion coefficient bound";
  out.certified =
      out.computed.log_value.certainly_le(out.a_priori.log_value);
  if (out.computed.log_value.certainly_ge(out.a_priori.log_value) &&
      !out.certified)
    throw std::logic_error("entry height exceeds its a-priori bound");
  return out;
}

Rounded matrix_sup_height(const std::vector<std::vector<CycloNumber>>& rows,
                          unsigned p, unsigned prec) {
  if (prec == 0) prec = default_precision();
  (void)p;
  SupBracket b;
  for (const std::vector<CycloNumber>& row : rows)
    for (const CycloNumber& a : row) b.absorb(a);
  return b.interval(prec);
}

Rounded vector_sup_height(const std::vector<CycloNumber>& v, unsigned p,
                          unsigned prec) {
  if (prec == 0) prec = default_precision();
  (void)p;
  SupBracket b;
  for (const CycloNumber& a : v) b.absorb(a);
  return b.interval(prec);
}

}  // namespace rungekit
