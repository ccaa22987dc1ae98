#include <rungekit/sieve.hpp>

#include <algorithm>
#include <atomic>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

#include <rungekit/integer_fns.hpp>

namespace rungekit {

namespace {

constexpr unsigned long kSmallOrderCap = 12;  // tracked generator order for stage-1 primes
constexpr long long kResidueCap = 2000000;    // remainder-class ceiling during intersection
constexpr long long kCandidateCap = 2000000;  // enumerated index ceiling
constexpr long long kExactCap = 1000;         // indices finished by exact arithmetic
constexpr unsigned kMaxScreens = 40;
constexpr unsigned long kCellCap = 4000000;  // order-pair table ceiling
constexpr unsigned kGroupPrimes = 4;
constexpr long kWindowCap = 1L << 40;

unsigned long mulmod_u(unsigned long a, unsigned long b, unsigned long q) {
  return static_cast<unsigned long>(static_cast<unsigned __int128>(a) * b % q);
}

unsigned long mod_of(const mpz_class& v, unsigned long q) {
  unsigned long r = mpz_fdiv_ui(v.get_mpz_t(), q);
  return r % q;
}

bool is_square_q(const mpq_class& v) {
  if (v < 0) return false;
  return mpz_perfect_square_p(v.get_num().get_mpz_t()) != 0 &&
         mpz_perfect_square_p(v.get_den().get_mpz_t()) != 0;
}

std::string join(const std::vector<std::string>& parts, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

void sort_unique(std::vector<mpq_class>& xs) {
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
}

}  // namespace

std::string describe(const Configuration& c) {
  std::ostringstream os;
  os << "k=" << c.k << " gammas=[";
  for (int i = 0; i < 6; ++i) os << (i ? "," : "") << c.gammas[i];
  os << "] parts=[";
  for (int i = 0; i < 6; ++i) os << (i ? "," : "") << c.parts[i];
  os << "]";
  return os.str();
}

bool parts_compatible(const std::array<unsigned, 6>& gammas,
                      const std::array<mpz_class, 6>& parts) {
  for (int i = 0; i < 6; ++i)
    for (int j = i + 1; j < 6; ++j) {
      mpz_class g = gcd(parts[i], parts[j]);
      if (g == 1) continue;
      // a prime dividing both terms divides their difference (gamma_j - gamma_i) d,
      // and cannot divide d without dividing x
      FactoredInteger fg = factorize(g);
      for (const PrimePower& pp : fg.factors())
        if ((gammas[j] - gammas[i]) % pp.prime.get_ui() != 0) return false;
    }
  return true;
}

Configuration make_configuration(unsigned k, const std::array<unsigned, 6>& gammas,
                                 const std::array<mpz_class, 6>& parts) {
  if (k < 8 || k > 17) throw std::invalid_argument("window length wants 8..17");
  if (gammas[0] != 0) throw std::invalid_argument("first offset wants 0");
  for (int i = 0; i < 6; ++i) {
    if (i && gammas[i] <= gammas[i - 1]) throw std::invalid_argument("offsets want to increase");
    if (gammas[i] >= k) throw std::invalid_argument("offsets want to stay below the window");
    if (parts[i] <= 0 || pfree_part(parts[i], 2) != parts[i])
      throw std::invalid_argument("coefficients want positive squarefree");
    mpz_class lp = largest_prime_factor(parts[i]);
    if (lp > 11 || lp >= k) throw std::invalid_argument("coefficient primes want to stay small");
  }
  if (!parts_compatible(gammas, parts))
    throw std::invalid_argument("coefficients incompatible with the offsets");
  return Configuration{k, gammas, parts};
}

ConfigurationStream::ConfigurationStream(unsigned k) : k_(k) {
  if (k < 8 || k > 17) throw std::invalid_argument("window length wants 8..17");
  std::vector<unsigned long> ps;
  for (unsigned long p : {2ul, 3ul, 5ul, 7ul, 11ul})
    if (p < k) ps.push_back(p);
  for (unsigned mask = 0; mask < (1u << ps.size()); ++mask) {
    mpz_class v = 1;
    for (std::size_t i = 0; i < ps.size(); ++i)
      if (mask & (1u << i)) v *= ps[i];
    values_.push_back(v);
  }
  std::sort(values_.begin(), values_.end());
  combo_ = {1, 2, 3, 4, 5};
  avals_.fill(0);
}

bool ConfigurationStream::advance() {
  for (int i = 5; i >= 0; --i) {
    if (++avals_[i] < values_.size()) return true;
    avals_[i] = 0;
  }
  for (int i = 4; i >= 0; --i) {
    if (++combo_[i] <= k_ - 1 - (4 - i)) {
      for (int j = i + 1; j < 5; ++j) combo_[j] = combo_[j - 1] + 1;
      return true;
    }
    if (i == 0) return false;
  }
  return false;
}

std::optional<Configuration> ConfigurationStream::next() {
  while (!done_) {
    if (fresh_)
      fresh_ = false;
    else if (!advance()) {
      done_ = true;
      break;
    }
    std::array<unsigned, 6> g{0, combo_[0], combo_[1], combo_[2], combo_[3], combo_[4]};
    std::array<mpz_class, 6> a;
    for (int i = 0; i < 6; ++i) a[i] = values_[avals_[i]];
    if (parts_compatible(g, a)) return Configuration{k_, g, a};
  }
  return std::nullopt;
}

const std::array<std::array<unsigned, 4>, 15>& quadruple_subsets() {
  static const std::array<std::array<unsigned, 4>, 15> subsets = [] {
    std::array<std::array<unsigned, 4>, 15> out{};
    std::size_t n = 0;
    for (unsigned a = 0; a < 3; ++a)
      for (unsigned b = a + 1; b < 4; ++b)
        for (unsigned c = b + 1; c < 5; ++c)
          for (unsigned d = c + 1; d < 6; ++d) out[n++] = {a, b, c, d};
    return out;
  }();
  return subsets;
}

std::vector<QuarticModel> curves_for(const Configuration& c) {
  std::vector<QuarticModel> out;
  out.reserve(15);
  for (const auto& sub : quadruple_subsets()) {
    std::array<mpz_class, 4> g;
    mpz_class prod = 1;
    for (int i = 0; i < 4; ++i) {
      g[i] = c.gammas[sub[i]];
      prod *= c.parts[sub[i]];
    }
    // the product of the four terms is a_J times a square, so the quadruple
    // coefficient is the squarefree part of the coefficient product
    out.push_back(quartic_model(g, pfree_part(prod, 2)));
  }
  return out;
}

bool consistent_with_all_curves(const Configuration& c, const mpq_class& x) {
  for (const QuarticModel& f : curves_for(c))
    if (!is_square_q(f.a * f.rhs(x))) return false;
  return true;
}

bool on_quartic_mod(const QuarticModel& f, unsigned long q, const ModQuarticX& xi) {
  unsigned long am = mod_of(f.a, q);
  // a coordinate with q in its denominator forces the coefficient itself to be
  // a nonzero square: the defining value reduces to a xi^4 against a unit
  if (xi.infinite) return am != 0 && legendre_ul(am, q) == 1;
  unsigned long t = am;
  for (const mpz_class& g : f.gammas) t = mulmod_u(t, (xi.x + mod_of(g, q)) % q, q);
  return legendre_ul(t, q) >= 0;
}

namespace {

struct ReducedPair {
  CurveModQ ma, mb;
  ModPoint ga, gb;
  unsigned long oa = 0, ob = 0;
};

// Rows of allowed residues n mod ob, one per torsion translate, filtered by a
// per-point predicate on the shared coordinate.
template <typename Pred>
std::vector<std::vector<unsigned long>> residue_rows(const QuarticModel& fb, const CurveModQ& mb,
                                                     const ModPoint& gb, unsigned long ob,
                                                     const std::vector<CurvePoint>& tors_b,
                                                     Pred&& pred) {
  std::vector<std::vector<unsigned long>> rows;
  rows.reserve(tors_b.size());
  for (const CurvePoint& t : tors_b) {
    ModPoint cur = reduce_point(t, mb);
    std::vector<unsigned long> row;
    for (unsigned long n = 0; n < ob; ++n) {
      if (pred(quartic_x_mod(fb, mb, cur))) row.push_back(n);
      cur = mb.add(cur, gb);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

std::optional<AllowedClasses> allowed_classes(const QuarticModel& fa, const CurvePoint& gen_a,
                                              const std::vector<CurvePoint>& tors_a,
                                              const QuarticModel& fb, const CurvePoint& gen_b,
                                              const std::vector<CurvePoint>& tors_b,
                                              unsigned long q) {
  // q > 17 keeps every offset difference and coefficient prime a unit, so the
  // coordinate change commutes with reduction and the infinity markers match
  if (q <= 17 || q >= 10000) return std::nullopt;
  WeierstrassCurve ea = fa.curve(), eb = fb.curve();
  if (!ea.good_prime(q) || !eb.good_prime(q)) return std::nullopt;
  CurveModQ ma = reduce_curve(ea, q), mb = reduce_curve(eb, q);
  ModPoint ga = reduce_point(gen_a, ma), gb = reduce_point(gen_b, mb);
  unsigned long oa = ga.infinite ? 1 : point_order(ma, ga, ma.order());
  unsigned long ob = gb.infinite ? 1 : point_order(mb, gb, mb.order());

  // shared coordinates of every reduced rational point of curve A
  std::vector<char> val(q, 0);
  bool inf_allowed = false;
  ModPoint step = {true, 0, 0};
  for (unsigned long m = 0; m < oa; ++m) {
    for (const CurvePoint& t : tors_a) {
      ModQuarticX xi = quartic_x_mod(fa, ma, ma.add(step, reduce_point(t, ma)));
      if (xi.infinite)
        inf_allowed = true;
      else
        val[xi.x] = 1;
    }
    step = ma.add(step, ga);
  }

  AllowedClasses out{q, oa, ob, {}};
  out.allowed = residue_rows(fb, mb, gb, ob, tors_b, [&](const ModQuarticX& xi) {
    return xi.infinite ? inf_allowed : val[xi.x] != 0;
  });
  return out;
}

std::optional<AllowedClasses> membership_classes(const QuarticModel& fa, const QuarticModel& fb,
                                                 const CurvePoint& gen_b,
                                                 const std::vector<CurvePoint>& tors_b,
                                                 unsigned long q) {
  if (q <= 17 || q >= 10000) return std::nullopt;
  WeierstrassCurve eb = fb.curve();
  if (!eb.good_prime(q)) return std::nullopt;
  CurveModQ mb = reduce_curve(eb, q);
  ModPoint gb = reduce_point(gen_b, mb);
  unsigned long ob = gb.infinite ? 1 : point_order(mb, gb, mb.order());
  AllowedClasses out{q, 0, ob, {}};
  out.allowed = residue_rows(fb, mb, gb, ob, tors_b,
                             [&](const ModQuarticX& xi) { return on_quartic_mod(fa, q, xi); });
  return out;
}

CaseResult case_one(const Configuration& c, std::size_t which) {
  CaseResult res;
  res.case_used = 1;
  std::vector<QuarticModel> quartics = curves_for(c);
  const QuarticModel& f = quartics.at(which);
  TorsionSubgroup tors = torsion_subgroup(f.curve());
  for (const CurvePoint& p : tors.points) {
    QuarticX qx = quartic_x(f, p);
    if (!qx.infinite && consistent_with_all_curves(c, qx.x)) res.candidates.push_back(qx.x);
  }
  sort_unique(res.candidates);
  return res;
}

CaseResult case_two(const Configuration& c, std::size_t tracked, std::size_t indexing,
                    const CurvePoint& gen_a, const CurvePoint& gen_b, const Rounded& log_hmax,
                    unsigned prec) {
  CaseResult res;
  res.case_used = 2;
  std::vector<QuarticModel> quartics = curves_for(c);
  const QuarticModel& fa = quartics.at(tracked);
  const QuarticModel& fb = quartics.at(indexing);
  WeierstrassCurve ea = fa.curve(), eb = fb.curve();
  TorsionSubgroup ta = torsion_subgroup(ea), tb = torsion_subgroup(eb);

  HeightInterval hb;
  for (unsigned doublings : {6u, 9u, 12u}) {
    hb = canonical_height(eb, gen_b, doublings, prec);
    if (hb.hhat.certainly_positive()) break;
  }
  if (!hb.hhat.certainly_positive()) {
    res.failures.push_back("index generator height not separated from zero");
    return res;
  }
  std::optional<mpz_class> cut = index_cutoff(hb.hhat, hb.defect, moebius_defect(fb, prec), log_hmax);
  if (!cut || *cut > kWindowCap) {
    res.failures.push_back("no workable index window from the height bound");
    return res;
  }
  long long N = cut->get_si();

  // stage-1 primes: where the tracked generator degenerates, its multiples'
  // denominators expose exactly the primes of small reduced order
  std::set<unsigned long> denprimes;
  const std::vector<unsigned long>& small_primes = primes_below(10000);
  CurvePoint mult = CurvePoint::at_infinity();
  for (unsigned m = 1; m <= kSmallOrderCap; ++m) {
    mult = add(ea, mult, gen_a);
    if (mult.infinite) break;
    mpz_class den = mult.x.get_den();
    for (unsigned long q : small_primes)
      if (mpz_divisible_ui_p(den.get_mpz_t(), q)) denprimes.insert(q);
  }
  std::vector<AllowedClasses> stage1;
  for (unsigned long q : denprimes) {
    std::optional<AllowedClasses> ac =
        allowed_classes(fa, gen_a, ta.points, fb, gen_b, tb.points, q);
    if (!ac || ac->order_a > kSmallOrderCap || ac->order_b <= 1) continue;
    bool informative = false;
    for (const auto& row : ac->allowed)
      if (row.size() < ac->order_b) informative = true;
    if (informative) stage1.push_back(std::move(*ac));
  }

  // remainder intersection until the modulus clears the window
  std::size_t nt = tb.points.size();
  std::vector<std::vector<long long>> classes(nt, std::vector<long long>{0});
  long long modulus = 1;
  std::set<unsigned long> used;
  for (const AllowedClasses& ac : stage1) {
    if (modulus > 2 * N) break;
    long long ob = static_cast<long long>(ac.order_b);
    long long next_mod = std::lcm(modulus, ob);
    for (std::size_t t = 0; t < nt; ++t) {
      std::vector<char> ok(ac.order_b, 0);
      for (unsigned long v : ac.allowed[t]) ok[v] = 1;
      std::vector<long long> next;
      for (long long r : classes[t])
        for (long long j = r; j < next_mod; j += modulus)
          if (ok[j % ob]) next.push_back(j);
      if (static_cast<long long>(next.size()) > kResidueCap) {
        res.failures.push_back("remainder classes explode at q=" + std::to_string(ac.q));
        return res;
      }
      classes[t] = std::move(next);
    }
    modulus = next_mod;
    used.insert(ac.q);
  }
  if (modulus <= 2 * N) {
    long long total = 0;
    for (const auto& cls : classes) total += static_cast<long long>(cls.size()) * (2 * N / modulus + 1);
    if (total > kCandidateCap) {
      std::ostringstream os;
      os << "insufficient sieve primes: modulus " << modulus << " against index window " << N;
      res.failures.push_back(os.str());
      return res;
    }
  }

  std::vector<std::pair<unsigned, long long>> cand;
  for (std::size_t t = 0; t < nt; ++t)
    for (long long r : classes[t])
      for (long long n = r - modulus * ((r + N) / modulus); n < N; n += modulus) {
        if (n <= -N) continue;
        if (static_cast<long long>(cand.size()) >= kCandidateCap) {
          res.failures.push_back("enumerated indices explode");
          return res;
        }
        cand.emplace_back(static_cast<unsigned>(t), n);
      }

  // screening at fresh primes with plain curve membership
  unsigned screens = 0;
  for (unsigned long q : small_primes) {
    if (cand.empty() || screens >= kMaxScreens) break;
    if (q <= 17 || used.count(q)) continue;
    std::optional<AllowedClasses> mc = membership_classes(fa, fb, gen_b, tb.points, q);
    if (!mc || mc->order_b <= 1) continue;
    ++screens;
    long long ob = static_cast<long long>(mc->order_b);
    std::vector<std::vector<char>> ok(nt, std::vector<char>(mc->order_b, 0));
    for (std::size_t t = 0; t < nt; ++t)
      for (unsigned long v : mc->allowed[t]) ok[t][v] = 1;
    std::erase_if(cand, [&](const std::pair<unsigned, long long>& tn) {
      return !ok[tn.first][((tn.second % ob) + ob) % ob];
    });
  }

  for (const auto& [t, n] : cand) {
    if (n > kExactCap || n < -kExactCap) {
      std::ostringstream os;
      os << "screening left index " << n << " beyond the exact range";
      res.failures.push_back(os.str());
      return res;
    }
    CurvePoint p = add(eb, scalar_mul(eb, static_cast<long>(n), gen_b), tb.points[t]);
    QuarticX qx = quartic_x(fb, p);
    if (qx.infinite) continue;
    if (consistent_with_all_curves(c, qx.x)) res.candidates.push_back(qx.x);
  }
  sort_unique(res.candidates);
  return res;
}

namespace {

// Shared coordinates compatible with every quadruple modulo q: with at most
// one vanishing term (q > 17 exceeds all offset differences), all fifteen
// quadruple values are squares exactly when the nonvanishing term characters
// agree; the infinite marker likewise compares the coefficient characters.
struct SharedXTable {
  std::vector<char> ok;
  bool inf_ok = false;
};

SharedXTable shared_x_table(const Configuration& c, unsigned long q) {
  std::vector<signed char> chi(q, -1);
  chi[0] = 0;
  for (unsigned long v = 1; v < q; ++v) chi[mulmod_u(v, v, q)] = 1;
  std::array<unsigned long, 6> am, gm;
  for (int i = 0; i < 6; ++i) {
    am[i] = mod_of(c.parts[i], q);
    gm[i] = c.gammas[i] % q;
  }
  SharedXTable t;
  t.inf_ok = true;
  for (int i = 1; i < 6; ++i)
    if (chi[am[i]] != chi[am[0]]) t.inf_ok = false;
  t.ok.assign(q, 0);
  for (unsigned long x = 0; x < q; ++x) {
    int sign = 0;
    bool good = true;
    for (int i = 0; i < 6 && good; ++i) {
      int s = chi[mulmod_u(am[i], (x + gm[i]) % q, q)];
      if (s == 0) continue;
      if (sign == 0)
        sign = s;
      else if (s != sign)
        good = false;
    }
    t.ok[x] = good;
  }
  return t;
}

long long crt_pair(long long a, long long p, long long b, long long r) {
  // assumes compatibility a = b mod gcd(p, r); returns the joint class mod lcm,
  // solving a + p k = b (mod r) with an extended-gcd inverse of p/g mod r/g
  long long g = std::gcd(p, r), l = std::lcm(p, r), rr = r / g;
  if (rr == 1) return ((a % l) + l) % l;
  long long diff = ((b - a) / g) % rr;
  if (diff < 0) diff += rr;
  long long x0 = 1, x1 = 0, a0 = (p / g) % rr, a1 = rr;
  while (a1) {
    long long qt = a0 / a1;
    a0 -= qt * a1;
    std::swap(a0, a1);
    x0 -= qt * x1;
    std::swap(x0, x1);
  }
  long long inv = ((x0 % rr) + rr) % rr;
  long long k = static_cast<long long>(
      static_cast<unsigned __int128>(diff) * inv % static_cast<unsigned long long>(rr));
  long long m = (a + p * k) % l;
  return m < 0 ? m + l : m;
}

}  // namespace

CaseResult case_three(const Configuration& c, std::size_t which, const CurvePoint& g1,
                      const CurvePoint& g2, const Rounded& log_hmax, unsigned prec) {
  CaseResult res;
  res.case_used = 3;
  std::vector<QuarticModel> quartics = curves_for(c);
  const QuarticModel& f = quartics.at(which);
  WeierstrassCurve e = f.curve();
  TorsionSubgroup tors = torsion_subgroup(e);
  std::size_t nt = tors.points.size();

  HeightInterval h1, h2;
  Rounded lam = Rounded::exact(mpq_class(0), prec ? prec : 0);
  bool separated = false;
  for (unsigned doublings : {6u, 9u, 12u}) {
    h1 = canonical_height(e, g1, doublings, prec);
    h2 = canonical_height(e, g2, doublings, prec);
    Rounded h12 = height_pairing(e, g1, g2, doublings, prec);
    lam = gram_lambda_min(h1.hhat, h12, h2.hhat);
    if (lam.certainly_positive()) {
      separated = true;
      break;
    }
  }
  if (!separated) {
    res.failures.push_back("height gram not certainly positive definite");
    return res;
  }
  std::optional<mpz_class> cut = index_cutoff(lam, h1.defect, moebius_defect(f, prec), log_hmax);
  if (!cut || *cut > kWindowCap) {
    res.failures.push_back("no workable index window from the height bound");
    return res;
  }
  long long N = cut->get_si();

  // order pairs of the two generators at every usable prime
  std::map<std::pair<unsigned long, unsigned long>, std::vector<unsigned long>> groups;
  for (unsigned long q : primes_below(10000)) {
    if (q <= 17 || !e.good_prime(q)) continue;
    CurveModQ m = reduce_curve(e, q);
    ModPoint r1 = reduce_point(g1, m), r2 = reduce_point(g2, m);
    if (r1.infinite || r2.infinite) continue;
    unsigned long go = m.order();
    unsigned long o1 = point_order(m, r1, go), o2 = point_order(m, r2, go);
    if (o1 <= 1 || o2 <= 1 || o1 * o2 > kCellCap) continue;
    groups[{o1, o2}].push_back(q);
  }
  std::vector<std::pair<std::pair<unsigned long, unsigned long>, std::vector<unsigned long>>> glist(
      groups.begin(), groups.end());

  std::optional<std::pair<std::size_t, std::size_t>> chosen;
  for (std::size_t need : {3u, 2u}) {
    for (std::size_t i = 0; i < glist.size() && !chosen; ++i) {
      if (glist[i].second.size() < need) continue;
      for (std::size_t j = i + 1; j < glist.size() && !chosen; ++j) {
        if (glist[j].second.size() < need) continue;
        long long l1 = std::lcm<long long>(glist[i].first.first, glist[j].first.first);
        long long l2 = std::lcm<long long>(glist[i].first.second, glist[j].first.second);
        if (l1 > 2 * N && l2 > 2 * N) chosen = {i, j};
      }
    }
    if (chosen) break;
  }
  if (!chosen) {
    std::ostringstream os;
    os << "no prime groups with joint moduli covering the index window " << N;
    res.failures.push_back(os.str());
    return res;
  }

  // planar allowed tables per group, intersected over its primes
  auto build_table = [&](std::size_t gi) {
    unsigned long o1 = glist[gi].first.first, o2 = glist[gi].first.second;
    std::vector<std::vector<char>> table(nt, std::vector<char>(o1 * o2, 1));
    unsigned usedp = 0;
    for (unsigned long q : glist[gi].second) {
      if (usedp++ >= kGroupPrimes) break;
      CurveModQ m = reduce_curve(e, q);
      SharedXTable xt = shared_x_table(c, q);
      ModPoint r1 = reduce_point(g1, m), r2 = reduce_point(g2, m);
      for (std::size_t t = 0; t < nt; ++t) {
        ModPoint rowbase = reduce_point(tors.points[t], m);
        for (unsigned long mi = 0; mi < o1; ++mi) {
          ModPoint cur = rowbase;
          char* cells = table[t].data() + mi * o2;
          for (unsigned long ni = 0; ni < o2; ++ni) {
            if (cells[ni]) {
              ModQuarticX xi = quartic_x_mod(f, m, cur);
              if (!(xi.infinite ? xt.inf_ok : xt.ok[xi.x])) cells[ni] = 0;
            }
            cur = m.add(cur, r2);
          }
          rowbase = m.add(rowbase, r1);
        }
      }
    }
    return table;
  };
  auto t1 = build_table(chosen->first);
  auto t2 = build_table(chosen->second);

  unsigned long o1a = glist[chosen->first].first.first, o2a = glist[chosen->first].first.second;
  unsigned long o1b = glist[chosen->second].first.first, o2b = glist[chosen->second].first.second;
  long long l1 = std::lcm<long long>(o1a, o1b), l2 = std::lcm<long long>(o2a, o2b);
  long long g1cd = std::gcd<long long>(o1a, o1b), g2cd = std::gcd<long long>(o2a, o2b);

  struct PlanarIndex {
    unsigned t;
    long long m, n;
  };
  std::vector<PlanarIndex> cand;
  for (std::size_t t = 0; t < nt; ++t) {
    std::map<std::pair<long long, long long>, std::vector<std::pair<unsigned long, unsigned long>>>
        bucket;
    for (unsigned long a = 0; a < o1b; ++a)
      for (unsigned long b = 0; b < o2b; ++b)
        if (t2[t][a * o2b + b])
          bucket[{static_cast<long long>(a % g1cd), static_cast<long long>(b % g2cd)}]
              .emplace_back(a, b);
    for (unsigned long a = 0; a < o1a; ++a)
      for (unsigned long b = 0; b < o2a; ++b) {
        if (!t1[t][a * o2a + b]) continue;
        auto it = bucket.find({static_cast<long long>(a % g1cd), static_cast<long long>(b % g2cd)});
        if (it == bucket.end()) continue;
        for (const auto& [ap, bp] : it->second) {
          long long m0 = crt_pair(static_cast<long long>(a), static_cast<long long>(o1a),
                                  static_cast<long long>(ap), static_cast<long long>(o1b));
          long long n0 = crt_pair(static_cast<long long>(b), static_cast<long long>(o2a),
                                  static_cast<long long>(bp), static_cast<long long>(o2b));
          for (long long m = m0 - l1 * ((m0 + N) / l1); m < N; m += l1) {
            if (m <= -N) continue;
            for (long long n = n0 - l2 * ((n0 + N) / l2); n < N; n += l2) {
              if (n <= -N) continue;
              if (static_cast<long long>(cand.size()) >= kCandidateCap) {
                res.failures.push_back("pieced indices explode");
                return res;
              }
              cand.push_back({static_cast<unsigned>(t), m, n});
            }
          }
        }
      }
  }

  // screening at fresh primes
  std::set<unsigned long> grouped;
  for (std::size_t gi : {chosen->first, chosen->second})
    for (unsigned long q : glist[gi].second) grouped.insert(q);
  if (cand.size() > 100000) {
    res.failures.push_back("too many pieced indices to screen");
    return res;
  }
  unsigned screens = 0;
  for (unsigned long q : primes_below(10000)) {
    if (cand.empty() || screens >= kMaxScreens) break;
    if (q <= 17 || grouped.count(q) || !e.good_prime(q)) continue;
    CurveModQ m = reduce_curve(e, q);
    ModPoint r1 = reduce_point(g1, m), r2 = reduce_point(g2, m);
    if (r1.infinite || r2.infinite) continue;
    unsigned long go = m.order();
    unsigned long o1 = point_order(m, r1, go), o2 = point_order(m, r2, go);
    SharedXTable xt = shared_x_table(c, q);
    std::vector<ModPoint> treds;
    for (const CurvePoint& t : tors.points) treds.push_back(reduce_point(t, m));
    ++screens;
    std::erase_if(cand, [&](const PlanarIndex& pi) {
      unsigned long mm = ((pi.m % static_cast<long long>(o1)) + o1) % o1;
      unsigned long nn = ((pi.n % static_cast<long long>(o2)) + o2) % o2;
      ModPoint p = m.add(m.add(m.mul(mm, r1), m.mul(nn, r2)), treds[pi.t]);
      ModQuarticX xi = quartic_x_mod(f, m, p);
      return !(xi.infinite ? xt.inf_ok : xt.ok[xi.x]);
    });
  }

  for (const PlanarIndex& pi : cand) {
    if (pi.m > kExactCap || pi.m < -kExactCap || pi.n > kExactCap || pi.n < -kExactCap) {
      std::ostringstream os;
      os << "screening left index pair (" << pi.m << "," << pi.n << ") beyond the exact range";
      res.failures.push_back(os.str());
      return res;
    }
    CurvePoint p = add(e, add(e, scalar_mul(e, static_cast<long>(pi.m), g1),
                              scalar_mul(e, static_cast<long>(pi.n), g2)),
                       tors.points[pi.t]);
    QuarticX qx = quartic_x(f, p);
    if (qx.infinite) continue;
    if (consistent_with_all_curves(c, qx.x)) res.candidates.push_back(qx.x);
  }
  sort_unique(res.candidates);
  return res;
}

CaseResult sieve_config(const Configuration& c, const GeneratorDb& db, const Rounded& log_hmax,
                        unsigned prec) {
  std::vector<QuarticModel> quartics = curves_for(c);
  std::vector<const GeneratorRecord*> recs(15, nullptr);
  for (std::size_t j = 0; j < 15; ++j) recs[j] = db.find(quartics[j]);

  for (std::size_t j = 0; j < 15; ++j)
    if (recs[j] && recs[j]->rank == 0) {
      CaseResult r = case_one(c, j);
      std::vector<std::string> a = recs[j]->assumptions();
      r.assumptions.insert(r.assumptions.end(), a.begin(), a.end());
      return r;
    }

  std::vector<std::size_t> rank1;
  for (std::size_t j = 0; j < 15; ++j)
    if (recs[j] && recs[j]->rank == 1 && recs[j]->gens.size() == 1) rank1.push_back(j);
  std::vector<std::string> notes;
  unsigned tried = 0;
  for (std::size_t i = 0; i < rank1.size() && tried < 6; ++i)
    for (std::size_t j = i + 1; j < rank1.size() && tried < 6; ++j)
      for (auto [a, b] : {std::pair{rank1[i], rank1[j]}, std::pair{rank1[j], rank1[i]}}) {
        if (tried >= 6) break;
        ++tried;
        CaseResult r =
            case_two(c, a, b, recs[a]->gens[0], recs[b]->gens[0], log_hmax, prec);
        if (r.failures.empty()) {
          for (std::size_t idx : {a, b}) {
            std::vector<std::string> as = recs[idx]->assumptions();
            r.assumptions.insert(r.assumptions.end(), as.begin(), as.end());
          }
          return r;
        }
        notes.push_back("pair (" + std::to_string(a) + "," + std::to_string(b) + "): " +
                        join(r.failures, "; "));
      }

  for (std::size_t j = 0; j < 15; ++j)
    if (recs[j] && recs[j]->rank == 2 && recs[j]->gens.size() == 2) {
      CaseResult r = case_three(c, j, recs[j]->gens[0], recs[j]->gens[1], log_hmax, prec);
      if (r.failures.empty()) {
        std::vector<std::string> as = recs[j]->assumptions();
        r.assumptions.insert(r.assumptions.end(), as.begin(), as.end());
        return r;
      }
      notes.push_back("quadruple " + std::to_string(j) + ": " + join(r.failures, "; "));
    }

  CaseResult fail;
  if (notes.empty()) notes.push_back("no database coverage admits a sieve case");
  fail.failures = std::move(notes);
  return fail;
}

std::optional<std::pair<mpz_class, mpz_class>> verify_solution(const mpz_class& x,
                                                               const mpz_class& d,
                                                               const std::vector<unsigned>& gammas,
                                                               unsigned k) {
  if (k < 8 || k > 17) throw std::invalid_argument("window length wants 8..17");
  if (x < 1 || d < 1) throw std::invalid_argument("wants positive x and d");
  if (gammas.empty() || gammas[0] != 0) throw std::invalid_argument("first offset wants 0");
  for (std::size_t i = 0; i < gammas.size(); ++i) {
    if (i && gammas[i] <= gammas[i - 1]) throw std::invalid_argument("offsets want to increase");
    if (gammas[i] >= k) throw std::invalid_argument("offsets want to stay below the window");
  }
  if (gcd(x, d) != 1) return std::nullopt;
  mpz_class prod = 1;
  for (unsigned g : gammas) prod *= x + g * d;
  FactoredInteger fp = factorize(prod);
  mpz_class b = 1;
  for (const PrimePower& pp : fp.factors())
    if (pp.exponent % 2) {
      if (pp.prime >= k) return std::nullopt;
      b *= pp.prime;
    }
  mpz_class y2 = prod / b, y;
  mpz_sqrt(y.get_mpz_t(), y2.get_mpz_t());
  return std::pair{b, y};
}

bool admissible_omega(const mpz_class& d, unsigned k, unsigned r) {
  unsigned pi = prime_pi(k - 1);
  unsigned eps = 0;
  if (d > 1 && largest_prime_factor(pfree_part(d, 2)) >= k) eps = 1;
  long e = static_cast<long>(r) - static_cast<long>(pi) - static_cast<long>(eps);
  if (e <= 1) return false;
  if (e >= 30) return true;
  return omega(d) + 2 < (1ul << e);
}

std::optional<Witness> find_witness(const mpz_class& x, const mpz_class& d, unsigned k,
                                    unsigned r) {
  if (r < 1 || r > k) return std::nullopt;
  if (!admissible_omega(d, k, r)) return std::nullopt;
  if (gcd(x, d) != 1) return std::nullopt;
  std::vector<unsigned> pick(r - 1);
  for (unsigned i = 0; i < r - 1; ++i) pick[i] = i + 1;
  while (true) {
    std::vector<unsigned> g{0};
    g.insert(g.end(), pick.begin(), pick.end());
    if (auto by = verify_solution(x, d, g, k)) return Witness{g, by->first, by->second};
    // next (r-1)-combination of {1, ..., k-1}
    int i = static_cast<int>(pick.size()) - 1;
    while (i >= 0 && pick[i] == k - 1 - (pick.size() - 1 - i)) --i;
    if (i < 0) break;
    ++pick[i];
    for (std::size_t j = i + 1; j < pick.size(); ++j) pick[j] = pick[j - 1] + 1;
  }
  return std::nullopt;
}

RunResult run_sieve(unsigned k, unsigned psi, const GeneratorDb& db, const Rounded& log_hmax,
                    unsigned long config_limit, unsigned jobs) {
  if (k < 8 || k > 17) throw std::invalid_argument("window length wants 8..17");
  if (psi + 6 > k) throw std::invalid_argument("window leaves fewer than six usable terms");
  if (config_limit == 0) throw std::invalid_argument("configuration bound wants to be positive");
  unsigned r = k - psi;
  RunResult out;
  out.k = k;
  out.psi = psi;

  std::vector<Configuration> cfgs;
  ConfigurationStream stream(k);
  while (cfgs.size() < config_limit) {
    std::optional<Configuration> c = stream.next();
    if (!c) break;
    cfgs.push_back(*c);
  }
  out.configs_processed = cfgs.size();

  std::vector<CaseResult> results(cfgs.size());
  if (jobs <= 1) {
    for (std::size_t i = 0; i < cfgs.size(); ++i)
      results[i] = sieve_config(cfgs[i], db, log_hmax);
  } else {
    std::atomic<std::size_t> cursor{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < jobs; ++t)
      pool.emplace_back([&] {
        for (std::size_t i; (i = cursor.fetch_add(1)) < cfgs.size();)
          results[i] = sieve_config(cfgs[i], db, log_hmax);
      });
    for (std::thread& t : pool) t.join();
  }

  std::set<std::pair<mpz_class, mpz_class>> seen;
  for (std::size_t i = 0; i < cfgs.size(); ++i) {
    CaseResult& r_i = results[i];
    if (!r_i.failures.empty()) {
      out.skipped.push_back({cfgs[i], join(r_i.failures, "; ")});
      continue;
    }
    for (const mpq_class& x : r_i.candidates) {
      if (sgn(x) <= 0) continue;
      mpz_class num = x.get_num(), den = x.get_den();
      std::optional<Witness> w = find_witness(num, den, k, r);
      if (!w) continue;
      if (!seen.insert({den, num}).second) continue;
      out.solutions.push_back(
          {den, num, w->b, w->y, k, w->gammas, r_i.case_used, r_i.assumptions});
    }
  }
  std::sort(out.solutions.begin(), out.solutions.end(),
            [](const SieveSolution& l, const SieveSolution& r2) {
              return l.d < r2.d || (l.d == r2.d && l.x < r2.x);
            });
  return out;
}

const std::vector<std::pair<unsigned long, std::vector<unsigned long>>>& solution_table() {
  static const std::vector<std::pair<unsigned long, std::vector<unsigned long>>> table = {
      {1,  {1,  2,  3,  4,  5,  6,  7,  8,  9,  10, 11, 12, 13, 14, 15, 16, 18, 20, 21, 22,
            24, 25, 26, 27, 28, 30, 32, 33, 35, 36, 39, 40, 42, 44, 45, 48, 49, 50, 52, 54,
            55, 56, 60, 63, 64, 65, 66, 70, 72, 75, 77, 84, 88, 90, 96, 98, 117, 120}},
      {2,  {1, 3, 5, 7, 9, 11, 13, 15, 21, 25, 33}},
      {3,  {1, 2, 4, 5, 7, 8, 10, 11, 13, 14, 16, 20, 22, 25, 32}},
      {4,  {1, 3, 5, 7, 9, 11, 13, 21}},
      {5,  {1, 2, 3, 4, 6, 7, 8, 9, 11, 12, 13, 14, 16, 18, 21, 24, 28, 39}},
      {7,  {1, 2, 3, 4, 5, 6, 8, 9, 11, 12, 13, 15, 16, 18, 20, 26, 30, 44}},
      {8,  {1, 9}},
      {9,  {4, 8}},
      {11, {3, 4, 6, 10, 15, 26, 48}},
      {13, {1, 7}},
      {17, {5, 22}},
      {19, {4}},
      {23, {16}},
  };
  return table;
}

TableDiff check_against_table(const std::vector<SieveSolution>& found) {
  TableDiff diff;
  std::set<std::pair<unsigned long, unsigned long>> listed, matched;
  for (const auto& [d, xs] : solution_table())
    for (unsigned long x : xs) listed.insert({d, x});
  for (const SieveSolution& s : found) {
    if (s.d.fits_ulong_p() && s.x.fits_ulong_p() &&
        listed.count({s.d.get_ui(), s.x.get_ui()})) {
      matched.insert({s.d.get_ui(), s.x.get_ui()});
    } else {
      diff.unexpected.push_back({s.d, s.x});
    }
  }
  for (const auto& p : listed)
    if (!matched.count(p)) diff.unmatched.push_back(p);
  return diff;
}

}  // namespace rungekit
