#include <rungekit/elliptic.hpp>

#include <algorithm>
#include <stdexcept>

#include <rungekit/integer_fns.hpp>

namespace rungekit {
namespace {

mpz_class sqrt_exact(const mpz_class& n) {
  mpz_class r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

// y with y^2 = v, or nothing.
std::optional<mpq_class> rational_sqrt(const mpq_class& v) {
  if (v < 0) return std::nullopt;
  if (mpz_perfect_square_p(v.get_num().get_mpz_t()) == 0) return std::nullopt;
  if (mpz_perfect_square_p(v.get_den().get_mpz_t()) == 0) return std::nullopt;
  return mpq_class(sqrt_exact(v.get_num()), sqrt_exact(v.get_den()));
}

std::vector<mpz_class> divisors(const mpz_class& n) {
  std::vector<mpz_class> out = {1};
  FactoredInteger fn = factorize(n);
  for (const PrimePower& pp : fn.factors()) {
    std::size_t base = out.size();
    mpz_class q = 1;
    for (unsigned e = 1; e <= pp.exponent; ++e) {
      q *= pp.prime;
      for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * q);
    }
  }
  return out;
}

// Integer roots of a nonzero integer polynomial, lowest coefficient first.
std::vector<mpz_class> integer_roots(const std::vector<mpz_class>& cs) {
  std::size_t low = 0;
  while (low < cs.size() && cs[low] == 0) ++low;
  if (low == cs.size()) throw std::invalid_argument("zero polynomial");
  std::vector<mpz_class> out;
  if (low > 0) out.push_back(0);
  for (const mpz_class& d : divisors(abs(cs[low])))
    for (int sg : {1, -1}) {
      mpz_class x = sg * d, acc = 0;
      for (std::size_t i = cs.size(); i-- > low;) acc = acc * x + cs[i];
      if (acc == 0) out.push_back(x);
    }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

unsigned long mod_ul(const mpz_class& v, unsigned long q) {
  return mpz_fdiv_ui(v.get_mpz_t(), q);
}

unsigned long mulmod(unsigned long a, unsigned long b, unsigned long q) {
  return a * b % q;  // q < 2^31 keeps the product in range
}

unsigned long powmod(unsigned long b, unsigned long e, unsigned long q) {
  unsigned long r = 1 % q;
  for (b %= q; e; e >>= 1, b = mulmod(b, b, q))
    if (e & 1) r = mulmod(r, b, q);
  return r;
}

}  // namespace

mpz_class WeierstrassCurve::discriminant() const {
  mpz_class d = A * B * (A - B);
  return 16 * d * d;
}

bool WeierstrassCurve::good_prime(unsigned long q) const {
  if (q == 2) return false;
  return mod_ul(A, q) != 0 && mod_ul(B, q) != 0 && mod_ul(A - B, q) != 0;
}

mpq_class WeierstrassCurve::rhs(const mpq_class& x) const {
  return x * (x + A) * (x + B);
}

WeierstrassCurve QuarticModel::curve() const {
  return {a * (gammas[1] - gammas[0]) * (gammas[3] - gammas[2]),
          a * (gammas[2] - gammas[0]) * (gammas[3] - gammas[1])};
}

mpz_class QuarticModel::s() const {
  return a * (gammas[1] - gammas[0]) * (gammas[2] - gammas[0]);
}

mpz_class QuarticModel::c() const { return s() * (gammas[3] - gammas[0]); }

mpz_class QuarticModel::cp() const {
  return (gammas[1] - gammas[0]) * (gammas[2] - gammas[0]) * (gammas[3] - gammas[0]);
}

mpq_class QuarticModel::rhs(const mpq_class& x) const {
  mpq_class v = 1;
  for (const mpz_class& g : gammas) v *= x + g;
  return v;
}

QuarticModel quartic_model(const std::array<mpz_class, 4>& gammas, const mpz_class& a) {
  if (a <= 0 || pfree_part(a, 2) != a)
    throw std::invalid_argument("leading coefficient not positive squarefree");
  for (int i = 0; i < 3; ++i)
    if (gammas[i] >= gammas[i + 1])
      throw std::invalid_argument("shifts not strictly increasing");
  return {gammas, a};
}

CurvePoint CurvePoint::at_infinity() { return {true, 0, 0}; }

CurvePoint CurvePoint::affine(const mpq_class& x, const mpq_class& y) {
  return {false, x, y};
}

bool CurvePoint::operator==(const CurvePoint& o) const {
  if (infinite || o.infinite) return infinite == o.infinite;
  return x == o.x && y == o.y;
}

bool on_curve(const WeierstrassCurve& e, const CurvePoint& p) {
  return p.infinite || p.y * p.y == e.rhs(p.x);
}

CurvePoint negate(const CurvePoint& p) {
  return p.infinite ? p : CurvePoint{false, p.x, -p.y};
}

CurvePoint add(const WeierstrassCurve& e, const CurvePoint& p, const CurvePoint& q) {
  if (p.infinite) return q;
  if (q.infinite) return p;
  mpq_class lambda;
  if (p.x == q.x) {
    if (p.y + q.y == 0) return CurvePoint::at_infinity();
    lambda = (3 * p.x * p.x + 2 * e.a2() * p.x + e.a4()) / (2 * p.y);
  } else {
    lambda = (q.y - p.y) / (q.x - p.x);
  }
  mpq_class x3 = lambda * lambda - e.a2() - p.x - q.x;
  return {false, x3, lambda * (p.x - x3) - p.y};
}

CurvePoint scalar_mul(const WeierstrassCurve& e, long n, const CurvePoint& p) {
  CurvePoint base = n < 0 ? negate(p) : p;
  unsigned long m = n < 0 ? -static_cast<unsigned long>(n) : n;
  CurvePoint acc = CurvePoint::at_infinity();
  for (; m; m >>= 1, base = add(e, base, base))
    if (m & 1) acc = add(e, acc, base);
  return acc;
}

QuarticX quartic_x(const QuarticModel& f, const CurvePoint& p) {
  if (p.infinite) return {false, mpq_class(-f.gammas[0])};
  if (p.x == f.s()) return {true, 0};
  return {false, mpq_class(f.c()) / (p.x - f.s()) - f.gammas[0]};
}

CurvePoint lift_to_curve(const QuarticModel& f, const mpq_class& x, const mpq_class& y) {
  if (f.a * y * y != f.rhs(x)) throw std::invalid_argument("point not on quartic model");
  mpq_class u = x + f.gammas[0];
  if (u == 0) return CurvePoint::at_infinity();
  return {false, mpq_class(f.c()) / u + f.s(), f.a * f.c() * y / (u * u)};
}

CurveModQ reduce_curve(const WeierstrassCurve& e, unsigned long q) {
  if (!e.good_prime(q)) throw std::invalid_argument("reduction at a bad prime");
  return {q, mod_ul(e.a2(), q), mod_ul(e.a4(), q)};
}

ModPoint reduce_point(const CurvePoint& p, const CurveModQ& m) {
  if (p.infinite || mod_ul(p.x.get_den(), m.q) == 0) return {true, 0, 0};
  unsigned long x = mulmod(mod_ul(p.x.get_num(), m.q),
                           inv_mod_ul(mod_ul(p.x.get_den(), m.q), m.q), m.q);
  unsigned long y = mulmod(mod_ul(p.y.get_num(), m.q),
                           inv_mod_ul(mod_ul(p.y.get_den(), m.q), m.q), m.q);
  return {false, x, y};
}

bool CurveModQ::on_curve(const ModPoint& p) const {
  if (p.infinite) return true;
  unsigned long r = mulmod(p.x, mulmod(p.x, (p.x + a2) % q, q) + a4, q);
  return mulmod(p.y, p.y, q) == r;
}

ModPoint CurveModQ::add(const ModPoint& p, const ModPoint& r) const {
  if (p.infinite) return r;
  if (r.infinite) return p;
  unsigned long lambda;
  if (p.x == r.x) {
    if ((p.y + r.y) % q == 0) return {true, 0, 0};
    unsigned long num = (mulmod(3, mulmod(p.x, p.x, q), q) +
                         mulmod(2, mulmod(a2, p.x, q), q) + a4) % q;
    lambda = mulmod(num, inv_mod_ul(2 * p.y % q, q), q);
  } else {
    unsigned long dy = (r.y + q - p.y) % q, dx = (r.x + q - p.x) % q;
    lambda = mulmod(dy, inv_mod_ul(dx, q), q);
  }
  unsigned long x3 = (mulmod(lambda, lambda, q) + 3 * q - a2 - p.x - r.x) % q;
  unsigned long y3 = (mulmod(lambda, (p.x + q - x3) % q, q) + q - p.y) % q;
  return {false, x3, y3};
}

ModPoint CurveModQ::mul(unsigned long n, const ModPoint& p) const {
  ModPoint base = p, acc = {true, 0, 0};
  for (; n; n >>= 1, base = add(base, base))
    if (n & 1) acc = add(acc, base);
  return acc;
}

unsigned long CurveModQ::order() const {
  if (q >= 10000) throw std::invalid_argument("group order scan wants q < 10^4");
  std::vector<signed char> chi(q, -1);
  chi[0] = 0;
  for (unsigned long v = 1; v < q; ++v) chi[mulmod(v, v, q)] = 1;
  unsigned long count = 1;
  for (unsigned long x = 0; x < q; ++x) {
    unsigned long r = mulmod(x, mulmod(x, (x + a2) % q, q) + a4, q);
    count += 1 + chi[r];
  }
  return count;
}

unsigned long point_order(const CurveModQ& m, const ModPoint& p, unsigned long group_order) {
  unsigned long o = group_order;
  FactoredInteger fo = factorize(mpz_class(group_order));
  for (const PrimePower& pp : fo.factors()) {
    unsigned long f = pp.prime.get_ui();
    for (unsigned e = 0; e < pp.exponent && m.mul(o / f, p).infinite; ++e) o /= f;
  }
  return o;
}

long legendre_ul(unsigned long v, unsigned long q) {
  v %= q;
  if (v == 0) return 0;
  return powmod(v, (q - 1) / 2, q) == 1 ? 1 : -1;
}

unsigned long inv_mod_ul(unsigned long v, unsigned long q) {
  long t = 0, nt = 1, r = static_cast<long>(q), nr = static_cast<long>(v % q);
  while (nr != 0) {
    long qt = r / nr;
    std::swap(t -= qt * nt, nt);
    std::swap(r -= qt * nr, nr);
  }
  if (r != 1) throw std::invalid_argument("inverse of a noninvertible residue");
  return static_cast<unsigned long>(t < 0 ? t + static_cast<long>(q) : t);
}

ModQuarticX quartic_x_mod(const QuarticModel& f, const CurveModQ& m, const ModPoint& p) {
  unsigned long g1 = mod_ul(f.gammas[0], m.q), s = mod_ul(f.s(), m.q);
  if (p.infinite) return {false, (m.q - g1) % m.q};
  if (p.x == s) return {true, 0};
  unsigned long w = inv_mod_ul((p.x + m.q - s) % m.q, m.q);
  return {false, (mulmod(mod_ul(f.c(), m.q), w, m.q) + m.q - g1) % m.q};
}

namespace {

// All rational points with 2Q = (x1, 0): integer roots of the halving quartic
// (x^2 - AB)^2 - 4 x1 x(x+A)(x+B) carrying a square y^2.
std::vector<CurvePoint> halvings(const WeierstrassCurve& e, const mpz_class& x1) {
  mpz_class ab = e.a4(), s = e.a2();
  std::vector<mpz_class> cs = {ab * ab, -4 * x1 * ab, -2 * ab - 4 * x1 * s,
                               -4 * x1, 1};
  std::vector<CurvePoint> out;
  for (const mpz_class& x : integer_roots(cs))
    if (auto y = rational_sqrt(e.rhs(mpq_class(x))); y && *y != 0) {
      out.push_back(CurvePoint::affine(mpq_class(x), *y));
      out.push_back(CurvePoint::affine(mpq_class(x), -*y));
    }
  return out;
}

void close_under_addition(const WeierstrassCurve& e, std::vector<CurvePoint>& pts) {
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i; j < pts.size(); ++j) {
      CurvePoint r = add(e, pts[i], pts[j]);
      if (std::find(pts.begin(), pts.end(), r) == pts.end()) pts.push_back(r);
      if (pts.size() > 16) throw std::logic_error("torsion closure exceeds 16 points");
    }
}

}  // namespace

TorsionSubgroup torsion_subgroup(const WeierstrassCurve& e) {
  if (e.A <= 0 || e.A >= e.B) throw std::invalid_argument("wants 0 < A < B");
  TorsionSubgroup t;
  unsigned sampled = 0;
  for (unsigned long q : primes_below(10000)) {
    if (!e.good_prime(q)) continue;
    t.reduction_gcd = mpz_class(gcd(mpz_class(t.reduction_gcd),
                                    mpz_class(reduce_curve(e, q).order()))).get_ui();
    if (++sampled >= 5 && t.reduction_gcd <= 16) break;
    if (sampled >= 12) break;
  }
  std::vector<CurvePoint> pts = {
      CurvePoint::at_infinity(), CurvePoint::affine(0, 0),
      CurvePoint::affine(mpq_class(-e.A), 0), CurvePoint::affine(mpq_class(-e.B), 0)};
  // only (0, 0) can halve: x(2Q) = 0 forces x^2 = AB, and the fibers over
  // (-A, 0), (-B, 0) are the complex roots of x^2 + 2Ax + AB resp. x^2 + 2Bx + AB
  mpz_class ab = e.a4();
  std::vector<CurvePoint> quarter;
  if (t.reduction_gcd % 8 == 0 && mpz_perfect_square_p(ab.get_mpz_t())) {
    mpz_class rt = sqrt_exact(ab);
    for (const mpz_class& x : {rt, mpz_class(-rt)})
      if (auto y = rational_sqrt(e.rhs(mpq_class(x))); y && *y != 0) {
        quarter.push_back(CurvePoint::affine(mpq_class(x), *y));
        pts.push_back(CurvePoint::affine(mpq_class(x), *y));
        pts.push_back(CurvePoint::affine(mpq_class(x), -*y));
      }
  }
  if (t.reduction_gcd % 16 == 0)
    for (const CurvePoint& h : quarter) {
      std::vector<CurvePoint> eighth = halvings(e, h.x.get_num());
      pts.insert(pts.end(), eighth.begin(), eighth.end());
    }
  if (t.reduction_gcd % 3 == 0) {
    // 3-division: 3x^4 + 4(A+B)x^3 + 6ABx^2 - (AB)^2, integral by Lutz-Nagell
    std::vector<mpz_class> psi3 = {-ab * ab, 0, 6 * ab, 4 * e.a2(), 3};
    for (const mpz_class& x : integer_roots(psi3))
      if (auto y = rational_sqrt(e.rhs(mpq_class(x))); y && *y != 0) {
        pts.push_back(CurvePoint::affine(mpq_class(x), *y));
        pts.push_back(CurvePoint::affine(mpq_class(x), -*y));
      }
  }
  close_under_addition(e, pts);
  for (const CurvePoint& p : pts)
    if (!on_curve(e, p)) throw std::logic_error("torsion point off the curve");
  if (pts.size() % 4 != 0 || t.reduction_gcd % pts.size() != 0)
    throw std::logic_error("torsion order inconsistent with reductions");
  t.cyclic = static_cast<unsigned>(pts.size() / 4);
  std::sort(pts.begin() + 1, pts.end(), [](const CurvePoint& l, const CurvePoint& r) {
    return l.x < r.x || (l.x == r.x && l.y < r.y);
  });
  t.points = std::move(pts);
  return t;
}

bool is_torsion(const WeierstrassCurve& e, const CurvePoint& p) {
  if (!on_curve(e, p)) throw std::invalid_argument("point off the curve");
  if (p.infinite || p.y == 0) return true;
  // reduction is injective on torsion at every odd prime of good reduction, so a
  // torsion point's order divides each reduced order and hence their lcm
  mpz_class l = 1;
  unsigned sampled = 0;
  for (unsigned long q : primes_below(10000)) {
    if (!e.good_prime(q) || p.x.get_den() % q == 0) continue;
    CurveModQ m = reduce_curve(e, q);
    l = lcm(l, mpz_class(point_order(m, reduce_point(p, m), m.order())));
    if (l > 16) return false;
    if (++sampled >= 3) break;
  }
  return scalar_mul(e, l.get_si(), p).infinite;
}

Rounded naive_x_height(const CurvePoint& p, unsigned prec) {
  if (prec == 0) prec = default_precision();
  if (p.infinite) return Rounded::exact(mpq_class(0), prec);
  mpz_class m = std::max(mpz_class(abs(p.x.get_num())), p.x.get_den());
  return Rounded::log_of(m, prec);
}

namespace {

// Solve the 8x8 system (a F + b G)(u, v) = target over the rationals, where
// a, b run over cubic forms and F, G is the duplication pair.  Returns the sum
// of |coefficients| and the lcm of their denominators.
struct CofactorData {
  mpq_class weight;
  mpz_class denom;
};

CofactorData cofactor_identity(const std::array<mpq_class, 5>& fc,
                               const std::array<mpq_class, 5>& gc, unsigned target) {
  constexpr int n = 8;
  mpq_class m[n][n + 1] = {};
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 5; ++k) {
      m[i + k][i] += fc[k];      // a_i u^i v^(3-i) * F
      m[i + k][4 + i] += gc[k];  // b_i u^i v^(3-i) * G
    }
  m[target][n] = 1;
  for (int col = 0, row = 0; col < n && row < n; ++col) {
    int piv = -1;
    for (int i = row; i < n; ++i)
      if (m[i][col] != 0) { piv = i; break; }
    if (piv < 0) throw std::logic_error("degenerate duplication pair");
    for (int j = 0; j <= n; ++j) std::swap(m[piv][j], m[row][j]);
    for (int i = 0; i < n; ++i) {
      if (i == row || m[i][col] == 0) continue;
      mpq_class f = m[i][col] / m[row][col];
      for (int j = col; j <= n; ++j) m[i][j] -= f * m[row][j];
    }
    ++row;
  }
  CofactorData out{0, 1};
  for (int i = 0; i < n; ++i) {
    mpq_class v = m[i][n] / m[i][i];
    out.weight += abs(v);
    mpz_lcm(out.denom.get_mpz_t(), out.denom.get_mpz_t(), v.get_den().get_mpz_t());
  }
  return out;
}

}  // namespace

Rounded duplication_defect(const WeierstrassCurve& e, unsigned prec) {
  if (prec == 0) prec = default_precision();
  mpz_class ab = e.a4(), s = e.a2();
  // F = (u^2 - AB v^2)^2, G = 4uv(u + Av)(u + Bv), coefficients by u-degree
  std::array<mpq_class, 5> fc = {ab * ab, 0, -2 * ab, 0, 1};
  std::array<mpq_class, 5> gc = {0, 4 * ab, 4 * s, 4, 0};
  CofactorData cu = cofactor_identity(fc, gc, 7), cv = cofactor_identity(fc, gc, 0);
  mpq_class up = (1 + ab) * (1 + ab);
  mpq_class ug = 4 * (1 + e.A) * (1 + e.B);
  mpq_class down = std::max(cu.weight, cv.weight) * lcm(cu.denom, cv.denom);
  return Rounded::log_of(std::max({up, ug, down}), prec);
}

HeightInterval canonical_height(const WeierstrassCurve& e, const CurvePoint& p,
                                unsigned doublings, unsigned prec) {
  if (prec == 0) prec = default_precision();
  HeightInterval out;
  out.defect = duplication_defect(e, prec);
  out.doublings = doublings;
  if (!on_curve(e, p)) throw std::invalid_argument("height of a point off the curve");
  mpq_class x = p.x, ab = mpq_class(e.a4());
  auto torsion_x = [&](const mpq_class& v) {
    return v == 0 || v == -e.A || v == -e.B;
  };
  if (p.infinite || torsion_x(x)) {
    out.hhat = Rounded::exact(mpq_class(0), prec);
    out.doublings = 0;
    return out;
  }
  for (unsigned k = 0; k < doublings; ++k) {
    mpq_class t = x * x - ab;
    x = t * t / (4 * e.rhs(x));
    if (torsion_x(x)) {
      out.hhat = Rounded::exact(mpq_class(0), prec);
      out.doublings = k + 1;
      return out;
    }
  }
  mpz_class m = std::max(mpz_class(abs(x.get_num())), x.get_den());
  Rounded hk = Rounded::log_of(m, prec);
  Rounded third = out.defect * Rounded::exact(mpq_class(1, 3), prec);
  Rounded pm = Rounded::hull(Rounded::exact(mpq_class(0), prec) - third, third);
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 4, doublings);
  out.hhat = Rounded::exact(mpq_class(1, 2 * scale), prec) * (hk + pm);
  return out;
}

Rounded height_pairing(const WeierstrassCurve& e, const CurvePoint& p, const CurvePoint& q,
                       unsigned doublings, unsigned prec) {
  if (prec == 0) prec = default_precision();
  Rounded hpq = canonical_height(e, add(e, p, q), doublings, prec).hhat;
  Rounded hp = canonical_height(e, p, doublings, prec).hhat;
  Rounded hq = canonical_height(e, q, doublings, prec).hhat;
  return (hpq - hp - hq) * Rounded::exact(mpq_class(1, 2), prec);
}

Rounded gram_lambda_min(const Rounded& hp, const Rounded& hpq, const Rounded& hq) {
  Rounded d = hp - hq, four = Rounded::exact_ui(4, hp.precision());
  Rounded disc = (d * d + four * hpq * hpq).sqrt_nonneg();
  return (hp + hq - disc) * Rounded::exact(mpq_class(1, 2), hp.precision());
}

Rounded moebius_defect(const QuarticModel& f, unsigned prec) {
  if (prec == 0) prec = default_precision();
  mpz_class m = std::max({mpz_class(abs(f.s())), mpz_class(abs(f.c() + f.gammas[0] * f.s())),
                          mpz_class(abs(f.gammas[0])), mpz_class(1)});
  return Rounded::log_of(mpz_class(2 * m), prec);
}

std::optional<mpz_class> index_cutoff(const Rounded& hhat, const Rounded& defect,
                                      const Rounded& kappa, const Rounded& log_hmax) {
  if (!hhat.certainly_positive()) return std::nullopt;
  unsigned prec = hhat.precision();
  Rounded budget = log_hmax + defect * Rounded::exact(mpq_class(1, 3), prec) + kappa;
  auto enough = [&](const mpz_class& n) {
    return (Rounded::exact(mpz_class(2 * n * n), prec) * hhat).certainly_ge(budget);
  };
  mpz_class hi = 1;
  while (!enough(hi)) {
    hi *= 2;
    if (mpz_sizeinbase(hi.get_mpz_t(), 2) > 62) return std::nullopt;
  }
  mpz_class lo = 1;
  while (lo < hi) {
    mpz_class mid = (lo + hi) / 2;
    if (enough(mid)) hi = mid; else lo = mid + 1;
  }
  return lo;
}

}  // namespace rungekit
