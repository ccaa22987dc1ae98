#pragma once

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include <rungekit/rounded.hpp>

namespace rungekit {

// Y^2 = X (X + A)(X + B) with 0 < A < B, so the 2-torsion is rational.
struct WeierstrassCurve {
  mpz_class A, B;

  mpz_class a2() const { return A + B; }
  mpz_class a4() const { return A * B; }
  mpz_class discriminant() const;  // 16 A^2 B^2 (A - B)^2
  bool good_prime(unsigned long q) const;
  mpq_class rhs(const mpq_class& x) const;
  bool operator==(const WeierstrassCurve& o) const { return A == o.A && B == o.B; }
};

// a y^2 = prod_i (x + g_i) with g_1 < g_2 < g_3 < g_4 and a positive squarefree.
// Birational to its Weierstrass curve through x = c/(X - s) - g_1; the locus
// X = s corresponds to the places at infinity of the quartic model.
struct QuarticModel {
  std::array<mpz_class, 4> gammas;
  mpz_class a;

  WeierstrassCurve curve() const;
  mpz_class s() const;   // a (g2 - g1)(g3 - g1)
  mpz_class c() const;   // s (g4 - g1)
  mpz_class cp() const;  // (g2 - g1)(g3 - g1)(g4 - g1)
  mpq_class rhs(const mpq_class& x) const;
};

QuarticModel quartic_model(const std::array<mpz_class, 4>& gammas, const mpz_class& a);

struct CurvePoint {
  bool infinite = false;
  mpq_class x, y;

  static CurvePoint at_infinity();
  static CurvePoint affine(const mpq_class& x, const mpq_class& y);
  bool operator==(const CurvePoint& o) const;
};

bool on_curve(const WeierstrassCurve& e, const CurvePoint& p);
CurvePoint negate(const CurvePoint& p);
CurvePoint add(const WeierstrassCurve& e, const CurvePoint& p, const CurvePoint& q);
CurvePoint scalar_mul(const WeierstrassCurve& e, long n, const CurvePoint& p);

// x on the quartic model of a curve point; infinite exactly at X = s.
struct QuarticX {
  bool infinite = false;
  mpq_class x;
};
QuarticX quartic_x(const QuarticModel& f, const CurvePoint& p);

// Curve point above a quartic point; (-g_1, 0) lifts to infinity.  Throws if
// (x, y) does not satisfy the quartic equation.
CurvePoint lift_to_curve(const QuarticModel& f, const mpq_class& x, const mpq_class& y);

// Reduction at a good odd prime q.  All coordinate arithmetic stays below
// 2^63 because order computation restricts q to < 10^4.
struct ModPoint {
  bool infinite = false;
  unsigned long x = 0, y = 0;

  bool operator==(const ModPoint& o) const {
    return infinite == o.infinite && (infinite || (x == o.x && y == o.y));
  }
};

struct CurveModQ {
  unsigned long q = 0, a2 = 0, a4 = 0;

  bool on_curve(const ModPoint& p) const;
  ModPoint add(const ModPoint& p, const ModPoint& r) const;
  ModPoint mul(unsigned long n, const ModPoint& p) const;
  unsigned long order() const;  // #E(F_q) by quadratic-character scan; wants q < 10^4
};

CurveModQ reduce_curve(const WeierstrassCurve& e, unsigned long q);
ModPoint reduce_point(const CurvePoint& p, const CurveModQ& m);
unsigned long point_order(const CurveModQ& m, const ModPoint& p, unsigned long group_order);

long legendre_ul(unsigned long v, unsigned long q);
unsigned long inv_mod_ul(unsigned long v, unsigned long q);

// x on the quartic model of a mod-q point.
struct ModQuarticX {
  bool infinite = false;
  unsigned long x = 0;
};
ModQuarticX quartic_x_mod(const QuarticModel& f, const CurveModQ& m, const ModPoint& p);

// Full torsion: Z/2 x Z/2n with n <= 4.  Division points are located through
// the closed duplication form x(2P) = (x^2 - AB)^2 / (4 x(x+A)(x+B)), whose
// fibers over the 2-torsion are explicit quartics; the order is cross-checked
// against gcd(#E(F_q)) over sampled good primes.
struct TorsionSubgroup {
  unsigned cyclic = 1;             // the n of Z/2 x Z/2n
  std::vector<CurvePoint> points;  // all 4n points, infinity first
  unsigned long reduction_gcd = 0;

  unsigned order() const { return static_cast<unsigned>(points.size()); }
};
TorsionSubgroup torsion_subgroup(const WeierstrassCurve& e);

// Decides torsion exactly: reduced orders at a few good odd primes cap the
// possible order, then one exact multiple settles it.
bool is_torsion(const WeierstrassCurve& e, const CurvePoint& p);

Rounded naive_x_height(const CurvePoint& p, unsigned prec = 0);

// One-step duplication distortion: |h(x(2P)) - 4 h(x(P))| <= defect for every
// rational point.  Upper side from coefficient sums of the duplication pair,
// lower side from degree-7 cofactor identities solved exactly.
Rounded duplication_defect(const WeierstrassCurve& e, unsigned prec = 0);

struct HeightInterval {
  Rounded hhat;    // contains the canonical height
  Rounded defect;  // the duplication distortion used
  unsigned doublings = 0;
};
HeightInterval canonical_height(const WeierstrassCurve& e, const CurvePoint& p,
                                unsigned doublings = 6, unsigned prec = 0);
Rounded height_pairing(const WeierstrassCurve& e, const CurvePoint& p, const CurvePoint& q,
                       unsigned doublings = 6, unsigned prec = 0);
Rounded gram_lambda_min(const Rounded& hp, const Rounded& hpq, const Rounded& hq);

// Coordinate-change loss: h(x_quartic) >= h(X_curve) - moebius_defect.
Rounded moebius_defect(const QuarticModel& f, unsigned prec = 0);

// Least N with 2 N^2 hhat_lo - defect/3 - kappa > log_hmax, so indices |n| >= N
// cannot reach a quartic x of height below log_hmax.  Empty when hhat is not
// certainly positive or no N below 2^62 works.
std::optional<mpz_class> index_cutoff(const Rounded& hhat, const Rounded& defect,
                                      const Rounded& kappa, const Rounded& log_hmax);

}  // namespace rungekit
