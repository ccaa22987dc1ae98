#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include <rungekit/elliptic.hpp>
#include <rungekit/generator_db.hpp>
#include <rungekit/rounded.hpp>

namespace rungekit {

// Six chosen terms x + gamma_i d = a_i z_i^2 of a k-term window: gamma_1 = 0 <
// ... < gamma_6 < k, each a_i positive squarefree and 11-smooth, and a prime
// dividing two of the a_i must divide the difference of their offsets.
struct Configuration {
  unsigned k = 0;
  std::array<unsigned, 6> gammas{};
  std::array<mpz_class, 6> parts;
};

bool parts_compatible(const std::array<unsigned, 6>& gammas,
                      const std::array<mpz_class, 6>& parts);
Configuration make_configuration(unsigned k, const std::array<unsigned, 6>& gammas,
                                 const std::array<mpz_class, 6>& parts);
std::string describe(const Configuration& c);

// Lazy lexicographic enumeration: offset combinations ascending, then the six
// coefficients as an odometer over the admissible squarefree values, keeping
// only compatible assignments.
class ConfigurationStream {
 public:
  explicit ConfigurationStream(unsigned k);
  std::optional<Configuration> next();

 private:
  unsigned k_ = 0;
  std::vector<unsigned> combo_;
  std::array<std::size_t, 6> avals_{};
  std::vector<mpz_class> values_;
  bool done_ = false, fresh_ = true;

  bool advance();
};

// The fifteen quadruples of term indices, lexicographic.
const std::array<std::array<unsigned, 4>, 15>& quadruple_subsets();

// One curve per quadruple J: a_J Y^2 = prod_{j in J} (X + gamma_j) in the
// shared coordinate X = x/d, with a_J the squarefree part of prod a_j.
std::vector<QuarticModel> curves_for(const Configuration& c);

// Exact test that x could be the shared coordinate of a solution: every
// quadruple value a_J prod (x + gamma_j) must be a rational square.
bool consistent_with_all_curves(const Configuration& c, const mpq_class& x);

// Membership of a mod-q quartic coordinate on a quartic curve.  A finite
// value needs a prod (xi + gamma) to be a square or zero in F_q; the infinite
// marker needs a itself to be a nonzero square.  Sound for q > 17 because all
// coefficient primes lie below that.
bool on_quartic_mod(const QuarticModel& f, unsigned long q, const ModQuarticX& xi);

// Residues n modulo the reduced order of gen_b (one row per torsion translate
// of curve B) whose image can meet curve A modulo q.  The tracked version
// compares against the reductions of the known rational points of curve A, the
// membership version against all of A(F_q).  Empty when q <= 17 or q is bad
// for either curve.
struct AllowedClasses {
  unsigned long q = 0;
  unsigned long order_a = 0;  // reduced order of gen_a (tracked version only)
  unsigned long order_b = 0;
  std::vector<std::vector<unsigned long>> allowed;
};
std::optional<AllowedClasses> allowed_classes(const QuarticModel& fa, const CurvePoint& gen_a,
                                              const std::vector<CurvePoint>& tors_a,
                                              const QuarticModel& fb, const CurvePoint& gen_b,
                                              const std::vector<CurvePoint>& tors_b,
                                              unsigned long q);
std::optional<AllowedClasses> membership_classes(const QuarticModel& fa, const QuarticModel& fb,
                                                 const CurvePoint& gen_b,
                                                 const std::vector<CurvePoint>& tors_b,
                                                 unsigned long q);

struct CaseResult {
  int case_used = 0;
  std::vector<mpq_class> candidates;      // shared coordinates surviving every filter
  std::vector<std::string> assumptions;
  std::vector<std::string> failures;      // nonempty: the configuration stays open
};

// Rank 0: candidates are the finitely many torsion coordinates.
CaseResult case_one(const Configuration& c, std::size_t which);

// Two independent rank-1 curves: congruence classes of the index n along curve
// B are cut down at primes where gen_a has small reduced order, intersected by
// remainder until the modulus clears the height window, screened at further
// primes, and finished exactly.
CaseResult case_two(const Configuration& c, std::size_t tracked, std::size_t indexing,
                    const CurvePoint& gen_a, const CurvePoint& gen_b, const Rounded& log_hmax,
                    unsigned prec = 0);

// One rank-2 curve: pairs (m, n) are restricted modulo groups of primes
// sharing the same reduced order pair, pieced together across two groups, and
// finished exactly.
CaseResult case_three(const Configuration& c, std::size_t which, const CurvePoint& g1,
                      const CurvePoint& g2, const Rounded& log_hmax, unsigned prec = 0);

// Dispatch on the database: a rank-0 curve if one exists, else rank-1 pairs,
// else a rank-2 curve.
CaseResult sieve_config(const Configuration& c, const GeneratorDb& db, const Rounded& log_hmax,
                        unsigned prec = 0);

// b y^2 = prod (x + gamma_i d) with the cofactor b free of prime factors >= k.
// Returns (b, y); empty when some prime >= k divides the product to odd order.
// Offsets must be strictly increasing from gamma_1 = 0 within [0, k).
std::optional<std::pair<mpz_class, mpz_class>> verify_solution(const mpz_class& x,
                                                               const mpz_class& d,
                                                               const std::vector<unsigned>& gammas,
                                                               unsigned k);

// The divisor-count side condition: omega(d) < 2^(r - pi(k-1) - eps) - 2 where
// eps records a prime factor of the squarefree part of d beyond k - 1.
bool admissible_omega(const mpz_class& d, unsigned k, unsigned r);

struct Witness {
  std::vector<unsigned> gammas;
  mpz_class b, y;
};
std::optional<Witness> find_witness(const mpz_class& x, const mpz_class& d, unsigned k, unsigned r);

struct SieveSolution {
  mpz_class d, x, b, y;
  unsigned k = 0;
  std::vector<unsigned> gammas;
  int case_used = 0;
  std::vector<std::string> assumptions;
};
struct SkippedConfig {
  Configuration config;
  std::string reason;
};
struct RunResult {
  unsigned k = 0, psi = 0;
  unsigned long configs_processed = 0;
  std::vector<SieveSolution> solutions;  // sorted by (d, x)
  std::vector<SkippedConfig> skipped;
};

RunResult run_sieve(unsigned k, unsigned psi, const GeneratorDb& db, const Rounded& log_hmax,
                    unsigned long config_limit, unsigned jobs = 1);

// The published solution list: for each difference d, the ascending initial
// terms x of the known progression squares.
const std::vector<std::pair<unsigned long, std::vector<unsigned long>>>& solution_table();

struct TableDiff {
  std::vector<std::pair<mpz_class, mpz_class>> unexpected;        // found, not listed
  std::vector<std::pair<unsigned long, unsigned long>> unmatched;  // listed, not found
};
TableDiff check_against_table(const std::vector<SieveSolution>& found);

}  // namespace rungekit
