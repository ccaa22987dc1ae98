#pragma once

#include <array>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

#include <rungekit/elliptic.hpp>

namespace rungekit {

// Malformed or inconsistent external input (database files, result files).
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One Mordell-Weil claim for the curve a y^2 = prod (x + gamma_i).  Points are
// stored on the integral model y^2 = x(x+A)(x+B); on load they are re-verified
// to lie on the curve and to be non-torsion, but the rank itself and the claim
// that the points generate modulo torsion are recorded assumptions.
struct GeneratorRecord {
  std::array<mpz_class, 4> gammas;
  mpz_class a = 1;
  int rank = 0;
  std::vector<CurvePoint> gens;
  std::optional<unsigned> torsion_order;
  std::string provenance;

  QuarticModel model() const;
  std::vector<std::string> assumptions() const;
};

// Line-delimited JSON store keyed by (gammas, a).  Serialization is sorted and
// byte-deterministic so regenerated files diff cleanly.
class GeneratorDb {
 public:
  GeneratorDb() = default;

  static GeneratorDb load(const std::string& path);
  static GeneratorDb parse(std::istream& in, const std::string& name);

  void insert(GeneratorRecord rec);
  const GeneratorRecord* find(const std::array<mpz_class, 4>& gammas, const mpz_class& a) const;
  const GeneratorRecord* find(const QuarticModel& f) const;
  std::size_t size() const { return records_.size(); }
  const std::vector<GeneratorRecord>& records() const { return records_; }

  std::string serialize() const;
  void save(const std::string& path) const;

 private:
  std::vector<GeneratorRecord> records_;
  std::map<std::string, std::size_t> index_;
};

// Deterministic small-height search for independent points on the quartic
// model: X = u/w with |u| <= num_limit + gamma_4 * w, w <= den_limit.  Rank is
// set to the number of points found whose height Gram matrix is certainly
// nondegenerate (capped at 2); absence of small points is recorded as rank 0.
GeneratorRecord search_generators(const QuarticModel& f, unsigned num_limit = 2000,
                                  unsigned den_limit = 24);

}  // namespace rungekit
