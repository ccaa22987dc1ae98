#include <rungekit/generator_db.hpp>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace rungekit {

namespace {

using nlohmann::ordered_json;

std::string record_key(const std::array<mpz_class, 4>& gammas, const mpz_class& a) {
  std::string k;
  for (const mpz_class& g : gammas) k += g.get_str() + ",";
  k += "|" + a.get_str();
  return k;
}

mpq_class parse_rational(const ordered_json& num, const ordered_json& den, const std::string& where) {
  if (!num.is_string() || !den.is_string())
    throw DataError(where + ": coordinates must be decimal strings");
  mpz_class n, d;
  try {
    n = mpz_class(num.get<std::string>());
    d = mpz_class(den.get<std::string>());
  } catch (const std::invalid_argument&) {
    throw DataError(where + ": malformed integer literal");
  }
  if (d == 0) throw DataError(where + ": zero denominator");
  mpq_class q(n, d);
  q.canonicalize();
  return q;
}

ordered_json rational_parts(const mpq_class& v) {
  return ordered_json::array({v.get_num().get_str(), v.get_den().get_str()});
}

}  // namespace

QuarticModel GeneratorRecord::model() const {
  return quartic_model(gammas, a);
}

std::vector<std::string> GeneratorRecord::assumptions() const {
  std::ostringstream tag;
  tag << "curve a=" << a << " gammas=[" << gammas[0] << "," << gammas[1] << ","
      << gammas[2] << "," << gammas[3] << "]";
  std::vector<std::string> out;
  out.push_back(tag.str() + ": rank " + std::to_string(rank) + " assumed");
  if (!gens.empty())
    out.push_back(tag.str() + ": recorded points assumed to generate modulo torsion");
  return out;
}

GeneratorDb GeneratorDb::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open generator database: " + path);
  return parse(in, path);
}

GeneratorDb GeneratorDb::parse(std::istream& in, const std::string& name) {
  GeneratorDb db;
  std::string line;
  unsigned long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::string where = name + ":" + std::to_string(lineno);
    ordered_json j;
    try {
      j = ordered_json::parse(line);
    } catch (const ordered_json::parse_error& e) {
      throw DataError(where + ": " + e.what());
    }
    if (!j.is_object() || !j.contains("gammas") || !j.contains("aJ") || !j.contains("rank"))
      throw DataError(where + ": wants gammas, aJ, rank");
    GeneratorRecord rec;
    if (!j["gammas"].is_array() || j["gammas"].size() != 4)
      throw DataError(where + ": gammas wants 4 entries");
    for (int i = 0; i < 4; ++i) {
      if (!j["gammas"][i].is_number_integer()) throw DataError(where + ": gammas wants integers");
      rec.gammas[i] = mpz_class(j["gammas"][i].get<long>());
    }
    if (!j["aJ"].is_number_integer()) throw DataError(where + ": aJ wants an integer");
    rec.a = mpz_class(j["aJ"].get<long>());
    if (!j["rank"].is_number_integer()) throw DataError(where + ": rank wants an integer");
    rec.rank = j["rank"].get<int>();
    if (j.contains("gens")) {
      if (!j["gens"].is_array()) throw DataError(where + ": gens wants an array");
      for (const ordered_json& g : j["gens"]) {
        if (!g.is_array() || g.size() != 4) throw DataError(where + ": gens entries want 4 strings");
        mpq_class x = parse_rational(g[0], g[1], where);
        mpq_class y = parse_rational(g[2], g[3], where);
        rec.gens.push_back(CurvePoint::affine(x, y));
      }
    }
    if (j.contains("torsion_order") && !j["torsion_order"].is_null()) {
      if (!j["torsion_order"].is_number_unsigned()) throw DataError(where + ": torsion_order wants a count");
      rec.torsion_order = j["torsion_order"].get<unsigned>();
    }
    if (j.contains("provenance") && j["provenance"].is_string())
      rec.provenance = j["provenance"].get<std::string>();
    try {
      db.insert(std::move(rec));
    } catch (const DataError& e) {
      throw DataError(where + ": " + e.what());
    }
  }
  return db;
}

void GeneratorDb::insert(GeneratorRecord rec) {
  QuarticModel f;
  try {
    f = rec.model();
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string("invalid curve: ") + e.what());
  }
  if (rec.rank < 0 || rec.rank > 2) throw DataError("rank outside the supported range 0..2");
  if (rec.gens.size() != static_cast<std::size_t>(rec.rank))
    throw DataError("wants exactly one recorded generator per unit of rank");
  WeierstrassCurve e = f.curve();
  for (const CurvePoint& g : rec.gens) {
    if (!on_curve(e, g)) throw DataError("recorded generator is off the curve");
    if (is_torsion(e, g)) throw DataError("recorded generator is torsion");
  }
  if (rec.torsion_order && *rec.torsion_order != torsion_subgroup(e).order())
    throw DataError("torsion_order disagrees with the computed subgroup");
  std::string key = record_key(rec.gammas, rec.a);
  if (index_.count(key)) throw DataError("duplicate record for " + key);
  index_[key] = records_.size();
  records_.push_back(std::move(rec));
}

const GeneratorRecord* GeneratorDb::find(const std::array<mpz_class, 4>& gammas,
                                         const mpz_class& a) const {
  auto it = index_.find(record_key(gammas, a));
  return it == index_.end() ? nullptr : &records_[it->second];
}

const GeneratorRecord* GeneratorDb::find(const QuarticModel& f) const {
  return find(f.gammas, f.a);
}

std::string GeneratorDb::serialize() const {
  std::string out;
  for (const auto& [key, idx] : index_) {
    const GeneratorRecord& rec = records_[idx];
    ordered_json j;
    j["gammas"] = {rec.gammas[0].get_si(), rec.gammas[1].get_si(), rec.gammas[2].get_si(),
                   rec.gammas[3].get_si()};
    j["aJ"] = rec.a.get_si();
    j["rank"] = rec.rank;
    ordered_json gens = ordered_json::array();
    for (const CurvePoint& g : rec.gens) {
      ordered_json coords = rational_parts(g.x);
      ordered_json ycoords = rational_parts(g.y);
      coords.insert(coords.end(), ycoords.begin(), ycoords.end());
      gens.push_back(coords);
    }
    j["gens"] = gens;
    if (rec.torsion_order)
      j["torsion_order"] = *rec.torsion_order;
    else
      j["torsion_order"] = nullptr;
    j["provenance"] = rec.provenance;
    out += j.dump() + "\n";
  }
  return out;
}

void GeneratorDb::save(const std::string& path) const {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError("cannot write generator database: " + path);
  out << serialize();
}

GeneratorRecord search_generators(const QuarticModel& f, unsigned num_limit, unsigned den_limit) {
  WeierstrassCurve e = f.curve();
  TorsionSubgroup tors = torsion_subgroup(e);
  GeneratorRecord rec;
  rec.gammas = f.gammas;
  rec.a = f.a;
  rec.torsion_order = tors.order();

  std::vector<CurvePoint> found;
  std::set<std::string> seen;
  for (unsigned long w = 1; w <= den_limit; ++w) {
    for (long u = -static_cast<long>(num_limit); u <= static_cast<long>(num_limit); ++u) {
      if (mpz_class(gcd(mpz_class(u), mpz_class(w))) != 1) continue;
      mpz_class t = f.a;
      for (const mpz_class& g : f.gammas) t *= u + g * static_cast<long>(w);
      if (t <= 0 || !mpz_perfect_square_p(t.get_mpz_t())) continue;
      mpz_class rt;
      mpz_sqrt(rt.get_mpz_t(), t.get_mpz_t());
      mpq_class x(u, w), y(rt, f.a * w * w);
      x.canonicalize();
      y.canonicalize();
      CurvePoint p = lift_to_curve(f, x, y);
      if (is_torsion(e, p)) continue;
      if (!seen.insert(p.x.get_str()).second) continue;
      found.push_back(p);
    }
  }
  std::sort(found.begin(), found.end(), [](const CurvePoint& l, const CurvePoint& r) {
    mpz_class hl = std::max(mpz_class(abs(l.x.get_num())), l.x.get_den());
    mpz_class hr = std::max(mpz_class(abs(r.x.get_num())), r.x.get_den());
    return hl < hr || (hl == hr && l.x < r.x);
  });

  if (!found.empty()) {
    rec.gens.push_back(found[0]);
    rec.rank = 1;
    HeightInterval h1 = canonical_height(e, found[0], 8);
    std::size_t tried = 0;
    for (std::size_t i = 1; i < found.size() && tried < 6 && rec.rank < 2; ++i, ++tried) {
      HeightInterval h2 = canonical_height(e, found[i], 8);
      Rounded h12 = height_pairing(e, found[0], found[i], 8);
      if (gram_lambda_min(h1.hhat, h12, h2.hhat).certainly_positive()) {
        rec.gens.push_back(found[i]);
        rec.rank = 2;
      }
    }
  }
  std::ostringstream prov;
  prov << "search(num<=" << num_limit << ",den<=" << den_limit << "), independence by height gram";
  rec.provenance = prov.str();
  return rec;
}

}  // namespace rungekit
