#include "rungekit/rational_poly.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>

namespace rungekit {

RationalPoly::RationalPoly(std::vector<mpq_class> coeffs)
    : coeffs_(std::move(coeffs)) {
  trim();
}

RationalPoly RationalPoly::constant(const mpq_class& c) {
  return RationalPoly({c});
}

RationalPoly RationalPoly::x() { return RationalPoly({0, 1}); }

void RationalPoly::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

mpq_class RationalPoly::coeff(std::size_t i) const {
  return i < coeffs_.size() ? coeffs_[i] : mpq_class(0);
}

const mpq_class& RationalPoly::leading_coeff() const {
  if (coeffs_.empty())
    throw std::invalid_argument("leading_coeff of zero polynomial");
  return coeffs_.back();
}

bool RationalPoly::is_monic() const {
  return !coeffs_.empty() && coeffs_.back() == 1;
}

bool RationalPoly::has_integer_coeffs() const {
  for (const auto& c : coeffs_)
    if (c.get_den() != 1) return false;
  return true;
}

RationalPoly RationalPoly::operator+(const RationalPoly& o) const {
  std::vector<mpq_class> out(std::max(coeffs_.size(), o.coeffs_.size()), 0);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = coeff(i) + o.coeff(i);
  return RationalPoly(std::move(out));
}

RationalPoly RationalPoly::operator-(const RationalPoly& o) const {
  std::vector<mpq_class> out(std::max(coeffs_.size(), o.coeffs_.size()), 0);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = coeff(i) - o.coeff(i);
  return RationalPoly(std::move(out));
}

RationalPoly RationalPoly::operator*(const RationalPoly& o) const {
  if (is_zero() || o.is_zero()) return RationalPoly();
  std::vector<mpq_class> out(coeffs_.size() + o.coeffs_.size() - 1, 0);
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    for (std::size_t j = 0; j < o.coeffs_.size(); ++j)
      out[i + j] += coeffs_[i] * o.coeffs_[j];
  return RationalPoly(std::move(out));
}

RationalPoly RationalPoly::operator-() const { return scaled(-1); }

RationalPoly RationalPoly::scaled(const mpq_class& c) const {
  std::vector<mpq_class> out = coeffs_;
  for (auto& v : out) v *= c;
  return RationalPoly(std::move(out));
}

RationalPoly RationalPoly::derivative() const {
  if (coeffs_.size() <= 1) return RationalPoly();
  std::vector<mpq_class> out(coeffs_.size() - 1);
  for (std::size_t i = 1; i < coeffs_.size(); ++i)
    out[i - 1] = coeffs_[i] * static_cast<unsigned long>(i);
  return RationalPoly(std::move(out));
}

mpq_class RationalPoly::eval(const mpq_class& x) const {
  mpq_class acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it)
    acc = acc * x + *it;
  return acc;
}

std::pair<RationalPoly, RationalPoly> RationalPoly::divmod(
    const RationalPoly& d) const {
  if (d.is_zero()) throw std::invalid_argument("divmod by zero polynomial");
  std::vector<mpq_class> rem = coeffs_;
  long dd = d.degree();
  if (degree() < dd) return {RationalPoly(), *this};
  std::vector<mpq_class> quo(degree() - dd + 1, 0);
  const mpq_class& lc = d.leading_coeff();
  for (long i = degree(); i >= dd; --i) {
    mpq_class q = rem[i] / lc;
    if (q == 0) continue;
    quo[i - dd] = q;
    for (long j = 0; j <= dd; ++j) rem[i - dd + j] -= q * d.coeffs_[j];
  }
  return {RationalPoly(std::move(quo)), RationalPoly(std::move(rem))};
}

RationalPoly RationalPoly::gcd(RationalPoly a, RationalPoly b) {
  while (!b.is_zero()) {
    RationalPoly r = a.divmod(b).second;
    a = std::move(b);
    b = std::move(r);
  }
  if (a.is_zero()) return a;
  return a.scaled(1 / a.leading_coeff());
}

bool RationalPoly::is_squarefree() const {
  if (degree() <= 0) return !is_zero();
  return gcd(*this, derivative()).degree() == 0;
}

mpq_class resultant(const RationalPoly& f, const RationalPoly& g) {
  if (f.is_zero() || g.is_zero())
    return (f.degree() <= 0 && g.degree() <= 0) ? mpq_class(1) : mpq_class(0);
  if (f.degree() == 0) {
    mpq_class out;
    mpz_pow_ui(mpq_numref(out.get_mpq_t()),
               f.coeffs()[0].get_num().get_mpz_t(), g.degree());
    mpz_pow_ui(mpq_denref(out.get_mpq_t()),
               f.coeffs()[0].get_den().get_mpz_t(), g.degree());
    out.canonicalize();
    return out;
  }
  if (g.degree() == 0) {
    mpq_class c = resultant(g, f);
    return (f.degree() % 2 && g.degree() % 2) ? mpq_class(-c) : c;
  }
  if (f.degree() < g.degree()) {
    mpq_class c = resultant(g, f);
    return (f.degree() % 2 && g.degree() % 2) ? mpq_class(-c) : c;
  }
  RationalPoly r = f.divmod(g).second;
  if (r.is_zero()) return 0;
  mpq_class lead = g.leading_coeff();
  mpq_class scale = 1;
  for (long i = 0; i < f.degree() - r.degree(); ++i) scale *= lead;
  mpq_class sign = (f.degree() % 2 && g.degree() % 2) ? -1 : 1;
  return sign * scale * resultant(g, r);
}

mpq_class poly_discriminant(const RationalPoly& f) {
  if (f.degree() < 1)
    throw std::invalid_argument("discriminant needs degree >= 1");
  mpq_class res = resultant(f, f.derivative());
  long d = f.degree();
  mpq_class sign = ((d * (d - 1) / 2) % 2) ? -1 : 1;
  return sign * res / f.leading_coeff();
}

PolyHeight poly_height(const RationalPoly& f) {
  if (f.is_zero()) throw std::invalid_argument("height of zero polynomial");
  mpz_class den_lcm = 1;
  for (const auto& c : f.coeffs())
    mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(),
            c.get_den().get_mpz_t());
  std::vector<mpz_class> ints;
  ints.reserve(f.coeffs().size());
  mpz_class content = 0;
  for (const auto& c : f.coeffs()) {
    mpz_class v = c.get_num() * (den_lcm / c.get_den());
    mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), v.get_mpz_t());
    ints.push_back(std::move(v));
  }
  mpz_class mx = 0;
  for (auto& v : ints) {
    v /= content;
    mpz_class a = abs(v);
    if (a > mx) mx = a;
  }
  return {mx, mx};
}

bool pairwise_coprime_squarefree(const std::vector<RationalPoly>& fs) {
  for (std::size_t i = 0; i < fs.size(); ++i) {
    if (!fs[i].is_squarefree()) return false;
    for (std::size_t j = i + 1; j < fs.size(); ++j)
      if (RationalPoly::gcd(fs[i], fs[j]).degree() != 0) return false;
  }
  return true;
}

namespace {

// Minimal recursive-descent parser for sums of rational monomials in x.
struct PolyParser {
  const std::string& s;
  std::size_t i = 0;

  explicit PolyParser(const std::string& text) : s(text) {}

  void skip_ws() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }

  bool eat(char c) {
    skip_ws();
    if (i < s.size() && s[i] == c) {
      ++i;
      return true;
    }
    return false;
  }

  mpz_class integer() {
    skip_ws();
    std::size_t start = i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (i == start) throw std::invalid_argument("polynomial parse: expected digits at position " + std::to_string(start));
    return mpz_class(s.substr(start, i - start));
  }

  // [coefficient] [* ] [x [^ exponent]]
  RationalPoly term() {
    mpq_class coef = 1;
    bool have_coef = false;
    skip_ws();
    if (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
      mpz_class num = integer();
      mpz_class den = 1;
      if (eat('/')) den = integer();
      if (den == 0) throw std::invalid_argument("polynomial parse: zero denominator");
      coef = mpq_class(num, den);
      coef.canonicalize();
      have_coef = true;
      eat('*');
    }
    unsigned long exp = 0;
    if (eat('x')) {
      exp = 1;
      if (eat('^')) {
        mpz_class e = integer();
        if (!e.fits_ulong_p()) throw std::invalid_argument("polynomial parse: exponent too large");
        exp = e.get_ui();
      }
    } else if (!have_coef) {
      throw std::invalid_argument("polynomial parse: expected term at position " + std::to_string(i));
    }
    std::vector<mpq_class> c(exp + 1, 0);
    c[exp] = coef;
    return RationalPoly(std::move(c));
  }

  RationalPoly parse() {
    RationalPoly acc;
    bool neg = eat('-');
    if (!neg) eat('+');
    acc = neg ? -term() : term();
    for (;;) {
      skip_ws();
      if (i >= s.size()) break;
      if (eat('+'))
        acc = acc + term();
      else if (eat('-'))
        acc = acc - term();
      else
        throw std::invalid_argument("polynomial parse: unexpected character at position " + std::to_string(i));
    }
    return acc;
  }
};

}  // namespace

RationalPoly RationalPoly::parse(const std::string& text) {
  PolyParser p(text);
  return p.parse();
}

std::string RationalPoly::to_string() const {
  if (is_zero()) return "0";
  std::ostringstream out;
  bool first = true;
  for (long i = degree(); i >= 0; --i) {
    mpq_class c = coeff(i);
    if (c == 0) continue;
    if (first) {
      if (c < 0) out << "-";
    } else {
      out << (c < 0 ? " - " : " + ");
    }
    mpq_class a = abs(c);
    if (i == 0 || a != 1) out << a.get_str();
    if (i > 0) {
      if (a != 1) out << "*";
      out << "x";
      if (i > 1) out << "^" << i;
    }
    first = false;
  }
  return out.str();
}

}  // namespace rungekit
