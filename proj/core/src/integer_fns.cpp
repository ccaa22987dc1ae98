#include "rungekit/integer_fns.hpp"

#include <algorithm>
#include <mutex>
#include <stdexcept>

namespace rungekit {
namespace {

constexpr std::uint64_t kTrialLimit = 1000000;  // trial division bound

// Odd-composite sieve marks we share between factorize / prime_pi /
// primes_below.  Built once, below kTrialLimit.
const std::vector<std::uint64_t>& small_primes() {
  static const std::vector<std::uint64_t> primes = [] {
    std::vector<bool> composite(kTrialLimit, false);
    std::vector<std::uint64_t> out;
    for (std::uint64_t i = 2; i < kTrialLimit; ++i) {
      if (composite[i]) continue;
      out.push_back(i);
      for (std::uint64_t j = i * i; j < kTrialLimit; j += i) composite[j] = true;
    }
    return out;
  }();
  return primes;
}

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(
      static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

// Miller-Rabin with a base set known to be exact for all n < 2^64.
bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull,
                          23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) d >>= 1, ++s;
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull,
                          23ull, 29ull, 31ull, 37ull}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

// Pollard-Brent with a fixed schedule of curve constants; n must be odd,
// composite, and free of factors below kTrialLimit, so any nontrivial
// gcd it finds is a proper split.
mpz_class pollard_brent(const mpz_class& n) {
  for (unsigned long c = 1;; ++c) {
    mpz_class y = 2, q = 1, g = 1, x, ys;
    const unsigned long m = 128;
    unsigned long r = 1;
    while (g == 1) {
      x = y;
      for (unsigned long i = 0; i < r; ++i) y = (y * y + c) % n;
      for (unsigned long k = 0; k < r && g == 1; k += m) {
        ys = y;
        for (unsigned long i = 0; i < m && i < r - k; ++i) {
          y = (y * y + c) % n;
          q = q * (x - y) % n;
        }
        mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
      }
      r *= 2;
    }
    if (g == n) {
      // Backtrack one squaring at a time to recover the factor.
      do {
        ys = (ys * ys + c) % n;
        mpz_class diff = x - ys;
        mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
      } while (g == 1);
    }
    if (g != n) return g;
    // Cycle collapsed for this c; retry with the next constant.
  }
}

void factor_into(const mpz_class& n, std::vector<mpz_class>& primes_out) {
  if (n == 1) return;
  if (is_prime(n)) {
    primes_out.push_back(n);
    return;
  }
  mpz_class d = pollard_brent(n);
  factor_into(d, primes_out);
  factor_into(mpz_class(n / d), primes_out);
}

}  // namespace

bool is_prime(const mpz_class& n) {
  if (n < 2) return false;
  if (n.fits_ulong_p()) return is_prime_u64(n.get_ui());
  if (mpz_sizeinbase(n.get_mpz_t(), 2) <= 64) {
    // Doesn't fit an unsigned long only on exotic ABIs; take the u64 path
    // through export to stay deterministic.
    std::uint64_t v = 0;
    mpz_export(&v, nullptr, -1, sizeof(v), 0, 0, n.get_mpz_t());
    return is_prime_u64(v);
  }
  return mpz_probab_prime_p(n.get_mpz_t(), 40) > 0;
}

FactoredInteger factorize(const mpz_class& n) {
  if (n == 0) throw std::invalid_argument("factorize: 0 has no factorization");
  mpz_class m = abs(n);
  std::vector<PrimePower> factors;
  for (std::uint64_t p : small_primes()) {
    if (m == 1) break;
    if (mpz_class(p) * p > m) break;  // remaining part is prime or 1
    if (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
      unsigned e = 0;
      do {
        mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), p);
        ++e;
      } while (mpz_divisible_ui_p(m.get_mpz_t(), p));
      factors.push_back({mpz_class(p), e});
    }
  }
  if (m > 1) {
    std::vector<mpz_class> rest;
    factor_into(m, rest);
    std::sort(rest.begin(), rest.end());
    for (std::size_t i = 0; i < rest.size();) {
      std::size_t j = i;
      while (j < rest.size() && rest[j] == rest[i]) ++j;
      factors.push_back({rest[i], static_cast<unsigned>(j - i)});
      i = j;
    }
  }
  return FactoredInteger(n, std::move(factors));
}

mpz_class FactoredInteger::largest_prime() const {
  if (factors_.empty()) return 1;
  return factors_.back().prime;
}

mpz_class FactoredInteger::power_free_part(unsigned p0) const {
  if (p0 == 0) throw std::invalid_argument("power_free_part: p must be positive");
  mpz_class out = 1;
  for (const auto& f : factors_) {
    unsigned e = f.exponent % p0;
    for (unsigned i = 0; i < e; ++i) out *= f.prime;
  }
  return out;
}

unsigned omega(const mpz_class& n) { return factorize(n).omega(); }

mpz_class largest_prime_factor(const mpz_class& n) {
  return factorize(n).largest_prime();
}

mpz_class pfree_part(const mpz_class& n, unsigned p) {
  return factorize(n).power_free_part(p);
}

std::uint64_t prime_pi(std::uint64_t x) {
  if (x < kTrialLimit) {
    const auto& ps = small_primes();
    return std::upper_bound(ps.begin(), ps.end(), x) - ps.begin();
  }
  // Segmented count above the shared table.  x stays small in this
  // project (prime_pi(k-1) with k <= 17 on the hot path), so a simple
  // odd-only segment walk is plenty.
  const auto& ps = small_primes();
  std::uint64_t count = ps.size();
  const std::uint64_t seg = 1 << 20;
  for (std::uint64_t lo = kTrialLimit; lo <= x; lo += seg) {
    std::uint64_t hi = std::min(x, lo + seg - 1);
    std::vector<bool> composite(hi - lo + 1, false);
    for (std::uint64_t p : ps) {
      if (p * p > hi) break;
      std::uint64_t start = std::max(p * p, (lo + p - 1) / p * p);
      for (std::uint64_t j = start; j <= hi; j += p) composite[j - lo] = true;
    }
    for (std::uint64_t i = lo; i <= hi; ++i)
      if (!composite[i - lo]) ++count;
  }
  return count;
}

mpz_class euler_phi(const mpz_class& n) {
  if (n == 0) throw std::invalid_argument("euler_phi: undefined at 0");
  FactoredInteger f = factorize(n);
  mpz_class out = abs(n);
  for (const auto& pp : f.factors()) {
    out /= pp.prime;
    out *= pp.prime - 1;
  }
  return out;
}

std::vector<std::uint64_t> primes_below(std::uint64_t k) {
  const auto& ps = small_primes();
  if (k <= kTrialLimit) {
    auto end = std::lower_bound(ps.begin(), ps.end(), k);
    return std::vector<std::uint64_t>(ps.begin(), end);
  }
  std::vector<std::uint64_t> out = ps;
  for (std::uint64_t n = kTrialLimit | 1; n < k; n += 2)
    if (is_prime_u64(n)) out.push_back(n);
  return out;
}

}  // namespace rungekit
