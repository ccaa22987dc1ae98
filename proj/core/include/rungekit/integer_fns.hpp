/*
 * Exact integer arithmetic: factorization into prime powers and the
 * multiplicative functions built on top of it (omega, largest prime
 * factor, p-th-power-free parts, Euler phi, prime counting).
 *
 * Factorization is deterministic: trial division over a sieved prime
 * table below 10^6, then Pollard-Brent splitting with a fixed parameter
 * schedule.  Primality is decided by Miller-Rabin over a base set that
 * is proven complete for every n < 2^64; larger inputs fall back to
 * GMP's Baillie-PSW based test.
 */
#ifndef RUNGEKIT_INTEGER_FNS_HPP
#define RUNGEKIT_INTEGER_FNS_HPP

#include <gmpxx.h>

#include <cstdint>
#include <vector>

namespace rungekit {

struct PrimePower {
  mpz_class prime;
  unsigned exponent;

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

// A (possibly negative) integer together with the sorted prime
// factorization of its absolute value.  value == sign * prod p^e.
class FactoredInteger {
 public:
  FactoredInteger(mpz_class value, std::vector<PrimePower> factors)
      : value_(std::move(value)), factors_(std::move(factors)) {}

  const mpz_class& value() const { return value_; }
  const std::vector<PrimePower>& factors() const { return factors_; }

  unsigned omega() const { return static_cast<unsigned>(factors_.size()); }

  // Largest prime factor of |value|; defined as 1 for value = +-1.
  mpz_class largest_prime() const;

  // prod p^(e mod p0): the p0-th-power-free part of |value|.
  mpz_class power_free_part(unsigned p0) const;

 private:
  mpz_class value_;
  std::vector<PrimePower> factors_;
};

// Deterministic for |n| < 2^64 (fixed Miller-Rabin base set), BPSW beyond.
bool is_prime(const mpz_class& n);

// Throws std::invalid_argument on n = 0.  factorize(+-1) has an empty
// factor list.
FactoredInteger factorize(const mpz_class& n);

// Number of distinct prime factors of |n|.  omega(+-1) = 0.
unsigned omega(const mpz_class& n);

// Largest prime factor of |n|, with largest_prime_factor(+-1) = 1.
mpz_class largest_prime_factor(const mpz_class& n);

// p-th-power-free part of |n| (always positive).
mpz_class pfree_part(const mpz_class& n, unsigned p);

// Number of primes <= x.
std::uint64_t prime_pi(std::uint64_t x);

// Euler totient of |n|, n != 0.
mpz_class euler_phi(const mpz_class& n);

// Ascending list of primes strictly below k.
std::vector<std::uint64_t> primes_below(std::uint64_t k);

}  // namespace rungekit

#endif
