#pragma once

// Exact integer primitives shared by every other module.

#include <cstdint>
#include <set>
#include <vector>

#include <gmpxx.h>

namespace shimura {

/// Deterministic Miller-Rabin for 64-bit inputs.
bool is_prime(std::uint64_t n);

/// Exact below 2^64. Larger inputs get a strong probable-prime test with the
/// first 40 primes as witnesses, so the answer there is probabilistic.
bool is_prime(const mpz_class& n);

/// Kronecker symbol (a/n) with the usual conventions at 2 and -1.
/// Throws std::domain_error for n == 0.
int kronecker(std::int64_t a, std::int64_t n);

std::uint64_t isqrt(std::uint64_t n);
mpz_class isqrt(const mpz_class& n);

/// All primes <= limit, ascending.
std::vector<std::uint32_t> primes_up_to(std::uint32_t limit);

/// Square root of a quadratic residue a modulo an odd prime p (Tonelli-Shanks).
std::uint64_t sqrt_mod_prime(std::uint64_t a, std::uint64_t p);

bool is_squarefree(std::int64_t n);

/// The squarefree s with n = s * g^2, sign carried by s. n != 0.
std::int64_t squarefree_part(std::int64_t n);

/// Sorted distinct prime divisors of |n|, by trial division. n != 0.
std::vector<std::int64_t> prime_divisors(std::int64_t n);

/// Primes p <= bound dividing n, ascending. Exact; screens blocks of primes
/// with one gcd each before testing them individually.
std::vector<std::uint32_t> prime_divisors_up_to(const mpz_class& n, std::uint32_t bound);

struct FactorReport {
    mpz_class input;
    std::set<mpz_class> prime_factors;
    mpz_class cofactor = 1;  // product of the parts nobody managed to split
    bool complete = true;
};

/// Trial division by every prime <= trial_bound, then Brent-Pollard rho on
/// the composite leftovers, spending at most rho_budget iterations in total.
/// With rho_budget == 0 nothing beyond trial division is attempted, so a
/// leftover cofactor stays unclassified even if it happens to be prime.
/// Sign of n is ignored. Throws std::domain_error for n == 0.
FactorReport factor_bounded(const mpz_class& n, std::uint64_t trial_bound,
                            std::uint64_t rho_budget);

}  // namespace shimura
