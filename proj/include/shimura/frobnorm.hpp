#pragma once

// Frobenius root sets FR(q), powers of a root, and the exact norms
// Norm_{k(beta)/Q}(xi - beta^N).

#include <cstdint>
#include <vector>

#include <gmpxx.h>

#include "shimura/quadfield.hpp"

namespace shimura {

/// beta with beta^2 + a beta + q = 0. `which` picks one of the two complex
/// roots; it only matters when beta lies in k.
struct FrobeniusRoot {
    std::int64_t a = 0;
    std::int64_t q = 0;
    int which = 0;  // 0 or 1

    std::int64_t discriminant() const { return a * a - 4 * q; }
    friend bool operator==(const FrobeniusRoot&, const FrobeniusRoot&) = default;
};

/// beta^n = s + t beta.
struct BetaPower {
    mpz_class s = 1;
    mpz_class t = 0;
    unsigned long n = 0;
};

/// All roots with |a| <= isqrt(4q), ordered by a then which; the count is
/// 2 * (2 * isqrt(4q) + 1).
std::vector<FrobeniusRoot> frobenius_roots(std::int64_t q);

BetaPower beta_power(const FrobeniusRoot& root, unsigned long n);

inline mpz_class beta_power_trace(const FrobeniusRoot& root, const BetaPower& p)
{
    return 2 * p.s - static_cast<long>(root.a) * p.t;
}

/// True when Q(beta) = k, i.e. the squarefree part of a^2 - 4q is -m.
bool root_in_field(const ImagQuadField& f, const FrobeniusRoot& root);

/// beta as an element of O_k; only valid when root_in_field holds.
/// which = 0 takes (-a + g sqrt(-m))/2, which = 1 its conjugate.
QuadInt root_as_element(const ImagQuadField& f, const FrobeniusRoot& root);

/// Norm from k(beta) to Q of xi - beta^N.
/// Degree 2 (beta in k): Norm_{k/Q}(xi - B) with B = beta^N in O_k.
/// Degree 4: Norm_{k/Q}(xi^2 - tr(beta^N) xi + q^N), the product over all
/// four embeddings, independent of `which`.
mpz_class compositum_norm(const ImagQuadField& f, const QuadInt& xi, const FrobeniusRoot& root, unsigned long N);

/// Same, reusing a precomputed beta^N.
mpz_class compositum_norm(const ImagQuadField& f, const QuadInt& xi, const FrobeniusRoot& root,
                          const BetaPower& power);

}  // namespace shimura
