#pragma once

// Ring of integers of an imaginary quadratic field k = Q(sqrt(-m)).
//
// Elements are stored as x + y*w in the basis {1, w} with w = (D + sqrt(D))/2,
// D the fundamental discriminant. w satisfies w^2 = D*w - (D^2 - D)/4 for
// both residue classes of m, so element arithmetic never branches on m mod 4.

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <gmpxx.h>

namespace shimura {

struct ImagQuadField {
    std::int64_t m = 0;            // squarefree, >= 1
    std::int64_t D = 0;            // -m if m = 3 mod 4, else -4m
    std::int64_t omega_trace = 0;  // = D
    std::int64_t omega_norm = 0;   // = (D^2 - D)/4
    std::vector<std::int64_t> ramified;

    friend bool operator==(const ImagQuadField&, const ImagQuadField&) = default;
};

/// Throws std::domain_error when m <= 0 or m is not squarefree.
ImagQuadField make_field(std::int64_t m);

struct QuadInt {
    mpz_class x = 0;
    mpz_class y = 0;

    QuadInt() = default;
    QuadInt(mpz_class x_, mpz_class y_) : x(std::move(x_)), y(std::move(y_)) {}

    static QuadInt one() { return {1, 0}; }
    static QuadInt rational(const mpz_class& r) { return {r, 0}; }

    friend bool operator==(const QuadInt& a, const QuadInt& b) { return a.x == b.x && a.y == b.y; }
};

QuadInt qi_add(const QuadInt& a, const QuadInt& b);
QuadInt qi_sub(const QuadInt& a, const QuadInt& b);
QuadInt qi_neg(const QuadInt& a);
QuadInt qi_mul(const ImagQuadField& f, const QuadInt& a, const QuadInt& b);
QuadInt qi_conj(const ImagQuadField& f, const QuadInt& a);
mpz_class qi_norm(const ImagQuadField& f, const QuadInt& a);
mpz_class qi_trace(const ImagQuadField& f, const QuadInt& a);
QuadInt qi_pow(const ImagQuadField& f, QuadInt a, unsigned long n);

/// u + v*sqrt(-m) to the {1, w} basis. u and v are given as twice their value
/// (u2 = 2u, v2 = 2v) so half-integers can be expressed; throws
/// std::domain_error if the result is not in O_k.
QuadInt from_sqrt_coords(const ImagQuadField& f, const mpz_class& u2, const mpz_class& v2);

/// Inverse of from_sqrt_coords: returns (2u, 2v).
std::pair<mpz_class, mpz_class> to_sqrt_coords(const ImagQuadField& f, const QuadInt& a);

/// Text form "u+v*sqrt(-m)", u and v integers or halves written "a/2".
std::string format_element(const ImagQuadField& f, const QuadInt& a);
QuadInt parse_element(const ImagQuadField& f, std::string_view text);

struct Split {
    std::int64_t r;  // least r >= 0 with w = r mod the prime (q, w - r)
};
struct Inert {};
struct Ramified {};
using SplittingType = std::variant<Split, Inert, Ramified>;

SplittingType splitting_type(const ImagQuadField& f, std::int64_t q);

inline bool splits(const ImagQuadField& f, std::int64_t q)
{
    return std::holds_alternative<Split>(splitting_type(f, q));
}

/// Residue of w modulo q for the root other than r (w + conj(w) = D).
std::int64_t conjugate_root(const ImagQuadField& f, std::int64_t q, std::int64_t r);

/// x + y*w lies in (q, w - r) iff x + y*r = 0 mod q.
bool in_prime(const QuadInt& a, std::int64_t q, std::int64_t r);

}  // namespace shimura
