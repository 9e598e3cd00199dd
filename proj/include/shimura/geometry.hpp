#pragma once

// Quaternion discriminants, elliptic point counts on M_0^B(p), and the three
// genus-zero Shimura curves x^2 + y^2 + c = 0 (d = 6, 10, 22).

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "shimura/quadfield.hpp"

namespace shimura {

struct ShimuraDiscriminant {
    std::int64_t d = 0;
    std::vector<std::int64_t> prime_factors;  // ascending
};

/// d > 1, squarefree, even number of prime factors; std::domain_error otherwise.
ShimuraDiscriminant validate_discriminant(std::int64_t d);

/// (-1/q) with (-1/2) = 0, as used in the elliptic point count.
int symbol_minus1(std::int64_t q);
/// (-3/q) with (-3/3) = 0.
int symbol_minus3(std::int64_t q);

struct EllipticCounts {
    std::int64_t nu2 = 0;
    std::int64_t nu3 = 0;
};

/// nu_2(p) = (1 + (-1/p)) prod_{l|d} (1 - (-1/l)), nu_3 likewise with (-3/.).
/// Throws std::domain_error if p is not prime or divides d.
EllipticCounts elliptic_point_counts(const ShimuraDiscriminant& d, std::int64_t p);

struct ConicModel {
    std::int64_t d = 0;
    std::int64_t constant = 0;           // x^2 + y^2 + constant = 0
    std::int64_t nonsplit_prime = 0;     // point over k iff this prime does not split
    std::int64_t split_pair[2] = {0, 0}; // B (x) k = M_2(k) iff neither splits
};

/// d in {6, 10, 22}; std::domain_error otherwise.
ConicModel conic_model(std::int64_t d);

bool has_rational_point(const ConicModel& model, const ImagQuadField& f);
bool matrix_algebra_over(const ConicModel& model, const ImagQuadField& f);

/// x = (a + b sqrt(-m))/e, y = (c + g sqrt(-m))/e.
struct ConicPoint {
    std::int64_t d = 0;
    std::int64_t a = 0, b = 0, c = 0, g = 0, e = 1;

    std::string x_str(std::int64_t m) const;
    std::string y_str(std::int64_t m) const;
};

/// Checks x^2 + y^2 + constant = 0 in k with rational arithmetic.
bool on_conic(const ConicModel& model, const ImagQuadField& f, const ConicPoint& pt);

/// First point in scan order e = 1..box, then a, b, c, g in [-box, box].
/// nullopt is not a proof that no point exists.
std::optional<ConicPoint> find_conic_point_serial(const ConicModel& model, const ImagQuadField& f, std::int64_t box);
std::optional<ConicPoint> find_conic_point(const ConicModel& model, const ImagQuadField& f, std::int64_t box);

struct GenusZeroRow {
    std::int64_t d = 0;
    std::int64_t m = 0;
    bool expected_matrix_algebra = false;
    // computed
    std::int64_t h = 0;
    bool matrix_algebra = false;
    bool has_point = false;
    std::optional<ConicPoint> witness;
    bool pass = false;
};

/// The example fields listed for d = 6, 10, 22, each with h != 1 and a point
/// over k, split by whether B (x) k is the matrix algebra.
std::vector<GenusZeroRow> genus_zero_fixture();

struct GenusZeroReport {
    std::vector<GenusZeroRow> rows;
    std::int64_t witness_box = 0;
    bool pass = false;
};

/// Recomputes every fixture row. The witness search uses witness_box and
/// does not affect pass/fail.
GenusZeroReport verify_section7(std::int64_t witness_box = 6);

}  // namespace shimura
