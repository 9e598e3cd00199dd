#pragma once

// Class groups of imaginary quadratic fields via reduced binary quadratic
// forms, and the generating set of split primes used by the norm catalogs.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "shimura/quadfield.hpp"

namespace shimura {

/// a x^2 + b x y + c y^2, positive definite.
struct BQForm {
    std::int64_t a = 1;
    std::int64_t b = 0;
    std::int64_t c = 0;

    std::int64_t discriminant() const { return b * b - 4 * a * c; }
    bool is_reduced() const;

    friend auto operator<=>(const BQForm&, const BQForm&) = default;
};

std::string to_string(const BQForm& g);

/// Fundamental discriminants: D = 1 mod 4 squarefree, or D = 4n with
/// n = 2, 3 mod 4 squarefree.
bool is_fundamental_discriminant(std::int64_t D);

BQForm reduce(BQForm g);
BQForm principal_form(std::int64_t D);
BQForm inverse(const BQForm& g);

/// All reduced primitive forms of discriminant D sorted by (a, b); the
/// length is the class number. Throws std::domain_error unless D < 0 is
/// fundamental.
std::vector<BQForm> reduced_forms(std::int64_t D);

inline std::int64_t class_number(const ImagQuadField& f)
{
    return static_cast<std::int64_t>(reduced_forms(f.D).size());
}

/// h = |sum_{a=1}^{|D|-1} (D/a) a| / |D|, valid when the unit group is {+-1}.
/// Throws std::domain_error for D >= -4 or non-fundamental D.
std::int64_t class_number_dirichlet(std::int64_t D);

bool is_class_number_one(std::int64_t m);

/// Reduced representative of the Gauss composition g1 * g2.
/// Throws std::domain_error if either form has discriminant != f.D.
BQForm compose(const ImagQuadField& f, const BQForm& g1, const BQForm& g2);

/// Form class of the prime ideal (q, w - r).
BQForm prime_form(const ImagQuadField& f, std::int64_t q, std::int64_t r);

/// Subgroup of the class group generated by the given classes, sorted.
std::vector<BQForm> generated_subgroup(const ImagQuadField& f, const std::vector<BQForm>& gens);

struct GeneratorEntry {
    std::int64_t q = 0;
    std::int64_t r = 0;  // the prime is (q, w - r)
    BQForm form;
    QuadInt alpha;       // generator of (q, w - r)^h
};

struct GeneratorSet {
    std::vector<GeneratorEntry> entries;
    std::int64_t h = 0;

    std::vector<std::int64_t> primes() const;
    /// "7" or "7-11-19"; keys catalog caches.
    std::string fingerprint() const;
};

inline constexpr std::int64_t kGeneratorSearchBound = 1'000'000;

/// q splits in k and q does not divide 6h.
bool is_admissible_generator_prime(const ImagQuadField& f, std::int64_t h, std::int64_t q);

/// Scans q = 2, 3, 5, ... admitting every admissible q, and stops at the
/// shortest prefix whose classes generate the class group.
GeneratorSet select_generator_primes(const ImagQuadField& f, std::int64_t h);

/// Builds the set from a caller-chosen list of primes. Throws
/// std::domain_error if a prime is inadmissible or the classes do not
/// generate.
GeneratorSet generator_set_from_primes(const ImagQuadField& f, std::int64_t h, const std::vector<std::int64_t>& qs);

/// Generator alpha of (q, w - r)^h with norm q^h, in (q, w - r) and outside
/// the conjugate prime. Of the two candidates +-alpha, returns the one with
/// smaller (y, x). Throws std::logic_error if the power is not principal.
QuadInt solve_norm_generator(const ImagQuadField& f, std::int64_t q, std::int64_t r, std::int64_t h);

/// Checks every GeneratorSet invariant; returns a description of the first
/// violation, or nullopt.
std::optional<std::string> check_generator_set(const ImagQuadField& f, const GeneratorSet& gens);

}  // namespace shimura
