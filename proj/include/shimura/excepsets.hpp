#pragma once

// Norm catalogs M2(k) / M2'(k) and the exceptional prime sets derived from
// them: N0 (prime divisors of catalog values), T (residue characteristics of
// the generating set, plus 2 and 3), Ram(k), and their union N1.
//
// Each expensive kernel has a serial reference (`*_serial`) and an OpenMP
// version. They must agree byte for byte; tests and the benchmark compare
// them.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "shimura/classgroup.hpp"
#include "shimura/frobnorm.hpp"
#include "shimura/quadfield.hpp"

namespace shimura {

enum class Variant { Unprimed, Primed };

std::string to_string(Variant v);
Variant parse_variant(const std::string& s);

/// Unprimed: exponents of 12th powers, coefficients in {0,8,12,16,24}.
/// Primed: {0,4,6,8,12}.
struct EpsilonVector {
    int a_id = 0;
    int a_conj = 0;
    Variant variant = Variant::Unprimed;

    friend bool operator==(const EpsilonVector&, const EpsilonVector&) = default;
};

/// All 25 vectors in lexicographic order.
std::vector<EpsilonVector> epsilon_vectors(Variant v);

/// alpha^a_id * conj(alpha)^a_conj.
QuadInt apply_epsilon(const ImagQuadField& f, const QuadInt& alpha, const EpsilonVector& eps);

/// 24h for the unprimed catalog, 12h for the primed one.
unsigned long power_exponent(Variant v, std::int64_t h);

enum class VanishingType { Type2, Type3, Other };
std::string to_string(VanishingType t);
VanishingType parse_vanishing_type(const std::string& s);

struct CatalogEntry {
    std::size_t tuple_index = 0;
    std::int64_t q = 0;
    EpsilonVector eps;
    FrobeniusRoot root;
    mpz_class value;
};

struct ZeroEntry {
    std::size_t tuple_index = 0;
    std::int64_t q = 0;
    EpsilonVector eps;
    FrobeniusRoot root;
    VanishingType type = VanishingType::Other;
};

struct NormCatalog {
    std::int64_t m = 0;
    Variant variant = Variant::Unprimed;
    std::int64_t h = 0;
    unsigned long power_exponent = 0;
    std::string generator_fingerprint;
    std::size_t tuple_count = 0;
    std::vector<CatalogEntry> entries;   // nonzero norms, tuple order
    std::vector<ZeroEntry> zero_entries; // vanishing tuples, tuple order
};

/// Tuples (q, eps, root) in catalog order: q as in the generating set, then
/// eps lexicographic, then frobenius_roots(q) order.
struct CatalogTuple {
    std::size_t gen_index;
    EpsilonVector eps;
    FrobeniusRoot root;
};
std::vector<CatalogTuple> catalog_tuples(const GeneratorSet& gens, Variant v);

/// Exact norm for one tuple.
mpz_class catalog_value(const ImagQuadField& f, const GeneratorSet& gens, Variant v, const CatalogTuple& t);

NormCatalog build_catalog_serial(const ImagQuadField& f, const GeneratorSet& gens, Variant v);
NormCatalog build_catalog(const ImagQuadField& f, const GeneratorSet& gens, Variant v);

/// Shape of a vanishing tuple: uniform exponent (Type2), or beta in k with
/// the full exponent on one conjugate only (Type3). Other would contradict
/// the classification and is reported rather than hidden.
/// Throws std::domain_error if alpha^eps != beta^N.
VanishingType classify_vanishing(const ImagQuadField& f, const QuadInt& alpha, const EpsilonVector& eps,
                                 const FrobeniusRoot& root, std::int64_t h);
/// Convenience form that recomputes alpha for the prime (q, w - r).
VanishingType classify_vanishing(const ImagQuadField& f, const EpsilonVector& eps, const FrobeniusRoot& root,
                                 std::int64_t q, std::int64_t h);

enum class Reason { T23, Ram, TResidue, Sporadic, Siegel, N0Divisor };
std::string to_string(Reason r);

struct N0Witness {
    Variant variant = Variant::Unprimed;
    std::size_t entry = 0;  // index into NormCatalog::entries
    std::int64_t q = 0;
    std::int64_t a = 0;
    int which = 0;
    int eps_id = 0;
    int eps_conj = 0;
};

struct Provenance {
    Reason reason = Reason::N0Divisor;
    std::optional<N0Witness> witness;
};

struct Membership {
    bool member = false;
    std::optional<Provenance> provenance;
};

/// p in N1 (or N1'): checks T and Ram first, then scans catalog values for
/// exact divisibility and reports the first dividing entry.
Membership is_in_exceptional(const NormCatalog& catalog, const ImagQuadField& f, const GeneratorSet& gens,
                             std::int64_t p);

struct FactorEffort {
    std::uint64_t trial_bound = 1'000'000;
    std::uint64_t rho_budget = 10'000'000;
};

struct ExceptionalSet {
    Variant variant = Variant::Unprimed;
    std::vector<mpz_class> primes;  // ascending
    std::map<mpz_class, Provenance> provenance;
    std::int64_t complete_up_to = 0;
    bool factorization_attempted = false;
    bool factorization_complete = false;
    std::size_t unfactored_values = 0;

    bool contains(const mpz_class& p) const { return provenance.count(p) != 0; }
};

/// Exact membership for every prime <= bound; with an effort, also factors
/// each catalog value and merges prime factors above the bound. When every
/// value factors completely the result is the whole set.
ExceptionalSet enumerate_exceptional_serial(const NormCatalog& catalog, const ImagQuadField& f,
                                            const GeneratorSet& gens, std::int64_t bound,
                                            const std::optional<FactorEffort>& effort = std::nullopt);
ExceptionalSet enumerate_exceptional(const NormCatalog& catalog, const ImagQuadField& f, const GeneratorSet& gens,
                                     std::int64_t bound, const std::optional<FactorEffort>& effort = std::nullopt);

}  // namespace shimura
