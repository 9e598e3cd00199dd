#pragma once

// Theorem-level exclusion sets.
//
// thm13: N1 u N1' u (N2 up to the bound) u {5, 7, 13}. Outside this set and
//        away from d, points of M_0^B(p) over k are at most elliptic points
//        of order 2 or 3 (none at all when B (x) k = M_2(k)).
// thm91: N1' u (N2 up to the bound). Outside it and away from d, the mod p
//        representation of a QM-abelian surface over k is irreducible.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "shimura/catalog_io.hpp"
#include "shimura/classgroup.hpp"
#include "shimura/excepsets.hpp"
#include "shimura/geometry.hpp"
#include "shimura/siegel.hpp"

namespace shimura {

/// The field has class number one, which the theorems exclude.
class HypothesisViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Statement { Thm13, Thm91 };
std::string to_string(Statement s);
Statement parse_statement(const std::string& s);

struct GateOptions {
    std::int64_t bound = 1000;
    std::optional<FactorEffort> effort;
    std::optional<std::vector<std::int64_t>> generator_override;
    std::optional<std::filesystem::path> cache_dir;
};

struct TheoremGateResult {
    std::int64_t m = 0;
    std::optional<ShimuraDiscriminant> d;
    Statement statement = Statement::Thm13;
    GeneratorSet generators;
    ExceptionalSet set;
    std::vector<std::int64_t> n2_members;
    std::vector<std::int64_t> divides_d;  // annotated, outside the statement's scope
    std::vector<std::string> caveats;
    std::vector<CacheOutcome> cache;      // one per catalog built
};

inline const std::vector<std::int64_t> kSporadicPrimes = {5, 7, 13};

/// Class number of f, throwing HypothesisViolation when it is 1.
std::int64_t require_class_number_at_least_2(const ImagQuadField& f);

/// The generating set to use: the deterministic default, or the override
/// validated against the admissibility conditions.
GeneratorSet resolve_generators(const ImagQuadField& f, std::int64_t h, const GateOptions& opts);

TheoremGateResult theorem13_set(const ImagQuadField& f, const std::optional<ShimuraDiscriminant>& d,
                                const GateOptions& opts);
TheoremGateResult theorem91_set(const ImagQuadField& f, const std::optional<ShimuraDiscriminant>& d,
                                const GateOptions& opts);
TheoremGateResult theorem_set(Statement s, const ImagQuadField& f, const std::optional<ShimuraDiscriminant>& d,
                              const GateOptions& opts);

struct ExclusionVerdict {
    bool excluded = false;
    bool in_set = false;
    bool divides_d = false;
    std::string reason;  // provenance of the set membership, or "divides_d", or ""
    std::optional<Provenance> provenance;
};

/// Whether the statement's conclusion fails to cover p: p is in the set or
/// divides d. Membership of primes above the bound is only known when the
/// catalog values were fully factored.
ExclusionVerdict is_excluded(const TheoremGateResult& r, std::int64_t p);

}  // namespace shimura
