#include "shimura/excepsets.hpp"

#include <algorithm>
#include <array>
#include <exception>
#include <stdexcept>

#include "shimura/intkernel.hpp"

namespace shimura {

namespace {

constexpr std::array<int, 5> kUnprimedCoeffs = {0, 8, 12, 16, 24};
constexpr std::array<int, 5> kPrimedCoeffs = {0, 4, 6, 8, 12};

// Collects the first exception thrown inside an OpenMP region so it can be
// rethrown on the calling thread.
class ParallelErrors {
public:
    template <class Fn>
    void run(Fn&& fn)
    {
        try {
            fn();
        } catch (...) {
#pragma omp critical(shimura_parallel_errors)
            if (!first_) first_ = std::current_exception();
        }
    }
    void rethrow() const
    {
        if (first_) std::rethrow_exception(first_);
    }

private:
    std::exception_ptr first_;
};

bool is_residue_char(const GeneratorSet& gens, std::int64_t p)
{
    for (const auto& e : gens.entries)
        if (e.q == p) return true;
    return false;
}

std::optional<Reason> unconditional_reason(const ImagQuadField& f, const GeneratorSet& gens, std::int64_t p)
{
    if (p == 2 || p == 3) return Reason::T23;
    if (std::find(f.ramified.begin(), f.ramified.end(), p) != f.ramified.end()) return Reason::Ram;
    if (is_residue_char(gens, p)) return Reason::TResidue;
    return std::nullopt;
}

N0Witness make_witness(const NormCatalog& c, std::size_t idx)
{
    const auto& e = c.entries[idx];
    return N0Witness{c.variant, idx, e.q, e.root.a, e.root.which, e.eps.a_id, e.eps.a_conj};
}

void check_bound(std::int64_t bound)
{
    if (bound < 3) throw std::domain_error("enumerate_exceptional: bound must be >= 3");
    if (bound > 0xFFFFFFFFll) throw std::domain_error("enumerate_exceptional: bound must be < 2^32");
}

// Members that do not depend on the catalog: 2, 3, Ram(k), and the residue
// characteristics of the generating set, whatever the bound.
void add_unconditional(ExceptionalSet& out, const ImagQuadField& f, const GeneratorSet& gens)
{
    std::vector<std::int64_t> ps{2, 3};
    ps.insert(ps.end(), f.ramified.begin(), f.ramified.end());
    for (const auto& e : gens.entries) ps.push_back(e.q);
    for (auto p : ps) {
        mpz_class key = static_cast<long>(p);
        if (!out.provenance.count(key)) out.provenance[key] = Provenance{*unconditional_reason(f, gens, p), {}};
    }
}

void finish(ExceptionalSet& out)
{
    out.primes.clear();
    for (const auto& [p, prov] : out.provenance) out.primes.push_back(p);
}

NormCatalog empty_catalog(const ImagQuadField& f, const GeneratorSet& gens, Variant v)
{
    NormCatalog c;
    c.m = f.m;
    c.variant = v;
    c.h = gens.h;
    c.power_exponent = power_exponent(v, gens.h);
    c.generator_fingerprint = gens.fingerprint();
    return c;
}

void split_values(NormCatalog& c, const ImagQuadField& f, const GeneratorSet& gens,
                  const std::vector<CatalogTuple>& tuples, std::vector<mpz_class>& values)
{
    c.tuple_count = tuples.size();
    for (std::size_t i = 0; i < tuples.size(); ++i) {
        const auto& t = tuples[i];
        const auto& g = gens.entries[t.gen_index];
        if (values[i] == 0) {
            c.zero_entries.push_back(
                ZeroEntry{i, g.q, t.eps, t.root, classify_vanishing(f, g.alpha, t.eps, t.root, gens.h)});
        } else {
            c.entries.push_back(CatalogEntry{i, g.q, t.eps, t.root, std::move(values[i])});
        }
    }
}

}  // namespace

std::string to_string(Variant v) { return v == Variant::Unprimed ? "unprimed" : "primed"; }

Variant parse_variant(const std::string& s)
{
    if (s == "unprimed") return Variant::Unprimed;
    if (s == "primed") return Variant::Primed;
    throw std::domain_error("unknown variant '" + s + "'");
}

std::vector<EpsilonVector> epsilon_vectors(Variant v)
{
    const auto& coeffs = v == Variant::Unprimed ? kUnprimedCoeffs : kPrimedCoeffs;
    std::vector<EpsilonVector> out;
    for (int a : coeffs)
        for (int b : coeffs) out.push_back({a, b, v});
    return out;
}

QuadInt apply_epsilon(const ImagQuadField& f, const QuadInt& alpha, const EpsilonVector& eps)
{
    return qi_mul(f, qi_pow(f, alpha, static_cast<unsigned long>(eps.a_id)),
                  qi_pow(f, qi_conj(f, alpha), static_cast<unsigned long>(eps.a_conj)));
}

unsigned long power_exponent(Variant v, std::int64_t h)
{
    return static_cast<unsigned long>((v == Variant::Unprimed ? 24 : 12) * h);
}

std::string to_string(VanishingType t)
{
    switch (t) {
    case VanishingType::Type2: return "Type2";
    case VanishingType::Type3: return "Type3";
    case VanishingType::Other: return "Other";
    }
    return "Other";
}

VanishingType parse_vanishing_type(const std::string& s)
{
    if (s == "Type2") return VanishingType::Type2;
    if (s == "Type3") return VanishingType::Type3;
    if (s == "Other") return VanishingType::Other;
    throw std::domain_error("unknown vanishing type '" + s + "'");
}

std::string to_string(Reason r)
{
    switch (r) {
    case Reason::T23: return "T_23";
    case Reason::Ram: return "Ram";
    case Reason::TResidue: return "T_residue";
    case Reason::Sporadic: return "sporadic";
    case Reason::Siegel: return "Siegel";
    case Reason::N0Divisor: return "N0_divisor";
    }
    return "?";
}

std::vector<CatalogTuple> catalog_tuples(const GeneratorSet& gens, Variant v)
{
    std::vector<CatalogTuple> out;
    const auto eps = epsilon_vectors(v);
    for (std::size_t gi = 0; gi < gens.entries.size(); ++gi) {
        const auto roots = frobenius_roots(gens.entries[gi].q);
        for (const auto& e : eps)
            for (const auto& r : roots) out.push_back({gi, e, r});
    }
    return out;
}

mpz_class catalog_value(const ImagQuadField& f, const GeneratorSet& gens, Variant v, const CatalogTuple& t)
{
    const QuadInt xi = apply_epsilon(f, gens.entries[t.gen_index].alpha, t.eps);
    return compositum_norm(f, xi, t.root, power_exponent(v, gens.h));
}

NormCatalog build_catalog_serial(const ImagQuadField& f, const GeneratorSet& gens, Variant v)
{
    NormCatalog c = empty_catalog(f, gens, v);
    const auto tuples = catalog_tuples(gens, v);
    std::vector<mpz_class> values;
    values.reserve(tuples.size());
    for (const auto& t : tuples) values.push_back(catalog_value(f, gens, v, t));
    split_values(c, f, gens, tuples, values);
    return c;
}

NormCatalog build_catalog(const ImagQuadField& f, const GeneratorSet& gens, Variant v)
{
    NormCatalog c = empty_catalog(f, gens, v);
    const auto tuples = catalog_tuples(gens, v);
    const auto eps = epsilon_vectors(v);
    const unsigned long N = c.power_exponent;

    // alpha^eps per (generator, eps) and beta^N per (generator, root) are
    // shared by many tuples; compute each once.
    const auto n_gen = static_cast<long long>(gens.entries.size());
    const auto n_eps = static_cast<long long>(eps.size());
    std::vector<QuadInt> xis(static_cast<std::size_t>(n_gen * n_eps));
    std::vector<std::vector<FrobeniusRoot>> roots(gens.entries.size());
    std::vector<std::vector<BetaPower>> powers(gens.entries.size());
    for (std::size_t gi = 0; gi < gens.entries.size(); ++gi) {
        roots[gi] = frobenius_roots(gens.entries[gi].q);
        powers[gi].resize(roots[gi].size());
    }

    ParallelErrors errors;
#pragma omp parallel
    {
#pragma omp for schedule(dynamic) nowait
        for (long long i = 0; i < n_gen * n_eps; ++i) {
            errors.run([&] {
                xis[static_cast<std::size_t>(i)] =
                    apply_epsilon(f, gens.entries[static_cast<std::size_t>(i / n_eps)].alpha,
                                  eps[static_cast<std::size_t>(i % n_eps)]);
            });
        }
        for (std::size_t gi = 0; gi < roots.size(); ++gi) {
#pragma omp for schedule(dynamic) nowait
            for (long long ri = 0; ri < static_cast<long long>(roots[gi].size()); ++ri)
                powers[gi][static_cast<std::size_t>(ri)] = beta_power(roots[gi][static_cast<std::size_t>(ri)], N);
        }
    }
    errors.rethrow();

    std::vector<mpz_class> values(tuples.size());
    const auto n_tuples = static_cast<long long>(tuples.size());
#pragma omp parallel for schedule(dynamic, 16)
    for (long long i = 0; i < n_tuples; ++i) {
        errors.run([&] {
            const auto& t = tuples[static_cast<std::size_t>(i)];
            const auto& rs = roots[t.gen_index];
            const auto ri = static_cast<std::size_t>(
                std::find(rs.begin(), rs.end(), t.root) - rs.begin());
            const auto ei = static_cast<std::size_t>(
                std::find(eps.begin(), eps.end(), t.eps) - eps.begin());
            const QuadInt& xi = xis[t.gen_index * eps.size() + ei];
            values[static_cast<std::size_t>(i)] = compositum_norm(f, xi, t.root, powers[t.gen_index][ri]);
        });
    }
    errors.rethrow();

    split_values(c, f, gens, tuples, values);
    return c;
}

VanishingType classify_vanishing(const ImagQuadField& f, const QuadInt& alpha, const EpsilonVector& eps,
                                 const FrobeniusRoot& root, std::int64_t h)
{
    const unsigned long N = power_exponent(eps.variant, h);
    if (compositum_norm(f, apply_epsilon(f, alpha, eps), root, N) != 0)
        throw std::domain_error("classify_vanishing: tuple does not vanish");
    const int uniform = eps.variant == Variant::Unprimed ? 12 : 6;
    const int full = eps.variant == Variant::Unprimed ? 24 : 12;
    if (eps.a_id == uniform && eps.a_conj == uniform) return VanishingType::Type2;
    if (root_in_field(f, root) &&
        ((eps.a_id == full && eps.a_conj == 0) || (eps.a_id == 0 && eps.a_conj == full)))
        return VanishingType::Type3;
    return VanishingType::Other;
}

VanishingType classify_vanishing(const ImagQuadField& f, const EpsilonVector& eps, const FrobeniusRoot& root,
                                 std::int64_t q, std::int64_t h)
{
    const auto st = splitting_type(f, q);
    if (!std::holds_alternative<Split>(st)) throw std::domain_error("classify_vanishing: q does not split");
    const QuadInt alpha = solve_norm_generator(f, q, std::get<Split>(st).r, h);
    return classify_vanishing(f, alpha, eps, root, h);
}

Membership is_in_exceptional(const NormCatalog& catalog, const ImagQuadField& f, const GeneratorSet& gens,
                             std::int64_t p)
{
    if (auto r = unconditional_reason(f, gens, p)) return {true, Provenance{*r, {}}};
    for (std::size_t i = 0; i < catalog.entries.size(); ++i) {
        if (mpz_divisible_ui_p(catalog.entries[i].value.get_mpz_t(), static_cast<unsigned long>(p)))
            return {true, Provenance{Reason::N0Divisor, make_witness(catalog, i)}};
    }
    return {false, std::nullopt};
}

ExceptionalSet enumerate_exceptional_serial(const NormCatalog& catalog, const ImagQuadField& f,
                                            const GeneratorSet& gens, std::int64_t bound,
                                            const std::optional<FactorEffort>& effort)
{
    check_bound(bound);
    ExceptionalSet out;
    out.variant = catalog.variant;
    out.complete_up_to = bound;
    for (auto p : primes_up_to(static_cast<std::uint32_t>(bound))) {
        auto mem = is_in_exceptional(catalog, f, gens, p);
        if (mem.member) out.provenance[mpz_class(static_cast<unsigned long>(p))] = *mem.provenance;
    }
    add_unconditional(out, f, gens);
    if (effort) {
        out.factorization_attempted = true;
        for (std::size_t i = 0; i < catalog.entries.size(); ++i) {
            auto rep = factor_bounded(catalog.entries[i].value, effort->trial_bound, effort->rho_budget);
            if (!rep.complete) ++out.unfactored_values;
            for (const auto& p : rep.prime_factors)
                if (p > bound && !out.provenance.count(p))
                    out.provenance[p] = Provenance{Reason::N0Divisor, make_witness(catalog, i)};
        }
        out.factorization_complete = out.unfactored_values == 0;
    }
    finish(out);
    return out;
}

ExceptionalSet enumerate_exceptional(const NormCatalog& catalog, const ImagQuadField& f, const GeneratorSet& gens,
                                     std::int64_t bound, const std::optional<FactorEffort>& effort)
{
    check_bound(bound);
    ExceptionalSet out;
    out.variant = catalog.variant;
    out.complete_up_to = bound;
    const auto ubound = static_cast<std::uint32_t>(bound);
    for (auto p : primes_up_to(ubound)) {
        if (auto r = unconditional_reason(f, gens, p)) out.provenance[mpz_class(static_cast<unsigned long>(p))] = {*r, {}};
    }

    const auto n = static_cast<long long>(catalog.entries.size());
    std::vector<std::vector<std::uint32_t>> divisors(catalog.entries.size());
    ParallelErrors errors;
#pragma omp parallel for schedule(dynamic, 8)
    for (long long i = 0; i < n; ++i) {
        errors.run([&] {
            divisors[static_cast<std::size_t>(i)] =
                prime_divisors_up_to(catalog.entries[static_cast<std::size_t>(i)].value, ubound);
        });
    }
    errors.rethrow();
    // Entry order merge: the first entry divisible by p is its witness.
    for (std::size_t i = 0; i < divisors.size(); ++i) {
        for (auto p : divisors[i]) {
            mpz_class key = static_cast<unsigned long>(p);
            if (!out.provenance.count(key)) out.provenance[key] = Provenance{Reason::N0Divisor, make_witness(catalog, i)};
        }
    }
    add_unconditional(out, f, gens);

    if (effort) {
        out.factorization_attempted = true;
        std::vector<FactorReport> reports(catalog.entries.size());
#pragma omp parallel for schedule(dynamic, 1)
        for (long long i = 0; i < n; ++i) {
            errors.run([&] {
                reports[static_cast<std::size_t>(i)] = factor_bounded(catalog.entries[static_cast<std::size_t>(i)].value,
                                                                      effort->trial_bound, effort->rho_budget);
            });
        }
        errors.rethrow();
        for (std::size_t i = 0; i < reports.size(); ++i) {
            if (!reports[i].complete) ++out.unfactored_values;
            for (const auto& p : reports[i].prime_factors)
                if (p > bound && !out.provenance.count(p))
                    out.provenance[p] = Provenance{Reason::N0Divisor, make_witness(catalog, i)};
        }
        out.factorization_complete = out.unfactored_values == 0;
    }
    finish(out);
    return out;
}

}  // namespace shimura
