#include "shimura/gate.hpp"

#include <algorithm>

namespace shimura {

std::string to_string(Statement s) { return s == Statement::Thm13 ? "thm13" : "thm91"; }

Statement parse_statement(const std::string& s)
{
    if (s == "thm13") return Statement::Thm13;
    if (s == "thm91") return Statement::Thm91;
    throw std::domain_error("unknown statement '" + s + "' (expected thm13 or thm91)");
}

std::int64_t require_class_number_at_least_2(const ImagQuadField& f)
{
    const auto h = class_number(f);
    if (h == 1)
        throw HypothesisViolation("Q(sqrt(-" + std::to_string(f.m) + ")) has class number one; the statements need h >= 2");
    return h;
}

GeneratorSet resolve_generators(const ImagQuadField& f, std::int64_t h, const GateOptions& opts)
{
    if (opts.generator_override) return generator_set_from_primes(f, h, *opts.generator_override);
    return select_generator_primes(f, h);
}

namespace {

// Lower Reason value wins: it is the more structural explanation.
void merge(ExceptionalSet& into, const mpz_class& p, const Provenance& prov)
{
    auto it = into.provenance.find(p);
    if (it == into.provenance.end())
        into.provenance.emplace(p, prov);
    else if (static_cast<int>(prov.reason) < static_cast<int>(it->second.reason))
        it->second = prov;
}

void merge(ExceptionalSet& into, const ExceptionalSet& from)
{
    for (const auto& [p, prov] : from.provenance) merge(into, p, prov);
}

void finish(ExceptionalSet& s)
{
    s.primes.clear();
    for (const auto& kv : s.provenance) s.primes.push_back(kv.first);
}

struct Ingredients {
    GeneratorSet gens;
    std::vector<ExceptionalSet> sets;
    std::vector<CacheOutcome> cache;
};

Ingredients build_sets(const ImagQuadField& f, const GateOptions& opts, const std::vector<Variant>& variants)
{
    if (opts.bound < 3) throw std::domain_error("bound must be >= 3");
    const auto h = require_class_number_at_least_2(f);
    Ingredients in{resolve_generators(f, h, opts), {}, {}};
    for (auto v : variants) {
        auto cached = load_or_build_catalog(f, in.gens, v, opts.cache_dir);
        in.cache.push_back(cached.outcome);
        in.sets.push_back(enumerate_exceptional(cached.catalog, f, in.gens, opts.bound, opts.effort));
    }
    return in;
}

TheoremGateResult assemble(Statement st, const ImagQuadField& f, const std::optional<ShimuraDiscriminant>& d,
                           const GateOptions& opts, Ingredients in, bool with_sporadic)
{
    TheoremGateResult r;
    r.m = f.m;
    r.d = d;
    r.statement = st;
    r.generators = std::move(in.gens);
    r.cache = std::move(in.cache);

    r.set.variant = st == Statement::Thm13 ? Variant::Unprimed : Variant::Primed;
    r.set.complete_up_to = opts.bound;
    r.set.factorization_attempted = opts.effort.has_value();
    r.set.factorization_complete = opts.effort.has_value();
    for (const auto& s : in.sets) {
        merge(r.set, s);
        r.set.factorization_complete = r.set.factorization_complete && s.factorization_complete;
        r.set.unfactored_values += s.unfactored_values;
    }
    for (const auto& v : scan_N2(f, opts.bound)) {
        r.n2_members.push_back(v.l);
        merge(r.set, mpz_class(static_cast<long>(v.l)), Provenance{Reason::Siegel, std::nullopt});
    }
    if (with_sporadic)
        for (auto p : kSporadicPrimes) merge(r.set, mpz_class(static_cast<long>(p)), Provenance{Reason::Sporadic, std::nullopt});
    finish(r.set);

    if (d) r.divides_d = d->prime_factors;

    r.caveats.push_back("N2 is scanned only up to " + std::to_string(opts.bound) +
                        "; its finiteness is ineffective, so members above the bound are not ruled out");
    r.caveats.push_back("the set is effective except for at most one prime coming from the ineffective N2 bound, "
                        "which this computation cannot locate");
    if (!r.set.factorization_complete)
        r.caveats.push_back("N0 is exact only for primes <= " + std::to_string(opts.bound) +
                            "; catalog values were not fully factored, so larger divisors may be missing");
    if (d)
        r.caveats.push_back("primes dividing d = " + std::to_string(d->d) + " are outside the statement's scope");
    return r;
}

}  // namespace

TheoremGateResult theorem13_set(const ImagQuadField& f, const std::optional<ShimuraDiscriminant>& d,
                                const GateOptions& opts)
{
    auto in = build_sets(f, opts, {Variant::Unprimed, Variant::Primed});
    return assemble(Statement::Thm13, f, d, opts, std::move(in), true);
}

TheoremGateResult theorem91_set(const ImagQuadField& f, const std::optional<ShimuraDiscriminant>& d,
                                const GateOptions& opts)
{
    auto in = build_sets(f, opts, {Variant::Primed});
    return assemble(Statement::Thm91, f, d, opts, std::move(in), false);
}

TheoremGateResult theorem_set(Statement s, const ImagQuadField& f, const std::optional<ShimuraDiscriminant>& d,
                              const GateOptions& opts)
{
    return s == Statement::Thm13 ? theorem13_set(f, d, opts) : theorem91_set(f, d, opts);
}

ExclusionVerdict is_excluded(const TheoremGateResult& r, std::int64_t p)
{
    ExclusionVerdict v;
    const auto it = r.set.provenance.find(mpz_class(static_cast<long>(p)));
    if (it != r.set.provenance.end()) {
        v.in_set = true;
        v.provenance = it->second;
        v.reason = to_string(it->second.reason);
    }
    v.divides_d = std::find(r.divides_d.begin(), r.divides_d.end(), p) != r.divides_d.end();
    if (!v.in_set && v.divides_d) v.reason = "divides_d";
    v.excluded = v.in_set || v.divides_d;
    return v;
}

}  // namespace shimura
