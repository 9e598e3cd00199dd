#include "shimura/cli.hpp"

#include <algorithm>
#include <functional>
#include <ostream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "shimura/catalog_io.hpp"
#include "shimura/classgroup.hpp"
#include "shimura/excepsets.hpp"
#include "shimura/gate.hpp"
#include "shimura/geometry.hpp"
#include "shimura/intkernel.hpp"
#include "shimura/quadfield.hpp"
#include "shimura/siegel.hpp"

namespace shimura::cli {

using json = nlohmann::json;

namespace {

json big(const mpz_class& v)
{
    if (v.fits_slong_p()) return json(static_cast<std::int64_t>(v.get_si()));
    return json(v.get_str());
}

json witness_json(const N0Witness& w)
{
    return json{{"variant", to_string(w.variant)}, {"entry", w.entry}, {"q", w.q},
                {"a", w.a}, {"which", w.which}, {"eps", {w.eps_id, w.eps_conj}}};
}

json provenance_json(const mpz_class& p, const Provenance& prov)
{
    json j{{"p", big(p)}, {"reason", to_string(prov.reason)}};
    if (prov.witness) j["witness"] = witness_json(*prov.witness);
    return j;
}

json members_json(const ExceptionalSet& s)
{
    json arr = json::array();
    for (const auto& p : s.primes) arr.push_back(provenance_json(p, s.provenance.at(p)));
    return arr;
}

json primes_json(const ExceptionalSet& s)
{
    json arr = json::array();
    for (const auto& p : s.primes) arr.push_back(big(p));
    return arr;
}

json factorization_json(const ExceptionalSet& s)
{
    return json{{"attempted", s.factorization_attempted},
                {"complete", s.factorization_complete},
                {"unfactored_values", s.unfactored_values}};
}

json generators_json(const ImagQuadField& f, const GeneratorSet& g)
{
    json arr = json::array();
    for (const auto& e : g.entries)
        arr.push_back(json{{"q", e.q}, {"r", e.r}, {"form", to_string(e.form)},
                           {"alpha", format_element(f, e.alpha)}, {"alpha_norm", big(qi_norm(f, e.alpha))}});
    return json{{"h", g.h}, {"fingerprint", g.fingerprint()}, {"entries", arr}};
}

json root_eps_json(std::int64_t q, const FrobeniusRoot& r, const EpsilonVector& e)
{
    return json{{"q", q}, {"a", r.a}, {"which", r.which}, {"eps", {e.a_id, e.a_conj}}};
}

json point_json(const ConicModel& model, const ImagQuadField& f, const ConicPoint& pt)
{
    return json{{"x", pt.x_str(f.m)}, {"y", pt.y_str(f.m)}, {"on_conic", on_conic(model, f, pt)}};
}

// Flat "path: value" rendering of a report.
void render_text(std::ostream& os, const json& j, const std::string& path)
{
    auto scalar_array = [](const json& a) {
        return std::all_of(a.begin(), a.end(), [](const json& x) { return x.is_primitive(); });
    };
    if (j.is_object()) {
        for (const auto& [k, v] : j.items()) render_text(os, v, path.empty() ? k : path + "." + k);
    } else if (j.is_array() && scalar_array(j)) {
        os << path << ":";
        for (const auto& x : j) os << ' ' << (x.is_string() ? x.get<std::string>() : x.dump());
        os << '\n';
    } else if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i) render_text(os, j[i], path + "[" + std::to_string(i) + "]");
    } else {
        os << path << ": " << (j.is_string() ? j.get<std::string>() : j.dump()) << '\n';
    }
}

std::optional<FactorEffort> effort_of(const RunConfig& cfg)
{
    if (!cfg.factor) return std::nullopt;
    return FactorEffort{cfg.trial_bound, cfg.rho_budget};
}

GateOptions gate_options(const RunConfig& cfg)
{
    GateOptions o;
    o.bound = cfg.bound;
    o.effort = effort_of(cfg);
    o.generator_override = cfg.s_override;
    o.cache_dir = cfg.cache_dir;
    return o;
}

void note_cache(std::ostream& err, const std::vector<CacheOutcome>& outcomes)
{
    for (auto o : outcomes)
        if (o != CacheOutcome::Disabled) err << "catalog cache: " << to_string(o) << '\n';
}

json field_info(const RunConfig& cfg)
{
    const auto f = make_field(cfg.m);
    json j{{"m", f.m}, {"D", f.D}, {"ramified", f.ramified}};
    j["h"] = class_number(f);
    j["h_dirichlet"] = class_number_dirichlet(f.D);
    j["class_number_one"] = is_class_number_one(f.m);
    json forms = json::array();
    for (const auto& g : reduced_forms(f.D)) forms.push_back(to_string(g));
    j["reduced_forms"] = forms;
    return j;
}

json gen_set(const RunConfig& cfg)
{
    const auto f = make_field(cfg.m);
    const auto h = require_class_number_at_least_2(f);
    const auto g = resolve_generators(f, h, gate_options(cfg));
    json j = generators_json(f, g);
    j["m"] = f.m;
    return j;
}

json exceptional(const RunConfig& cfg, Variant v, std::ostream& err)
{
    const auto f = make_field(cfg.m);
    const auto h = require_class_number_at_least_2(f);
    if (cfg.bound < 3) throw std::domain_error("bound must be >= 3");
    const auto gens = resolve_generators(f, h, gate_options(cfg));
    const auto cached = load_or_build_catalog(f, gens, v, cfg.cache_dir);
    note_cache(err, {cached.outcome});
    const auto set = enumerate_exceptional(cached.catalog, f, gens, cfg.bound, effort_of(cfg));

    json zeros = json::array();
    for (const auto& z : cached.catalog.zero_entries) {
        auto zj = root_eps_json(z.q, z.root, z.eps);
        zj["type"] = to_string(z.type);
        zeros.push_back(zj);
    }
    return json{{"m", f.m},
                {"variant", to_string(v)},
                {"bound", cfg.bound},
                {"complete_up_to", set.complete_up_to},
                {"generators", gens.fingerprint()},
                {"power_exponent", cached.catalog.power_exponent},
                {"catalog", {{"tuple_count", cached.catalog.tuple_count},
                             {"nonzero_entries", cached.catalog.entries.size()},
                             {"zero_entries", zeros}}},
                {"primes", primes_json(set)},
                {"members", members_json(set)},
                {"factorization", factorization_json(set)}};
}

json n2_scan(const RunConfig& cfg)
{
    const auto f = make_field(cfg.m);
    std::vector<std::int64_t> members;
    for (const auto& v : scan_N2(f, cfg.bound)) members.push_back(v.l);
    return json{{"m", f.m}, {"bound", cfg.bound}, {"members", members}};
}

json gate_json(const ImagQuadField& f, const TheoremGateResult& r)
{
    return json{{"m", f.m},
                {"d", r.d ? json(r.d->d) : json(nullptr)},
                {"statement", to_string(r.statement)},
                {"bound", r.set.complete_up_to},
                {"generators", r.generators.fingerprint()},
                {"primes", primes_json(r.set)},
                {"members", members_json(r.set)},
                {"n2_members", r.n2_members},
                {"divides_d", r.divides_d},
                {"factorization", factorization_json(r.set)},
                {"caveats", r.caveats}};
}

json gate(const RunConfig& cfg, Statement st, std::ostream& err)
{
    const auto f = make_field(cfg.m);
    std::optional<ShimuraDiscriminant> d;
    if (cfg.d) d = validate_discriminant(*cfg.d);
    const auto r = theorem_set(st, f, d, gate_options(cfg));
    note_cache(err, r.cache);
    return gate_json(f, r);
}

json is_excluded_cmd(RunConfig cfg, Statement st, std::int64_t p, std::ostream& err)
{
    const auto f = make_field(cfg.m);
    if (!cfg.d) throw std::domain_error("is-excluded needs -d");
    const auto d = validate_discriminant(*cfg.d);
    if (p < 2 || !is_prime(static_cast<std::uint64_t>(p))) throw std::domain_error("p must be prime");
    // Membership is exact only up to the bound, so make the bound cover p.
    cfg.bound = std::max(cfg.bound, p);
    const auto r = theorem_set(st, f, d, gate_options(cfg));
    note_cache(err, r.cache);
    const auto v = is_excluded(r, p);
    json j{{"m", f.m},       {"d", d.d},          {"p", p},
           {"statement", to_string(st)}, {"bound", cfg.bound}, {"excluded", v.excluded},
           {"in_set", v.in_set}, {"divides_d", v.divides_d}, {"reason", v.reason},
           {"caveats", r.caveats}};
    if (v.provenance && v.provenance->witness) j["witness"] = witness_json(*v.provenance->witness);
    return j;
}

json elliptic_points(std::int64_t dval, std::int64_t p)
{
    const auto d = validate_discriminant(dval);
    const auto c = elliptic_point_counts(d, p);
    return json{{"d", d.d}, {"p", p}, {"d_primes", d.prime_factors}, {"nu2", c.nu2}, {"nu3", c.nu3}};
}

json genus_zero(std::int64_t dval, std::int64_t m, std::optional<std::int64_t> box)
{
    const auto f = make_field(m);
    const auto model = conic_model(validate_discriminant(dval).d);
    json j{{"d", model.d},
           {"m", f.m},
           {"h", class_number(f)},
           {"conic", "x^2 + y^2 + " + std::to_string(model.constant) + " = 0"},
           {"matrix_algebra", matrix_algebra_over(model, f)},
           {"has_rational_point", has_rational_point(model, f)}};
    if (box) {
        j["search_box"] = *box;
        const auto pt = find_conic_point(model, f, *box);
        j["point"] = pt ? point_json(model, f, *pt) : json(nullptr);
    }
    return j;
}

json verify_examples(bool& pass)
{
    const auto rep = verify_section7();
    json rows = json::array();
    for (const auto& r : rep.rows) {
        const auto f = make_field(r.m);
        json row{{"d", r.d},
                 {"m", r.m},
                 {"h", r.h},
                 {"expected_matrix_algebra", r.expected_matrix_algebra},
                 {"matrix_algebra", r.matrix_algebra},
                 {"has_rational_point", r.has_point},
                 {"pass", r.pass}};
        row["witness"] = r.witness ? point_json(conic_model(r.d), f, *r.witness) : json(nullptr);
        rows.push_back(row);
    }
    pass = rep.pass;
    return json{{"rows", rows}, {"witness_box", rep.witness_box}, {"pass", rep.pass}};
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Exceptional primes for points on Shimura curves over imaginary quadratic fields", "shimura"};
    app.require_subcommand(1);
    app.fallthrough();

    RunConfig cfg;
    app.add_option("--output", cfg.output, "Report format")->check(CLI::IsMember({"json", "text"}));
    app.add_option("--trial-bound", cfg.trial_bound, "Trial division bound when factoring catalog values");
    app.add_option("--rho-budget", cfg.rho_budget, "Pollard rho iterations per value when factoring");
    app.add_flag("--factor", cfg.factor, "Factor catalog values to find divisors above the bound");
    app.add_option("--gens", cfg.s_override, "Generator primes to use instead of the default choice")
        ->delimiter(',');
    app.add_option("--cache-dir", cfg.cache_dir, "Directory for catalog cache files");

    std::int64_t p = 0;
    std::string variant = "unprimed", statement = "thm13";
    std::optional<std::int64_t> box;

    auto* field_info_cmd = app.add_subcommand("field-info", "Discriminant, class number, ramified primes");
    field_info_cmd->add_option("-m", cfg.m, "Field Q(sqrt(-m))")->required();

    auto* gen_set_cmd = app.add_subcommand("gen-set", "Generator primes and their norm generators");
    gen_set_cmd->add_option("-m", cfg.m)->required();

    auto* exc_cmd = app.add_subcommand("exceptional", "Exceptional set N1 or N1' with provenance");
    exc_cmd->add_option("-m", cfg.m)->required();
    exc_cmd->add_option("--variant", variant)->check(CLI::IsMember({"unprimed", "primed"}));
    exc_cmd->add_option("--bound", cfg.bound);

    auto* n2_cmd = app.add_subcommand("n2-scan", "Members of N2 up to a bound");
    n2_cmd->add_option("-m", cfg.m)->required();
    n2_cmd->add_option("--bound", cfg.bound);

    auto* excl_cmd = app.add_subcommand("is-excluded", "Whether a prime is excluded by a statement");
    excl_cmd->add_option("-m", cfg.m)->required();
    excl_cmd->add_option("-d", cfg.d)->required();
    excl_cmd->add_option("-p", p)->required();
    excl_cmd->add_option("--statement", statement)->check(CLI::IsMember({"thm13", "thm91"}));
    excl_cmd->add_option("--bound", cfg.bound);

    auto* ell_cmd = app.add_subcommand("elliptic-points", "Elliptic point counts on X_0^B(p)");
    ell_cmd->add_option("-d", cfg.d)->required();
    ell_cmd->add_option("-p", p)->required();

    auto* g0_cmd = app.add_subcommand("genus-zero", "Conic model for d in {6, 10, 22} over a field");
    g0_cmd->add_option("-d", cfg.d)->required();
    g0_cmd->add_option("-m", cfg.m)->required();
    g0_cmd->add_option("--find-point", box, "Search box for an explicit point");

    auto* verify_cmd = app.add_subcommand("verify-examples", "Recheck the genus-zero example fields");

    auto* gate_cmd = app.add_subcommand("gate", "Exclusion set for a statement");
    gate_cmd->add_option("-m", cfg.m)->required();
    gate_cmd->add_option("-d", cfg.d);
    gate_cmd->add_option("--bound", cfg.bound);
    gate_cmd->add_option("--statement", statement)->check(CLI::IsMember({"thm13", "thm91"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, err, err);
        return kUsage;
    }

    try {
        json report;
        int code = kOk;
        if (*field_info_cmd) report = field_info(cfg);
        else if (*gen_set_cmd) report = gen_set(cfg);
        else if (*exc_cmd) report = exceptional(cfg, parse_variant(variant), err);
        else if (*n2_cmd) report = n2_scan(cfg);
        else if (*excl_cmd) report = is_excluded_cmd(cfg, parse_statement(statement), p, err);
        else if (*ell_cmd) report = elliptic_points(*cfg.d, p);
        else if (*g0_cmd) report = genus_zero(*cfg.d, cfg.m, box);
        else if (*verify_cmd) {
            bool pass = false;
            report = verify_examples(pass);
            if (!pass) code = kVerifyMismatch;
        } else if (*gate_cmd) report = gate(cfg, parse_statement(statement), err);

        if (cfg.output == "text") render_text(out, report, "");
        else out << report.dump(2) << '\n';
        return code;
    } catch (const HypothesisViolation& e) {
        err << "hypothesis violation: " << e.what() << '\n';
        return kHypothesisViolation;
    } catch (const std::domain_error& e) {
        err << "domain error: " << e.what() << '\n';
        return kDomainError;
    } catch (const std::invalid_argument& e) {
        err << "domain error: " << e.what() << '\n';
        return kDomainError;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kInternalError;
    }
}

}  // namespace shimura::cli
