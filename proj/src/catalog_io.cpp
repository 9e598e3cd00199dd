#include "shimura/catalog_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace shimura {

namespace {

void write_prefix(std::ostream& os, std::int64_t q, const FrobeniusRoot& r, const EpsilonVector& e)
{
    os << q << ' ' << r.a << ' ' << r.which << ' ' << e.a_id << ' ' << e.a_conj << ' ';
}

}  // namespace

void write_catalog(std::ostream& os, const NormCatalog& c)
{
    os << c.m << ' ' << to_string(c.variant) << ' ' << c.h << ' ' << c.power_exponent << '\n';
    std::size_t ei = 0, zi = 0;
    for (std::size_t t = 0; t < c.tuple_count; ++t) {
        if (ei < c.entries.size() && c.entries[ei].tuple_index == t) {
            const auto& e = c.entries[ei++];
            write_prefix(os, e.q, e.root, e.eps);
            os << e.value.get_str() << '\n';
        } else if (zi < c.zero_entries.size() && c.zero_entries[zi].tuple_index == t) {
            const auto& z = c.zero_entries[zi++];
            write_prefix(os, z.q, z.root, z.eps);
            os << "0 Z " << to_string(z.type) << '\n';
        } else {
            throw std::logic_error("write_catalog: tuple " + std::to_string(t) + " missing");
        }
    }
}

std::string catalog_to_string(const NormCatalog& c)
{
    std::ostringstream os;
    write_catalog(os, c);
    return os.str();
}

NormCatalog read_catalog(std::istream& is)
{
    NormCatalog c;
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("catalog: missing header");
    {
        std::istringstream hs(line);
        std::string variant;
        if (!(hs >> c.m >> variant >> c.h >> c.power_exponent)) throw std::runtime_error("catalog: bad header");
        try {
            c.variant = parse_variant(variant);
        } catch (const std::domain_error& e) {
            throw std::runtime_error(std::string("catalog: ") + e.what());
        }
    }
    std::size_t t = 0;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream rs(line);
        std::int64_t q = 0;
        FrobeniusRoot root;
        EpsilonVector eps;
        eps.variant = c.variant;
        std::string value;
        if (!(rs >> q >> root.a >> root.which >> eps.a_id >> eps.a_conj >> value))
            throw std::runtime_error("catalog: bad record at tuple " + std::to_string(t));
        root.q = q;
        std::string marker, type;
        if (rs >> marker) {
            if (marker != "Z" || !(rs >> type) || value != "0")
                throw std::runtime_error("catalog: bad zero record at tuple " + std::to_string(t));
            try {
                c.zero_entries.push_back(ZeroEntry{t, q, eps, root, parse_vanishing_type(type)});
            } catch (const std::domain_error& e) {
                throw std::runtime_error(std::string("catalog: ") + e.what());
            }
        } else {
            mpz_class v;
            if (v.set_str(value, 10) != 0 || v == 0)
                throw std::runtime_error("catalog: bad value at tuple " + std::to_string(t));
            c.entries.push_back(CatalogEntry{t, q, eps, root, std::move(v)});
        }
        ++t;
    }
    c.tuple_count = t;
    return c;
}

std::filesystem::path catalog_cache_path(const std::filesystem::path& dir, std::int64_t m, Variant v,
                                         const std::string& fingerprint)
{
    return dir / ("catalog_m" + std::to_string(m) + "_" + to_string(v) + "_S" + fingerprint + ".txt");
}

std::optional<std::string> verify_cached_catalog(const NormCatalog& c, const ImagQuadField& f,
                                                 const GeneratorSet& gens, Variant v)
{
    if (c.m != f.m || c.variant != v || c.h != gens.h || c.power_exponent != power_exponent(v, gens.h))
        return std::string("header mismatch");
    const auto tuples = catalog_tuples(gens, v);
    if (c.tuple_count != tuples.size()) return std::string("tuple count mismatch");

    auto same = [&](std::size_t i, std::int64_t q, const EpsilonVector& e, const FrobeniusRoot& r) {
        const auto& t = tuples[i];
        return gens.entries[t.gen_index].q == q && t.eps == e && t.root == r;
    };
    for (const auto& e : c.entries)
        if (!same(e.tuple_index, e.q, e.eps, e.root)) return "layout mismatch at tuple " + std::to_string(e.tuple_index);
    for (const auto& z : c.zero_entries)
        if (!same(z.tuple_index, z.q, z.eps, z.root)) return "layout mismatch at tuple " + std::to_string(z.tuple_index);

    if (tuples.empty()) return std::nullopt;
    std::mt19937_64 rng(0x5eedcafeULL ^ tuples.size());
    const std::size_t pick = std::uniform_int_distribution<std::size_t>(0, tuples.size() - 1)(rng);
    const mpz_class expect = catalog_value(f, gens, v, tuples[pick]);
    for (const auto& e : c.entries)
        if (e.tuple_index == pick) return e.value == expect ? std::nullopt : std::optional<std::string>("value mismatch at tuple " + std::to_string(pick));
    return expect == 0 ? std::nullopt : std::optional<std::string>("value mismatch at tuple " + std::to_string(pick));
}

std::string to_string(CacheOutcome o)
{
    switch (o) {
    case CacheOutcome::Disabled: return "disabled";
    case CacheOutcome::Hit: return "hit";
    case CacheOutcome::Miss: return "miss";
    case CacheOutcome::Stale: return "stale";
    }
    return "?";
}

CachedCatalog load_or_build_catalog(const ImagQuadField& f, const GeneratorSet& gens, Variant v,
                                    const std::optional<std::filesystem::path>& cache_dir)
{
    if (!cache_dir) return {build_catalog(f, gens, v), CacheOutcome::Disabled};

    const auto path = catalog_cache_path(*cache_dir, f.m, v, gens.fingerprint());
    CacheOutcome outcome = CacheOutcome::Miss;
    if (std::filesystem::exists(path)) {
        std::ifstream in(path);
        try {
            NormCatalog c = read_catalog(in);
            if (!verify_cached_catalog(c, f, gens, v)) {
                c.generator_fingerprint = gens.fingerprint();
                return {std::move(c), CacheOutcome::Hit};
            }
        } catch (const std::runtime_error&) {
        }
        outcome = CacheOutcome::Stale;
    }

    CachedCatalog out{build_catalog(f, gens, v), outcome};
    std::filesystem::create_directories(*cache_dir);
    const auto tmp = path.string() + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw std::runtime_error("cannot write catalog cache " + tmp);
        write_catalog(os, out.catalog);
    }
    std::filesystem::rename(tmp, path);
    return out;
}

}  // namespace shimura
