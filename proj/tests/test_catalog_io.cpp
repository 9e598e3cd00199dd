#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "shimura/catalog_io.hpp"
#include "shimura/classgroup.hpp"

using namespace shimura;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name)
{
    const auto dir = fs::temp_directory_path() / ("shimura_test_" + name + "_" + std::to_string(::getpid()));
    fs::remove_all(dir);
    return dir;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_SUITE("catalog_io")
{
    TEST_CASE("write and read round trip")
    {
        const auto f = make_field(6);
        const auto gens = select_generator_primes(f, class_number(f));
        for (auto v : {Variant::Unprimed, Variant::Primed}) {
            const auto c = build_catalog(f, gens, v);
            const auto text = catalog_to_string(c);
            std::istringstream in(text);
            const auto back = read_catalog(in);
            CHECK(catalog_to_string(back) == text);
            CHECK(back.tuple_count == c.tuple_count);
            CHECK(back.entries.size() == c.entries.size());
            CHECK(back.zero_entries.size() == c.zero_entries.size());
            CHECK_FALSE(verify_cached_catalog(back, f, gens, v));
        }
        // header line and a zero record
        const auto text = catalog_to_string(build_catalog(f, gens, Variant::Unprimed));
        CHECK(text.rfind("6 unprimed 2 48\n", 0) == 0);
        CHECK(text.find(" 0 Z Type2\n") != std::string::npos);
    }

    TEST_CASE("malformed input")
    {
        std::istringstream empty("");
        CHECK_THROWS_AS(read_catalog(empty), std::runtime_error);
        std::istringstream bad_header("5 sideways 2 48\n");
        CHECK_THROWS_AS(read_catalog(bad_header), std::runtime_error);
        std::istringstream bad_row("5 unprimed 2 48\n7 0 0 0 0 x12\n");
        CHECK_THROWS_AS(read_catalog(bad_row), std::runtime_error);
        std::istringstream bad_zero("5 unprimed 2 48\n7 0 0 12 12 0 Q Type2\n");
        CHECK_THROWS_AS(read_catalog(bad_zero), std::runtime_error);
    }

    TEST_CASE("cache path carries the generator fingerprint")
    {
        CHECK(catalog_cache_path("/tmp/c", 5, Variant::Primed, "7").filename() == "catalog_m5_primed_S7.txt");
        CHECK(catalog_cache_path("/tmp/c", 5, Variant::Unprimed, "23").filename() == "catalog_m5_unprimed_S23.txt");
    }

    TEST_CASE("cache miss, hit and stale rebuild")
    {
        const auto dir = fresh_dir("cache");
        const auto f = make_field(5);
        const auto gens = select_generator_primes(f, 2);

        const auto first = load_or_build_catalog(f, gens, Variant::Unprimed, dir);
        CHECK(first.outcome == CacheOutcome::Miss);
        const auto path = catalog_cache_path(dir, 5, Variant::Unprimed, "7");
        REQUIRE(fs::exists(path));
        const auto original = slurp(path);

        const auto second = load_or_build_catalog(f, gens, Variant::Unprimed, dir);
        CHECK(second.outcome == CacheOutcome::Hit);
        CHECK(catalog_to_string(second.catalog) == catalog_to_string(first.catalog));
        CHECK(second.catalog.generator_fingerprint == "7");

        // corrupt every value: the spot check catches it and the file is rebuilt
        {
            auto c = first.catalog;
            for (auto& e : c.entries) e.value += 1;
            std::ofstream out(path, std::ios::trunc);
            write_catalog(out, c);
        }
        const auto third = load_or_build_catalog(f, gens, Variant::Unprimed, dir);
        CHECK(third.outcome == CacheOutcome::Stale);
        CHECK(catalog_to_string(third.catalog) == original);
        CHECK(slurp(path) == original);

        // truncated file
        {
            std::ofstream out(path, std::ios::trunc);
            out << original.substr(0, original.size() / 2);
        }
        CHECK(load_or_build_catalog(f, gens, Variant::Unprimed, dir).outcome == CacheOutcome::Stale);
        CHECK(slurp(path) == original);

        const auto none = load_or_build_catalog(f, gens, Variant::Unprimed, std::nullopt);
        CHECK(none.outcome == CacheOutcome::Disabled);
        fs::remove_all(dir);
    }
}
