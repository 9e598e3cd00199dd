#include <doctest.h>

#include "shimura/intkernel.hpp"
#include "shimura/siegel.hpp"

using namespace shimura;

namespace {

std::vector<std::int64_t> ls(const std::vector<N2Verdict>& v)
{
    std::vector<std::int64_t> out;
    for (const auto& x : v) out.push_back(x.l);
    return out;
}

}  // namespace

TEST_SUITE("siegel")
{
    TEST_CASE("membership examples")
    {
        const auto f = make_field(5);
        auto v = is_in_N2(f, 13);
        CHECK_FALSE(v.member);
        CHECK_FALSE(v.discriminant_condition);
        CHECK_FALSE(v.witness_q);

        v = is_in_N2(f, 23);
        CHECK(v.member);

        v = is_in_N2(f, 47);
        CHECK_FALSE(v.member);
        CHECK(v.discriminant_condition);
        REQUIRE(v.witness_q);
        CHECK(*v.witness_q == 7);

        CHECK_THROWS_AS(is_in_N2(f, 15), std::domain_error);
    }

    TEST_CASE("scan examples")
    {
        const auto f = make_field(5);
        const auto s20 = ls(scan_N2(f, 20));
        for (std::int64_t l : {7, 11, 19}) CHECK(std::find(s20.begin(), s20.end(), l) != s20.end());
        const auto s50 = ls(scan_N2(f, 50));
        CHECK(s50 == std::vector<std::int64_t>{3, 7, 11, 19, 23, 43});
        CHECK_THROWS_AS(scan_N2(f, 2), std::domain_error);
    }

    TEST_CASE("scan properties across fields")
    {
        for (std::int64_t m : {1, 2, 5, 6, 13, 17, 23, 31, 163, 226}) {
            const auto f = make_field(m);
            const auto serial = scan_N2_serial(f, 3000);
            const auto parallel = scan_N2(f, 3000);
            REQUIRE(ls(serial) == ls(parallel));
            const auto members = ls(parallel);
            REQUIRE(std::find(members.begin(), members.end(), 7) != members.end());
            for (const auto& v : parallel) REQUIRE(v.l % 4 == 3);
            // vacuous zone: every l = 3 mod 4 below 20 is a member
            for (std::int64_t l : {3, 7, 11, 19}) REQUIRE(is_in_N2(f, l).member);
            // pointwise agreement and witness invariants
            for (auto l : primes_up_to(3000)) {
                const auto v = is_in_N2(f, l);
                const bool listed = std::find_if(parallel.begin(), parallel.end(),
                                                 [&](const N2Verdict& x) { return x.l == l; }) != parallel.end();
                REQUIRE(v.member == listed);
                if (v.witness_q) {
                    const auto q = *v.witness_q;
                    REQUIRE(q > 3);
                    REQUIRE(4 * q < static_cast<std::int64_t>(l));
                    REQUIRE(splits(f, q));
                    REQUIRE(kronecker(-static_cast<std::int64_t>(l), q) == 1);
                }
            }
        }
    }
}
