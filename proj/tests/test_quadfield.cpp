#include <doctest.h>

#include <random>

#include "shimura/intkernel.hpp"
#include "shimura/quadfield.hpp"

using namespace shimura;

namespace {

QuadInt random_element(std::mt19937_64& gen, long box)
{
    std::uniform_int_distribution<long> d(-box, box);
    return {d(gen), d(gen)};
}

}  // namespace

TEST_SUITE("quadfield")
{
    TEST_CASE("make_field")
    {
        const auto f5 = make_field(5);
        CHECK(f5.D == -20);
        CHECK(f5.ramified == std::vector<std::int64_t>{2, 5});
        CHECK(f5.omega_trace == -20);
        CHECK(f5.omega_norm == 105);

        const auto f3 = make_field(3);
        CHECK(f3.D == -3);
        CHECK(f3.ramified == std::vector<std::int64_t>{3});

        CHECK(make_field(1).D == -4);
        CHECK(make_field(2).D == -8);
        CHECK(make_field(31).D == -31);

        CHECK_THROWS_AS(make_field(12), std::domain_error);
        CHECK_THROWS_AS(make_field(0), std::domain_error);
        CHECK_THROWS_AS(make_field(-5), std::domain_error);
    }

    TEST_CASE("multiplication basics in Q(sqrt(-5))")
    {
        const auto f = make_field(5);
        std::mt19937_64 gen(1);
        for (int i = 0; i < 100; ++i) {
            const auto z = random_element(gen, 1000);
            CHECK(qi_mul(f, QuadInt::one(), z) == z);
            const auto n = qi_mul(f, qi_conj(f, z), z);
            CHECK(n.y == 0);
            CHECK(n.x == qi_norm(f, z));
            CHECK(qi_conj(f, qi_conj(f, z)) == z);
        }
        // 1 + w = -9 + sqrt(-5), norm 81 + 5
        const QuadInt z{1, 1};
        CHECK(qi_mul(f, z, qi_conj(f, z)) == QuadInt(86, 0));
        CHECK(qi_norm(f, QuadInt{}) == 0);
        CHECK(qi_pow(f, z, 0) == QuadInt::one());
        CHECK(qi_pow(f, z, 3) == qi_mul(f, z, qi_mul(f, z, z)));
    }

    TEST_CASE("element text format")
    {
        const auto f = make_field(5);
        const auto alpha = parse_element(f, "2-3*sqrt(-5)");
        CHECK(qi_norm(f, alpha) == 49);
        CHECK(format_element(f, alpha) == "2-3*sqrt(-5)");
        CHECK(alpha == from_sqrt_coords(f, 4, -6));
        CHECK(parse_element(f, "7") == QuadInt(7, 0));
        CHECK(parse_element(f, "sqrt(-5)") == from_sqrt_coords(f, 0, 2));
        CHECK_THROWS_AS(parse_element(f, "1/2+1/2*sqrt(-5)"), std::domain_error);
        CHECK_THROWS_AS(parse_element(f, "1+sqrt(-7)"), std::domain_error);

        const auto g = make_field(3);
        const auto w = parse_element(g, "1/2+1/2*sqrt(-3)");
        CHECK(qi_norm(g, w) == 1);
        CHECK(format_element(g, w) == "1/2+1/2*sqrt(-3)");

        std::mt19937_64 gen(5);
        for (auto m : {3L, 5L, 7L, 23L, 26L}) {
            const auto k = make_field(m);
            for (int i = 0; i < 200; ++i) {
                const auto z = random_element(gen, 50);
                REQUIRE(parse_element(k, format_element(k, z)) == z);
            }
        }
    }

    TEST_CASE("norm is multiplicative and nonnegative")
    {
        std::mt19937_64 gen(2);
        for (auto m : {1L, 3L, 5L, 6L, 13L, 23L, 163L}) {
            const auto f = make_field(m);
            for (int i = 0; i < 1000 / 7 + 1; ++i) {
                const auto a = random_element(gen, 100000), b = random_element(gen, 100000);
                REQUIRE(qi_norm(f, qi_mul(f, a, b)) == qi_norm(f, a) * qi_norm(f, b));
                REQUIRE(qi_norm(f, a) >= 0);
                REQUIRE((qi_norm(f, a) == 0) == (a.x == 0 && a.y == 0));
                REQUIRE(qi_trace(f, a) == qi_add(a, qi_conj(f, a)).x);
            }
        }
    }

    TEST_CASE("splitting examples")
    {
        const auto f5 = make_field(5);
        CHECK(std::holds_alternative<Ramified>(splitting_type(f5, 2)));
        CHECK(std::holds_alternative<Split>(splitting_type(f5, 3)));
        CHECK(std::holds_alternative<Inert>(splitting_type(f5, 11)));
        CHECK(std::holds_alternative<Split>(splitting_type(make_field(31), 2)));

        // 7 splits in Q(sqrt(-5)); w = -10 + sqrt(-5) and sqrt(-5) = 3 or 4 mod 7
        const auto s = std::get<Split>(splitting_type(f5, 7));
        CHECK(s.r == 0);
        CHECK(conjugate_root(f5, 7, 0) == 1);
    }

    TEST_CASE("splitting trichotomy and split roots")
    {
        for (auto m : {5L, 6L, 13L, 17L, 23L, 31L}) {
            const auto f = make_field(m);
            for (auto q : primes_up_to(10000)) {
                const auto st = splitting_type(f, q);
                const bool ram = std::find(f.ramified.begin(), f.ramified.end(), q) != f.ramified.end();
                REQUIRE(std::holds_alternative<Ramified>(st) == ram);
                if (ram) continue;
                REQUIRE(std::holds_alternative<Split>(st) == (kronecker(f.D, q) == 1));
                if (auto* sp = std::get_if<Split>(&st)) {
                    const std::int64_t r = sp->r;
                    const std::int64_t qi = q;
                    mpz_class v = mpz_class(r) * r - mpz_class(f.omega_trace) * r + f.omega_norm;
                    REQUIRE(mpz_divisible_ui_p(v.get_mpz_t(), static_cast<unsigned long>(qi)) != 0);
                    // least nonnegative root
                    const auto other = conjugate_root(f, qi, r);
                    REQUIRE(r <= other);
                    REQUIRE(r != other);
                    // w - r lies in the prime, the conjugate root does not
                    REQUIRE(in_prime(QuadInt(-r, 1), qi, r));
                    REQUIRE_FALSE(in_prime(QuadInt(-r, 1), qi, other));
                }
            }
        }
    }
}
