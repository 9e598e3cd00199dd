#include <doctest.h>

#include <cmath>

#include "shimura/classgroup.hpp"
#include "shimura/excepsets.hpp"
#include "shimura/intkernel.hpp"

using namespace shimura;

namespace {

// Every (x, y) with norm(x + y w) = q^h, in (q, w - r) and outside the
// conjugate prime, by scanning y and solving the quadratic for x.
std::vector<QuadInt> norm_solutions_brute_force(const ImagQuadField& f, std::int64_t q, std::int64_t r,
                                                std::int64_t h)
{
    mpz_class qh;
    mpz_ui_pow_ui(qh.get_mpz_t(), static_cast<unsigned long>(q), static_cast<unsigned long>(h));
    const std::int64_t rbar = conjugate_root(f, q, r);
    std::vector<QuadInt> out;
    // x^2 + D x y + N y^2 = q^h has discriminant 4 q^h + D y^2 in x.
    for (mpz_class y = 0; -f.D * y * y <= 4 * qh; ++y) {
        for (int sy : {1, -1}) {
            if (y == 0 && sy < 0) continue;
            const mpz_class yy = sy * y;
            const mpz_class disc = 4 * qh + f.D * yy * yy;
            if (!mpz_perfect_square_p(disc.get_mpz_t())) continue;
            mpz_class s;
            mpz_sqrt(s.get_mpz_t(), disc.get_mpz_t());
            for (int sx : {1, -1}) {
                if (s == 0 && sx < 0) continue;
                const mpz_class num = -f.D * yy + sx * s;
                if (num % 2 != 0) continue;
                const QuadInt a{num / 2, yy};
                if (qi_norm(f, a) != qh) continue;
                if (in_prime(a, q, r) && !in_prime(a, q, rbar)) out.push_back(a);
            }
        }
    }
    return out;
}

}  // namespace

TEST_SUITE("classgroup")
{
    TEST_CASE("reduced forms")
    {
        CHECK(reduced_forms(-20) == std::vector<BQForm>{{1, 0, 5}, {2, 2, 3}});
        CHECK(reduced_forms(-23) == std::vector<BQForm>{{1, 1, 6}, {2, -1, 3}, {2, 1, 3}});
        CHECK(reduced_forms(-4) == std::vector<BQForm>{{1, 0, 1}});
        CHECK(reduced_forms(-52) == std::vector<BQForm>{{1, 0, 13}, {2, 2, 7}});
        CHECK_THROWS_AS(reduced_forms(-12), std::domain_error);
        CHECK_THROWS_AS(reduced_forms(5), std::domain_error);
        CHECK_THROWS_AS(reduced_forms(-16), std::domain_error);
        for (const auto& g : reduced_forms(-84)) {
            CHECK(g.is_reduced());
            CHECK(g.discriminant() == -84);
        }
    }

    TEST_CASE("Dirichlet class number formula")
    {
        CHECK(class_number_dirichlet(-20) == 2);
        CHECK(class_number_dirichlet(-52) == 2);
        CHECK(class_number_dirichlet(-163) == 1);
        CHECK_THROWS_AS(class_number_dirichlet(-4), std::domain_error);
        CHECK_THROWS_AS(class_number_dirichlet(-3), std::domain_error);
        CHECK_THROWS_AS(class_number_dirichlet(-18), std::domain_error);
        for (std::int64_t D = -5; D > -500; --D) {
            if (!is_fundamental_discriminant(D)) continue;
            REQUIRE(static_cast<std::int64_t>(reduced_forms(D).size()) == class_number_dirichlet(D));
        }
        CHECK(class_number(make_field(17)) == 4);
        CHECK(class_number(make_field(23)) == 3);
    }

    TEST_CASE("class number one")
    {
        CHECK(is_class_number_one(19));
        CHECK_FALSE(is_class_number_one(5));
        CHECK_FALSE(is_class_number_one(13));
        std::vector<std::int64_t> ones;
        for (std::int64_t m = 1; m < 1000; ++m)
            if (is_squarefree(m) && is_class_number_one(m)) ones.push_back(m);
        CHECK(ones == std::vector<std::int64_t>{1, 2, 3, 7, 11, 19, 43, 67, 163});
    }

    TEST_CASE("composition examples")
    {
        const auto f = make_field(5);
        const BQForm id = principal_form(f.D), g{2, 2, 3};
        CHECK(compose(f, id, g) == g);
        CHECK(compose(f, g, g) == id);
        CHECK_THROWS_AS(compose(f, g, BQForm{1, 1, 6}), std::domain_error);

        const auto f23 = make_field(23);
        for (const auto& x : reduced_forms(f23.D)) CHECK(compose(f23, x, inverse(x)) == principal_form(f23.D));
        // Z/3: (2,1,3) has order 3
        const BQForm a{2, 1, 3};
        CHECK(compose(f23, a, a) == BQForm{2, -1, 3});
        CHECK(compose(f23, a, compose(f23, a, a)) == principal_form(f23.D));
    }

    TEST_CASE("composition is associative and commutative")
    {
        for (std::int64_t m : {5, 23, 47, 13}) {
            const auto f = make_field(m);
            const auto forms = reduced_forms(f.D);
            for (const auto& x : forms)
                for (const auto& y : forms) {
                    const auto xy = compose(f, x, y);
                    REQUIRE(xy == compose(f, y, x));
                    REQUIRE(xy.is_reduced());
                    for (const auto& z : forms) REQUIRE(compose(f, xy, z) == compose(f, x, compose(f, y, z)));
                }
        }
        // larger group: h(-4*89) = 12
        const auto f = make_field(89);
        const auto forms = reduced_forms(f.D);
        CHECK(forms.size() == 12);
        for (const auto& x : forms)
            for (const auto& y : forms) REQUIRE(compose(f, x, y) == compose(f, y, x));
    }

    TEST_CASE("generator set for Q(sqrt(-5))")
    {
        const auto f = make_field(5);
        const auto gs = select_generator_primes(f, 2);
        REQUIRE(gs.entries.size() == 1);
        const auto& e = gs.entries[0];
        CHECK(e.q == 7);
        CHECK(e.r == 0);
        CHECK(e.form == BQForm{2, 2, 3});
        CHECK(format_element(f, e.alpha) == "2-3*sqrt(-5)");
        CHECK(qi_norm(f, e.alpha) == 49);
        CHECK(gs.fingerprint() == "7");
        CHECK_FALSE(check_generator_set(f, gs));
        // 2 - 3 sqrt(-5) with sqrt(-5) = 3 mod 7 lies in the prime over 7 fixed by r
        CHECK(in_prime(e.alpha, 7, 0));
        CHECK_FALSE(in_prime(e.alpha, 7, 1));
        CHECK_THROWS_AS(select_generator_primes(f, 1), std::domain_error);
    }

    TEST_CASE("generator set invariants")
    {
        for (std::int64_t m : {5, 6, 13, 17, 23, 26, 89, 14, 21}) {
            const auto f = make_field(m);
            const auto h = class_number(f);
            const auto gs = select_generator_primes(f, h);
            CAPTURE(m);
            CHECK_FALSE(check_generator_set(f, gs));
            std::vector<BQForm> forms;
            for (const auto& e : gs.entries) {
                CHECK((6 * h) % e.q != 0);
                CHECK(splits(f, e.q));
                forms.push_back(e.form);
            }
            CHECK(static_cast<std::int64_t>(generated_subgroup(f, forms).size()) == h);
            // minimal prefix: dropping the last prime no longer generates
            forms.pop_back();
            if (!forms.empty()) CHECK(static_cast<std::int64_t>(generated_subgroup(f, forms).size()) < h);
        }
    }

    TEST_CASE("generator overrides")
    {
        const auto f = make_field(5);
        const auto gs = generator_set_from_primes(f, 2, {23});
        CHECK(gs.fingerprint() == "23");
        CHECK_FALSE(check_generator_set(f, gs));
        CHECK_THROWS_AS(generator_set_from_primes(f, 2, {3}), std::domain_error);   // 3 | 6h
        CHECK_THROWS_AS(generator_set_from_primes(f, 2, {11}), std::domain_error);  // inert
        CHECK_THROWS_AS(generator_set_from_primes(f, 2, {29}), std::domain_error);  // principal
        CHECK_THROWS_AS(generator_set_from_primes(f, 2, {23, 23}), std::domain_error);
        CHECK_THROWS_AS(generator_set_from_primes(f, 2, {}), std::domain_error);
    }

    TEST_CASE("norm generator agrees with brute force")
    {
        for (std::int64_t m : {5, 6, 10, 13, 14, 17, 21, 23, 26, 30, 89}) {
            const auto f = make_field(m);
            const auto h = class_number(f);
            int checked = 0;
            for (auto q : primes_up_to(60)) {
                if (!splits(f, q)) continue;
                // keep the brute-force y range small
                if (std::pow(static_cast<double>(q), static_cast<double>(h)) > 1e10) continue;
                const std::int64_t r = std::get<Split>(splitting_type(f, q)).r;
                const auto alpha = solve_norm_generator(f, q, r, h);
                const auto sols = norm_solutions_brute_force(f, q, r, h);
                CAPTURE(m);
                CAPTURE(q);
                REQUIRE(sols.size() == 2);
                REQUIRE((sols[0] == alpha || sols[1] == alpha));
                REQUIRE((sols[0] == qi_neg(sols[1])));
                // sign convention: y < 0, or y = 0 and x < 0
                REQUIRE((alpha.y < 0 || (alpha.y == 0 && alpha.x < 0)));
                // not divisible by the rational prime q
                REQUIRE_FALSE((alpha.x % q == 0 && alpha.y % q == 0));
                ++checked;
            }
            CHECK(checked > 0);
        }
    }

    TEST_CASE("alpha^eps does not depend on the sign of alpha")
    {
        const auto f = make_field(13);
        const auto gs = select_generator_primes(f, class_number(f));
        const auto& alpha = gs.entries[0].alpha;
        for (auto v : {Variant::Unprimed, Variant::Primed})
            for (const auto& e : epsilon_vectors(v))
                CHECK(apply_epsilon(f, alpha, e) == apply_epsilon(f, qi_neg(alpha), e));
    }
}
