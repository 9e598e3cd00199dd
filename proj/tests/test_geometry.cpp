#include <doctest.h>

#include "shimura/classgroup.hpp"
#include "shimura/geometry.hpp"
#include "shimura/intkernel.hpp"

using namespace shimura;

namespace {

bool power_of_two_or_zero(std::int64_t v) { return v == 0 || (v > 0 && (v & (v - 1)) == 0); }

}  // namespace

TEST_SUITE("geometry")
{
    TEST_CASE("discriminant validation")
    {
        CHECK(validate_discriminant(6).prime_factors == std::vector<std::int64_t>{2, 3});
        CHECK(validate_discriminant(210).prime_factors == std::vector<std::int64_t>{2, 3, 5, 7});
        CHECK_THROWS_AS(validate_discriminant(30), std::domain_error);
        CHECK_THROWS_AS(validate_discriminant(1), std::domain_error);
        CHECK_THROWS_AS(validate_discriminant(0), std::domain_error);
        CHECK_THROWS_AS(validate_discriminant(12), std::domain_error);
        CHECK_THROWS_AS(validate_discriminant(7), std::domain_error);
    }

    TEST_CASE("elliptic point counts")
    {
        const auto d6 = validate_discriminant(6);
        auto c = elliptic_point_counts(d6, 5);
        CHECK(c.nu2 == 4);
        CHECK(c.nu3 == 0);
        c = elliptic_point_counts(d6, 7);
        CHECK(c.nu2 == 0);
        CHECK(c.nu3 == 4);
        CHECK_THROWS_AS(elliptic_point_counts(d6, 3), std::domain_error);
        CHECK_THROWS_AS(elliptic_point_counts(d6, 9), std::domain_error);

        CHECK(symbol_minus1(2) == 0);
        CHECK(symbol_minus3(3) == 0);
        CHECK(symbol_minus3(2) == -1);

        for (std::int64_t d : {6, 10, 14, 15, 21, 22, 210, 330}) {
            const auto sd = validate_discriminant(d);
            for (auto p : primes_up_to(3000)) {
                if (d % p == 0) continue;
                const auto e = elliptic_point_counts(sd, p);
                REQUIRE(power_of_two_or_zero(e.nu2));
                REQUIRE(power_of_two_or_zero(e.nu3));
                if (p % 4 == 3) REQUIRE(e.nu2 == 0);
                if (p % 3 == 2) REQUIRE(e.nu3 == 0);
                if (d == 10) REQUIRE(e.nu2 == 0);
            }
        }
    }

    TEST_CASE("conic models and local criteria")
    {
        CHECK(conic_model(6).constant == 3);
        CHECK(conic_model(10).constant == 2);
        CHECK(conic_model(22).constant == 11);
        CHECK_THROWS_AS(conic_model(14), std::domain_error);

        const auto m6 = conic_model(6), m22 = conic_model(22);
        CHECK(has_rational_point(m6, make_field(13)));
        CHECK(has_rational_point(m6, make_field(31)));
        CHECK(has_rational_point(m22, make_field(5)));
        CHECK(matrix_algebra_over(m6, make_field(13)));
        CHECK_FALSE(matrix_algebra_over(m6, make_field(31)));
        CHECK(matrix_algebra_over(m22, make_field(5)));

        for (std::int64_t m = 1; m <= 200; ++m) {
            if (!is_squarefree(m)) continue;
            const auto f = make_field(m);
            for (std::int64_t d : {6, 22})
                if (matrix_algebra_over(conic_model(d), f)) REQUIRE(has_rational_point(conic_model(d), f));
        }
    }

    TEST_CASE("conic points")
    {
        const auto f = make_field(5);
        const auto model = conic_model(22);
        ConicPoint hand{22, 0, 2, 3, 0, 1};  // (2 sqrt(-5), 3)
        CHECK(on_conic(model, f, hand));
        CHECK(hand.x_str(5) == "2*sqrt(-5)");
        CHECK(hand.y_str(5) == "3");
        CHECK_FALSE(on_conic(model, f, ConicPoint{22, 1, 0, 0, 0, 1}));

        const auto pt = find_conic_point(model, f, 5);
        REQUIRE(pt);
        CHECK(on_conic(model, f, *pt));
        CHECK_THROWS_AS(find_conic_point(model, f, 0), std::domain_error);

        // d = 6 over Q(sqrt(-13)): the smallest box holding a point
        const auto f13 = make_field(13);
        std::int64_t first_box = 0;
        for (std::int64_t box = 1; box <= 8 && !first_box; ++box)
            if (auto p = find_conic_point(conic_model(6), f13, box)) {
                CHECK(on_conic(conic_model(6), f13, *p));
                first_box = box;
            }
        CHECK(first_box > 0);
    }

    TEST_CASE("no points where the criterion says none exist; serial equals parallel")
    {
        for (std::int64_t m = 1; m <= 50; ++m) {
            if (!is_squarefree(m)) continue;
            const auto f = make_field(m);
            for (std::int64_t d : {6, 10, 22}) {
                const auto model = conic_model(d);
                const auto a = find_conic_point(model, f, m <= 10 ? 6 : 3);
                if (!has_rational_point(model, f)) REQUIRE_FALSE(a);
                if (a) REQUIRE(on_conic(model, f, *a));
                const auto b = find_conic_point_serial(model, f, 3);
                const auto c = find_conic_point(model, f, 3);
                REQUIRE(b.has_value() == c.has_value());
                if (b) REQUIRE((b->a == c->a && b->b == c->b && b->c == c->c && b->g == c->g && b->e == c->e));
            }
        }
    }

    TEST_CASE("genus-zero example lists")
    {
        const auto rows = genus_zero_fixture();
        CHECK(rows.size() == 19);
        const auto rep = verify_section7();
        CHECK(rep.pass);
        for (const auto& r : rep.rows) {
            CAPTURE(r.d);
            CAPTURE(r.m);
            CHECK(r.pass);
            CHECK(r.h >= 2);
            if (r.witness) CHECK(on_conic(conic_model(r.d), make_field(r.m), *r.witness));
        }
        const auto it = std::find_if(rep.rows.begin(), rep.rows.end(),
                                     [](const GenusZeroRow& r) { return r.d == 10 && r.m == 17; });
        REQUIRE(it != rep.rows.end());
        CHECK(it->h == 4);
        CHECK(it->matrix_algebra);
        const auto it6 = std::find_if(rep.rows.begin(), rep.rows.end(),
                                      [](const GenusZeroRow& r) { return r.d == 10 && r.m == 6; });
        REQUIRE(it6 != rep.rows.end());
        CHECK_FALSE(it6->matrix_algebra);
    }
}
