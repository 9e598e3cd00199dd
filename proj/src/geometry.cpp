#include "shimura/geometry.hpp"

#include <stdexcept>

#include "shimura/classgroup.hpp"
#include "shimura/intkernel.hpp"

namespace shimura {

ShimuraDiscriminant validate_discriminant(std::int64_t d)
{
    if (d <= 1) throw std::domain_error("discriminant must be > 1");
    if (!is_squarefree(d)) throw std::domain_error("discriminant " + std::to_string(d) + " is not squarefree");
    ShimuraDiscriminant out{d, prime_divisors(d)};
    if (out.prime_factors.size() % 2 != 0)
        throw std::domain_error("discriminant " + std::to_string(d) + " has an odd number of prime factors");
    return out;
}

int symbol_minus1(std::int64_t q)
{
    if (q == 2) return 0;
    return q % 4 == 1 ? 1 : -1;
}

int symbol_minus3(std::int64_t q)
{
    if (q == 3) return 0;
    return q % 3 == 1 ? 1 : -1;
}

EllipticCounts elliptic_point_counts(const ShimuraDiscriminant& d, std::int64_t p)
{
    if (!is_prime(static_cast<std::uint64_t>(p))) throw std::domain_error("elliptic_point_counts: p must be prime");
    if (d.d % p == 0) throw std::domain_error("elliptic_point_counts: p divides d");
    EllipticCounts c{1 + symbol_minus1(p), 1 + symbol_minus3(p)};
    for (auto l : d.prime_factors) {
        c.nu2 *= 1 - symbol_minus1(l);
        c.nu3 *= 1 - symbol_minus3(l);
    }
    return c;
}

ConicModel conic_model(std::int64_t d)
{
    switch (d) {
    case 6: return ConicModel{6, 3, 3, {2, 3}};
    case 10: return ConicModel{10, 2, 2, {2, 5}};
    case 22: return ConicModel{22, 11, 11, {2, 11}};
    default: throw std::domain_error("genus-zero conic models exist only for d in {6, 10, 22}");
    }
}

bool has_rational_point(const ConicModel& model, const ImagQuadField& f)
{
    return !splits(f, model.nonsplit_prime);
}

bool matrix_algebra_over(const ConicModel& model, const ImagQuadField& f)
{
    return !splits(f, model.split_pair[0]) && !splits(f, model.split_pair[1]);
}

namespace {

std::string rational_sqrt_str(std::int64_t num_u, std::int64_t num_v, std::int64_t den, std::int64_t m)
{
    mpq_class u(num_u, den), v(num_v, den);
    u.canonicalize();
    v.canonicalize();
    const std::string root = "sqrt(-" + std::to_string(m) + ")";
    if (v == 0) return u.get_str();
    std::string vs = v == 1 ? root : v == -1 ? "-" + root : v.get_str() + "*" + root;
    if (u == 0) return vs;
    return u.get_str() + (vs[0] == '-' ? "" : "+") + vs;
}

bool satisfies(const ConicModel& model, std::int64_t m, std::int64_t a, std::int64_t b, std::int64_t c,
               std::int64_t g, std::int64_t e)
{
    using i128 = __int128;
    if (static_cast<i128>(a) * b + static_cast<i128>(c) * g != 0) return false;
    const i128 re = static_cast<i128>(a) * a + static_cast<i128>(c) * c -
                    static_cast<i128>(m) * (static_cast<i128>(b) * b + static_cast<i128>(g) * g) +
                    static_cast<i128>(model.constant) * e * e;
    return re == 0;
}

std::optional<ConicPoint> scan_denominator(const ConicModel& model, std::int64_t m, std::int64_t box, std::int64_t e)
{
    for (std::int64_t a = -box; a <= box; ++a)
        for (std::int64_t b = -box; b <= box; ++b)
            for (std::int64_t c = -box; c <= box; ++c)
                for (std::int64_t g = -box; g <= box; ++g)
                    if (satisfies(model, m, a, b, c, g, e)) return ConicPoint{model.d, a, b, c, g, e};
    return std::nullopt;
}

void check_box(std::int64_t box)
{
    if (box < 1) throw std::domain_error("find_conic_point: box must be >= 1");
    if (box > 10000) throw std::domain_error("find_conic_point: box must be <= 10000");
}

}  // namespace

std::string ConicPoint::x_str(std::int64_t m) const { return rational_sqrt_str(a, b, e, m); }
std::string ConicPoint::y_str(std::int64_t m) const { return rational_sqrt_str(c, g, e, m); }

bool on_conic(const ConicModel& model, const ImagQuadField& f, const ConicPoint& pt)
{
    if (pt.e == 0) return false;
    // (u1 + v1 s)^2 + (u2 + v2 s)^2 + C with s^2 = -m
    const mpq_class u1(pt.a, pt.e), v1(pt.b, pt.e), u2(pt.c, pt.e), v2(pt.g, pt.e);
    const mpq_class m = static_cast<long>(f.m);
    const mpq_class re = u1 * u1 - m * v1 * v1 + u2 * u2 - m * v2 * v2 + static_cast<long>(model.constant);
    const mpq_class im = 2 * u1 * v1 + 2 * u2 * v2;
    return re == 0 && im == 0;
}

std::optional<ConicPoint> find_conic_point_serial(const ConicModel& model, const ImagQuadField& f, std::int64_t box)
{
    check_box(box);
    for (std::int64_t e = 1; e <= box; ++e)
        if (auto pt = scan_denominator(model, f.m, box, e)) return pt;
    return std::nullopt;
}

std::optional<ConicPoint> find_conic_point(const ConicModel& model, const ImagQuadField& f, std::int64_t box)
{
    check_box(box);
    std::vector<std::optional<ConicPoint>> per_e(static_cast<std::size_t>(box));
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t e = 1; e <= box; ++e) per_e[static_cast<std::size_t>(e - 1)] = scan_denominator(model, f.m, box, e);
    for (auto& pt : per_e)
        if (pt) return pt;
    return std::nullopt;
}

namespace {

GenusZeroRow fixture_row(std::int64_t d, std::int64_t m, bool matrix_algebra)
{
    GenusZeroRow row;
    row.d = d;
    row.m = m;
    row.expected_matrix_algebra = matrix_algebra;
    return row;
}

}  // namespace

std::vector<GenusZeroRow> genus_zero_fixture()
{
    struct Item {
        std::int64_t d;
        std::vector<std::int64_t> iso;
        std::vector<std::int64_t> non_iso;
    };
    const std::vector<Item> items = {
        {6, {13, 21, 37}, {31, 39}},
        {10, {17, 22, 33, 38}, {6, 34, 51}},
        {22, {5, 33, 37}, {15, 23, 31, 47}},
    };
    std::vector<GenusZeroRow> rows;
    for (const auto& it : items) {
        for (auto m : it.iso) rows.push_back(fixture_row(it.d, m, true));
        for (auto m : it.non_iso) rows.push_back(fixture_row(it.d, m, false));
    }
    return rows;
}

GenusZeroReport verify_section7(std::int64_t witness_box)
{
    GenusZeroReport rep;
    rep.witness_box = witness_box;
    rep.rows = genus_zero_fixture();
    rep.pass = true;
    for (auto& row : rep.rows) {
        const auto f = make_field(row.m);
        const auto model = conic_model(row.d);
        row.h = class_number(f);
        row.matrix_algebra = matrix_algebra_over(model, f);
        row.has_point = has_rational_point(model, f);
        if (witness_box > 0 && row.has_point) row.witness = find_conic_point(model, f, witness_box);
        row.pass = row.h != 1 && row.matrix_algebra == row.expected_matrix_algebra && row.has_point;
        rep.pass = rep.pass && row.pass;
    }
    return rep;
}

}  // namespace shimura
