#include "shimura/frobnorm.hpp"

#include <stdexcept>

#include "shimura/intkernel.hpp"

namespace shimura {

std::vector<FrobeniusRoot> frobenius_roots(std::int64_t q)
{
    const auto bound = static_cast<std::int64_t>(isqrt(static_cast<std::uint64_t>(4 * q)));
    std::vector<FrobeniusRoot> out;
    out.reserve(static_cast<std::size_t>(2 * (2 * bound + 1)));
    for (std::int64_t a = -bound; a <= bound; ++a) {
        if (a * a == 4 * q) continue;  // impossible for prime q
        out.push_back({a, q, 0});
        out.push_back({a, q, 1});
    }
    return out;
}

BetaPower beta_power(const FrobeniusRoot& root, unsigned long n)
{
    // Arithmetic in Z[X]/(X^2 + aX + q): X^2 = -aX - q.
    const long a = static_cast<long>(root.a);
    const long q = static_cast<long>(root.q);
    auto mul = [&](const mpz_class& s1, const mpz_class& t1, const mpz_class& s2, const mpz_class& t2,
                   mpz_class& so, mpz_class& to) {
        mpz_class tt = t1 * t2;
        mpz_class s = s1 * s2 - q * tt;
        mpz_class t = s1 * t2 + t1 * s2 - a * tt;
        so = std::move(s);
        to = std::move(t);
    };
    BetaPower r;
    r.n = n;
    mpz_class bs = 0, bt = 1;
    unsigned long e = n;
    while (e) {
        if (e & 1) mul(r.s, r.t, bs, bt, r.s, r.t);
        e >>= 1;
        if (e) mul(bs, bt, bs, bt, bs, bt);
    }
    return r;
}

bool root_in_field(const ImagQuadField& f, const FrobeniusRoot& root)
{
    return squarefree_part(root.discriminant()) == -f.m;
}

QuadInt root_as_element(const ImagQuadField& f, const FrobeniusRoot& root)
{
    if (!root_in_field(f, root)) throw std::logic_error("root_as_element: beta does not lie in k");
    const std::int64_t g2 = (4 * root.q - root.a * root.a) / f.m;
    const auto g = static_cast<long>(isqrt(static_cast<std::uint64_t>(g2)));
    try {
        return from_sqrt_coords(f, -static_cast<long>(root.a), root.which == 0 ? g : -g);
    } catch (const std::domain_error&) {
        throw std::logic_error("root_as_element: beta has non-integral coordinates");
    }
}

mpz_class compositum_norm(const ImagQuadField& f, const QuadInt& xi, const FrobeniusRoot& root,
                          const BetaPower& power)
{
    if (root_in_field(f, root)) {
        const QuadInt beta = root_as_element(f, root);
        QuadInt B = qi_mul(f, QuadInt::rational(power.t), beta);
        B.x += power.s;
        return qi_norm(f, qi_sub(xi, B));
    }
    mpz_class qn;
    mpz_ui_pow_ui(qn.get_mpz_t(), static_cast<unsigned long>(root.q), power.n);
    const mpz_class tr = beta_power_trace(root, power);
    QuadInt p = qi_mul(f, xi, xi);
    p.x += qn - tr * xi.x;
    p.y -= tr * xi.y;
    return qi_norm(f, p);
}

mpz_class compositum_norm(const ImagQuadField& f, const QuadInt& xi, const FrobeniusRoot& root, unsigned long N)
{
    return compositum_norm(f, xi, root, beta_power(root, N));
}

}  // namespace shimura
