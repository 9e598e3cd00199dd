#include "shimura/classgroup.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

#include "shimura/intkernel.hpp"

namespace shimura {

namespace {

using i128 = __int128;

std::int64_t floor_div(i128 a, i128 b)
{
    i128 q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return static_cast<std::int64_t>(q);
}

i128 mod_pos(i128 a, i128 m)
{
    i128 r = a % m;
    return r < 0 ? r + m : r;
}

// Extended gcd: returns g = gcd(a, b) >= 0 with u a + v b = g.
std::int64_t ext_gcd(std::int64_t a, std::int64_t b, std::int64_t& u, std::int64_t& v)
{
    i128 old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
    while (r != 0) {
        i128 q = old_r / r;
        i128 tmp = old_r - q * r;
        old_r = r;
        r = tmp;
        tmp = old_s - q * s;
        old_s = s;
        s = tmp;
        tmp = old_t - q * t;
        old_t = t;
        t = tmp;
    }
    if (old_r < 0) {
        old_r = -old_r;
        old_s = -old_s;
        old_t = -old_t;
    }
    u = static_cast<std::int64_t>(old_s);
    v = static_cast<std::int64_t>(old_t);
    return static_cast<std::int64_t>(old_r);
}

std::int64_t c_from_disc(std::int64_t a, std::int64_t b, std::int64_t D)
{
    i128 num = static_cast<i128>(b) * b - D;
    if (num % (4 * static_cast<i128>(a)) != 0) throw std::logic_error("form: b^2 - D not divisible by 4a");
    return static_cast<std::int64_t>(num / (4 * static_cast<i128>(a)));
}

// Brings b into (-a, a].
BQForm normalize(BQForm g, std::int64_t D)
{
    if (-g.a < g.b && g.b <= g.a) return g;
    std::int64_t r = floor_div(static_cast<i128>(g.a) - g.b, 2 * static_cast<i128>(g.a));
    g.b = static_cast<std::int64_t>(g.b + 2 * static_cast<i128>(r) * g.a);
    g.c = c_from_disc(g.a, g.b, D);
    return g;
}

}  // namespace

bool BQForm::is_reduced() const
{
    if (a <= 0) return false;
    if (!(std::abs(b) <= a && a <= c)) return false;
    if ((std::abs(b) == a || a == c) && b < 0) return false;
    return true;
}

std::string to_string(const BQForm& g)
{
    return "(" + std::to_string(g.a) + "," + std::to_string(g.b) + "," + std::to_string(g.c) + ")";
}

bool is_fundamental_discriminant(std::int64_t D)
{
    if (D == 0 || D == 1) return false;
    const std::int64_t r = ((D % 4) + 4) % 4;
    if (r == 1) return is_squarefree(D);
    if (r != 0) return false;
    const std::int64_t n = D / 4;
    const std::int64_t rn = ((n % 4) + 4) % 4;
    return (rn == 2 || rn == 3) && is_squarefree(n);
}

BQForm reduce(BQForm g)
{
    const std::int64_t D = g.discriminant();
    if (D >= 0 || g.a <= 0) throw std::domain_error("reduce: form is not positive definite");
    g = normalize(g, D);
    while (g.a > g.c) {
        g = BQForm{g.c, -g.b, g.a};
        g = normalize(g, D);
    }
    if (g.a == g.c && g.b < 0) g.b = -g.b;
    return g;
}

BQForm principal_form(std::int64_t D)
{
    const std::int64_t b = ((D % 4) + 4) % 4 == 0 ? 0 : 1;
    return BQForm{1, b, c_from_disc(1, b, D)};
}

BQForm inverse(const BQForm& g) { return reduce(BQForm{g.a, -g.b, g.c}); }

std::vector<BQForm> reduced_forms(std::int64_t D)
{
    if (D >= 0 || !is_fundamental_discriminant(D))
        throw std::domain_error("reduced_forms: D = " + std::to_string(D) + " is not a negative fundamental discriminant");
    std::vector<BQForm> out;
    const std::int64_t absD = -D;
    for (std::int64_t a = 1; 3 * a * a <= absD; ++a) {
        for (std::int64_t b = -a + 1; b <= a; ++b) {
            if (((b - D) % 2) != 0) continue;
            const i128 num = static_cast<i128>(b) * b - D;
            if (num % (4 * a) != 0) continue;
            const auto c = static_cast<std::int64_t>(num / (4 * a));
            BQForm g{a, b, c};
            if (!g.is_reduced()) continue;
            if (std::gcd(std::gcd(a, std::abs(b)), c) != 1) continue;
            out.push_back(g);
        }
    }
    std::sort(out.begin(), out.end(), [](const BQForm& x, const BQForm& y) {
        return std::pair(x.a, x.b) < std::pair(y.a, y.b);
    });
    return out;
}

std::int64_t class_number_dirichlet(std::int64_t D)
{
    if (D >= -4) throw std::domain_error("class_number_dirichlet: needs D < -4");
    if (!is_fundamental_discriminant(D)) throw std::domain_error("class_number_dirichlet: D not fundamental");
    const std::int64_t absD = -D;
    i128 sum = 0;
    for (std::int64_t a = 1; a < absD; ++a) sum += static_cast<i128>(kronecker(D, a)) * a;
    if (sum < 0) sum = -sum;
    if (sum % absD != 0) throw std::logic_error("class_number_dirichlet: sum not divisible by |D|");
    return static_cast<std::int64_t>(sum / absD);
}

bool is_class_number_one(std::int64_t m)
{
    return class_number(make_field(m)) == 1;
}

BQForm compose(const ImagQuadField& f, const BQForm& g1_in, const BQForm& g2_in)
{
    if (g1_in.discriminant() != f.D || g2_in.discriminant() != f.D)
        throw std::domain_error("compose: discriminant mismatch");
    BQForm g1 = g1_in, g2 = g2_in;
    if (g1.a > g2.a) std::swap(g1, g2);
    const i128 s = (static_cast<i128>(g1.b) + g2.b) / 2;
    const i128 n = g2.b - s;

    std::int64_t y1 = 0, d = 0;
    if (g2.a % g1.a == 0) {
        y1 = 0;
        d = g1.a;
    } else {
        std::int64_t u = 0, v = 0;
        d = ext_gcd(g2.a, g1.a, u, v);
        y1 = u;
    }

    std::int64_t x2 = 0, y2 = 0, d1 = 0;
    if (s % d == 0) {
        y2 = -1;
        x2 = 0;
        d1 = d;
    } else {
        d1 = ext_gcd(static_cast<std::int64_t>(s), d, x2, y2);
        y2 = -y2;
    }

    const i128 v1 = g1.a / d1;
    const i128 v2 = g2.a / d1;
    const i128 r = mod_pos(static_cast<i128>(y1) * y2 % v1 * (n % v1) - static_cast<i128>(x2) * (g2.c % v1), v1);
    const i128 b3 = g2.b + 2 * v2 * r;
    const i128 a3 = v1 * v2;
    const i128 num = b3 * b3 - f.D;
    if (num % (4 * a3) != 0) throw std::logic_error("compose: inconsistent composition");
    BQForm out{static_cast<std::int64_t>(a3), static_cast<std::int64_t>(b3), static_cast<std::int64_t>(num / (4 * a3))};
    return reduce(out);
}

BQForm prime_form(const ImagQuadField& f, std::int64_t q, std::int64_t r)
{
    // Ideal qZ + (w - r)Z = qZ + ((-b + sqrt(D))/2)Z with b = 2r - D.
    const std::int64_t b = 2 * r - f.D;
    return reduce(BQForm{q, b, c_from_disc(q, b, f.D)});
}

std::vector<BQForm> generated_subgroup(const ImagQuadField& f, const std::vector<BQForm>& gens)
{
    std::set<BQForm> group{principal_form(f.D)};
    for (const auto& g : gens) {
        const BQForm gr = reduce(g);
        while (true) {
            std::set<BQForm> next = group;
            for (const auto& x : group) next.insert(compose(f, x, gr));
            if (next.size() == group.size()) break;
            group = std::move(next);
        }
    }
    return {group.begin(), group.end()};
}

std::vector<std::int64_t> GeneratorSet::primes() const
{
    std::vector<std::int64_t> out;
    for (const auto& e : entries) out.push_back(e.q);
    return out;
}

std::string GeneratorSet::fingerprint() const
{
    std::string s;
    for (const auto& e : entries) {
        if (!s.empty()) s += '-';
        s += std::to_string(e.q);
    }
    return s;
}

bool is_admissible_generator_prime(const ImagQuadField& f, std::int64_t h, std::int64_t q)
{
    if (!is_prime(static_cast<std::uint64_t>(q))) return false;
    if ((6 * h) % q == 0) return false;
    return splits(f, q);
}

namespace {

GeneratorEntry make_entry(const ImagQuadField& f, std::int64_t h, std::int64_t q)
{
    GeneratorEntry e;
    e.q = q;
    e.r = std::get<Split>(splitting_type(f, q)).r;
    e.form = prime_form(f, q, e.r);
    e.alpha = solve_norm_generator(f, q, e.r, h);
    return e;
}

}  // namespace

GeneratorSet select_generator_primes(const ImagQuadField& f, std::int64_t h)
{
    if (h < 2) throw std::domain_error("select_generator_primes: class number must be >= 2");
    std::vector<std::int64_t> chosen;
    std::vector<BQForm> forms;
    for (std::int64_t q = 2; q <= kGeneratorSearchBound; ++q) {
        if (!is_admissible_generator_prime(f, h, q)) continue;
        chosen.push_back(q);
        forms.push_back(prime_form(f, q, std::get<Split>(splitting_type(f, q)).r));
        if (static_cast<std::int64_t>(generated_subgroup(f, forms).size()) == h) {
            GeneratorSet gs;
            gs.h = h;
            for (auto p : chosen) gs.entries.push_back(make_entry(f, h, p));
            return gs;
        }
    }
    throw std::logic_error("select_generator_primes: search bound exceeded");
}

GeneratorSet generator_set_from_primes(const ImagQuadField& f, std::int64_t h, const std::vector<std::int64_t>& qs)
{
    if (qs.empty()) throw std::domain_error("generator set: empty prime list");
    GeneratorSet gs;
    gs.h = h;
    std::vector<BQForm> forms;
    std::set<std::int64_t> seen;
    for (auto q : qs) {
        if (!seen.insert(q).second) throw std::domain_error("generator set: duplicate prime " + std::to_string(q));
        if (!is_admissible_generator_prime(f, h, q))
            throw std::domain_error("generator set: " + std::to_string(q) + " is not a split prime coprime to 6h");
        gs.entries.push_back(make_entry(f, h, q));
        forms.push_back(gs.entries.back().form);
    }
    if (static_cast<std::int64_t>(generated_subgroup(f, forms).size()) != h)
        throw std::domain_error("generator set: primes do not generate the class group");
    return gs;
}

QuadInt solve_norm_generator(const ImagQuadField& f, std::int64_t q, std::int64_t r, std::int64_t h)
{
    mpz_class qh;
    mpz_ui_pow_ui(qh.get_mpz_t(), static_cast<unsigned long>(q), static_cast<unsigned long>(h));
    const long T = static_cast<long>(f.omega_trace);
    const long N = static_cast<long>(f.omega_norm);

    // Hensel-lift the root r of X^2 - T X + N to R modulo q^h; then
    // (q, w - r)^h = q^h Z + (w - R) Z.
    mpz_class R = r;
    for (int iter = 0; iter < 64; ++iter) {
        mpz_class g = R * R - T * R + N;
        if (g % qh == 0) break;
        mpz_class dg = 2 * R - T, inv;
        if (!mpz_invert(inv.get_mpz_t(), dg.get_mpz_t(), qh.get_mpz_t()))
            throw std::logic_error("solve_norm_generator: derivative not invertible");
        R = R - g * inv;
        mpz_mod(R.get_mpz_t(), R.get_mpz_t(), qh.get_mpz_t());
    }

    // Lagrange reduction of the lattice under the norm form.
    struct Vec {
        mpz_class x, y;
    };
    const auto Q = [&](const Vec& v) -> mpz_class { return v.x * v.x + T * v.x * v.y + N * v.y * v.y; };
    const auto B2 = [&](const Vec& u, const Vec& v) -> mpz_class {
        return 2 * u.x * v.x + T * (u.x * v.y + u.y * v.x) + 2 * N * u.y * v.y;
    };
    Vec v1{qh, 0}, v2{-R, 1};
    mpz_class q1 = Q(v1), q2 = Q(v2);
    while (true) {
        if (q1 > q2) {
            std::swap(v1, v2);
            std::swap(q1, q2);
        }
        // mu = round(B(v1, v2) / Q(v1)) = floor((2B + Q1) / (2 Q1))
        mpz_class num = B2(v1, v2) + q1, den = 2 * q1, mu;
        mpz_fdiv_q(mu.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
        if (mu == 0) break;
        v2.x -= mu * v1.x;
        v2.y -= mu * v1.y;
        q2 = Q(v2);
    }
    if (q1 != qh) throw std::logic_error("solve_norm_generator: prime power is not principal");

    QuadInt alpha{v1.x, v1.y};
    if (alpha.y > 0 || (alpha.y == 0 && alpha.x > 0)) alpha = qi_neg(alpha);
    if (!in_prime(alpha, q, r) || in_prime(alpha, q, conjugate_root(f, q, r)))
        throw std::logic_error("solve_norm_generator: generator has wrong valuations");
    return alpha;
}

std::optional<std::string> check_generator_set(const ImagQuadField& f, const GeneratorSet& gens)
{
    std::vector<BQForm> forms;
    for (const auto& e : gens.entries) {
        const std::string tag = "q=" + std::to_string(e.q) + ": ";
        if (!is_admissible_generator_prime(f, gens.h, e.q)) return tag + "not a split prime coprime to 6h";
        auto st = splitting_type(f, e.q);
        if (std::get<Split>(st).r != e.r) return tag + "split root mismatch";
        mpz_class qh;
        mpz_ui_pow_ui(qh.get_mpz_t(), static_cast<unsigned long>(e.q), static_cast<unsigned long>(gens.h));
        if (qi_norm(f, e.alpha) != qh) return tag + "norm(alpha) != q^h";
        if (!in_prime(e.alpha, e.q, e.r)) return tag + "alpha not in the prime";
        if (in_prime(e.alpha, e.q, conjugate_root(f, e.q, e.r))) return tag + "alpha in the conjugate prime";
        if (e.form != prime_form(f, e.q, e.r)) return tag + "form class mismatch";
        forms.push_back(e.form);
    }
    if (static_cast<std::int64_t>(generated_subgroup(f, forms).size()) != gens.h)
        return std::string("classes do not generate the class group");
    return std::nullopt;
}

}  // namespace shimura
