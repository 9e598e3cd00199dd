#include "shimura/quadfield.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>

#include "shimura/intkernel.hpp"

namespace shimura {

ImagQuadField make_field(std::int64_t m)
{
    if (m <= 0) throw std::domain_error("make_field: m must be positive");
    if (!is_squarefree(m)) throw std::domain_error("make_field: m = " + std::to_string(m) + " is not squarefree");
    ImagQuadField f;
    f.m = m;
    f.D = (m % 4 == 3) ? -m : -4 * m;
    f.omega_trace = f.D;
    f.omega_norm = (f.D * f.D - f.D) / 4;
    f.ramified = prime_divisors(f.D);
    return f;
}

QuadInt qi_add(const QuadInt& a, const QuadInt& b) { return {a.x + b.x, a.y + b.y}; }
QuadInt qi_sub(const QuadInt& a, const QuadInt& b) { return {a.x - b.x, a.y - b.y}; }
QuadInt qi_neg(const QuadInt& a) { return {-a.x, -a.y}; }

QuadInt qi_mul(const ImagQuadField& f, const QuadInt& a, const QuadInt& b)
{
    const mpz_class yy = a.y * b.y;
    QuadInt r;
    r.x = a.x * b.x - yy * static_cast<long>(f.omega_norm);
    r.y = a.x * b.y + a.y * b.x + yy * static_cast<long>(f.omega_trace);
    return r;
}

QuadInt qi_conj(const ImagQuadField& f, const QuadInt& a)
{
    return {a.x + a.y * static_cast<long>(f.omega_trace), -a.y};
}

mpz_class qi_norm(const ImagQuadField& f, const QuadInt& a)
{
    return a.x * a.x + a.x * a.y * static_cast<long>(f.omega_trace) + a.y * a.y * static_cast<long>(f.omega_norm);
}

mpz_class qi_trace(const ImagQuadField& f, const QuadInt& a)
{
    return 2 * a.x + a.y * static_cast<long>(f.omega_trace);
}

QuadInt qi_pow(const ImagQuadField& f, QuadInt a, unsigned long n)
{
    QuadInt r = QuadInt::one();
    while (n) {
        if (n & 1) r = qi_mul(f, r, a);
        n >>= 1;
        if (n) a = qi_mul(f, a, a);
    }
    return r;
}

// sqrt(-m) = w + 2m when D = -4m, and 2w + m when D = -m.
QuadInt from_sqrt_coords(const ImagQuadField& f, const mpz_class& u2, const mpz_class& v2)
{
    const long m = static_cast<long>(f.m);
    if (f.D == -4 * f.m) {
        if (u2 % 2 != 0 || v2 % 2 != 0)
            throw std::domain_error("element: half-integer coordinates need m = 3 mod 4");
        mpz_class u = u2 / 2, v = v2 / 2;
        return {u + 2 * m * v, v};
    }
    // x = u + m v, y = 2v with u, v halves of the same parity class.
    mpz_class x2 = u2 + m * v2;
    if (x2 % 2 != 0 || (u2 % 2 == 0) != (v2 % 2 == 0))
        throw std::domain_error("element: not an algebraic integer");
    return {x2 / 2, v2};
}

std::pair<mpz_class, mpz_class> to_sqrt_coords(const ImagQuadField& f, const QuadInt& a)
{
    const long m = static_cast<long>(f.m);
    if (f.D == -4 * f.m) return {2 * (a.x - 2 * m * a.y), 2 * a.y};
    return {2 * a.x - m * a.y, a.y};
}

namespace {

std::string half_str(const mpz_class& twice)
{
    if (twice % 2 == 0) return mpz_class(twice / 2).get_str();
    return twice.get_str() + "/2";
}

mpz_class parse_half(std::string_view s)
{
    std::string str(s);
    auto slash = str.find('/');
    if (slash == std::string::npos) {
        mpz_class v;
        if (str.empty() || v.set_str(str[0] == '+' ? str.substr(1) : str, 10) != 0)
            throw std::domain_error("element: bad integer '" + str + "'");
        return 2 * v;
    }
    if (str.substr(slash + 1) != "2") throw std::domain_error("element: only /2 denominators allowed");
    mpz_class v;
    std::string num = str.substr(0, slash);
    if (num.empty() || v.set_str(num[0] == '+' ? num.substr(1) : num, 10) != 0)
        throw std::domain_error("element: bad numerator '" + num + "'");
    return v;
}

}  // namespace

std::string format_element(const ImagQuadField& f, const QuadInt& a)
{
    auto [u2, v2] = to_sqrt_coords(f, a);
    std::string v = half_str(v2);
    if (v[0] != '-') v = "+" + v;
    return half_str(u2) + v + "*sqrt(-" + std::to_string(f.m) + ")";
}

QuadInt parse_element(const ImagQuadField& f, std::string_view text)
{
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    const std::string tail = "sqrt(-" + std::to_string(f.m) + ")";
    auto pos = s.find("sqrt(");
    if (pos == std::string::npos) return from_sqrt_coords(f, parse_half(s), 0);
    if (s.substr(pos) != tail) throw std::domain_error("element: expected " + tail);
    std::string head = s.substr(0, pos);
    if (!head.empty() && head.back() == '*') head.pop_back();
    // split head into u and the signed v coefficient
    std::size_t split = std::string::npos;
    for (std::size_t i = head.size(); i-- > 1;) {
        if ((head[i] == '+' || head[i] == '-') && head[i - 1] != '/') {
            split = i;
            break;
        }
    }
    std::string u = "0", v = head;
    if (split != std::string::npos) {
        u = head.substr(0, split);
        v = head.substr(split);
    }
    if (v.empty() || v == "+") v = "1";
    if (v == "-") v = "-1";
    return from_sqrt_coords(f, parse_half(u), parse_half(v));
}

SplittingType splitting_type(const ImagQuadField& f, std::int64_t q)
{
    if (f.D % q == 0) return Ramified{};
    if (kronecker(f.D, q) != 1) return Inert{};
    const auto mod = [q](std::int64_t v) { return ((v % q) + q) % q; };
    const std::int64_t T = mod(f.omega_trace);
    const std::int64_t N = mod(f.omega_norm);
    if (q == 2) {
        for (std::int64_t r = 0; r < 2; ++r)
            if (mod(r * r - T * r + N) == 0) return Split{r};
        throw std::logic_error("splitting_type: no root mod 2 for a split prime");
    }
    // Roots of X^2 - T X + N are (T +- s)/2 with s^2 = D.
    const auto uq = static_cast<std::uint64_t>(q);
    const std::int64_t s = static_cast<std::int64_t>(sqrt_mod_prime(static_cast<std::uint64_t>(mod(f.D)), uq));
    const std::int64_t inv2 = (q + 1) / 2;
    const auto mulq = [&](std::int64_t a, std::int64_t b) {
        return static_cast<std::int64_t>(static_cast<__int128>(a) * b % q);
    };
    std::int64_t r1 = mulq(mod(T + s), inv2);
    std::int64_t r2 = mulq(mod(T - s), inv2);
    return Split{std::min(r1, r2)};
}

std::int64_t conjugate_root(const ImagQuadField& f, std::int64_t q, std::int64_t r)
{
    return (((f.omega_trace - r) % q) + q) % q;
}

bool in_prime(const QuadInt& a, std::int64_t q, std::int64_t r)
{
    mpz_class v = a.x + a.y * static_cast<long>(r);
    return mpz_divisible_ui_p(v.get_mpz_t(), static_cast<unsigned long>(q)) != 0;
}

}  // namespace shimura
