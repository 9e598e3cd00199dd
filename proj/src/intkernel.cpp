#include "shimura/intkernel.hpp"

#include <array>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace shimura {

namespace {

using u128 = unsigned __int128;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m)
{
    return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m)
{
    std::uint64_t r = 1 % m;
    b %= m;
    while (e) {
        if (e & 1) r = mulmod(r, b, m);
        b = mulmod(b, b, m);
        e >>= 1;
    }
    return r;
}

constexpr std::array<std::uint64_t, 12> kSmallWitnesses = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

constexpr std::array<unsigned long, 40> kBigWitnesses = {
    2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41, 43,  47,  53,  59,  61,  67,  71,
    73, 79, 83, 89, 97, 101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173};

bool fits_u64(const mpz_class& n)
{
    return sgn(n) >= 0 && mpz_sizeinbase(n.get_mpz_t(), 2) <= 64;
}

std::uint64_t to_u64(const mpz_class& n)
{
    std::uint64_t r = 0;
    mpz_export(&r, nullptr, -1, sizeof r, 0, 0, n.get_mpz_t());
    return r;
}

// Primes up to a bound plus products of consecutive blocks of them; a block
// is only scanned prime by prime when its gcd with the target is nontrivial.
struct TrialTable {
    static constexpr std::size_t kBlock = 256;
    std::vector<std::uint32_t> primes;
    std::vector<mpz_class> block_products;
};

std::shared_ptr<const TrialTable> trial_table(std::uint64_t bound)
{
    static std::mutex mu;
    static std::map<std::uint64_t, std::shared_ptr<const TrialTable>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(bound);
    if (it != cache.end()) return it->second;
    if (bound > 0xFFFFFFFFull) throw std::domain_error("factor_bounded: trial bound exceeds 2^32");
    auto table = std::make_shared<TrialTable>();
    table->primes = primes_up_to(static_cast<std::uint32_t>(bound));
    for (std::size_t i = 0; i < table->primes.size(); i += TrialTable::kBlock) {
        mpz_class prod = 1;
        for (std::size_t j = i; j < std::min(i + TrialTable::kBlock, table->primes.size()); ++j)
            prod *= static_cast<unsigned long>(table->primes[j]);
        table->block_products.push_back(prod);
    }
    cache.emplace(bound, table);
    return table;
}

// Brent's variant of Pollard rho. Returns a nontrivial factor or 0 when the
// budget runs out first.
mpz_class brent_rho(const mpz_class& n, std::uint64_t& budget)
{
    constexpr std::uint64_t kBatch = 128;
    for (unsigned long c = 1; budget > 0; ++c) {
        mpz_class y = 1, x, ys, q = 1, g = 1;
        std::uint64_t r = 1;
        auto step = [&](mpz_class& v) {
            v = v * v + c;
            v %= n;
        };
        while (g == 1 && budget > 0) {
            x = y;
            for (std::uint64_t i = 0; i < r && budget > 0; ++i, --budget) step(y);
            std::uint64_t k = 0;
            while (k < r && g == 1 && budget > 0) {
                ys = y;
                std::uint64_t lim = std::min(kBatch, r - k);
                for (std::uint64_t i = 0; i < lim && budget > 0; ++i, --budget) {
                    step(y);
                    mpz_class diff = abs(x - y);
                    q = q * diff % n;
                }
                mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
                k += lim;
            }
            r *= 2;
        }
        if (g == n) {
            // Batched product overshot; walk back one step at a time.
            do {
                if (budget == 0) return 0;
                --budget;
                step(ys);
                mpz_class diff = abs(x - ys);
                mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
            } while (g == 1);
        }
        if (g != 1 && g != n) return g;
    }
    return 0;
}

// Returns r with c == r^k for some k >= 2, or 0 if c is not a perfect power.
mpz_class perfect_power_root(const mpz_class& c)
{
    if (!mpz_perfect_power_p(c.get_mpz_t())) return 0;
    const auto bits = mpz_sizeinbase(c.get_mpz_t(), 2);
    for (unsigned long k = 2; k <= bits; ++k) {
        mpz_class root;
        if (mpz_root(root.get_mpz_t(), c.get_mpz_t(), k) != 0) return root;
    }
    return 0;
}

}  // namespace

bool is_prime(std::uint64_t n)
{
    if (n < 2) return false;
    for (std::uint64_t p : kSmallWitnesses) {
        if (n % p == 0) return n == p;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (std::uint64_t a : kSmallWitnesses) {
        std::uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

bool is_prime(const mpz_class& n)
{
    if (sgn(n) <= 0) return false;
    if (fits_u64(n)) return is_prime(to_u64(n));
    for (unsigned long p : kBigWitnesses) {
        if (mpz_divisible_ui_p(n.get_mpz_t(), p)) return false;
    }
    const mpz_class nm1 = n - 1;
    mpz_class d = nm1;
    unsigned long s = mpz_scan1(d.get_mpz_t(), 0);
    mpz_fdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), s);
    mpz_class x;
    for (unsigned long a : kBigWitnesses) {
        mpz_class base = a;
        mpz_powm(x.get_mpz_t(), base.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
        if (x == 1 || x == nm1) continue;
        bool composite = true;
        for (unsigned long i = 1; i < s; ++i) {
            x = x * x % n;
            if (x == nm1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

int kronecker(std::int64_t a_in, std::int64_t n_in)
{
    if (n_in == 0) throw std::domain_error("kronecker: n must be nonzero");
    __int128 a = a_in;
    __int128 n = n_in;
    int result = 1;
    if (n < 0) {
        n = -n;
        if (a < 0) result = -result;
    }
    int v = 0;
    while ((n & 1) == 0) {
        n >>= 1;
        ++v;
    }
    if (v > 0) {
        if ((a & 1) == 0) return 0;
        if (v & 1) {
            int r8 = static_cast<int>(((a % 8) + 8) % 8);
            if (r8 == 3 || r8 == 5) result = -result;
        }
    }
    // Jacobi symbol for odd n > 0.
    a %= n;
    if (a < 0) a += n;
    while (a != 0) {
        while ((a & 1) == 0) {
            a >>= 1;
            int r8 = static_cast<int>(n % 8);
            if (r8 == 3 || r8 == 5) result = -result;
        }
        std::swap(a, n);
        if (a % 4 == 3 && n % 4 == 3) result = -result;
        a %= n;
    }
    return n == 1 ? result : 0;
}

std::uint64_t isqrt(std::uint64_t n)
{
    mpz_class r = isqrt(mpz_class(static_cast<unsigned long>(n)));
    return r.get_ui();
}

mpz_class isqrt(const mpz_class& n)
{
    if (sgn(n) < 0) throw std::domain_error("isqrt: negative input");
    mpz_class r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

std::vector<std::uint32_t> primes_up_to(std::uint32_t limit)
{
    std::vector<std::uint32_t> out;
    if (limit < 2) return out;
    std::vector<bool> composite(static_cast<std::size_t>(limit) + 1, false);
    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (composite[i]) continue;
        out.push_back(static_cast<std::uint32_t>(i));
        for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
    }
    return out;
}

std::uint64_t sqrt_mod_prime(std::uint64_t a, std::uint64_t p)
{
    a %= p;
    if (a == 0) return 0;
    if (p == 2) return a;
    if (powmod(a, (p - 1) / 2, p) != 1) throw std::domain_error("sqrt_mod_prime: not a quadratic residue");
    if (p % 4 == 3) return powmod(a, (p + 1) / 4, p);
    std::uint64_t q = p - 1;
    int s = 0;
    while ((q & 1) == 0) {
        q >>= 1;
        ++s;
    }
    std::uint64_t z = 2;
    while (powmod(z, (p - 1) / 2, p) != p - 1) ++z;
    std::uint64_t c = powmod(z, q, p);
    std::uint64_t r = powmod(a, (q + 1) / 2, p);
    std::uint64_t t = powmod(a, q, p);
    int m = s;
    while (t != 1) {
        int i = 0;
        std::uint64_t tt = t;
        while (tt != 1) {
            tt = mulmod(tt, tt, p);
            ++i;
        }
        std::uint64_t b = c;
        for (int j = 0; j < m - i - 1; ++j) b = mulmod(b, b, p);
        r = mulmod(r, b, p);
        c = mulmod(b, b, p);
        t = mulmod(t, c, p);
        m = i;
    }
    return r;
}

std::vector<std::int64_t> prime_divisors(std::int64_t n)
{
    if (n == 0) throw std::domain_error("prime_divisors: zero has no factorization");
    std::uint64_t v = n < 0 ? 0 - static_cast<std::uint64_t>(n) : static_cast<std::uint64_t>(n);
    std::vector<std::int64_t> out;
    for (std::uint64_t p = 2; p * p <= v; p += (p == 2 ? 1 : 2)) {
        if (v % p == 0) {
            out.push_back(static_cast<std::int64_t>(p));
            while (v % p == 0) v /= p;
        }
    }
    if (v > 1) out.push_back(static_cast<std::int64_t>(v));
    return out;
}

bool is_squarefree(std::int64_t n)
{
    if (n == 0) return false;
    std::uint64_t v = n < 0 ? 0 - static_cast<std::uint64_t>(n) : static_cast<std::uint64_t>(n);
    for (std::uint64_t p = 2; p * p <= v; p += (p == 2 ? 1 : 2)) {
        if (v % p == 0) {
            v /= p;
            if (v % p == 0) return false;
        }
    }
    return true;
}

std::int64_t squarefree_part(std::int64_t n)
{
    if (n == 0) throw std::domain_error("squarefree_part: zero");
    std::int64_t sign = n < 0 ? -1 : 1;
    std::uint64_t v = n < 0 ? 0 - static_cast<std::uint64_t>(n) : static_cast<std::uint64_t>(n);
    std::uint64_t out = 1;
    for (std::uint64_t p = 2; p * p <= v; p += (p == 2 ? 1 : 2)) {
        int e = 0;
        while (v % p == 0) {
            v /= p;
            ++e;
        }
        if (e & 1) out *= p;
    }
    out *= v;
    return sign * static_cast<std::int64_t>(out);
}

std::vector<std::uint32_t> prime_divisors_up_to(const mpz_class& n, std::uint32_t bound)
{
    std::vector<std::uint32_t> out;
    if (bound < 2 || n == 0) {
        if (n == 0)
            for (auto p : primes_up_to(bound)) out.push_back(p);
        return out;
    }
    auto table = trial_table(bound);
    mpz_class g;
    for (std::size_t blk = 0; blk < table->block_products.size(); ++blk) {
        mpz_gcd(g.get_mpz_t(), n.get_mpz_t(), table->block_products[blk].get_mpz_t());
        if (g == 1) continue;
        const std::size_t lo = blk * TrialTable::kBlock;
        const std::size_t hi = std::min(lo + TrialTable::kBlock, table->primes.size());
        for (std::size_t i = lo; i < hi; ++i)
            if (mpz_divisible_ui_p(g.get_mpz_t(), table->primes[i])) out.push_back(table->primes[i]);
    }
    return out;
}

FactorReport factor_bounded(const mpz_class& n, std::uint64_t trial_bound, std::uint64_t rho_budget)
{
    if (n == 0) throw std::domain_error("factor_bounded: n must be nonzero");
    FactorReport rep;
    rep.input = n;
    mpz_class rem = abs(n);

    if (trial_bound >= 2) {
        auto table = trial_table(trial_bound);
        const auto& primes = table->primes;
        mpz_class g;
        for (std::size_t blk = 0; blk < table->block_products.size() && rem > 1; ++blk) {
            mpz_gcd(g.get_mpz_t(), rem.get_mpz_t(), table->block_products[blk].get_mpz_t());
            const std::size_t lo = blk * TrialTable::kBlock;
            const std::size_t hi = std::min(lo + TrialTable::kBlock, primes.size());
            if (g != 1) {
                for (std::size_t i = lo; i < hi; ++i) {
                    const unsigned long p = primes[i];
                    if (!mpz_divisible_ui_p(g.get_mpz_t(), p)) continue;
                    rep.prime_factors.insert(mpz_class(p));
                    while (mpz_divisible_ui_p(rem.get_mpz_t(), p))
                        mpz_divexact_ui(rem.get_mpz_t(), rem.get_mpz_t(), p);
                }
            }
            // No factor <= P survives, so rem <= P^2 means rem is prime.
            const mpz_class last = static_cast<unsigned long>(primes[hi - 1]);
            if (rem > 1 && rem <= last * last) {
                rep.prime_factors.insert(rem);
                rem = 1;
            }
        }
    }

    if (rem == 1) return rep;
    if (rho_budget == 0) {
        rep.cofactor = rem;
        rep.complete = false;
        return rep;
    }

    std::uint64_t budget = rho_budget;
    std::vector<mpz_class> work{rem};
    mpz_class unsplit = 1;
    while (!work.empty()) {
        mpz_class c = std::move(work.back());
        work.pop_back();
        if (c == 1) continue;
        if (is_prime(c)) {
            rep.prime_factors.insert(c);
            continue;
        }
        if (mpz_class root = perfect_power_root(c); root != 0) {
            work.push_back(root);
            continue;
        }
        mpz_class f = budget > 0 ? brent_rho(c, budget) : mpz_class(0);
        if (f == 0) {
            unsplit *= c;
            continue;
        }
        work.push_back(f);
        work.push_back(c / f);
    }
    rep.cofactor = unsplit;
    rep.complete = unsplit == 1;
    return rep;
}

}  // namespace shimura
