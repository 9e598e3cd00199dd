#include "shimura/siegel.hpp"

#include <stdexcept>

#include "shimura/intkernel.hpp"

namespace shimura {

namespace {

// Primes q > 3 splitting in k, ascending, up to limit.
std::vector<std::int64_t> split_primes_above_3(const ImagQuadField& f, std::int64_t limit)
{
    std::vector<std::int64_t> out;
    if (limit < 5) return out;
    for (auto q : primes_up_to(static_cast<std::uint32_t>(limit)))
        if (q > 3 && splits(f, q)) out.push_back(q);
    return out;
}

N2Verdict verdict_with(const std::vector<std::int64_t>& split_qs, std::int64_t l)
{
    N2Verdict v;
    v.l = l;
    v.discriminant_condition = l % 4 == 3;
    if (!v.discriminant_condition) return v;
    for (auto q : split_qs) {
        if (4 * q >= l) break;
        if (kronecker(-l, q) == 1) {
            v.witness_q = q;
            return v;
        }
    }
    v.member = true;
    return v;
}

void check_bound(std::int64_t bound)
{
    if (bound < 3) throw std::domain_error("scan_N2: bound must be >= 3");
    if (bound > 0xFFFFFFFFll) throw std::domain_error("scan_N2: bound must be < 2^32");
}

}  // namespace

N2Verdict is_in_N2(const ImagQuadField& f, std::int64_t l)
{
    if (!is_prime(static_cast<std::uint64_t>(l))) throw std::domain_error("is_in_N2: l must be prime");
    return verdict_with(split_primes_above_3(f, (l - 1) / 4), l);
}

std::vector<N2Verdict> scan_N2_serial(const ImagQuadField& f, std::int64_t bound)
{
    check_bound(bound);
    std::vector<N2Verdict> out;
    for (auto l : primes_up_to(static_cast<std::uint32_t>(bound))) {
        auto v = is_in_N2(f, l);
        if (v.member) out.push_back(v);
    }
    return out;
}

std::vector<N2Verdict> scan_N2(const ImagQuadField& f, std::int64_t bound)
{
    check_bound(bound);
    const auto ls = primes_up_to(static_cast<std::uint32_t>(bound));
    const auto split_qs = split_primes_above_3(f, bound / 4);
    std::vector<N2Verdict> all(ls.size());
    const auto n = static_cast<long long>(ls.size());
#pragma omp parallel for schedule(dynamic, 64)
    for (long long i = 0; i < n; ++i)
        all[static_cast<std::size_t>(i)] = verdict_with(split_qs, ls[static_cast<std::size_t>(i)]);
    std::vector<N2Verdict> out;
    for (auto& v : all)
        if (v.member) out.push_back(v);
    return out;
}

}  // namespace shimura
