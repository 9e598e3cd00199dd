#pragma once

// N2(k): primes l such that -l is a quadratic field discriminant and no prime
// 3 < q < l/4 splits both in k and in Q(sqrt(-l)). Finite, but no effective
// bound is known, so a scan is only complete up to its bound.

#include <cstdint>
#include <optional>
#include <vector>

#include "shimura/quadfield.hpp"

namespace shimura {

struct N2Verdict {
    std::int64_t l = 0;
    bool member = false;
    bool discriminant_condition = false;  // l = 3 mod 4
    std::optional<std::int64_t> witness_q;  // first q defeating the splitting condition
};

N2Verdict is_in_N2(const ImagQuadField& f, std::int64_t l);

/// Member primes l <= bound, ascending.
std::vector<N2Verdict> scan_N2_serial(const ImagQuadField& f, std::int64_t bound);
std::vector<N2Verdict> scan_N2(const ImagQuadField& f, std::int64_t bound);

}  // namespace shimura
