#pragma once

// Floating-point reference for compositum norms: multiplies xi - beta^N over
// complex embeddings with MPFR at a fixed precision.

#include <gmpxx.h>

#include "shimura/frobnorm.hpp"
#include "shimura/quadfield.hpp"

namespace oracle {

/// Product over the complex embeddings of k(beta): four factors when beta is
/// not in k, two when it is. Returned as a double-precision approximation of
/// the real result together with its 200-bit relative error against `exact`.
struct EmbeddingProduct {
    double value = 0;
    double rel_error = 0;
};

EmbeddingProduct compositum_norm_embeddings(const shimura::ImagQuadField& f, const shimura::QuadInt& xi,
                                            const shimura::FrobeniusRoot& root, unsigned long N,
                                            const mpz_class& exact, unsigned precision = 200);

}  // namespace oracle
