#pragma once

#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "hermat/weight_family.hpp"

namespace testing_support {

inline std::vector<double> grid(double lo = -3.0, double hi = 3.0, int count = 11)
{
    std::vector<double> ts;
    for (int i = 0; i < count; ++i) {
        ts.push_back(lo + (hi - lo) * i / (count - 1));
    }
    return ts;
}

inline hermat::WeightParams params(std::vector<hermat::Complex> a, double b)
{
    hermat::WeightParams p;
    p.size = a.size() + 1;
    p.a = std::move(a);
    p.b = b;
    return p;
}

/// N in [lo_n, hi_n], b in [0.2, 5] \ {1}, |a_i| in [0.1, 2].
inline hermat::WeightParams random_params(std::mt19937_64& rng, std::size_t lo_n = 2, std::size_t hi_n = 6)
{
    std::uniform_int_distribution<std::size_t> size(lo_n, hi_n);
    std::uniform_real_distribution<double> bdist(0.2, 5.0);
    std::uniform_real_distribution<double> mag(0.1, 2.0);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    hermat::WeightParams p;
    p.size = size(rng);
    p.a.clear();
    for (std::size_t i = 0; i + 1 < p.size; ++i) {
        p.a.push_back(std::polar(mag(rng), phase(rng)));
    }
    do {
        p.b = bdist(rng);
    } while (p.b == 1.0);
    return p;
}

inline hermat::ComplexMatrix random_matrix(std::mt19937_64& rng, std::size_t n)
{
    std::normal_distribution<double> g;
    hermat::ComplexMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            m(i, j) = {g(rng), g(rng)};
        }
    }
    return m;
}

inline hermat::MatrixPolynomial random_polynomial(std::mt19937_64& rng, std::size_t n, std::size_t degree)
{
    std::vector<hermat::ComplexMatrix> c;
    for (std::size_t k = 0; k <= degree; ++k) {
        c.push_back(random_matrix(rng, n));
    }
    return hermat::MatrixPolynomial(n, c);
}

} // namespace testing_support
