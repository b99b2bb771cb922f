// Shared helpers for the unit tests.
#pragma once

#include <cmath>
#include <random>

#include "anyon/dense.hpp"

namespace testing_support {

using anyon::cplx;
using anyon::dense::Matrix;
using anyon::dense::Vector;

inline std::mt19937_64& rng() {
    static std::mt19937_64 g(20240611);
    return g;
}

inline double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }

inline cplx random_cplx() { return {uniform(-1, 1), uniform(-1, 1)}; }

inline Matrix random_matrix(Eigen::Index n, Eigen::Index m) {
    Matrix a(n, m);
    for (Eigen::Index j = 0; j < m; ++j)
        for (Eigen::Index i = 0; i < n; ++i) a(i, j) = random_cplx();
    return a;
}

inline Vector random_vector(Eigen::Index n) { return random_matrix(n, 1).col(0); }

inline Matrix random_hermitian(Eigen::Index n) {
    const Matrix a = random_matrix(n, n);
    return 0.5 * (a + a.adjoint());
}

inline double rel_err(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

} // namespace testing_support
