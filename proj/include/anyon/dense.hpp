// dense.hpp — Dense complex LU with reusable factors, matrix exponential, matvec

#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "anyon/params.hpp"

namespace anyon::dense {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// y = A x through the active kernel table.
Vector apply(const Matrix& a, const Vector& x);

// Partial-pivoting LU (PA = LU), column-major, right-looking. Factor once,
// then solve as many right-hand sides (plain or transposed) as needed.
class LuFactorization {
public:
    LuFactorization() = default;
    // Throws ComputeError on an exactly zero pivot.
    explicit LuFactorization(Matrix a);

    std::size_t size() const { return static_cast<std::size_t>(lu_.rows()); }

    Vector solve(const Vector& b) const;           // A x = b
    Vector solve_transpose(const Vector& b) const; // A^T x = b

    // Reciprocal 1-norm condition estimate (Hager/Higham), in (0, 1].
    double rcond() const { return rcond_; }

private:
    void estimate_condition(double anorm);

    Matrix lu_;
    std::vector<std::size_t> perm_; // row i of PA is row perm_[i] of A
    double rcond_{1.0};
};

double norm1(const Matrix& a);

// exp(A) by scaling and squaring with the degree-13 Pade approximant.
Matrix expm(const Matrix& a);

} // namespace anyon::dense
