#include "anyon/dense.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "anyon/kernels.hpp"

namespace anyon::dense {

Vector apply(const Matrix& a, const Vector& x) {
    Vector y(a.rows());
    kernels::active().gemv(static_cast<std::size_t>(a.rows()), static_cast<std::size_t>(a.cols()), a.data(),
                           static_cast<std::size_t>(a.outerStride()), x.data(), y.data());
    return y;
}

double norm1(const Matrix& a) {
    double best = 0.0;
    for (Eigen::Index j = 0; j < a.cols(); ++j) best = std::max(best, a.col(j).cwiseAbs().sum());
    return best;
}

LuFactorization::LuFactorization(Matrix a) : lu_(std::move(a)) {
    if (lu_.rows() != lu_.cols()) throw ValidationError("LU: matrix must be square");
    const std::size_t n = size();
    const double anorm = norm1(lu_);
    perm_.resize(n);
    std::iota(perm_.begin(), perm_.end(), std::size_t{0});
    const auto& k = kernels::active();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        double best = std::abs(lu_(c, c));
        for (std::size_t r = c + 1; r < n; ++r) {
            const double v = std::abs(lu_(r, c));
            if (v > best) {
                best = v;
                piv = r;
            }
        }
        if (best == 0.0) throw ComputeError("LU: singular matrix (zero pivot in column " + std::to_string(c) + ")");
        if (piv != c) {
            lu_.row(c).swap(lu_.row(piv));
            std::swap(perm_[c], perm_[piv]);
        }
        const cplx inv = 1.0 / lu_(c, c);
        const std::size_t tail = n - c - 1;
        cplx* lcol = lu_.col(c).data() + c + 1;
        for (std::size_t r = 0; r < tail; ++r) lcol[r] *= inv;
        for (std::size_t j = c + 1; j < n; ++j) {
            const cplx ukj = lu_(c, j);
            if (ukj == cplx(0.0, 0.0)) continue;
            k.axpy(tail, -ukj, lcol, lu_.col(j).data() + c + 1);
        }
    }
    estimate_condition(anorm);
}

Vector LuFactorization::solve(const Vector& b) const {
    const std::size_t n = size();
    if (static_cast<std::size_t>(b.size()) != n) throw ValidationError("LU solve: dimension mismatch");
    const auto& k = kernels::active();
    Vector x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[perm_[i]];
    for (std::size_t c = 0; c + 1 < n; ++c) {
        if (x[c] == cplx(0.0, 0.0)) continue;
        k.axpy(n - c - 1, -x[c], lu_.col(c).data() + c + 1, x.data() + c + 1);
    }
    for (std::size_t c = n; c-- > 0;) {
        x[c] /= lu_(c, c);
        if (c > 0 && x[c] != cplx(0.0, 0.0)) k.axpy(c, -x[c], lu_.col(c).data(), x.data());
    }
    return x;
}

Vector LuFactorization::solve_transpose(const Vector& b) const {
    // A^T = U^T L^T P, so solve U^T z = b, L^T w = z, x = P^T w.
    const std::size_t n = size();
    if (static_cast<std::size_t>(b.size()) != n) throw ValidationError("LU solve: dimension mismatch");
    const auto& k = kernels::active();
    Vector z = b;
    for (std::size_t c = 0; c < n; ++c) {
        const cplx s = k.dotu(c, lu_.col(c).data(), z.data());
        z[c] = (z[c] - s) / lu_(c, c);
    }
    for (std::size_t c = n; c-- > 0;) {
        const std::size_t tail = n - c - 1;
        if (tail == 0) continue;
        z[c] -= k.dotu(tail, lu_.col(c).data() + c + 1, z.data() + c + 1);
    }
    Vector x(n);
    for (std::size_t i = 0; i < n; ++i) x[perm_[i]] = z[i];
    return x;
}

void LuFactorization::estimate_condition(double anorm) {
    const std::size_t n = size();
    if (n == 0 || anorm == 0.0) {
        rcond_ = 0.0;
        return;
    }
    // Hager's 1-norm estimate of ||A^{-1}||; A^H y = v solved as A^T conj(y) = conj(v).
    auto solve_h = [&](const Vector& v) { return solve_transpose(v.conjugate()).conjugate().eval(); };
    Vector x = Vector::Constant(n, cplx(1.0 / static_cast<double>(n), 0.0));
    double est = 0.0;
    std::size_t last_j = n;
    for (int iter = 0; iter < 5; ++iter) {
        const Vector y = solve(x);
        const double ynorm = y.cwiseAbs().sum();
        if (iter > 0 && ynorm <= est) break;
        est = ynorm;
        Vector s(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double m = std::abs(y[i]);
            s[i] = m > 0.0 ? y[i] / m : cplx(1.0, 0.0);
        }
        const Vector zv = solve_h(s);
        std::size_t j = 0;
        double zmax = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (std::abs(zv[i]) > zmax) {
                zmax = std::abs(zv[i]);
                j = i;
            }
        }
        if (j == last_j) break;
        last_j = j;
        x.setZero();
        x[j] = 1.0;
    }
    rcond_ = est > 0.0 ? std::min(1.0, 1.0 / (anorm * est)) : 0.0;
}

Matrix expm(const Matrix& a) {
    static constexpr double b[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                                   1187353796428800.0,  129060195264000.0,   10559470521600.0,
                                   670442572800.0,      33522128640.0,       1323241920.0,
                                   40840800.0,          960960.0,            16380.0,
                                   182.0,               1.0};
    constexpr double theta13 = 5.371920351148152;
    const Eigen::Index n = a.rows();
    if (n != a.cols()) throw ValidationError("expm: matrix must be square");
    const double anorm = norm1(a);
    int s = 0;
    if (anorm > theta13) s = std::max(0, static_cast<int>(std::ceil(std::log2(anorm / theta13))));
    const Matrix as = a / std::ldexp(1.0, s);
    const Matrix id = Matrix::Identity(n, n);
    const Matrix a2 = as * as;
    const Matrix a4 = a2 * a2;
    const Matrix a6 = a4 * a2;
    const Matrix u = as * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
    const Matrix v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
    const LuFactorization lu(v - u);
    const Matrix rhs = v + u;
    Matrix r(n, n);
    for (Eigen::Index j = 0; j < n; ++j) r.col(j) = lu.solve(rhs.col(j));
    for (int i = 0; i < s; ++i) r = (r * r).eval();
    return r;
}

} // namespace anyon::dense
