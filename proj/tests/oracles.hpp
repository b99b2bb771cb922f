// Time-domain oracle for the rephasing response: propagate each interval with the matrix
// exponential, integrate with composite Simpson, then transform to the requested frequencies.
#pragma once

#include <unsupported/Eigen/MatrixFunctions>
#include <vector>

#include "anyon/spectra.hpp"

namespace testing_support {

inline anyon::dense::Matrix quadrature_response(const anyon::fock::FockSystem& sys,
                                                const anyon::spectra::DipoleSet& dipole,
                                                const std::vector<double>& omega_tau,
                                                const std::vector<double>& omega_t,
                                                anyon::spectra::PathwaySelection pathway, double t2, double horizon,
                                                double dt) {
    using anyon::cplx;
    using anyon::dense::Matrix;
    using anyon::dense::Vector;
    namespace fock = anyon::fock;
    const Eigen::Index d = sys.dimension;
    const Matrix& l = sys.liouvillian;
    int steps = int(std::ceil(horizon / dt));
    steps += steps % 2;
    const Matrix step = (l * dt).exp();
    const Matrix step_t = step.transpose();

    auto weight = [&](int k) { return (k == 0 || k == steps) ? 1.0 : (k % 2 ? 4.0 : 2.0); };

    // first interval: int e^{-i w_tau t} e^{L t} v dt
    const Vector v1 = fock::vec(fock::vacuum_state(d).matrix * dipole.mu);
    std::vector<Vector> first(omega_tau.size(), Vector::Zero(d * d));
    Vector u = v1;
    for (int k = 0; k <= steps; ++k) {
        for (std::size_t j = 0; j < omega_tau.size(); ++j)
            first[j] += (weight(k) * dt / 3.0) * std::polar(1.0, -omega_tau[j] * k * dt) * u;
        u = step * u;
    }
    // third interval on the dual side: int e^{i w_t t} (e^{L t})^T vec(mu^T) dt
    std::vector<Vector> third(omega_t.size(), Vector::Zero(d * d));
    Vector y = fock::vec(dipole.mu.transpose());
    for (int k = 0; k <= steps; ++k) {
        for (std::size_t j = 0; j < omega_t.size(); ++j)
            third[j] += (weight(k) * dt / 3.0) * std::polar(1.0, omega_t[j] * k * dt) * y;
        y = step_t * y;
    }

    const Matrix& mu3 = pathway == anyon::spectra::PathwaySelection::Diagram ? dipole.mu_up : dipole.mu;
    const Matrix waiting = t2 > 0.0 ? Matrix((l * t2).exp()) : Matrix::Identity(d * d, d * d);
    Matrix out(Eigen::Index(omega_tau.size()), Eigen::Index(omega_t.size()));
    for (std::size_t r = 0; r < omega_tau.size(); ++r) {
        const Matrix x = fock::unvec(waiting * fock::vec(dipole.mu * fock::unvec(first[r], d)), d);
        const Vector ket = fock::vec(mu3 * x);
        for (std::size_t c = 0; c < omega_t.size(); ++c)
            out(Eigen::Index(r), Eigen::Index(c)) = cplx(0.0, -1.0) * (third[c].transpose() * ket).value();
    }
    return out;
}

} // namespace testing_support
