#include "anyon/statistics.hpp"

#include <cmath>
#include <string>

namespace anyon::stats {

cplx q_number(int n, double theta) {
    const cplx q = std::polar(1.0, theta);
    if (std::abs(1.0 - q) < 1e-12) return cplx(n, 0.0);
    return (1.0 - std::polar(1.0, theta * n)) / (1.0 - q);
}

cplx deformed_commutator_eigenvalue(int n, double theta) {
    if (n < 0) throw ValidationError("deformed_commutator_eigenvalue: n must be >= 0");
    // [a, a^dag] = [n+1]_q - [n]_q = e^{i theta n}
    return std::polar(1.0, theta * n);
}

cplx thermal_occupation(double theta, double beta, double omega, double floor) {
    const double bw = beta * omega;
    if (!(bw >= floor))
        throw ValidationError("thermal_occupation: beta*omega = " + std::to_string(bw) + " is below the floor");
    return 1.0 / (std::exp(bw) - std::polar(1.0, theta));
}

cplx phase_average(double theta, double z) {
    return (1.0 - z) / (1.0 - z * std::polar(1.0, theta));
}

double gamma_stat(double theta, double z, double gamma) {
    // 1 - Re<e^{i theta N}> = z (1 + z)(1 - cos theta) / (1 - 2 z cos theta + z^2)
    const double s = std::sin(0.5 * theta);
    const double one_minus_cos = 2.0 * s * s;
    const double denom = 1.0 - 2.0 * z * std::cos(theta) + z * z;
    return 0.5 * gamma * z * (1.0 + z) * one_minus_cos / denom;
}

ComplexRate gamma_full_single(const AnyonParams& p) {
    const cplx n = thermal_occupation(p.theta, p.beta, p.omega);
    ComplexRate r;
    r.value = 0.5 * p.gamma * (2.0 * n + 1.0) + gamma_stat(p.theta, p.z(), p.gamma);
    if (p.theta == 0.0 || p.theta == kPi) r.value.imag(0.0);
    return r;
}

} // namespace anyon::stats
