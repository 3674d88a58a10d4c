#include "qtime/kinematics.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qtime/errors.hpp"

namespace qtime {

namespace {

void require_finite(double value, const char* name) {
    if (!std::isfinite(value)) {
        throw InputError(std::string(name) + " must be finite");
    }
}

void require_mass(double m) {
    require_finite(m, "m");
    if (m <= 0.0) {
        throw InputError("m must be positive");
    }
}

} // namespace

double energy(double k, double m) {
    require_finite(k, "k");
    require_mass(m);
    return std::hypot(k, m);
}

double velocity(double k, double m) {
    return k / energy(k, m);
}

double max_tunneling_velocity(double V0, double m) {
    require_mass(m);
    require_finite(V0, "V0");
    if (V0 < 0.0) {
        throw InputError("V0 must be non-negative");
    }
    if (V0 >= m) {
        throw DomainError("V0 >= m: background-field approximation fails");
    }
    const double g = 1.0 + V0 / m;
    return std::sqrt(1.0 - 1.0 / (g * g));
}

double pair_production_velocity_bound() {
    return 2.0 * std::numbers::sqrt2 / 3.0;
}

WavePacketSpec::WavePacketSpec(double mass, double k0, double sigma_p, double x0)
    : mass_(mass), k0_(k0), sigma_p_(sigma_p), x0_(x0) {
    require_finite(mass, "m");
    require_finite(k0, "k0");
    require_finite(sigma_p, "sigma-p");
    require_finite(x0, "x0");
    if (mass <= 0.0) throw InputError("m must be positive");
    if (k0 <= 0.0) throw InputError("k0 must be positive");
    if (sigma_p <= 0.0) throw InputError("sigma-p must be positive");
    if (x0 <= 0.0) throw InputError("x0 must be positive");
    if (k0 < 5.0 * sigma_p) {
        throw InputError("sigma-p too large: need k0 >= 5 sigma-p for positive-momentum packets");
    }
}

cplx gaussian_amplitude(const WavePacketSpec& spec, double k) {
    // |psi|^2 = sqrt(2 pi)/sigma exp(-(k-k0)^2 / (2 sigma^2))
    const double s = spec.sigma_p();
    const double norm = std::sqrt(std::sqrt(2.0 * std::numbers::pi) / s);
    const double dk = k - spec.k0();
    return std::polar(norm * std::exp(-dk * dk / (4.0 * s * s)), k * spec.x0());
}

MomentumAmplitude as_amplitude(const WavePacketSpec& spec) {
    return [spec](double k) { return gaussian_amplitude(spec, k); };
}

} // namespace qtime
