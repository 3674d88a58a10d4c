#pragma once

#include <complex>
#include <functional>

// Relativistic single-particle kinematics in natural units (hbar = c = 1).

namespace qtime {

using cplx = std::complex<double>;

double energy(double k, double m);
double velocity(double k, double m);

/// Largest particle velocity for which a barrier of height V0 < m still
/// tunnels: sqrt(1 - (1 + V0/m)^-2). Throws DomainError for V0 >= m.
double max_tunneling_velocity(double V0, double m);

/// Velocity bound from requiring kinetic energy below 2m (no spontaneous
/// pair creation): 2*sqrt(2)/3.
double pair_production_velocity_bound();

/// Any momentum-space amplitude psi(k); normalized as  int dk/(2 pi) |psi|^2 = 1.
using MomentumAmplitude = std::function<cplx(double)>;

/// Gaussian wave packet in momentum space.
///
/// The packet is centered at k0 with standard deviation sigma_p of |psi|^2 and
/// sits at x = -x0 in position space. Construction enforces k0 >= 5 sigma_p so
/// that the negative-momentum content is negligible.
class WavePacketSpec {
public:
    WavePacketSpec(double mass, double k0, double sigma_p, double x0);

    double mass() const { return mass_; }
    double k0() const { return k0_; }
    double sigma_p() const { return sigma_p_; }
    double x0() const { return x0_; }

    /// Minimum-uncertainty position spread 1/(2 sigma_p).
    double sigma_x() const { return 0.5 / sigma_p_; }

    double center_velocity() const { return velocity(k0_, mass_); }

    bool operator==(const WavePacketSpec&) const = default;

private:
    double mass_;
    double k0_;
    double sigma_p_;
    double x0_;
};

cplx gaussian_amplitude(const WavePacketSpec& spec, double k);

MomentumAmplitude as_amplitude(const WavePacketSpec& spec);

} // namespace qtime
