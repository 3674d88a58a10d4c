#pragma once

#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qtime/barrier.hpp"
#include "qtime/scattering.hpp"

namespace qtime {

/// Dielectric layer of the Helmholtz equation  E'' + q(omega)^2 E = 0.
///
/// permittivity: q^2 = eps omega^2 (eps = n^2, negative for evanescent media)
/// cutoff:       q^2 = omega^2 - omega_c^2 (below-cutoff waveguide; what the
///               Schroedinger mapping produces)
/// tabulated:    q^2 = eps(omega) omega^2, eps linearly interpolated
struct SlabLayer {
    enum class Kind { permittivity, cutoff, tabulated };

    double width = 0.0;
    Kind kind = Kind::permittivity;
    double value = 1.0;  // eps or omega_c^2
    std::vector<std::pair<double, double>> table;  // (omega, eps), ascending omega

    double q_squared(double omega) const;
};

SlabLayer permittivity_layer(double width, double eps);
SlabLayer cutoff_layer(double width, double cutoff_sq);
SlabLayer tabulated_layer(double width, std::vector<std::pair<double, double>> table);

/// Quantum problem a stack was mapped from.
struct QuantumSource {
    BarrierProfile profile;
    double m;
    double E;
};

/// Layers embedded in vacuum (n = 1).
class SlabStack {
public:
    explicit SlabStack(std::vector<SlabLayer> layers, std::optional<QuantumSource> source = std::nullopt);

    const std::vector<SlabLayer>& layers() const { return layers_; }
    const std::optional<QuantumSource>& source() const { return source_; }
    double total_width() const;

private:
    std::vector<SlabLayer> layers_;
    std::optional<QuantumSource> source_;
};

/// Stack whose Helmholtz equation at omega = sqrt(2 m E) is the time-independent
/// Schroedinger equation of the profile: (n omega)^2 = 2 m (E - V).
SlabStack map_from_quantum(const BarrierProfile& profile, double m, double E);

/// Frequency at which a mapped stack reproduces energy E: sqrt(2 m E).
double mapped_frequency(double m, double E);

/// Edge-referenced coefficients: a vacuum stack of width X gives T = e^{i omega X}.
Transmission helmholtz_coefficients(const SlabStack& stack, double omega);

/// d(arg T)/d omega by central difference (step rel_step*omega). nullopt at a
/// transmission zero.
std::optional<double> group_delay(const SlabStack& stack, double omega, double rel_step = 1e-5);

inline constexpr const char* kGroupDelayCaveat =
    "group delay measures the lifetime of field energy stored in the barrier, not a signal transit time";

/// Side-by-side numbers for a mapped stack and its quantum source.
struct DelayComparison {
    double omega = 0.0;
    double group_delay = 0.0;            // Helmholtz, mapped stack
    double nonrelativistic_delay = 0.0;  // (m/k) d(arg T)/dk of the source barrier
    double free_crossing = 0.0;          // stack width
    std::string caveat = kGroupDelayCaveat;
};

DelayComparison compare_delays(const BarrierProfile& profile, double m, double E);

/// Nonrelativistic phase delay (m/k) d(arg T)/dk by central difference.
double nonrelativistic_phase_delay(const BarrierProfile& profile, double k, double m, double rel_step = 1e-5);

} // namespace qtime
