#pragma once

#include <complex>
#include <string>
#include <vector>

#include "qtime/arrival.hpp"
#include "qtime/barrier.hpp"
#include "qtime/delay.hpp"
#include "qtime/kinematics.hpp"

namespace qtime {

/// Squared interval between emission and detection, (r/v + t_d)^2 - r^2.
double proper_distance_sq(double r, double v, double t_d);

struct DistanceWindow {
    double lower;
    double upper;
};

/// Source-detector distances (d, 7.5 d) where Delta s^2 < 0 is not excluded by
/// the velocity bound 2 sqrt(2)/3.
DistanceWindow superluminal_window(double d);

struct StationaryPhaseVerdict {
    double sigma_x = 0.0;
    bool localized = false;     // A: sigma_x <= r/10
    bool narrow = false;        // B: sigma_p <= 0.1 k0
    bool valid = false;         // A and B
    bool incompatible = false;  // r <= 7.5 d and A, B cannot both hold for this k0
    std::vector<std::string> reasons;
};

StationaryPhaseVerdict stationary_phase_valid(const WavePacketSpec& packet, double r, double d);
StationaryPhaseVerdict stationary_phase_valid(double sigma_p, double k0, double r, double d);

/// Positive-frequency two-point function  int dk/(2 pi 2E) e^{ikx - iEt}.
///
/// Spacelike arguments deform the k contour onto the branch cut k = i kappa,
/// kappa >= m, where the integrand is positive and decays exponentially.
/// Timelike arguments integrate along the real axis over half-periods of the
/// asymptotic oscillation and extrapolate the partial sums (Wynn epsilon).
std::complex<double> free_wightman(double x, double t, double m);

/// Fraction of the detection probability at times t < r (outside the light cone).
double lightcone_leakage(const ArrivalDistribution& dist, double r);

struct CausalityReport {
    double r = 0.0;  // L + x0
    double v = 0.0;  // v_{k0}
    double d = 0.0;
    double t_d = 0.0;
    DelayMethod delay_method = DelayMethod::phase;
    double delta_s2 = 0.0;
    double bound_margin = 0.0;  // t_d + d/v
    DistanceWindow window{};
    bool inside_window = false;
    StationaryPhaseVerdict stationary_phase;
    double leakage = 0.0;
    double transmission = 0.0;  // total detection probability with the barrier
    std::vector<std::string> warnings;

    bool consistent() const { return proper_distance_sq(r, v, t_d) == delta_s2; }
    std::string verdict() const;
};

CausalityReport causality_report(const WavePacketSpec& packet, const BarrierProfile& profile, double L,
                                 const DetectorModel& detector = DetectorModel::flat(),
                                 const QuadratureSettings& quadrature = {}, std::size_t n_t = 4096);

} // namespace qtime
