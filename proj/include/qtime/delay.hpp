#pragma once

#include <optional>
#include <span>
#include <vector>

#include "qtime/arrival.hpp"
#include "qtime/barrier.hpp"
#include "qtime/kinematics.hpp"

namespace qtime {

enum class DelayMethod { phase, empirical };

struct DelayResult {
    double k = 0.0;
    double t_d = 0.0;
    DelayMethod method = DelayMethod::phase;
    bool single_peak = true;
    bool narrow_packet = true;
};

/// t_d = (1/v_k) d(arg A_k)/dk by a central difference with step rel_step*k.
/// Throws NumericalError where |A_k| < 1e-300.
DelayResult phase_delay(const BarrierProfile& profile, double k, double m, double rel_step = 1e-5);

/// Phase delays on a momentum list; transmission zeros come back as nullopt.
std::vector<std::optional<DelayResult>> phase_delay_scan(const BarrierProfile& profile, std::span<const double> ks,
                                                         double m, unsigned threads = 0);

struct EmpiricalDelayOptions {
    std::optional<TimeGrid> grid;  // default: covers both runs
    QuadratureSettings quadrature;
};

struct EmpiricalDelay {
    DelayResult result;
    ArrivalDistribution with_barrier;
    ArrivalDistribution without_barrier;
};

/// Difference of mean arrival times with and without the barrier.
EmpiricalDelay empirical_delay_runs(const WavePacketSpec& packet, const BarrierProfile& profile,
                                    const DetectorModel& detector, double L, const EmpiricalDelayOptions& options = {});

DelayResult empirical_delay(const WavePacketSpec& packet, const BarrierProfile& profile, const DetectorModel& detector,
                            double L, const EmpiricalDelayOptions& options = {});

struct HartmannPoint {
    double d = 0.0;
    double t_d = 0.0;
    double tau = 0.0;  // t_d + d/v_k, time attributed to the barrier interior
    bool excluded = false;
};

/// Square-barrier phase delays over a list of widths at fixed tunneling momentum.
std::vector<HartmannPoint> hartmann_scan(double V0, double m, double k, std::span<const double> d_values,
                                         unsigned threads = 0);

} // namespace qtime
