#include "qtime/delay.hpp"

#include <cmath>
#include <numbers>

#include "qtime/errors.hpp"
#include "qtime/parallel.hpp"
#include "qtime/scattering.hpp"

namespace qtime {

namespace {

constexpr double kTinyAmplitude = 1e-300;

double checked_arg(cplx A) {
    if (!(std::abs(A) >= kTinyAmplitude)) {
        throw NumericalError("|A_k| below 1e-300: phase unresolvable");
    }
    return std::arg(A);
}

} // namespace

DelayResult phase_delay(const BarrierProfile& profile, double k, double m, double rel_step) {
    if (!(k > 0.0)) throw InputError("momentum must be positive");
    const double h = rel_step * k;
    const double lo = checked_arg(coefficients(profile, k - h, m).A);
    const double mid = checked_arg(coefficients(profile, k, m).A);
    const double hi = checked_arg(coefficients(profile, k + h, m).A);
    // Unwrap lo -> mid -> hi.
    const double step_lo = std::remainder(mid - lo, 2.0 * std::numbers::pi);
    const double step_hi = std::remainder(hi - mid, 2.0 * std::numbers::pi);
    const double slope = (step_lo + step_hi) / (2.0 * h);

    DelayResult out;
    out.k = k;
    out.t_d = slope / velocity(k, m);
    out.method = DelayMethod::phase;
    return out;
}

std::vector<std::optional<DelayResult>> phase_delay_scan(const BarrierProfile& profile, std::span<const double> ks,
                                                         double m, unsigned threads) {
    std::vector<std::optional<DelayResult>> out(ks.size());
    parallel_for(ks.size(), threads, [&](std::size_t i) {
        try {
            out[i] = phase_delay(profile, ks[i], m);
        } catch (const NumericalError&) {
            out[i] = std::nullopt;
        }
    });
    return out;
}

EmpiricalDelay empirical_delay_runs(const WavePacketSpec& packet, const BarrierProfile& profile,
                                    const DetectorModel& detector, double L, const EmpiricalDelayOptions& options) {
    TimeGrid grid;
    if (options.grid) {
        grid = *options.grid;
    } else {
        double estimate = 0.0;
        try {
            estimate = phase_delay(profile, packet.k0(), packet.mass()).t_d;
        } catch (const NumericalError&) {
        }
        grid = default_time_grid(packet, L, estimate);
    }
    EmpiricalDelay out{
        {},
        arrival_density(packet, profile, detector, L, grid, options.quadrature),
        arrival_density(packet, std::nullopt, detector, L, grid, options.quadrature),
    };
    out.result.k = packet.k0();
    out.result.method = DelayMethod::empirical;
    out.result.t_d = mean_time(out.with_barrier) - mean_time(out.without_barrier);
    out.result.single_peak = peaks(out.with_barrier).size() == 1 && peaks(out.without_barrier).size() == 1;
    out.result.narrow_packet = packet.sigma_p() <= 0.05 * packet.k0();
    return out;
}

DelayResult empirical_delay(const WavePacketSpec& packet, const BarrierProfile& profile, const DetectorModel& detector,
                            double L, const EmpiricalDelayOptions& options) {
    return empirical_delay_runs(packet, profile, detector, L, options).result;
}

std::vector<HartmannPoint> hartmann_scan(double V0, double m, double k, std::span<const double> d_values,
                                         unsigned threads) {
    if (!(V0 > 0.0) || !(V0 < m)) throw DomainError("hartmann scan needs 0 < V0 < m");
    if (!(k > 0.0)) throw InputError("momentum must be positive");
    if (!(energy(k, m) - V0 < m)) {
        throw DomainError("momentum is above the barrier: no tunneling regime (E - V0 >= m)");
    }
    for (std::size_t i = 0; i < d_values.size(); ++i) {
        if (!(d_values[i] > 0.0)) throw InputError("barrier widths must be positive");
        if (i > 0 && !(d_values[i] > d_values[i - 1])) throw InputError("barrier widths must be increasing");
    }
    const double v = velocity(k, m);
    std::vector<HartmannPoint> out(d_values.size());
    parallel_for(d_values.size(), threads, [&](std::size_t i) {
        HartmannPoint& p = out[i];
        p.d = d_values[i];
        try {
            p.t_d = phase_delay(square(V0, p.d), k, m).t_d;
            p.tau = p.t_d + p.d / v;
        } catch (const NumericalError&) {
            p.excluded = true;
        }
    });
    return out;
}

} // namespace qtime
