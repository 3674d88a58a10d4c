#include "qtime/analogue.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qtime/errors.hpp"

namespace qtime {

namespace {

double wrap(double x) {
    return std::remainder(x, 2.0 * std::numbers::pi);
}

void require_width(double width) {
    if (!(width > 0.0) || !std::isfinite(width)) {
        throw InputError("slab widths must be positive");
    }
}

// Derivative of a phase sampled at x-h, x, x+h, unwrapped along the stencil.
double unwrapped_slope(double lo, double mid, double hi, double h) {
    return (wrap(mid - lo) + wrap(hi - mid)) / (2.0 * h);
}

} // namespace

double SlabLayer::q_squared(double omega) const {
    switch (kind) {
    case Kind::permittivity:
        return value * omega * omega;
    case Kind::cutoff:
        return omega * omega - value;
    case Kind::tabulated: {
        if (omega <= table.front().first) return table.front().second * omega * omega;
        if (omega >= table.back().first) return table.back().second * omega * omega;
        const auto hi = std::lower_bound(table.begin(), table.end(), omega,
                                         [](const auto& entry, double w) { return entry.first < w; });
        const auto lo = hi - 1;
        const double f = (omega - lo->first) / (hi->first - lo->first);
        return (lo->second + f * (hi->second - lo->second)) * omega * omega;
    }
    }
    return 0.0;
}

SlabLayer permittivity_layer(double width, double eps) {
    require_width(width);
    if (!std::isfinite(eps)) throw InputError("permittivity must be finite");
    return {width, SlabLayer::Kind::permittivity, eps, {}};
}

SlabLayer cutoff_layer(double width, double cutoff_sq) {
    require_width(width);
    if (!std::isfinite(cutoff_sq)) throw InputError("cutoff must be finite");
    return {width, SlabLayer::Kind::cutoff, cutoff_sq, {}};
}

SlabLayer tabulated_layer(double width, std::vector<std::pair<double, double>> table) {
    require_width(width);
    if (table.size() < 2) throw InputError("tabulated permittivity needs at least two points");
    for (std::size_t i = 1; i < table.size(); ++i) {
        if (!(table[i].first > table[i - 1].first)) {
            throw InputError("tabulated frequencies must be strictly increasing");
        }
    }
    return {width, SlabLayer::Kind::tabulated, 0.0, std::move(table)};
}

SlabStack::SlabStack(std::vector<SlabLayer> layers, std::optional<QuantumSource> source)
    : layers_(std::move(layers)), source_(std::move(source)) {
    for (const auto& layer : layers_) require_width(layer.width);
}

double SlabStack::total_width() const {
    double sum = 0.0;
    for (const auto& layer : layers_) sum += layer.width;
    return sum;
}

double mapped_frequency(double m, double E) {
    if (!(m > 0.0) || !(E > 0.0)) throw InputError("mapping needs m > 0 and E > 0");
    return std::sqrt(2.0 * m * E);
}

SlabStack map_from_quantum(const BarrierProfile& profile, double m, double E) {
    mapped_frequency(m, E);
    std::vector<SlabLayer> layers;
    for (const auto& s : profile.segments()) {
        layers.push_back(cutoff_layer(s.width, 2.0 * m * s.height));
    }
    return SlabStack(std::move(layers), QuantumSource{profile, m, E});
}

Transmission helmholtz_coefficients(const SlabStack& stack, double omega) {
    if (!(omega > 0.0) || !std::isfinite(omega)) throw InputError("frequency must be positive");
    std::vector<Layer> layers;
    layers.reserve(stack.layers().size());
    for (const auto& layer : stack.layers()) {
        layers.push_back({layer.width, branch_sqrt(cplx{layer.q_squared(omega), 0.0})});
    }
    return edge_coefficients(layered_transfer(layers, omega));
}

std::optional<double> group_delay(const SlabStack& stack, double omega, double rel_step) {
    const double h = rel_step * omega;
    double phases[3];
    for (int i = 0; i < 3; ++i) {
        const cplx T = helmholtz_coefficients(stack, omega + (i - 1) * h).T;
        if (!(std::abs(T) >= 1e-300)) return std::nullopt;
        phases[i] = std::arg(T);
    }
    return unwrapped_slope(phases[0], phases[1], phases[2], h);
}

double nonrelativistic_phase_delay(const BarrierProfile& profile, double k, double m, double rel_step) {
    const double h = rel_step * k;
    double phases[3];
    for (int i = 0; i < 3; ++i) {
        const cplx T = nonrelativistic_coefficients(profile, k + (i - 1) * h, m).T;
        if (!(std::abs(T) >= 1e-300)) throw NumericalError("transmission zero: phase unresolvable");
        phases[i] = std::arg(T);
    }
    return unwrapped_slope(phases[0], phases[1], phases[2], h) * m / k;
}

DelayComparison compare_delays(const BarrierProfile& profile, double m, double E) {
    const SlabStack stack = map_from_quantum(profile, m, E);
    DelayComparison out;
    out.omega = mapped_frequency(m, E);
    const auto gd = group_delay(stack, out.omega);
    if (!gd) throw NumericalError("transmission zero at the mapped frequency");
    out.group_delay = *gd;
    out.nonrelativistic_delay = nonrelativistic_phase_delay(profile, out.omega, m);
    out.free_crossing = stack.total_width();
    return out;
}

} // namespace qtime
