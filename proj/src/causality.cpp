#include "qtime/causality.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qtime/errors.hpp"
#include "qtime/quadrature.hpp"

namespace qtime {

namespace {

using std::numbers::pi;

// Sigma_x and sigma_p thresholds standing in for "much smaller than".
constexpr double kLocalizedFraction = 0.1;
constexpr double kNarrowFraction = 0.1;

// Accelerated limit of a sequence of partial sums (Wynn epsilon algorithm).
cplx wynn_epsilon(const std::vector<cplx>& sums) {
    std::vector<cplx> prev(sums.size(), cplx{0.0});
    std::vector<cplx> cur(sums);
    cplx best = sums.back();
    for (std::size_t col = 1; cur.size() > 1; ++col) {
        std::vector<cplx> next(cur.size() - 1);
        for (std::size_t i = 0; i + 1 < cur.size(); ++i) {
            const cplx diff = cur[i + 1] - cur[i];
            if (std::abs(diff) == 0.0) {
                return cur[i + 1];
            }
            next[i] = prev[i + 1] + 1.0 / diff;
        }
        prev = std::move(cur);
        cur = std::move(next);
        if (col % 2 == 0) {
            best = cur.back();
        }
    }
    return best;
}

// int_0^inf exp(-mx cosh u) cosh(mt sinh u) du / (2 pi), scaled by exp(m s) with
// s = sqrt(x^2 - t^2) so the integrand peak is O(1).
double spacelike_branch_cut(double x, double t, double m) {
    const double ax = std::abs(x);
    const double at = std::abs(t);
    const double ms = m * std::sqrt((ax - at) * (ax + at));
    const auto integrand = [&](double u) {
        const double g = -m * (ax * std::cosh(u) - at * std::sinh(u)) + ms;
        return std::exp(g) * 0.5 * (1.0 + std::exp(-2.0 * m * at * std::sinh(u)));
    };
    // Truncate where the exponent has dropped by 50 below its maximum.
    const double u_peak = std::atanh(at / ax);
    double upper = u_peak + 1.0;
    while (-m * (ax * std::cosh(upper) - at * std::sinh(upper)) + ms > -50.0) {
        upper += 1.0;
    }
    const QuadratureRule unit = gauss_legendre(32, 0.0, 1.0);
    double previous = 0.0;
    for (std::size_t panels = 8; panels <= 1 << 14; panels *= 2) {
        const double h = upper / static_cast<double>(panels);
        double sum = 0.0;
        for (std::size_t p = 0; p < panels; ++p) {
            for (std::size_t j = 0; j < unit.nodes.size(); ++j) {
                sum += unit.weights[j] * h * integrand((static_cast<double>(p) + unit.nodes[j]) * h);
            }
        }
        if (panels > 8 && std::abs(sum - previous) <= 1e-14 * std::abs(sum)) {
            return sum * std::exp(-ms) / (2.0 * pi);
        }
        previous = sum;
    }
    throw NumericalError("free_wightman: branch-cut quadrature did not converge");
}

// int_0^inf dk/(4 pi E) exp(i(sign k x - E t)) along the real axis.
cplx real_axis_half(double x, double t, double m, double sign) {
    const double omega = std::abs(sign * x - t);  // asymptotic frequency
    const double period = pi / omega;
    const std::size_t sub = static_cast<std::size_t>(std::ceil((std::abs(x) + std::abs(t)) / omega)) + 1;
    const QuadratureRule unit = gauss_legendre(16, 0.0, 1.0);
    const auto integrand = [&](double k) {
        const double E = std::hypot(k, m);
        return std::polar(1.0 / (4.0 * pi * E), sign * k * x - E * t);
    };

    constexpr std::size_t kTerms = 48;
    std::vector<cplx> partial;
    partial.reserve(kTerms);
    cplx sum{0.0};
    for (std::size_t n = 0; n < kTerms; ++n) {
        const double a = period * static_cast<double>(n);
        const double h = period / static_cast<double>(sub);
        for (std::size_t p = 0; p < sub; ++p) {
            for (std::size_t j = 0; j < unit.nodes.size(); ++j) {
                sum += unit.weights[j] * h * integrand(a + (static_cast<double>(p) + unit.nodes[j]) * h);
            }
        }
        partial.push_back(sum);
    }
    const cplx full = wynn_epsilon(partial);
    const cplx shorter = wynn_epsilon({partial.begin(), partial.end() - 8});
    if (std::abs(full - shorter) > 1e-9 * std::max(std::abs(full), 1e-300)) {
        throw NumericalError("free_wightman: oscillatory tail extrapolation did not converge");
    }
    return full;
}

} // namespace

double proper_distance_sq(double r, double v, double t_d) {
    const double elapsed = r / v + t_d;
    return elapsed * elapsed - r * r;
}

DistanceWindow superluminal_window(double d) {
    if (!(d > 0.0)) throw InputError("barrier width must be positive");
    return {d, 7.5 * d};
}

StationaryPhaseVerdict stationary_phase_valid(double sigma_p, double k0, double r, double d) {
    if (!(sigma_p > 0.0) || !(k0 > 0.0) || !(r > 0.0) || !(d > 0.0)) {
        throw InputError("stationary_phase_valid: all arguments must be positive");
    }
    StationaryPhaseVerdict out;
    out.sigma_x = 0.5 / sigma_p;
    out.localized = out.sigma_x <= kLocalizedFraction * r;
    out.narrow = sigma_p <= kNarrowFraction * k0;
    out.valid = out.localized && out.narrow;
    if (!out.localized) {
        out.reasons.emplace_back("A: position spread sigma_x exceeds r/10");
    }
    if (!out.narrow) {
        out.reasons.emplace_back("B: momentum spread sigma_p exceeds 0.1 k0");
    }
    // Localization needs sigma_p >= 1/(2 * 0.1 r); narrowness needs sigma_p <= 0.1 k0.
    const double needed = 0.5 / (kLocalizedFraction * r);
    out.incompatible = r <= superluminal_window(d).upper && needed > kNarrowFraction * k0;
    if (out.incompatible) {
        out.reasons.emplace_back("r within the superluminal window: localizing the packet breaks stationary phase");
    }
    return out;
}

StationaryPhaseVerdict stationary_phase_valid(const WavePacketSpec& packet, double r, double d) {
    return stationary_phase_valid(packet.sigma_p(), packet.k0(), r, d);
}

cplx free_wightman(double x, double t, double m) {
    if (!std::isfinite(x) || !std::isfinite(t) || !std::isfinite(m)) {
        throw InputError("free_wightman: non-finite input");
    }
    if (!(m > 0.0)) throw InputError("m must be positive");
    const double ax = std::abs(x);
    const double at = std::abs(t);
    if (ax == at) {
        throw DomainError("free_wightman is singular on the light cone");
    }
    if (ax > at) {
        return spacelike_branch_cut(x, t, m);
    }
    return real_axis_half(x, t, m, 1.0) + real_axis_half(x, t, m, -1.0);
}

double lightcone_leakage(const ArrivalDistribution& dist, double r) {
    validate(dist.grid);
    if (dist.density.size() != dist.grid.n) throw InputError("distribution size does not match its grid");
    if (r < dist.grid.t_min) {
        throw InputError("distribution grid must start before the light-cone time r");
    }
    const double h = dist.grid.spacing();
    const auto& p = dist.density;
    const double total = trapezoid(p, h);
    if (!(total > 0.0)) throw DomainError("distribution carries no probability");
    if (r >= dist.grid.t_max) return 1.0;

    const double pos = (r - dist.grid.t_min) / h;
    const std::size_t i = std::min(static_cast<std::size_t>(pos), p.size() - 2);
    const double frac = pos - static_cast<double>(i);
    double inside = 0.0;
    for (std::size_t j = 0; j < i; ++j) {
        inside += 0.5 * (p[j] + p[j + 1]) * h;
    }
    const double p_r = p[i] + frac * (p[i + 1] - p[i]);
    inside += 0.5 * (p[i] + p_r) * frac * h;
    return inside / total;
}

std::string CausalityReport::verdict() const {
    std::string out = delta_s2 > 0.0 ? "Δs² > 0: no superluminal signal"
                                     : "Δs² <= 0: emission and detection not time-like separated";
    out += stationary_phase.valid ? "; stationary phase valid" : "; stationary phase invalid, t_d not meaningful";
    return out;
}

CausalityReport causality_report(const WavePacketSpec& packet, const BarrierProfile& profile, double L,
                                 const DetectorModel& detector, const QuadratureSettings& quadrature,
                                 std::size_t n_t) {
    CausalityReport rep;
    rep.r = L + packet.x0();
    rep.v = packet.center_velocity();
    rep.d = profile.total_width();
    rep.t_d = phase_delay(profile, packet.k0(), packet.mass()).t_d;
    rep.delay_method = DelayMethod::phase;
    rep.delta_s2 = proper_distance_sq(rep.r, rep.v, rep.t_d);
    rep.bound_margin = rep.t_d + rep.d / rep.v;
    rep.window = superluminal_window(rep.d);
    rep.inside_window = rep.r > rep.window.lower && rep.r < rep.window.upper;
    rep.stationary_phase = stationary_phase_valid(packet, rep.r, rep.d);

    TimeGrid grid = default_time_grid(packet, L, rep.t_d, n_t);
    if (grid.t_min > rep.r) {
        grid.t_min = rep.r - grid.spacing();
    }
    const ArrivalDistribution dist = arrival_density(packet, profile, detector, L, grid, quadrature);
    rep.leakage = lightcone_leakage(dist, rep.r);
    rep.transmission = total_probability(dist).value;
    rep.warnings = dist.warnings;
    return rep;
}

} // namespace qtime
