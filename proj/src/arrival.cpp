#include "qtime/arrival.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "qtime/errors.hpp"
#include "qtime/parallel.hpp"
#include "qtime/quadrature.hpp"
#include "qtime/scattering.hpp"

namespace qtime {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_phase(double x) {
    return std::remainder(x, kTwoPi);
}

double checked_total(const ArrivalDistribution& dist) {
    if (dist.density.size() != dist.grid.n || dist.grid.n < 3) {
        throw DomainError("distribution is empty or inconsistent with its grid");
    }
    const double total = trapezoid(dist.density, dist.grid.spacing());
    if (!(total > 1e-12)) {
        throw DomainError("distribution carries no probability; statistics undefined");
    }
    return total;
}

} // namespace

DetectorModel DetectorModel::gaussian_window(double kc, double w) {
    if (!std::isfinite(kc) || !(w > 0.0) || !std::isfinite(w)) {
        throw InputError("gaussian detector window needs finite kc and w > 0");
    }
    return DetectorModel(Kind::gaussian_window, kc, w, 1.0);
}

DetectorModel DetectorModel::constant(double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw InputError("absorption coefficient must lie in [0, 1]");
    }
    return DetectorModel(Kind::flat, 0.0, 0.0, alpha);
}

double DetectorModel::alpha(double k) const {
    if (kind_ == Kind::flat) {
        return level_;
    }
    const double u = (k - center_) / width_;
    return std::exp(-0.5 * u * u);
}

void validate(const TimeGrid& grid) {
    if (grid.n < 3) {
        throw InputError("time grid needs at least 3 points");
    }
    if (!std::isfinite(grid.t_min) || !std::isfinite(grid.t_max) || !(grid.t_max > grid.t_min)) {
        throw InputError("time grid needs finite tmin < tmax");
    }
}

std::vector<double> ArrivalDistribution::normalized() const {
    const double total = checked_total(*this);
    std::vector<double> out(density);
    for (double& p : out) p /= total;
    return out;
}

TimeGrid default_time_grid(const WavePacketSpec& packet, double L, double delay_estimate, std::size_t n) {
    const double v = packet.center_velocity();
    const double center = (L + packet.x0()) / v + delay_estimate;
    const double half = 12.0 / (packet.sigma_p() * v) + std::abs(delay_estimate);
    return {center - half, center + half, n};
}

std::vector<double> arrival_density_values(const MomentumAmplitude& amplitude, double mass, double k_min,
                                           double k_max, const std::optional<BarrierProfile>& profile,
                                           const DetectorModel& detector, double L, const TimeGrid& grid,
                                           const QuadratureSettings& quadrature) {
    validate(grid);
    if (!std::isfinite(L)) throw InputError("L must be finite");
    if (!(k_min >= 0.0) || !(k_max > k_min)) throw InputError("momentum window must satisfy 0 <= k_min < k_max");
    if (profile && !(L > 0.5 * profile->total_width())) {
        throw InputError("detector must sit outside the barrier (L > d/2)");
    }

    const QuadratureRule rule = gauss_legendre(quadrature.n_k, k_min, k_max);
    const std::size_t nk = rule.nodes.size();
    std::vector<cplx> base(nk);  // everything except e^{ikL - iEt}
    std::vector<double> energies(nk);
    parallel_for(nk, quadrature.threads, [&](std::size_t j) {
        const double k = rule.nodes[j];
        const double a = detector.alpha(k);
        if (!(a >= 0.0 && a <= 1.0)) {
            throw InputError("absorption coefficient outside [0, 1]");
        }
        const cplx barrier = profile ? coefficients(*profile, k, mass).A : cplx{1.0};
        energies[j] = energy(k, mass);
        base[j] = rule.weights[j] / kTwoPi * std::sqrt(a * std::abs(velocity(k, mass))) * barrier * amplitude(k);
    });

    // Phase advance of the integrand between neighbouring nodes at the grid edges.
    double biggest = 0.0;
    for (const cplx& b : base) biggest = std::max(biggest, std::abs(b));
    double worst = 0.0;
    double worst_t = grid.t_min;
    for (const double t : {grid.t_min, grid.t_max}) {
        for (std::size_t j = 0; j + 1 < nk; ++j) {
            if (biggest == 0.0) break;
            if (std::abs(base[j]) < 1e-10 * biggest || std::abs(base[j + 1]) < 1e-10 * biggest) continue;
            const double dk = rule.nodes[j + 1] - rule.nodes[j];
            const double advance = std::abs(wrap_phase(std::arg(base[j + 1]) - std::arg(base[j])) + L * dk -
                                            (energies[j + 1] - energies[j]) * t);
            if (advance > worst) {
                worst = advance;
                worst_t = t;
            }
        }
    }
    if (worst > 0.25 * std::numbers::pi) {
        std::ostringstream msg;
        msg << "k grid too coarse: phase advance " << worst << " rad per node at t = " << worst_t
            << " exceeds pi/4; increase nk";
        throw NumericalError(msg.str());
    }

    std::vector<cplx> weights(nk);
    for (std::size_t j = 0; j < nk; ++j) {
        weights[j] = base[j] * std::polar(1.0, rule.nodes[j] * L);
    }
    std::vector<double> density(grid.n);
    parallel_for(grid.n, quadrature.threads, [&](std::size_t i) {
        const double t = grid.at(i);
        cplx sum{0.0};
        for (std::size_t j = 0; j < nk; ++j) {
            sum += weights[j] * std::polar(1.0, -energies[j] * t);
        }
        density[i] = std::norm(sum);
    });
    return density;
}

ArrivalDistribution arrival_density(const WavePacketSpec& packet, const std::optional<BarrierProfile>& profile,
                                    const DetectorModel& detector, double L, const TimeGrid& grid,
                                    const QuadratureSettings& quadrature) {
    const double k_min = std::max(0.0, packet.k0() - 8.0 * packet.sigma_p());
    const double k_max = packet.k0() + 8.0 * packet.sigma_p();

    ArrivalDistribution dist;
    dist.L = L;
    dist.grid = grid;
    dist.packet = packet;
    dist.profile = profile;
    dist.detector = detector;
    dist.quadrature = quadrature;
    dist.density = arrival_density_values(as_amplitude(packet), packet.mass(), k_min, k_max, profile, detector, L,
                                          grid, quadrature);
    if (profile && L < 10.0 * profile->total_width()) {
        dist.near_field = true;
        dist.warnings.emplace_back("detector closer than 10 d to the barrier");
    }
    if (total_probability(dist).edge_warning) {
        dist.warnings.emplace_back("time grid truncates the distribution (edge density above 1e-8 of peak)");
    }
    return dist;
}

TotalProbability total_probability(const ArrivalDistribution& dist) {
    validate(dist.grid);
    if (dist.density.size() != dist.grid.n) {
        throw DomainError("distribution size does not match its grid");
    }
    TotalProbability out;
    out.value = trapezoid(dist.density, dist.grid.spacing());
    const double peak = *std::max_element(dist.density.begin(), dist.density.end());
    out.edge_warning = peak > 0.0 && std::max(dist.density.front(), dist.density.back()) > 1e-8 * peak;
    return out;
}

double mean_time(const ArrivalDistribution& dist) {
    const double total = checked_total(dist);
    std::vector<double> weighted(dist.density.size());
    for (std::size_t i = 0; i < weighted.size(); ++i) {
        weighted[i] = dist.time(i) * dist.density[i];
    }
    return trapezoid(weighted, dist.grid.spacing()) / total;
}

double mode_time(const ArrivalDistribution& dist) {
    checked_total(dist);
    const auto& p = dist.density;
    const std::size_t i = static_cast<std::size_t>(std::max_element(p.begin(), p.end()) - p.begin());
    if (i == 0 || i + 1 == p.size()) {
        return dist.time(i);
    }
    const double curvature = p[i - 1] - 2.0 * p[i] + p[i + 1];
    if (curvature >= 0.0) {
        return dist.time(i);
    }
    return dist.time(i) + 0.5 * dist.grid.spacing() * (p[i - 1] - p[i + 1]) / curvature;
}

std::vector<Peak> peaks(const ArrivalDistribution& dist) {
    checked_total(dist);
    const auto& p = dist.density;
    const double threshold = 0.01 * *std::max_element(p.begin(), p.end());
    std::vector<Peak> out;
    for (std::size_t i = 1; i + 1 < p.size(); ++i) {
        if (p[i] > p[i - 1] && p[i] >= p[i + 1] && p[i] >= threshold) {
            out.push_back({dist.time(i), p[i]});
        }
    }
    return out;
}

} // namespace qtime
