#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "qtime/barrier.hpp"
#include "qtime/kinematics.hpp"

namespace qtime {

/// Momentum-dependent detector absorption coefficient, 0 <= alpha(k) <= 1.
class DetectorModel {
public:
    enum class Kind { flat, gaussian_window };

    static DetectorModel flat() { return DetectorModel(Kind::flat, 0.0, 0.0, 1.0); }
    /// alpha(k) = exp(-(k - kc)^2 / (2 w^2)).
    static DetectorModel gaussian_window(double kc, double w);
    /// Constant absorption, e.g. 0 for a blind detector.
    static DetectorModel constant(double alpha);

    double alpha(double k) const;

    Kind kind() const { return kind_; }
    double center() const { return center_; }
    double width() const { return width_; }
    double level() const { return level_; }

    bool operator==(const DetectorModel&) const = default;

private:
    DetectorModel(Kind kind, double center, double width, double level)
        : kind_(kind), center_(center), width_(width), level_(level) {}

    Kind kind_;
    double center_;
    double width_;
    double level_;
};

struct TimeGrid {
    double t_min = 0.0;
    double t_max = 1.0;
    std::size_t n = 2;

    double spacing() const { return (t_max - t_min) / static_cast<double>(n - 1); }
    double at(std::size_t i) const { return t_min + spacing() * static_cast<double>(i); }

    bool operator==(const TimeGrid&) const = default;
};

void validate(const TimeGrid& grid);

struct QuadratureSettings {
    std::size_t n_k = 2048;
    unsigned threads = 0;  // 0 = all cores; never affects results

    bool operator==(const QuadratureSettings&) const = default;
};

/// Sampled detection probability density P(L, t) with the inputs that produced it.
/// Values are unnormalized: their integral is the detection probability.
struct ArrivalDistribution {
    double L = 0.0;
    TimeGrid grid;
    std::vector<double> density;
    std::optional<WavePacketSpec> packet;
    std::optional<BarrierProfile> profile;
    DetectorModel detector = DetectorModel::flat();
    QuadratureSettings quadrature;
    bool near_field = false;  // L < 10 d: far-detector assumption questionable
    std::vector<std::string> warnings;

    double time(std::size_t i) const { return grid.at(i); }
    std::vector<double> normalized() const;
};

/// Grid centered on the free arrival time (L + x0)/v with half-width
/// 12/(sigma_p v) + |delay_estimate|.
TimeGrid default_time_grid(const WavePacketSpec& packet, double L, double delay_estimate = 0.0,
                           std::size_t n = 4096);

/// P(L, t) = | int dk/2pi sqrt(alpha |v|) A_k psi(k) e^{ikL - iE t} |^2, with
/// A_k = 1 when no profile is given. The k integral runs over
/// [max(0, k0 - 8 sigma_p), k0 + 8 sigma_p] with n_k Gauss-Legendre nodes.
ArrivalDistribution arrival_density(const WavePacketSpec& packet, const std::optional<BarrierProfile>& profile,
                                    const DetectorModel& detector, double L, const TimeGrid& grid,
                                    const QuadratureSettings& quadrature = {});

/// Same integral for an arbitrary momentum amplitude on [k_min, k_max].
std::vector<double> arrival_density_values(const MomentumAmplitude& amplitude, double mass, double k_min,
                                           double k_max, const std::optional<BarrierProfile>& profile,
                                           const DetectorModel& detector, double L, const TimeGrid& grid,
                                           const QuadratureSettings& quadrature = {});

struct TotalProbability {
    double value = 0.0;
    bool edge_warning = false;  // grid edges above 1e-8 of the peak
};

TotalProbability total_probability(const ArrivalDistribution& dist);

double mean_time(const ArrivalDistribution& dist);
double mode_time(const ArrivalDistribution& dist);

struct Peak {
    double time;
    double height;
};

/// Local maxima above 1% of the global maximum, in time order.
std::vector<Peak> peaks(const ArrivalDistribution& dist);

} // namespace qtime
