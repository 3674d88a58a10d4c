#include "qtime/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "qtime/errors.hpp"
#include "qtime/kinematics.hpp"

namespace qtime {

namespace {

constexpr cplx I{0.0, 1.0};

// Tolerance for the unitarity precondition of overlap_w.
constexpr double kUnitarityTol = 1e-8;

// Scaled propagator of (f, f') across one homogeneous layer:
//   [[cos qw, sin(qw)/q], [-q sin qw, cos qw]] = exp(scale) * mantissa.
struct ScaledStep {
    Mat2 mantissa;
    double scale;
};

ScaledStep layer_step(const Layer& layer) {
    const cplx q = layer.q;
    const double w = layer.width;
    const cplx z = q * w;
    if (std::abs(z) < 1e-4) {
        // Series in (qw)^2; even in q.
        const cplx z2 = z * z;
        const cplx c = 1.0 - z2 / 2.0 + z2 * z2 / 24.0;
        const cplx s_over_q = w * (1.0 - z2 / 6.0 + z2 * z2 / 120.0);
        return {{c, s_over_q, -q * q * s_over_q, c}, 0.0};
    }
    // exp(+-iz) with |exp(-iz)| = exp(Im z) factored out.
    const double scale = std::max(0.0, z.imag());
    const cplx ep = std::exp(I * z - scale);
    const cplx em = std::exp(-I * z - scale);
    const cplx c = 0.5 * (ep + em);
    const cplx s = (ep - em) / (2.0 * I);
    return {{c, s / q, -q * s, c}, scale};
}

void renormalize(TransferMatrix& t) {
    const double big = t.mantissa.max_abs();
    if (big > 1e100 || (big < 1e-100 && big > 0.0)) {
        int e = 0;
        std::frexp(big, &e);
        t.mantissa = std::ldexp(1.0, -e) * t.mantissa;
        t.log_scale += e * std::log(2.0);
    }
}

void require_heights_below_mass(const BarrierProfile& profile, double m) {
    if (profile.max_height() >= m) {
        throw DomainError("barrier height must stay below m (Klein regime excluded)");
    }
}

} // namespace

double Mat2::max_abs() const {
    return std::max({std::abs(a11), std::abs(a12), std::abs(a21), std::abs(a22)});
}

Mat2 operator*(const Mat2& x, const Mat2& y) {
    return {x.a11 * y.a11 + x.a12 * y.a21, x.a11 * y.a12 + x.a12 * y.a22,
            x.a21 * y.a11 + x.a22 * y.a21, x.a21 * y.a12 + x.a22 * y.a22};
}

Mat2 operator*(cplx s, const Mat2& x) {
    return {s * x.a11, s * x.a12, s * x.a21, s * x.a22};
}

Mat2 TransferMatrix::value() const {
    return std::exp(log_scale) * mantissa;
}

cplx TransferMatrix::det() const {
    return mantissa.det() * std::exp(2.0 * log_scale);
}

cplx branch_sqrt(cplx q2) {
    if (q2.imag() == 0.0) {
        // Avoid the signed-zero trap of std::sqrt on the negative real axis.
        return q2.real() >= 0.0 ? cplx{std::sqrt(q2.real()), 0.0} : cplx{0.0, std::sqrt(-q2.real())};
    }
    cplx q = std::sqrt(q2);
    return q.imag() < 0.0 ? -q : q;
}

TransferMatrix layered_transfer(std::span<const Layer> layers, double k_out) {
    if (!(k_out > 0.0)) {
        throw InputError("outside wavenumber must be positive");
    }
    // Propagate (f, f') from the left edge to the right edge.
    TransferMatrix prop;
    for (const auto& layer : layers) {
        const ScaledStep step = layer_step(layer);
        prop.mantissa = step.mantissa * prop.mantissa;
        prop.log_scale += step.scale;
        renormalize(prop);
    }
    if (!std::isfinite(prop.mantissa.max_abs()) || !std::isfinite(prop.log_scale)) {
        throw NumericalError("transfer matrix overflow: scaled product is not finite");
    }
    // M = W^{-1} P^{-1} W with W = [[1, 1], [ik, -ik]] and det P = 1.
    const Mat2& p = prop.mantissa;
    const Mat2 inv{p.a22, -p.a12, -p.a21, p.a11};
    const cplx ik = I * k_out;
    const Mat2 W{1.0, 1.0, ik, -ik};
    const Mat2 Winv{0.5, 0.5 / ik, 0.5, -0.5 / ik};
    return {Winv * inv * W, prop.log_scale};
}

Transmission edge_coefficients(const TransferMatrix& M) {
    const cplx m11 = M.mantissa.a11;
    if (m11 == 0.0) {
        throw NumericalError("transfer matrix has vanishing M11");
    }
    return {std::exp(-M.log_scale) / m11, M.mantissa.a21 / m11};
}

Transmission global_coefficients(const TransferMatrix& M, double k_out, double width) {
    const Transmission edge = edge_coefficients(M);
    const cplx shift = std::polar(1.0, -k_out * width);
    return {edge.T * shift, edge.R * shift};
}

cplx local_wavenumber(double E, double V, double m) {
    if (!std::isfinite(E) || !std::isfinite(V) || !std::isfinite(m)) {
        throw InputError("local_wavenumber: non-finite input");
    }
    if (m <= 0.0) throw InputError("m must be positive");
    if (E - V <= -m) {
        throw DomainError("E - V <= -m: Klein regime");
    }
    if (E <= m) {
        throw DomainError("incident energy must exceed m");
    }
    if (V < 0.0 || V >= m) {
        throw DomainError("potential must satisfy 0 <= V < m");
    }
    const double p = E - V;
    // (p - m)(p + m) avoids cancellation near the branch point.
    return branch_sqrt(cplx{(p - m) * (p + m), 0.0});
}

TransferMatrix transfer_matrix(const BarrierProfile& profile, double k, double m) {
    if (!(k > 0.0) || !std::isfinite(k)) {
        throw InputError("momentum must be positive");
    }
    require_heights_below_mass(profile, m);
    const double E = energy(k, m);
    std::vector<Layer> layers;
    layers.reserve(profile.segments().size());
    for (const auto& s : profile.segments()) {
        // Zero potential reproduces k exactly rather than sqrt(E^2 - m^2).
        const cplx q = s.height == 0.0 ? cplx{k, 0.0} : local_wavenumber(E, s.height, m);
        layers.push_back({s.width, q});
    }
    return layered_transfer(layers, k);
}

double overlap_w(cplx T, cplx R) {
    const double flux = std::norm(T) + std::norm(R);
    if (std::abs(flux - 1.0) > kUnitarityTol) {
        throw NumericalError("overlap_w: |T|^2 + |R|^2 = " + std::to_string(flux) + " violates unitarity");
    }
    const double w = (T * std::conj(R)).real();
    if (std::abs(w) >= 1.0) {
        throw NumericalError("overlap_w: |w| >= 1");
    }
    return w;
}

cplx barrier_amplitude(cplx T, cplx R, double w) {
    if (!(std::abs(w) < 1.0)) {
        throw DomainError("barrier_amplitude: |w| must be < 1");
    }
    return (T - w * R) / (1.0 - w * w);
}

ScatteringData coefficients(const BarrierProfile& profile, double k, double m) {
    const double d = profile.total_width();
    const Transmission left = global_coefficients(transfer_matrix(profile, k, m), k, d);
    // Right incidence is left incidence on the mirrored profile.
    const Transmission right = global_coefficients(transfer_matrix(profile.reversed(), k, m), k, d);

    ScatteringData out;
    out.k = k;
    out.T = left.T;
    out.R = left.R;
    out.T_right = right.T;
    out.R_right = right.R;
    out.w = overlap_w(left.T, left.R);
    out.A = barrier_amplitude(left.T, left.R, out.w);
    return out;
}

Transmission nonrelativistic_coefficients(const BarrierProfile& profile, double k, double m) {
    if (!(k > 0.0) || !std::isfinite(k)) {
        throw InputError("momentum must be positive");
    }
    if (!(m > 0.0)) throw InputError("m must be positive");
    std::vector<Layer> layers;
    for (const auto& s : profile.segments()) {
        layers.push_back({s.width, branch_sqrt(cplx{k * k - 2.0 * m * s.height, 0.0})});
    }
    return global_coefficients(layered_transfer(layers, k), k, profile.total_width());
}

} // namespace qtime
