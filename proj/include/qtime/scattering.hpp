#pragma once

#include <complex>
#include <span>

#include "qtime/barrier.hpp"

namespace qtime {

using cplx = std::complex<double>;

/// 2x2 complex matrix, row major.
struct Mat2 {
    cplx a11{1.0}, a12{0.0}, a21{0.0}, a22{1.0};

    cplx det() const { return a11 * a22 - a12 * a21; }
    double max_abs() const;
};

Mat2 operator*(const Mat2& x, const Mat2& y);
Mat2 operator*(cplx s, const Mat2& x);

/// Transfer matrix kept as exp(log_scale) * mantissa so that products of
/// evanescent segments stay representable for kappa*d in the hundreds.
///
/// Maps plane-wave amplitudes (a, b) of a e^{ikx} + b e^{-ikx} referenced at
/// the right edge of the barrier to the amplitudes referenced at the left
/// edge. A free region of width d gives diag(e^{-ikd}, e^{ikd}).
struct TransferMatrix {
    Mat2 mantissa;
    double log_scale = 0.0;

    /// Unscaled matrix; overflows for very opaque barriers.
    Mat2 value() const;
    cplx det() const;
};

/// One homogeneous layer of the mode equation  f'' + q^2 f = 0.
struct Layer {
    double width;
    cplx q;  // Im q >= 0
};

/// Wavenumber for a squared wavenumber on the Im q >= 0 branch.
cplx branch_sqrt(cplx q2);

/// Transfer matrix for a stack of layers embedded in a medium of real
/// wavenumber k_out, from continuity of f and f' at every interface.
TransferMatrix layered_transfer(std::span<const Layer> layers, double k_out);

/// Left-incidence transmission/reflection.
struct Transmission {
    cplx T;
    cplx R;
};

/// Coefficients with the asymptotic convention  e^{ikx} + R e^{-ikx}  (x < -d/2),
/// T e^{ikx}  (x > d/2): a zero-potential region has T = 1.
Transmission global_coefficients(const TransferMatrix& M, double k_out, double width);

/// Coefficients referenced at the stack edges: a vacuum stack of width X has T = e^{ikX}.
Transmission edge_coefficients(const TransferMatrix& M);

/// Local wavenumber q = sqrt((E - V)^2 - m^2) of the Klein-Gordon mode equation.
/// Real positive above the local mass gap, i*kappa with kappa > 0 inside it.
cplx local_wavenumber(double E, double V, double m);

TransferMatrix transfer_matrix(const BarrierProfile& profile, double k, double m);

struct ScatteringData {
    double k = 0.0;
    cplx T;        // transmission, left incidence
    cplx R;        // reflection, left incidence
    cplx T_right;  // transmission, right incidence
    cplx R_right;  // reflection, right incidence
    double w = 0.0;
    cplx A;

    double transmission_probability() const { return std::norm(T); }
};

ScatteringData coefficients(const BarrierProfile& profile, double k, double m);

/// w = (T R* + T* R)/2 = Re(T R*). Throws NumericalError if (T, R) violate
/// unitarity or |w| >= 1.
double overlap_w(cplx T, cplx R);

/// A = (T - w R) / (1 - w^2). Throws DomainError for |w| >= 1.
cplx barrier_amplitude(cplx T, cplx R, double w);

/// Schroedinger-equation coefficients for the same profile: q^2 = k^2 - 2 m V.
/// Heights are not restricted to V < m here.
Transmission nonrelativistic_coefficients(const BarrierProfile& profile, double k, double m);

} // namespace qtime
