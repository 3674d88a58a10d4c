#pragma once

#include <cstddef>
#include <vector>

namespace qtime {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule mapped onto [a, b], nodes ascending.
QuadratureRule gauss_legendre(std::size_t n, double a, double b);

/// Trapezoid rule on uniformly spaced samples.
double trapezoid(const std::vector<double>& values, double spacing);

} // namespace qtime
