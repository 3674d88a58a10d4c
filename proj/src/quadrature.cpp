#include "qtime/quadrature.hpp"

#include <gsl/gsl_integration.h>

#include <algorithm>
#include <memory>
#include <numeric>

#include "qtime/errors.hpp"

namespace qtime {

QuadratureRule gauss_legendre(std::size_t n, double a, double b) {
    if (n < 2) {
        throw InputError("quadrature needs at least 2 nodes");
    }
    std::unique_ptr<gsl_integration_glfixed_table, decltype(&gsl_integration_glfixed_table_free)> table(
        gsl_integration_glfixed_table_alloc(n), &gsl_integration_glfixed_table_free);
    if (!table) {
        throw NumericalError("failed to build Gauss-Legendre table");
    }
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        gsl_integration_glfixed_point(a, b, i, &rule.nodes[i], &rule.weights[i], table.get());
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return rule.nodes[x] < rule.nodes[y]; });
    QuadratureRule sorted;
    for (std::size_t i : order) {
        sorted.nodes.push_back(rule.nodes[i]);
        sorted.weights.push_back(rule.weights[i]);
    }
    return sorted;
}

double trapezoid(const std::vector<double>& values, double spacing) {
    if (values.size() < 2) {
        return 0.0;
    }
    double sum = 0.5 * (values.front() + values.back());
    for (std::size_t i = 1; i + 1 < values.size(); ++i) {
        sum += values[i];
    }
    return sum * spacing;
}

} // namespace qtime
