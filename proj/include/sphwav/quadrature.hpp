#ifndef SPHWAV_QUADRATURE_HPP
#define SPHWAV_QUADRATURE_HPP

#include <cmath>
#include <cstddef>
#include <numbers>
#include <utility>
#include <vector>

#include "error.hpp"

namespace sphwav
{

struct QuadratureRule
{
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t size() const noexcept { return nodes.size(); }

    template < typename F >
    double integrate(F&& f) const
    {
        double sum = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i)
            sum += weights[i] * f(nodes[i]);
        return sum;
    }
};

namespace detail
{
/// P_n(x) and P_n'(x) by the three-term recurrence.
inline std::pair< double, double > legendre_with_derivative(std::size_t n, double x)
{
    double p0 = 1.0, p1 = x;
    for (std::size_t k = 2; k <= n; ++k)
    {
        const double kd = static_cast< double >(k);
        const double p2 = ((2.0 * kd - 1.0) * x * p1 - (kd - 1.0) * p0) / kd;
        p0 = p1;
        p1 = p2;
    }
    const double nd = static_cast< double >(n);
    return {p1, nd * (x * p1 - p0) / (x * x - 1.0)};
}
} // namespace detail

/// n-point Gauss-Legendre rule on [-1, 1], nodes ascending.
/// Exact for polynomials of degree <= 2n - 1.
inline QuadratureRule gauss_legendre(std::size_t n)
{
    if (n == 0)
        throw DomainError("gauss_legendre: node count must be positive");

    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const double nd = static_cast< double >(n);
    for (std::size_t i = 0; i < (n + 1) / 2; ++i)
    {
        // Tricomi initial guess, then Newton on P_n
        double x = std::cos(std::numbers::pi * (static_cast< double >(i) + 0.75) / (nd + 0.5));
        for (int iter = 0; iter < 100; ++iter)
        {
            const auto [p, dp] = detail::legendre_with_derivative(n, x);
            const double dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16)
                break;
        }
        const double dp = detail::legendre_with_derivative(n, x).second;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1)
        rule.nodes[n / 2] = 0.0;
    return rule;
}

/// Gauss-Legendre rule mapped onto [a, b].
inline QuadratureRule gauss_legendre(std::size_t n, double a, double b)
{
    QuadratureRule rule = gauss_legendre(n);
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (b + a);
    for (std::size_t i = 0; i < n; ++i)
    {
        rule.nodes[i] = mid + half * rule.nodes[i];
        rule.weights[i] *= half;
    }
    return rule;
}

} // namespace sphwav

#endif
