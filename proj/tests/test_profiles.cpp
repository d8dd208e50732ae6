#include <gtest/gtest.h>

#include <random>

#include "sphwav/profiles.hpp"

using namespace sphwav;

namespace
{
double rel(double a, double b)
{
    return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

double p_rho_fd(double rho, double theta, int order)
{
    // r d/dr [r d/dr p] (order 1) or r^2 d^2/dr^2 p (order 2), with p as a function of r
    const double r = std::exp(-rho), h = order == 2 ? 1e-4 : 1e-5;
    auto p = [&](double rr) { return poisson_kernel(-std::log(rr), theta); };
    if (order == 2)
        return r * r * (p(r + h) - 2 * p(r) + p(r - h)) / (h * h);
    auto rdp = [&](double rr) { return rr * (p(rr + h) - p(rr - h)) / (2 * h); };
    return r * (rdp(r + h) - rdp(r - h)) / (2 * h);
}
} // namespace

TEST(AngularProfile, ClosedValues)
{
    for (double tau : {1.0, 2.0, 8.0})
        EXPECT_NEAR(F_tau(tau, 0.0), 1.0 - std::exp(-tau * tau * pi * pi / 2), 1e-15);
    EXPECT_NEAR(F_tau(2.0, pi), std::exp(-2 * pi * pi) - 1.0, 1e-15);
    for (double tau : {1.0, 3.0, 16.0})
        EXPECT_NEAR(f_tau(tau, pi / 2), 0.0, 1e-14);
}

TEST(AngularProfile, Antiperiodic)
{
    std::mt19937_64 rng(1);
    std::uniform_real_distribution< double > u(-pi, pi), t(1.0, 16.0);
    for (int i = 0; i < 100; ++i)
    {
        const double a = t(rng), p = u(rng);
        EXPECT_NEAR(f_tau(a, p) + f_tau(a, p + pi), 0.0, 1e-14);
    }
}

TEST(AngularProfile, SeriesAgrees)
{
    EXPECT_NEAR(f_tau(1.0, 0.0), f_tau_series(1.0, 0.0, 25), 1e-14);
    for (double tau : {1.0, 4.0, 16.0})
        for (double p : {0.1, 1.0, 2.5})
            EXPECT_NEAR(f_tau(tau, p), f_tau_series(tau, p, default_k_cut(tau)), 1e-12);
}

TEST(AngularProfile, FourierCoefficients)
{
    EXPECT_NEAR(f_tau_coefficient(1.0, 1), 2 * std::sqrt(2 * pi) * std::exp(-0.5), 1e-14);
    EXPECT_NEAR(f_tau_coefficient(1.0, 1), 3.0406938, 1e-7);
    EXPECT_EQ(f_tau_coefficient(3.0, 2), 0.0);
    EXPECT_NEAR(f_tau_coefficient(4.0, 3), 2 * std::sqrt(2 * pi) / 4 * std::exp(-9.0 / 32), 1e-14);

    // quadrature of int f_tau e^{-ik phi}, and of int f_tau
    const int n = 4096;
    for (double tau : {1.0, 4.0})
        for (int k : {0, 1, 3})
        {
            double re = 0.0;
            for (int i = 0; i < n; ++i)
            {
                const double p = 2 * pi * i / n;
                re += f_tau(tau, p) * std::cos(k * p);
            }
            re *= 2 * pi / n;
            EXPECT_NEAR(re, f_tau_coefficient(tau, k), 1e-10);
        }
}

TEST(AngularProfile, DerivativeMatchesDifference)
{
    for (double tau : {1.0, 8.0})
        for (double p : {0.05, 0.7, 2.0})
        {
            const double h = 1e-6;
            EXPECT_NEAR(f_tau_derivative(tau, p), (f_tau(tau, p + h) - f_tau(tau, p - h)) / (2 * h),
                        1e-6 * (1 + std::abs(f_tau_derivative(tau, p))));
        }
}

TEST(Poisson, ClosedFormChecks)
{
    for (double rho : {0.2, 1.0})
    {
        const double r = std::exp(-rho);
        EXPECT_NEAR(rel(poisson_kernel(rho, 0.0), (1 + r) / ((1 - r) * (1 - r)) / (4 * pi)), 0.0, 1e-13);
        // integral over the sphere by Gauss-Legendre in cos(theta)
        const auto q = gauss_legendre(400);
        double s = 0.0;
        for (std::size_t i = 0; i < q.size(); ++i)
            s += q.weights[i] * poisson_kernel(rho, std::acos(q.nodes[i]));
        EXPECT_NEAR(2 * pi * s, 1.0, 1e-12);
    }
    std::mt19937_64 rng(3);
    std::uniform_real_distribution< double > ur(0.05, 5.0), ut(0.0, pi);
    for (int i = 0; i < 50; ++i)
    {
        const double rho = ur(rng), t = ut(rng);
        EXPECT_NEAR(poisson_kernel(rho, t), poisson_kernel_series(rho, t), 1e-12);
    }
}

TEST(RadialProfiles, PolesVanish)
{
    for (auto fam : {Family::Omega, Family::Upsilon})
        for (double rho : {0.1, 1.0, 3.0})
        {
            EXPECT_EQ(radial_profile(fam, rho, 0.0), 0.0);
            EXPECT_NEAR(radial_profile(fam, rho, pi), 0.0, 1e-15);
        }
}

TEST(RadialProfiles, DualFormulas)
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution< double > ur(0.05, 5.0), ut(0.01, pi - 0.01);
    double worst = 0.0;
    for (int i = 0; i < 200; ++i)
    {
        const double rho = ur(rng), t = ut(rng);
        for (auto fam : {Family::Omega, Family::Upsilon})
        {
            const double a = radial_profile(fam, rho, t), b = radial_profile_series(fam, rho, t);
            worst = std::max(worst, std::abs(a - b) / std::max(std::abs(b), 1e-300));
        }
    }
    EXPECT_LT(worst, 1e-10);
}

TEST(RadialProfiles, OperatorDefinition)
{
    // omega = r d/dr [r d/dr p] rho sin^5 ; upsilon = r^2 d^2/dr^2 p rho sin^5
    for (double rho : {0.5, 1.0, 2.0})
        for (double t : {0.3, 1.0, 2.0})
        {
            const double s5 = std::pow(std::sin(t), 5);
            EXPECT_LT(rel(omega_profile(rho, t), p_rho_fd(rho, t, 1) * rho * s5), 1e-5);
            EXPECT_LT(rel(upsilon_profile(rho, t), p_rho_fd(rho, t, 2) * rho * s5), 1e-5);
        }
}

TEST(RadialProfiles, DerivativeMatchesDifference)
{
    for (auto fam : {Family::Omega, Family::Upsilon})
        for (double rho : {0.1, 1.0})
            for (double t : {0.05, 0.5, 2.0})
            {
                const double h = 1e-6 * std::max(rho, 0.1);
                const double fd = (radial_profile(fam, rho, t + h) - radial_profile(fam, rho, t - h)) / (2 * h);
                EXPECT_NEAR(radial_profile_derivative(fam, rho, t), fd,
                            1e-5 * (1 + std::abs(fd)));
            }
}

TEST(RadialProfiles, RangeChecks)
{
    EXPECT_THROW(omega_profile(1e-6, 0.3), DomainError);
    EXPECT_THROW((WaveletSpec{Family::Omega, 1.0, 0.5}.validate()), DomainError);
    EXPECT_THROW((WaveletSpec{Family::Omega, 1.0, 20.0}.validate(16.0)), DomainError);
    EXPECT_THROW(parse_family("gamma"), ConfigError);
}

TEST(Sin5, LeadingCoefficient)
{
    EXPECT_NEAR(sin5_expansion(4)[0], 24.0 / 105.0, 1e-15);
    EXPECT_THROW(sin5_expansion(3), DomainError);
}

TEST(Sin5, PointwiseIdentity)
{
    std::mt19937_64 rng(2);
    std::uniform_real_distribution< double > ut(0.0, pi);
    for (int l = 4; l <= 12; ++l)
    {
        const auto c = sin5_expansion(l);
        for (int i = 0; i < 20; ++i)
        {
            const double t = ut(rng), x = std::cos(t);
            double rhs = 0.0;
            for (int q = 0; q < 6; ++q)
            {
                const int n = l - 5 + 2 * q;
                if (n >= 1)
                    rhs += c[static_cast< std::size_t >(q)] * assoc_legendre_P(n, 1, x);
            }
            EXPECT_NEAR((2 * l + 1) * std::pow(std::sin(t), 5) * legendre_P(l, x), rhs, 1e-10) << "l=" << l;
        }
    }
}

TEST(Sin5, ProjectionAgrees)
{
    for (int l = 4; l <= 12; ++l)
    {
        const auto c = sin5_expansion(l);
        for (int q = 0; q < 6; ++q)
        {
            const int n = l - 5 + 2 * q;
            if (n >= 1)
                EXPECT_NEAR(c[static_cast< std::size_t >(q)], (2 * l + 1) * detail::sin5_projection(l, n), 1e-12);
        }
    }
}

TEST(P1Coefficients, ClosedVersusProjection)
{
    for (auto fam : {Family::Omega, Family::Upsilon})
        for (double r : {0.1, 0.5, 0.9})
            for (int l = 9; l <= 40; ++l)
            {
                const double a = detail::radial_p1_coefficient_closed(fam, l, r);
                const double b = radial_p1_coefficient_projection(fam, l, r);
                EXPECT_LT(rel(a, b), 1e-8) << to_string(fam) << " l=" << l << " r=" << r;
            }
}

TEST(P1Coefficients, ProfileQuadratureOracle)
{
    // beta_l = (2l+1)(l-1)!/(2(l+1)!) int (4pi/rho) omega P_l^1 sin
    const auto q = gauss_legendre(800);
    for (auto [fam, l, r] : {std::tuple{Family::Omega, 12, 0.5}, std::tuple{Family::Upsilon, 10, 0.3}})
    {
        const double rho = -std::log(r);
        double acc = 0.0;
        for (std::size_t i = 0; i < q.size(); ++i)
            acc += q.weights[i] * 4 * pi / rho * radial_profile(fam, rho, std::acos(q.nodes[i])) *
                   assoc_legendre_P(l, 1, q.nodes[i]);
        const double oracle = (2 * l + 1) * std::exp(std::lgamma(l) - std::lgamma(l + 2.0)) / 2 * acc;
        EXPECT_LT(rel(radial_p1_coefficient(fam, l, r), oracle), 1e-8);
    }
}

TEST(P1Coefficients, SmallDegreesAndLimits)
{
    EXPECT_NE(beta_l(3, 0.5), 0.0);
    EXPECT_NE(gamma_l(2, 0.5), 0.0);
    EXPECT_LT(std::abs(beta_l(12, 1e-3)), 1e-20);
    EXPECT_LT(std::abs(gamma_l(12, 1e-3)), 1e-20);
    EXPECT_THROW(beta_l(0, 0.5), DomainError);
}

TEST(P1Coefficients, ExpansionReproducesProfiles)
{
    for (auto fam : {Family::Omega, Family::Upsilon})
        for (double rho : {0.3, 1.0, 2.5})
        {
            const auto e = radial_legendre_expansion(fam, rho);
            for (double t : {0.1, 0.7, 1.6, 2.8})
                EXPECT_NEAR(e.evaluate(t), radial_profile(fam, rho, t), 1e-9);
        }
}

TEST(Wavelet, SymmetryAndZeros)
{
    const WaveletSpec s{Family::Omega, 0.7, 3.0};
    EXPECT_NEAR(evaluate_wavelet(s, 1.0, pi / 2), 0.0, 1e-15);
    EXPECT_EQ(evaluate_wavelet(s, 0.0, 0.3), 0.0);
    EXPECT_NEAR(evaluate_wavelet(s, pi, 0.3), 0.0, 1e-15);
    EXPECT_NEAR(evaluate_wavelet(s, 0.8, 0.4), -evaluate_wavelet(s, 0.8, 0.4 + pi), 1e-15);
}
