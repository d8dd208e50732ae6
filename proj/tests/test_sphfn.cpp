#include <gtest/gtest.h>

#include <random>

#include "sphwav/quadrature.hpp"
#include "sphwav/sphfn.hpp"

using namespace sphwav;

TEST(Legendre, LowDegreeValues)
{
    EXPECT_DOUBLE_EQ(legendre_P(0, 0.3), 1.0);
    EXPECT_DOUBLE_EQ(legendre_P(1, 0.5), 0.5);
    EXPECT_NEAR(legendre_P(2, 0.5), -0.125, 1e-15);
    EXPECT_THROW(legendre_P(-1, 0.1), DomainError);
    EXPECT_THROW(legendre_P(2, 1.5), DomainError);
}

TEST(Legendre, AssociatedValues)
{
    EXPECT_NEAR(assoc_legendre_P(1, 1, 0.0), -1.0, 1e-15);
    EXPECT_NEAR(assoc_legendre_P(2, 1, 0.0), 0.0, 1e-15);
    for (int l = 1; l <= 8; ++l)
        for (int k = 1; k <= l; ++k)
        {
            EXPECT_NEAR(assoc_legendre_P(l, k, 1.0), 0.0, 1e-15);
            EXPECT_NEAR(assoc_legendre_P(l, k, -1.0), 0.0, 1e-15);
        }
    EXPECT_THROW(assoc_legendre_P(2, 3, 0.1), DomainError);
}

TEST(Legendre, NormalizedTableMatchesDirect)
{
    const int L = 30;
    std::vector< double > tab(triangle_size(L));
    normalized_legendre_table(L, 0.37, tab);
    for (int l = 0; l <= L; l += 7)
        for (int k = 0; k <= l; k += 3)
            EXPECT_NEAR(tab[triangle_index(l, k)], normalized_legendre(l, k, 0.37), 1e-13);
}

TEST(Harmonics, KnownValues)
{
    EXPECT_NEAR(std::abs(spherical_harmonic({0, 0}, 1.2, 0.4) - 1.0 / std::sqrt(4 * pi)), 0.0, 1e-15);
    EXPECT_NEAR(spherical_harmonic({1, 0}, 0.0, 2.0).real(), std::sqrt(3.0 / (4 * pi)), 1e-15);
    // Y^{-k} = conj(Y^k)
    const complex a = spherical_harmonic({4, 3}, 0.7, 1.1), b = spherical_harmonic({4, -3}, 0.7, 1.1);
    EXPECT_NEAR(std::abs(a - std::conj(b)), 0.0, 1e-15);
    EXPECT_THROW(spherical_harmonic({2, 3}, 0.1, 0.1), IndexError);
}

TEST(Harmonics, OrthonormalOnGrid)
{
    const auto spec = SphericalGridSpec::for_band(6);
    const auto y = SphericalSignal::sample(
        spec, [](double t, double p) { return spherical_harmonic({5, 3}, t, p); }, ValueKind::Complex);
    EXPECT_NEAR(y.norm_squared(), 1.0, 1e-12);
}

TEST(Quadrature, GaussLegendre)
{
    const auto one = make_colat_grid(1);
    ASSERT_EQ(one.size(), 1u);
    EXPECT_NEAR(one.theta[0], pi / 2, 1e-15);
    EXPECT_NEAR(one.weights[0], 2.0, 1e-15);

    const auto g = make_colat_grid(16);
    double s = 0.0, p = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
    {
        s += g.weights[i];
        p += g.weights[i] * legendre_P(7, g.cos_theta[i]) * legendre_P(7, g.cos_theta[i]);
    }
    EXPECT_NEAR(s, 2.0, 1e-14);
    EXPECT_NEAR(p, 2.0 / 15.0, 1e-14);
}

TEST(Analysis, ConstantSignal)
{
    const auto spec = SphericalGridSpec::for_band(8);
    const auto f = SphericalSignal::sample(spec, [](double, double) { return complex(1.0, 0.0); });
    const auto c = analyze_signal(f, 8);
    EXPECT_NEAR(c(0, 0).real(), std::sqrt(4 * pi), 1e-12);
    for (int l = 1; l <= 8; ++l)
        for (int k = -l; k <= l; ++k)
            EXPECT_LT(std::abs(c(l, k)), 1e-12);
}

TEST(Analysis, RealPartOfHarmonic)
{
    const auto spec = SphericalGridSpec::for_band(5);
    const auto f = SphericalSignal::sample(spec,
                                           [](double t, double p)
                                           { return complex(spherical_harmonic({3, 2}, t, p).real(), 0.0); });
    const auto c = analyze_signal(f, 5);
    EXPECT_NEAR(std::abs(c(3, 2) - 0.5), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(c(3, -2) - 0.5), 0.0, 1e-12);
    for (int l = 0; l <= 5; ++l)
        for (int k = -l; k <= l; ++k)
            if (!(l == 3 && std::abs(k) == 2))
                EXPECT_LT(std::abs(c(l, k)), 1e-12);
}

TEST(Analysis, RoundTrip)
{
    const int L = 12;
    std::mt19937_64 rng(5);
    std::normal_distribution< double > g;
    CoefficientTable c(L);
    for (complex& v : c.data())
        v = {g(rng), g(rng)};
    const auto f = synthesize_signal(c, SphericalGridSpec::for_band(L));
    const auto back = analyze_signal(f, L);
    double err = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i)
        err += std::norm(back.data()[i] - c.data()[i]);
    EXPECT_LT(std::sqrt(err / c.norm_squared()), 1e-10);
}

TEST(Synthesis, DeltaAndConjugatePair)
{
    CoefficientTable c(3);
    c(0, 0) = std::sqrt(4 * pi);
    const auto f = synthesize_signal(c, SphericalGridSpec::for_band(3));
    for (const complex& v : f.values())
        EXPECT_NEAR(std::abs(v - 1.0), 0.0, 1e-13);

    CoefficientTable d(3);
    d(1, 1) = complex(0.3, 0.7);
    d(1, -1) = std::conj(d(1, 1));
    const auto g = synthesize_signal(d, SphericalGridSpec::for_band(3));
    EXPECT_EQ(g.kind(), ValueKind::Real);
    EXPECT_NEAR(std::abs(evaluate(d, 0.4, 1.3).imag()), 0.0, 1e-15);
}

TEST(Analysis, AliasingGridRejected)
{
    const SphericalGridSpec small{4, 3, 9};
    SphericalSignal f(small);
    EXPECT_THROW(analyze_signal(f, 4), NumericalError);
}

TEST(CoefficientTable, Indexing)
{
    CoefficientTable c(4);
    EXPECT_EQ(c.size(), 25u);
    EXPECT_THROW(c(2, 3), IndexError);
    EXPECT_THROW(c(5, 0), IndexError);
    EXPECT_THROW(CoefficientTable(-1), DomainError);
    c(3, 1) = 2.0;
    c.zero_low_degrees(3);
    EXPECT_EQ(c(3, 1), complex(0.0));
    EXPECT_EQ(c.resized(2).band_limit(), 2);
}
