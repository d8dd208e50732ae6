#include <gtest/gtest.h>

#include "sphwav/transform.hpp"

using namespace sphwav;

namespace
{
double rel_error(const CoefficientTable& a, const CoefficientTable& b)
{
    double num = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        num += std::norm(a.data()[i] - b.data()[i]);
    return std::sqrt(num / b.norm_squared());
}

double max_abs(const TransformCoefficients& t)
{
    double m = 0.0;
    for (const auto& v : t.values)
        for (const complex& x : v)
            m = std::max(m, std::abs(x));
    return m;
}

FrameLayout small_layout(Family fam = Family::Omega, int L = 8, double d = 0.6, double tau = 2.0)
{
    return make_uniform_layout(fam, L, make_scale_sequence(1.0, 0.5, 1), make_so3_grid(d, d), tau);
}
} // namespace

TEST(Transform, KillsConstants)
{
    for (auto fam : {Family::Omega, Family::Upsilon})
    {
        const WaveletFrame frame(small_layout(fam));
        CoefficientTable c(8);
        c(0, 0) = 3.0;
        EXPECT_LT(max_abs(frame.analyze(c)), 1e-15);
    }
}

TEST(Transform, ZeroInZeroOut)
{
    const WaveletFrame frame(small_layout());
    const auto t = frame.analyze(CoefficientTable(8));
    EXPECT_EQ(max_abs(t), 0.0);
    const auto r = frame.reconstruct(t);
    EXPECT_EQ(r.coefficients.norm_squared(), 0.0);
}

TEST(Transform, HarmonicAndSpatialPathsAgree)
{
    const auto layout = make_uniform_layout(Family::Omega, 8, make_scale_sequence(1.0, 0.5, 1),
                                            make_so3_grid(1.0, 1.5), 2.0);
    const WaveletFrame frame(layout);
    const auto f = frame.random_coefficients(7);
    const auto a = frame.analyze(f), b = forward_transform_spatial(f, layout, 96);
    double d = 0.0;
    for (std::size_t j = 0; j < a.values.size(); ++j)
        for (std::size_t i = 0; i < a.values[j].size(); ++i)
            d = std::max(d, std::abs(a.values[j][i] - b.values[j][i]));
    EXPECT_LT(d, 1e-10 * max_abs(a));
}

TEST(Transform, SignalEntryPoint)
{
    const WaveletFrame frame(small_layout());
    const auto f = frame.random_coefficients(2);
    const auto s = synthesize_signal(f, SphericalGridSpec::for_band(8));
    const auto a = forward_transform(s, frame), b = frame.analyze(f);
    double d = 0.0;
    for (std::size_t j = 0; j < a.values.size(); ++j)
        for (std::size_t i = 0; i < a.values[j].size(); ++i)
            d = std::max(d, std::abs(a.values[j][i] - b.values[j][i]));
    EXPECT_LT(d, 1e-12 * max_abs(b));
}

TEST(FrameOperator, AdjointIdentityAndPositivity)
{
    const WaveletFrame frame(small_layout());
    for (std::uint64_t s = 1; s <= 5; ++s)
    {
        const auto f = frame.random_coefficients(s);
        const double q = inner_product(f, frame.apply(f)).real();
        const double e = frame.analyze(f).weighted_energy();
        EXPECT_GE(q, 0.0);
        EXPECT_NEAR(q, e, 1e-10 * e);
        EXPECT_NEAR(inner_product(f, frame.apply(f)).imag(), 0.0, 1e-10 * e);
    }
}

TEST(FrameOperator, EmpiricalBounds)
{
    const WaveletFrame frame(small_layout(Family::Omega, 8, 0.4));
    const auto [lo, hi] = sample_frame_bounds(frame, 50, 100);
    EXPECT_GT(lo, 0.0);
    EXPECT_GE(hi, lo);
    const auto [plo, phi] = frame.preconditioned_bounds();
    EXPECT_GT(plo, 0.0);
    EXPECT_GT(phi, plo);
}

TEST(Reconstruction, RoundTripBothSolvers)
{
    const WaveletFrame frame(small_layout(Family::Omega, 8, 0.4));
    const auto f = frame.random_coefficients(17);
    const auto t = frame.analyze(f);
    FrameOperatorConfig cg;
    const auto a = frame.reconstruct(t, cg);
    EXPECT_LT(rel_error(a.coefficients, f), 1e-6);
    FrameOperatorConfig rich;
    rich.solver = FrameSolver::Richardson;
    rich.tolerance = 1e-8;
    rich.max_iterations = 5000;
    const auto b = frame.reconstruct(t, rich);
    EXPECT_LT(rel_error(b.coefficients, f), 1e-5);
}

TEST(Reconstruction, UpsilonMasksDegreeOne)
{
    const WaveletFrame frame(small_layout(Family::Upsilon, 8, 0.4));
    const auto f = frame.random_coefficients(4);
    for (int k = -1; k <= 1; ++k)
        EXPECT_EQ(f(1, k), complex(0.0));
    const auto r = frame.reconstruct(frame.analyze(f));
    EXPECT_LT(rel_error(r.coefficients, f), 1e-6);
}

TEST(Reconstruction, DensitySweepImprovesQuasiInverse)
{
    const auto scales = make_scale_sequence(1.0, 0.5, 1);
    double prev = 1e300;
    for (double d : {0.7, 0.5, 0.35})
    {
        const WaveletFrame frame(make_uniform_layout(Family::Omega, 8, scales, make_so3_grid(d, d), 1.0));
        const auto f = frame.random_coefficients(3);
        const double e = rel_error(frame.quasi_inverse(frame.analyze(f)), f);
        EXPECT_LT(e, prev) << d;
        prev = e;
    }
}

TEST(Reconstruction, NonConvergenceReported)
{
    const WaveletFrame frame(small_layout(Family::Omega, 8, 0.4));
    const auto t = frame.analyze(frame.random_coefficients(5));
    FrameOperatorConfig c;
    c.max_iterations = 1;
    c.tolerance = 1e-14;
    EXPECT_THROW(frame.reconstruct(t, c), NumericalError);
}

TEST(Rotation, CoefficientsMatchPullback)
{
    const int L = 6;
    const auto g = make_rotation(0.4, 1.1, 2.3);
    CoefficientTable h(L);
    h(3, 1) = complex(0.2, -0.5);
    h(5, -2) = 1.0;
    const auto rotated = rotated_coefficients(h, g);
    const auto s = SphericalSignal::sample(
        SphericalGridSpec::for_band(L),
        [&](double t, double p)
        {
            const auto [tt, pp] = to_angles(g.inverse(to_point(t, p)));
            return evaluate(h, tt, pp);
        },
        ValueKind::Complex);
    EXPECT_LT(rel_error(analyze_signal(s, L), rotated), 1e-12);
}

TEST(Layout, Validation)
{
    auto layout = small_layout();
    layout.layers[0].tau.pop_back();
    EXPECT_THROW(layout.layers[0].finalize(), ConfigError);
    EXPECT_THROW(FrameOperatorConfig{0}.validate(), ConfigError);
}
