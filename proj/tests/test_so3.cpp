#include <gtest/gtest.h>

#include <random>

#include "sphwav/profiles.hpp"
#include "sphwav/so3.hpp"

using namespace sphwav;

namespace
{
double max_abs_diff(const Mat3& a, const Mat3& b)
{
    double d = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            d = std::max(d, std::abs(a[i][j] - b[i][j]));
    return d;
}

// independent per-plane builder: rotation by `a` in the (ξ_p, ξ_q) plane
Mat3 plane(int p, int q, double a)
{
    Mat3 m{};
    for (int i = 0; i < 3; ++i)
        m[i][i] = 1.0;
    m[p][p] = std::cos(a);
    m[q][q] = std::cos(a);
    m[p][q] = -std::sin(a);
    m[q][p] = std::sin(a);
    return m;
}
} // namespace

TEST(Rotation, Identity)
{
    const auto g = make_rotation(0, 0, 0);
    Mat3 id{};
    for (int i = 0; i < 3; ++i)
        id[i][i] = 1.0;
    EXPECT_LT(max_abs_diff(g.matrix, id), 1e-15);
}

TEST(Rotation, CarrierPlacement)
{
    const double t = 0.9;
    const auto [th, ph] = to_angles(make_rotation(0, t, 0).carrier());
    EXPECT_NEAR(th, t, 1e-14);
    EXPECT_NEAR(ph, 0.0, 1e-14);
    const auto [th2, ph2] = to_angles(make_rotation(1.3, 0.4, 2.2).carrier());
    EXPECT_NEAR(th2, 0.4, 1e-14);
    EXPECT_NEAR(ph2, 2.2, 1e-14);
}

TEST(Rotation, ProductOfElementaryMatrices)
{
    const double a = 0.3, b = 1.1, c = -2.0;
    const Mat3 expect = multiply(plane(1, 2, c), multiply(plane(0, 1, b), plane(1, 2, a)));
    EXPECT_LT(max_abs_diff(make_rotation(a, b, c).matrix, expect), 1e-14);
}

TEST(Rotation, Pullback)
{
    auto psi = [](double t, double p) { return evaluate_wavelet({Family::Omega, 0.5, 2.0}, t, p); };
    const auto id = rotate_signal_pullback(make_rotation(0, 0, 0), psi);
    const auto g = make_rotation(0.7, 1.2, 0.4);
    const auto there = rotate_signal_pullback(g, psi);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution< double > ut(0.05, pi - 0.05), up(0, 2 * pi);
    for (int i = 0; i < 50; ++i)
    {
        const double t = ut(rng), p = up(rng);
        EXPECT_NEAR(id(t, p), psi(t, p), 1e-14);
        // g then g^{-1}
        const auto [t1, p1] = to_angles(g.forward(to_point(t, p)));
        EXPECT_NEAR(there(t1, p1), psi(t, p), 1e-12);
    }
}

TEST(Rotation, ZonalInvariantUnderAxialAngle)
{
    auto p = [](double t, double) { return poisson_kernel(0.6, t); };
    const auto a = rotate_signal_pullback(make_rotation(0.0, 1.0, 0.5), p);
    const auto b = rotate_signal_pullback(make_rotation(2.1, 1.0, 0.5), p);
    for (double t : {0.2, 1.0, 2.5})
        for (double ph : {0.0, 1.0, 4.0})
            EXPECT_NEAR(a(t, ph), b(t, ph), 1e-12);
}

TEST(Wigner, RecurrenceMatchesDirect)
{
    for (double beta : {0.0, 0.7, pi / 2, 2.9})
    {
        const WignerTable W(12, 12, beta);
        double d = 0.0;
        for (int l = 0; l <= 12; ++l)
            for (int m = -l; m <= l; ++m)
                for (int k = -l; k <= l; ++k)
                    d = std::max(d, std::abs(W(l, m, k) - wigner_d_direct(l, m, k, beta)));
        // the explicit sum loses ~3 digits to cancellation near beta = pi/2
        EXPECT_LT(d, 1e-11) << beta;
    }
}

TEST(Wigner, Orthogonality)
{
    const WignerTable W(20, 20, 1.234);
    for (int l : {5, 20})
        for (int m = -l; m <= l; m += 3)
            for (int m2 = -l; m2 <= l; m2 += 4)
            {
                double s = 0.0;
                for (int k = -l; k <= l; ++k)
                    s += W(l, m, k) * W(l, m2, k);
                EXPECT_NEAR(s, m == m2 ? 1.0 : 0.0, 1e-12);
            }
}

TEST(Wigner, IndexChecks)
{
    const WignerTable W(6, 3, 0.5);
    EXPECT_THROW(W(7, 0, 0), IndexError);
    EXPECT_THROW(W(5, 0, 4), IndexError);
}

TEST(Scales, Sequence)
{
    const auto s = make_scale_sequence(1.0, 0.5, 3);
    ASSERT_EQ(s.size(), 4u);
    const std::vector< double > expect{1, 0.5, 0.25, 0.125};
    for (std::size_t j = 0; j < 4; ++j)
        EXPECT_DOUBLE_EQ(s.rho[j], expect[j]);
    EXPECT_LT(s.rho[0] / s.rho[1], ScaleConstraints{}.X);
    EXPECT_EQ(make_scale_sequence(1.0, 0.5, 0).size(), 1u);
    EXPECT_NEAR(s.weight(2), std::log(2.0), 1e-15);
    EXPECT_THROW(make_scale_sequence(1.0, 0.2, 2), ConfigError); // ratio 5 >= X
    EXPECT_THROW(make_scale_sequence(-1.0, 0.5, 2), ConfigError);
    EXPECT_THROW(make_scale_sequence({1.0, 0.5, 0.2}), ConfigError);
}

TEST(Grid, CoarsePartition)
{
    const auto g = make_so3_grid(pi, 2 * pi - 1e-3);
    EXPECT_LE(g.carrier_count(), 16u);
    EXPECT_NEAR(g.total_measure(), 4 * pi, 1e-12);
    EXPECT_EQ(g.cells[0].n_axial, 2u);
}

TEST(Grid, DiameterBound)
{
    const double d2 = 0.3;
    const auto g = make_so3_grid(d2, 0.5);
    EXPECT_NEAR(g.total_measure(), 4 * pi, 1e-11);
    // dense independent sampling of each band's first cell, corners and edges included
    double worst = 0.0;
    for (const auto& b : g.bands)
    {
        const double dphi = 2 * pi / static_cast< double >(b.n_cells);
        std::vector< Vec3 > pts;
        const int n = 40;
        for (int i = 0; i <= n; ++i)
            for (int j = 0; j <= n; ++j)
                if (i == 0 || j == 0 || i == n || j == n)
                    pts.push_back(to_point(b.theta_a + (b.theta_b - b.theta_a) * i / n, dphi * j / n));
        for (std::size_t i = 0; i < pts.size(); ++i)
            for (std::size_t j = i + 1; j < pts.size(); ++j)
                worst = std::max(worst, geodesic_distance(pts[i], pts[j]));
    }
    EXPECT_LE(worst, d2 * (1 + 1e-3));
}

TEST(Grid, RefinementScaling)
{
    const auto a = make_so3_grid(0.4, 1.0), b = make_so3_grid(0.2, 1.0);
    const double ratio = static_cast< double >(b.carrier_count()) / static_cast< double >(a.carrier_count());
    EXPECT_GT(ratio, 2.0);
    EXPECT_LT(ratio, 8.0);
}

TEST(Grid, AxialAngles)
{
    auto g = make_so3_grid(1.0, 0.5);
    const std::size_t n = g.cells[3].n_axial;
    EXPECT_EQ(n, axial_count(0.5));
    EXPECT_NEAR(g.axial_angle(3, 1), 2 * pi / static_cast< double >(n), 1e-15);
    g.set_axial_bound(3, 2.0);
    EXPECT_EQ(g.cells[3].n_axial, 4u);
    EXPECT_THROW(make_so3_grid(0.0, 1.0), ConfigError);
    EXPECT_THROW(make_so3_grid(1.0, 7.0), ConfigError);
}
