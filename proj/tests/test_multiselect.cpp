#include <gtest/gtest.h>

#include "sphwav/multiselect.hpp"
#include "sphwav/presets.hpp"

using namespace sphwav;

namespace
{
std::vector< double > axial(std::size_t n)
{
    std::vector< double > g;
    for (std::size_t i = 0; i < n; ++i)
        g.push_back(2 * pi * static_cast< double >(i) / static_cast< double >(n));
    return g;
}
} // namespace

TEST(Selection, ZeroSignalTieBreak)
{
    const auto s = select_tau(CoefficientTable(12), Family::Omega, 0.5, 1.0, 0.3, {}, 16);
    EXPECT_EQ(s.tau, 1.0);
    EXPECT_EQ(s.phi1, 0.0);
    EXPECT_EQ(s.value, 0.0);
}

TEST(Selection, ZonalAboutCarrierTieBreak)
{
    const int L = 16;
    const auto bump = synthesize_preset("zonal-bump", {{"width", 0.3}}, L, 1);
    const auto g = make_rotation(0.0, 1.2, 0.8);
    const auto f = rotated_coefficients(bump, g);
    const SelectionBank bank(Family::Omega, 0.5, L, {});
    const WignerTable D(L, bank.k_limit(), 1.2);
    const double v0 = bank.score(f, D, 0.8, 4.0, 0.0);
    for (double a : {0.5, 1.7, 3.0})
        EXPECT_NEAR(bank.score(f, D, 0.8, 4.0, a), v0, 1e-12);
    const auto s = bank.select(f, D, 0.8, axial(16));
    EXPECT_EQ(s.tau, 1.0);
    EXPECT_EQ(s.phi1, 0.0);
}

TEST(Selection, PlantedKernelRecovered)
{
    const int L = 32;
    const SelectivitySet set;
    const auto gammas = axial(64);
    for (double tau0 : {1.0, 4.0, 16.0})
    {
        const double phi1 = gammas[5];
        const auto f = synthesize_preset(
            "planted", {{"rho", 0.25}, {"tau", tau0}, {"theta", 1.0}, {"phi", 0.5}, {"phi1", phi1}}, L, 1);
        const SelectionBank bank(Family::Omega, 0.25, L, set);
        const WignerTable D(L, bank.k_limit(), 1.0);
        const auto s = bank.select(f, D, 0.5, gammas);
        EXPECT_EQ(s.tau, tau0);
        EXPECT_NEAR(s.phi1, phi1, 1e-15);

        // brute force over every (tau, phi1) pair
        double best = -1;
        double bt = 0, bp = 0;
        for (double t : set.T)
            for (double a : gammas)
            {
                const double v = bank.score(f, D, 0.5, t, a);
                if (v > best)
                {
                    best = v;
                    bt = t;
                    bp = a;
                }
            }
        EXPECT_EQ(bt, s.tau);
        EXPECT_EQ(bp, s.phi1);
        EXPECT_DOUBLE_EQ(best, s.value);
    }
}

TEST(Selection, ContinuousModeStaysNearPlanted)
{
    const int L = 32;
    const auto f = synthesize_preset("planted", {{"rho", 0.25}, {"tau", 5.0}, {"theta", 1.0}, {"phi", 0.5}}, L, 1);
    SelectionConfig cfg;
    cfg.mode = TauMode::Continuous;
    const auto s = select_tau(f, Family::Omega, 0.25, 1.0, 0.5, {}, 32, cfg);
    EXPECT_NEAR(s.tau, 5.0, 0.05);
    const auto d = select_tau(f, Family::Omega, 0.25, 1.0, 0.5, {}, 32);
    EXPECT_GE(s.value, d.value);
}

TEST(Selection, SharperRidgeGetsLargerTau)
{
    const int L = 32;
    const auto f = synthesize_preset(
        "two-ridges", {{"sharpness1", 2}, {"sharpness2", 8}, {"orientation1", 0.3}, {"orientation2", 1.0}}, L, 1);
    const auto blunt = select_tau(f, Family::Omega, 0.25, pi / 2, 0.0, {}, 64);
    const auto sharp = select_tau(f, Family::Omega, 0.25, pi / 2, pi, {}, 64);
    EXPECT_GT(sharp.tau, blunt.tau);
    EXPECT_NEAR(blunt.phi1, 0.3, pi / 64);
    EXPECT_NEAR(sharp.phi1, 1.0, pi / 64);
}

TEST(SelectivityMap, IsotropicBumpPrefersLowTau)
{
    const int L = 16;
    const auto f = synthesize_preset("zonal-bump", {{"width", 0.5}}, L, 1);
    const auto scales = make_scale_sequence(1.0, 0.5, 1);
    const std::vector< SO3Grid > grids(2, make_so3_grid(0.6, 0.4));
    const auto map = selectivity_map(f, Family::Omega, scales, grids, {});
    ASSERT_EQ(map.entries.size(), 2 * grids[0].carrier_count());
    for (const auto& e : map.entries)
        EXPECT_LE(e.tau, 2.0);
    EXPECT_EQ(map.at(1, 3).carrier, 3u);
    EXPECT_THROW(map.at(2, 0), IndexError);
}

TEST(SelectivitySet, Validation)
{
    EXPECT_THROW((SelectivitySet{{}, 16}.validate()), ConfigError);
    EXPECT_THROW((SelectivitySet{{2, 1}, 16}.validate()), ConfigError);
    EXPECT_THROW((SelectivitySet{{1, 32}, 16}.validate()), ConfigError);
    EXPECT_THROW((SelectivitySet{{0.5}, 16}.validate()), ConfigError);
}

TEST(SupNorms, BehaviourOverTau)
{
    for (double rho : {0.5, 1.0})
    {
        double lo = 1e300, hi = 0, prev_grad = 0;
        for (double tau : {1.0, 2.0, 4.0, 8.0, 16.0})
        {
            const auto n = estimate_sup_norms({Family::Omega, rho, tau});
            lo = std::min(lo, n.value);
            hi = std::max(hi, n.value);
            EXPECT_GE(n.gradient, prev_grad);
            prev_grad = n.gradient;
            const auto fine = estimate_sup_norms({Family::Omega, rho, tau}, 2.0);
            EXPECT_LT(std::abs(fine.value / n.value - 1), 0.01);
            EXPECT_LT(std::abs(fine.gradient / n.gradient - 1), 0.01);
        }
        EXPECT_LT(hi / lo - 1, 0.05);
    }
}

TEST(Budget, Monotonicity)
{
    const auto scales = make_scale_sequence(1.0, 0.5, 2);
    const SelectivitySet small{{1, 2, 4}, 4}, large{{1, 2, 4, 8, 16}, 16};
    const auto a = budget_discretization(Family::Omega, scales, small, 0.01, 1.0);
    const auto b = budget_discretization(Family::Omega, scales, large, 0.01, 1.0);
    for (std::size_t j = 0; j < 3; ++j)
    {
        EXPECT_LE(b.delta2(j), a.delta2(j));
        double prev = 1e300;
        for (double t : large.T)
        {
            EXPECT_LE(b.delta1(j, t), prev);
            prev = b.delta1(j, t);
        }
    }
    // halving of the per-scale share, visible in delta1 * S * G
    auto share = [&](std::size_t j)
    {
        const auto& n = b.scales[j].norms.at(2.0);
        return b.delta1(j, 2.0) * n.value * n.gradient;
    };
    EXPECT_NEAR(share(1) / share(0), 0.5, 1e-12);
    EXPECT_NEAR(share(2) / share(1), 0.5, 1e-12);
    EXPECT_THROW(b.delta1(0, 3.0), IndexError);
    EXPECT_THROW(budget_discretization(Family::Omega, scales, large, -1.0, 1.0), ConfigError);
}

TEST(Budget, CalibrationIsPositive)
{
    const double c = calibrate_constant(Family::Omega, 8, make_scale_sequence(1.0, 0.5, 1), 2.0, 0.6, 0.6);
    EXPECT_GT(c, 0.0);
    EXPECT_TRUE(std::isfinite(c));
}

TEST(Adaptive, RoundTrip)
{
    const int L = 16;
    auto f = synthesize_preset("two-ridges", {}, L, 1);
    f.zero_low_degrees(0);
    const auto scales = make_scale_sequence(1.0, 0.5, 1);
    const std::vector< SO3Grid > grids(2, make_so3_grid(0.3, 0.3));
    const auto res = adaptive_analysis(f, Family::Omega, scales, grids, {});
    const WaveletFrame frame(res.layout);
    const auto r = frame.reconstruct(res.coefficients);
    double e = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i)
        e += std::norm(f.data()[i] - r.coefficients.data()[i]);
    EXPECT_LT(std::sqrt(e / f.norm_squared()), 1e-3);
    // layout taus are the selected ones
    for (const auto& e2 : res.map.entries)
        EXPECT_EQ(res.layout.layers[e2.scale].tau[e2.carrier], e2.tau);
}
