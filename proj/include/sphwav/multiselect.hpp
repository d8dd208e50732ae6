#ifndef SPHWAV_MULTISELECT_HPP
#define SPHWAV_MULTISELECT_HPP

// Angular multiselectivity: per (scale, carrier) choice of tau, sup-norm estimates and the
// discretization budget that sizes the grids.

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <vector>

#include "admissibility.hpp"
#include "error.hpp"
#include "parallel.hpp"
#include "profiles.hpp"
#include "so3.hpp"
#include "sphfn.hpp"
#include "transform.hpp"

namespace sphwav
{

struct SelectivitySet
{
    std::vector< double > T{1.0, 2.0, 4.0, 8.0, 16.0};
    double cap = 16.0;

    void validate() const
    {
        if (T.empty())
            throw ConfigError("selectivity set: T must not be empty");
        for (std::size_t i = 0; i < T.size(); ++i)
        {
            if (!(T[i] >= 1.0) || T[i] > cap)
                throw ConfigError("selectivity set: every tau must lie in [1, cap]");
            if (i > 0 && !(T[i] > T[i - 1]))
                throw ConfigError("selectivity set: T must be strictly increasing");
        }
    }
};

enum class TauMode
{
    Discrete,
    Continuous
};

struct SelectionConfig
{
    int norm_power = 1; // denominator ||Psi^tau||^p
    TauMode mode = TauMode::Discrete;
    double golden_tolerance = 1e-3;
};

struct Selection
{
    double tau = 1.0;
    double phi1 = 0.0;
    double value = 0.0;
};

struct SelectivityEntry
{
    std::size_t scale = 0;
    std::size_t carrier = 0;
    double theta = 0.0;
    double phi = 0.0;
    double tau = 1.0;
    double phi1 = 0.0;
    double value = 0.0;
};

struct SelectivityMap
{
    std::vector< SelectivityEntry > entries;

    const SelectivityEntry& at(std::size_t scale, std::size_t carrier) const
    {
        for (const auto& e : entries)
            if (e.scale == scale && e.carrier == carrier)
                return e;
        throw IndexError("SelectivityMap: no entry for the requested scale and carrier");
    }
};

/// Candidate kernels for one scale, normalized once.
class SelectionBank
{
public:
    SelectionBank(Family fam, double rho, int L, SelectivitySet set, SelectionConfig cfg = {})
        : radial_(fam, rho, L), set_(std::move(set)), cfg_(cfg)
    {
        set_.validate();
        if (cfg_.norm_power < 0)
            throw ConfigError("selection: norm power must be >= 0");
        for (double t : set_.T)
        {
            const auto& c = cache_.emplace(t, make_candidate(t)).first->second;
            cap_ = std::max(cap_, c.cap);
        }
    }

    const SelectivitySet& set() const noexcept { return set_; }
    int band_limit() const noexcept { return radial_.band_limit(); }
    double rho() const noexcept { return radial_.rho(); }
    int k_limit() const noexcept { return std::min(radial_.band_limit(), default_k_cut(set_.cap)); }

    /// Best (tau, phi1) at one carrier over the axial angles gammas; d evaluated at the carrier colatitude.
    Selection select(const CoefficientTable& f, const WignerTable& D, double phi2,
                     const std::vector< double >& gammas) const
    {
        // Cauchy-Schwarz caps every value at ||f|| ||Psi||^{1-p}; rounding noise below a tiny fraction of
        // that cap is a tie
        const double floor = 1e-12 * std::sqrt(f.norm_squared()) * cap_;
        Selection best{set_.T.front(), gammas.empty() ? 0.0 : gammas.front(), -1.0};
        std::size_t best_i = 0;
        for (std::size_t i = 0; i < set_.T.size(); ++i)
        {
            const Selection s = best_angle(f, D, phi2, gammas, set_.T[i], floor);
            if (better(s.value, best.value, floor))
            {
                best = s;
                best_i = i;
            }
        }
        if (cfg_.mode == TauMode::Continuous)
        {
            const double lo = best_i > 0 ? set_.T[best_i - 1] : 1.0;
            const double hi = best_i + 1 < set_.T.size() ? set_.T[best_i + 1] : set_.cap;
            const Selection s = refine(f, D, phi2, gammas, lo, hi, floor);
            if (better(s.value, best.value, floor))
                best = s;
        }
        best.value = std::max(best.value, 0.0);
        return best;
    }

    /// |<Psi^tau_g, f>| / ||Psi^tau||^p at one rotation.
    double score(const CoefficientTable& f, const WignerTable& D, double phi2, double tau, double gamma) const
    {
        const Candidate c = candidate(tau);
        const auto u = axial_spectrum(f, c.coeffs, c.K, D, phi2);
        return std::abs(evaluate_axial(u, gamma)) / c.denom;
    }

private:
    struct Candidate
    {
        CoefficientTable coeffs;
        int K = 1;
        double denom = 1.0;
        double cap = 0.0; // ||Psi|| / denom
    };

    // slack keeps ties (zonal input, zero input) on the earlier candidate: smaller tau, smaller phi1
    static bool better(double v, double best, double floor) noexcept
    {
        if (best < 0.0) // nothing recorded yet
            return true;
        return v > best + std::max(1e-12 * best, floor);
    }

    Candidate make_candidate(double tau) const
    {
        Candidate c;
        c.K = std::min(radial_.band_limit(), default_k_cut(tau));
        c.coeffs = radial_.coefficients(tau, c.K);
        const double n = std::sqrt(c.coeffs.norm_squared());
        c.denom = n > 0.0 ? std::pow(n, cfg_.norm_power) : 1.0;
        c.cap = n / c.denom;
        return c;
    }

    // only the members of T are cached (at construction), so lookups are safe from worker threads
    Candidate candidate(double tau) const
    {
        auto it = cache_.find(tau);
        return it != cache_.end() ? it->second : make_candidate(tau);
    }

    Selection best_angle(const CoefficientTable& f, const WignerTable& D, double phi2,
                         const std::vector< double >& gammas, double tau, double floor) const
    {
        const Candidate c = candidate(tau);
        const auto u = axial_spectrum(f, c.coeffs, c.K, D, phi2);
        Selection s{tau, gammas.empty() ? 0.0 : gammas.front(), -1.0};
        for (double g : gammas)
        {
            const double v = std::abs(evaluate_axial(u, g)) / c.denom;
            if (better(v, s.value, floor))
            {
                s.value = v;
                s.phi1 = g;
            }
        }
        return s;
    }

    Selection refine(const CoefficientTable& f, const WignerTable& D, double phi2, const std::vector< double >& gammas,
                     double lo, double hi, double floor) const
    {
        const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
        double a = lo, b = hi;
        double x1 = b - invphi * (b - a), x2 = a + invphi * (b - a);
        Selection s1 = best_angle(f, D, phi2, gammas, x1, floor), s2 = best_angle(f, D, phi2, gammas, x2, floor);
        while (b - a > cfg_.golden_tolerance * std::max(1.0, a))
        {
            if (s1.value >= s2.value)
            {
                b = x2;
                x2 = x1;
                s2 = s1;
                x1 = b - invphi * (b - a);
                s1 = best_angle(f, D, phi2, gammas, x1, floor);
            }
            else
            {
                a = x1;
                x1 = x2;
                s1 = s2;
                x2 = a + invphi * (b - a);
                s2 = best_angle(f, D, phi2, gammas, x2, floor);
            }
        }
        return s1.value >= s2.value ? s1 : s2;
    }

    RadialBank radial_;
    SelectivitySet set_;
    SelectionConfig cfg_;
    std::map< double, Candidate > cache_;
    double cap_ = 0.0;
};

/// Argmax over T x axial angles at a single carrier (theta2, phi2).
inline Selection select_tau(const CoefficientTable& f, Family fam, double rho, double theta2, double phi2,
                            const SelectivitySet& set, std::size_t n_axial, SelectionConfig cfg = {})
{
    const SelectionBank bank(fam, rho, f.band_limit(), set, cfg);
    const WignerTable D(f.band_limit(), bank.k_limit(), theta2);
    std::vector< double > gammas;
    for (std::size_t i = 0; i < n_axial; ++i)
        gammas.push_back(2.0 * pi * static_cast< double >(i) / static_cast< double >(n_axial));
    return bank.select(f, D, phi2, gammas);
}

/// SelectivityMap over every carrier of the per-scale grids (search angles = each grid's axial angles).
inline SelectivityMap selectivity_map(const CoefficientTable& f, Family fam, const ScaleSequence& scales,
                                      const std::vector< SO3Grid >& grids, const SelectivitySet& set,
                                      SelectionConfig cfg = {})
{
    if (grids.size() != scales.size())
        throw ConfigError("selectivity_map: one grid per scale required");
    SelectivityMap map;
    const int L = f.band_limit();
    for (std::size_t j = 0; j < scales.size(); ++j)
    {
        const SelectionBank bank(fam, scales.rho[j], L, set, cfg);
        const SO3Grid& grid = grids[j];
        std::vector< SelectivityEntry > rows(grid.carrier_count());
        for (const auto& band : grid.bands)
        {
            const WignerTable D(L, bank.k_limit(), grid.cells[band.first].theta);
            parallel_for(band.n_cells,
                         [&](std::size_t b, std::size_t e, std::size_t)
                         {
                             for (std::size_t c = band.first + b; c < band.first + e; ++c)
                             {
                                 std::vector< double > gammas;
                                 for (std::size_t i = 0; i < grid.cells[c].n_axial; ++i)
                                     gammas.push_back(grid.axial_angle(c, i));
                                 const Selection s = bank.select(f, D, grid.cells[c].phi, gammas);
                                 rows[c] = {j, c, grid.cells[c].theta, grid.cells[c].phi, s.tau, s.phi1, s.value};
                             }
                         });
        }
        map.entries.insert(map.entries.end(), rows.begin(), rows.end());
    }
    return map;
}

// ---------------------------------------------------------------------------
// Sup norms

struct SupNorms
{
    double value = 0.0;    // sup |Psi|
    double gradient = 0.0; // sup |grad* Psi|
};

/// Sup norms of Psi = profile(theta) f_tau(phi) on a probe lattice; the lattice has at least 8
/// samples per period 2pi/K_cut in phi and resolves the pole-side peak of width ~rho.
inline SupNorms estimate_sup_norms(const WaveletSpec& spec, double density = 1.0)
{
    spec.validate();
    if (!(density > 0.0))
        throw ConfigError("estimate_sup_norms: density must be positive");
    const auto nt = static_cast< std::size_t >(std::ceil(density * std::max(400.0, 60.0 * pi / spec.rho)));
    const auto np = static_cast< std::size_t >(std::ceil(density * std::max(256.0, 8.0 * default_k_cut(spec.tau))));
    std::vector< double > w(nt), dw(nt), st(nt);
    for (std::size_t i = 0; i < nt; ++i)
    {
        const double t = pi * (static_cast< double >(i) + 0.5) / static_cast< double >(nt);
        w[i] = radial_profile(spec.family, spec.rho, t);
        dw[i] = radial_profile_derivative(spec.family, spec.rho, t);
        st[i] = std::sin(t);
    }
    SupNorms out;
    double fmax = 0.0;
    for (std::size_t j = 0; j < np; ++j)
    {
        const double p = 2.0 * pi * static_cast< double >(j) / static_cast< double >(np);
        const double f = f_tau(spec.tau, p), df = f_tau_derivative(spec.tau, p);
        fmax = std::max(fmax, std::abs(f));
        for (std::size_t i = 0; i < nt; ++i)
        {
            const double a = dw[i] * f, b = w[i] * df / st[i];
            out.gradient = std::max(out.gradient, std::sqrt(a * a + b * b));
        }
    }
    double wmax = 0.0;
    for (double v : w)
        wmax = std::max(wmax, std::abs(v));
    out.value = wmax * fmax;
    return out;
}

// ---------------------------------------------------------------------------
// Budget

struct ScaleBudget
{
    double rho = 1.0;
    double delta2 = pi;
    std::map< double, double > delta1; // by tau
    std::map< double, SupNorms > norms; // by tau
};

struct DiscretizationBudget
{
    double delta = 0.1;
    double calibration = 1.0;
    double tau_cap = 16.0;
    std::vector< ScaleBudget > scales;

    double delta2(std::size_t j) const { return scales.at(j).delta2; }
    double delta1(std::size_t j, double tau) const
    {
        const auto& m = scales.at(j).delta1;
        auto it = m.find(tau);
        if (it == m.end())
            throw IndexError("DiscretizationBudget: tau not budgeted");
        return it->second;
    }
};

/// delta2^j = 2^{-j-2} delta / (c S G) at tau_cap and delta1^j(tau) = 2^{-j-2} delta / (4 pi c S G) at tau,
/// both capped at pi, so that the per-scale error c S G (delta2 + 4 pi delta1) stays below 2^{-j-1} delta.
inline DiscretizationBudget budget_discretization(Family fam, const ScaleSequence& scales, const SelectivitySet& set,
                                                  double delta, double calibration)
{
    if (!(delta > 0.0))
        throw ConfigError("budget: target fraction must be positive");
    if (!(calibration > 0.0))
        throw ConfigError("budget: calibration constant must be positive");
    set.validate();
    DiscretizationBudget b;
    b.delta = delta;
    b.calibration = calibration;
    b.tau_cap = set.cap;
    std::vector< double > taus = set.T;
    if (taus.back() != set.cap)
        taus.push_back(set.cap);
    for (std::size_t j = 0; j < scales.size(); ++j)
    {
        ScaleBudget sb;
        sb.rho = scales.rho[j];
        const double share = std::ldexp(delta, -static_cast< int >(j) - 2);
        for (double t : taus)
        {
            const SupNorms n = estimate_sup_norms({fam, sb.rho, t});
            sb.norms[t] = n;
            sb.delta1[t] = std::min(pi, share / (4.0 * pi * calibration * n.value * n.gradient));
        }
        const SupNorms& top = sb.norms.at(set.cap);
        sb.delta2 = std::min(pi, share / (calibration * top.value * top.gradient));
        b.scales.push_back(std::move(sb));
    }
    return b;
}

/// Relative energy discretization error max |<f, (S - S_cont) f>| / <f, S_cont f> over random f, where
/// S_cont is the continuous-limit diagonal.
inline double measured_energy_error(const WaveletFrame& frame, int samples, std::uint64_t seed)
{
    const auto lam = frame.diagonal_estimate();
    double worst = 0.0;
    for (int s = 0; s < samples; ++s)
    {
        const CoefficientTable f = frame.random_coefficients(seed + static_cast< std::uint64_t >(s));
        double cont = 0.0;
        for (int l = 0; l <= f.band_limit(); ++l)
            for (int k = -l; k <= l; ++k)
                cont += lam[static_cast< std::size_t >(l)] * std::norm(f(l, k));
        const double disc = inner_product(f, frame.apply(f)).real();
        worst = std::max(worst, std::abs(disc - cont) / cont);
    }
    return worst;
}

/// Fit the constant c so that c sum_j S_j G_j (delta2 + 4 pi delta1) equals the measured energy error
/// of a reference uniform-tau frame.
inline double calibrate_constant(Family fam, int L, const ScaleSequence& scales, double tau, double delta2,
                                 double delta1, std::uint64_t seed = 1, int samples = 8)
{
    const SO3Grid grid = make_so3_grid(delta2, delta1);
    const WaveletFrame frame(make_uniform_layout(fam, L, scales, grid, tau));
    const double measured = measured_energy_error(frame, samples, seed);
    double unit = 0.0;
    for (double rho : scales.rho)
    {
        const SupNorms n = estimate_sup_norms({fam, rho, tau});
        unit += n.value * n.gradient * (delta2 + 4.0 * pi * delta1);
    }
    return measured / unit;
}

/// Grids sized by the budget: delta2^j cells, axial angles from delta1^j at tau_cap for the search.
inline std::vector< SO3Grid > budgeted_grids(const DiscretizationBudget& b, std::size_t max_rotations = 5000000)
{
    std::vector< SO3Grid > out;
    std::size_t total = 0;
    for (std::size_t j = 0; j < b.scales.size(); ++j)
    {
        out.push_back(make_so3_grid(b.delta2(j), b.delta1(j, b.tau_cap)));
        total += out.back().rotation_count();
        if (total > max_rotations)
            throw ConfigError("budget: grids exceed the rotation limit; raise delta or the limit");
    }
    return out;
}

struct AdaptiveResult
{
    SelectivityMap map;
    FrameLayout layout;
    TransformCoefficients coefficients;
};

/// Select tau per (scale, carrier), then analyze with the chosen kernels. With a budget, each carrier's
/// axial count is re-derived from delta1 at its chosen tau.
inline AdaptiveResult adaptive_analysis(const CoefficientTable& f, Family fam, const ScaleSequence& scales,
                                        const std::vector< SO3Grid >& grids, const SelectivitySet& set,
                                        SelectionConfig cfg = {}, const DiscretizationBudget* budget = nullptr)
{
    AdaptiveResult res;
    res.map = selectivity_map(f, fam, scales, grids, set, cfg);
    res.layout.family = fam;
    res.layout.L = f.band_limit();
    for (std::size_t j = 0; j < scales.size(); ++j)
    {
        ScaleLayer lay;
        lay.rho = scales.rho[j];
        lay.weight = scales.weight(j);
        lay.grid = grids[j];
        lay.tau.resize(lay.grid.carrier_count());
        for (const auto& e : res.map.entries)
            if (e.scale == j)
                lay.tau[e.carrier] = e.tau;
        if (budget && cfg.mode == TauMode::Discrete)
            for (std::size_t c = 0; c < lay.grid.carrier_count(); ++c)
                lay.grid.set_axial_bound(c, budget->delta1(j, lay.tau[c]));
        lay.finalize();
        res.layout.layers.push_back(std::move(lay));
    }
    const WaveletFrame frame(res.layout);
    res.coefficients = frame.analyze(f);
    return res;
}

} // namespace sphwav

#endif
