#ifndef SPHWAV_TRANSFORM_HPP
#define SPHWAV_TRANSFORM_HPP

// Discrete wavelet transform over per-scale SO(3) grids, its adjoint, and frame inversion.
//
// With Psi_g(x) = Psi(M^T x) and real Wigner d in the Condon-Shortley basis, the harmonic
// coefficients of the moved kernel are
//   (Psi_g)_l^m = sum_k s_m s_k e^{-i m a} d^l_{mk}(b) e^{-i k c} Psi_l^k,
// where (a, b, c) = (phi2, theta2, phi1) and s_m = (-1)^m for m > 0, 1 otherwise, converts
// between the Condon-Shortley harmonics and the phase-free ones used here.

#include <cmath>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "admissibility.hpp"
#include "error.hpp"
#include "parallel.hpp"
#include "profiles.hpp"
#include "so3.hpp"
#include "sphfn.hpp"

namespace sphwav
{

struct ScaleLayer
{
    double rho = 1.0;
    double weight = 1.0; // Delta_j
    SO3Grid grid;
    std::vector< double > tau; // per carrier
    std::vector< std::size_t > offset; // first sample of each carrier; back() = total

    void finalize()
    {
        if (tau.size() != grid.carrier_count())
            throw ConfigError("ScaleLayer: one tau per carrier required");
        offset.assign(grid.carrier_count() + 1, 0);
        for (std::size_t c = 0; c < grid.carrier_count(); ++c)
            offset[c + 1] = offset[c] + grid.cells[c].n_axial;
    }

    std::size_t sample_count() const noexcept { return offset.empty() ? 0 : offset.back(); }

    double sample_weight(std::size_t carrier) const
    {
        const auto& c = grid.cells[carrier];
        return c.measure * 2.0 * pi / static_cast< double >(c.n_axial) * weight;
    }
};

struct FrameLayout
{
    Family family = Family::Omega;
    int L = 16;
    std::vector< ScaleLayer > layers;

    std::size_t sample_count() const noexcept
    {
        std::size_t n = 0;
        for (const auto& l : layers)
            n += l.sample_count();
        return n;
    }
};

/// Same grid and a single tau on every scale.
inline FrameLayout make_uniform_layout(Family fam, int L, const ScaleSequence& scales, const SO3Grid& grid, double tau)
{
    FrameLayout lay;
    lay.family = fam;
    lay.L = L;
    for (std::size_t j = 0; j < scales.size(); ++j)
    {
        ScaleLayer s;
        s.rho = scales.rho[j];
        s.weight = scales.weight(j);
        s.grid = grid;
        s.tau.assign(grid.carrier_count(), tau);
        s.finalize();
        lay.layers.push_back(std::move(s));
    }
    return lay;
}

struct TransformCoefficients
{
    FrameLayout layout;
    std::vector< std::vector< complex > > values; // per layer, carrier-major then axial index

    std::size_t size() const noexcept
    {
        std::size_t n = 0;
        for (const auto& v : values)
            n += v.size();
        return n;
    }

    /// sum of weight * |W|^2
    double weighted_energy() const
    {
        double e = 0.0;
        for (std::size_t j = 0; j < values.size(); ++j)
        {
            const auto& lay = layout.layers[j];
            for (std::size_t c = 0; c < lay.grid.carrier_count(); ++c)
                for (std::size_t i = lay.offset[c]; i < lay.offset[c + 1]; ++i)
                    e += lay.sample_weight(c) * std::norm(values[j][i]);
        }
        return e;
    }
};

enum class FrameSolver
{
    ConjugateGradient,
    Richardson
};

struct FrameOperatorConfig
{
    int max_iterations = 500;
    double tolerance = 1e-10;
    double relaxation = 0.0; // Richardson step; 0 picks 2/(A'+B') from estimated bounds
    FrameSolver solver = FrameSolver::ConjugateGradient;
    std::uint64_t seed = 1;

    void validate() const
    {
        if (!(tolerance > 0.0))
            throw ConfigError("FrameOperatorConfig: tolerance must be positive");
        if (max_iterations < 1)
            throw ConfigError("FrameOperatorConfig: max_iterations must be >= 1");
    }
};

struct ReconstructionResult
{
    CoefficientTable coefficients;
    int iterations = 0;
    double residual = 0.0; // ||S x - b|| / ||b||
};

namespace detail
{
inline double cs_sign(int m) noexcept
{
    return (m > 0 && m % 2) ? -1.0 : 1.0;
}
} // namespace detail

/// u_k = s_k conj(P_l^k) sum_{l,m} s_m e^{i m phi2} d^l_{mk} f_l^m for odd |k| <= K (index k + K), so that
/// <Psi_g, f> = sum_k u_k e^{i k phi1} for g = (phi1, theta2, phi2) with d evaluated at theta2.
inline std::vector< complex > axial_spectrum(const CoefficientTable& f, const CoefficientTable& P, int K,
                                             const WignerTable& D, double phi2)
{
    const int L = std::min({f.band_limit(), P.band_limit(), D.band_limit()});
    K = std::min(K, D.order_limit());
    std::vector< complex > u(static_cast< std::size_t >(2 * K + 1), 0.0);
    std::vector< complex > g(static_cast< std::size_t >(2 * L + 1));
    for (int l = 1; l <= L; ++l)
    {
        for (int m = -l; m <= l; ++m)
            g[static_cast< std::size_t >(m + L)] = detail::cs_sign(m) * std::polar(1.0, m * phi2) * f(l, m);
        for (int k = -std::min(l, K); k <= std::min(l, K); ++k)
        {
            if (k % 2 == 0)
                continue;
            complex s = 0.0;
            for (int m = -l; m <= l; ++m)
                s += D.get(l, m, k) * g[static_cast< std::size_t >(m + L)];
            u[static_cast< std::size_t >(k + K)] += detail::cs_sign(k) * std::conj(P(l, k)) * s;
        }
    }
    return u;
}

/// sum_k u_k e^{i k gamma}
inline complex evaluate_axial(const std::vector< complex >& u, double gamma)
{
    const int K = static_cast< int >(u.size() / 2);
    complex w = 0.0;
    for (int k = -K; k <= K; ++k)
        w += u[static_cast< std::size_t >(k + K)] * std::polar(1.0, k * gamma);
    return w;
}

/// Coefficients of x -> h(M^T x) for g = (phi1, theta2, phi2), from those of h (orders |k| <= K).
/// Same convention as axial_spectrum: <h_g, f> = sum conj(h_g) f.
inline CoefficientTable rotated_coefficients(const CoefficientTable& h, const Rotation& g, int K = -1)
{
    const int L = h.band_limit();
    K = K < 0 ? L : std::min(K, L);
    const WignerTable D(L, K, g.theta2);
    CoefficientTable out(L);
    for (int l = 0; l <= L; ++l)
        for (int m = -l; m <= l; ++m)
        {
            complex s = 0.0;
            for (int k = -std::min(l, K); k <= std::min(l, K); ++k)
                s += detail::cs_sign(k) * D.get(l, m, k) * std::polar(1.0, -k * g.phi1) * h(l, k);
            out(l, m) = detail::cs_sign(m) * std::polar(1.0, -m * g.phi2) * s;
        }
    return out;
}

/// Analysis/synthesis operators for one layout with cached kernel coefficients and Wigner tables.
class WaveletFrame
{
public:
    static constexpr std::size_t wigner_cache_bytes = std::size_t{256} << 20;

    explicit WaveletFrame(FrameLayout layout) : layout_(std::move(layout))
    {
        if (layout_.L < 1)
            throw ConfigError("WaveletFrame: band limit must be >= 1");
        const int L = layout_.L;
        for (auto& lay : layout_.layers)
        {
            if (lay.offset.size() != lay.grid.carrier_count() + 1)
                lay.finalize();
            Layer cache;
            int K = 1;
            for (double t : lay.tau)
            {
                if (!cache.kernels.count(t))
                {
                    cache.kernels.emplace(t, wavelet_coefficients({layout_.family, lay.rho, t}, L));
                    cache.kcut.emplace(t, std::min(L, default_k_cut(t)));
                }
                K = std::max(K, cache.kcut.at(t));
            }
            cache.K = K;
            cache_.push_back(std::move(cache));
        }
        // Wigner tables are kept only when they fit the cache budget; otherwise rebuilt per band
        std::size_t bytes = 0;
        for (std::size_t j = 0; j < layout_.layers.size(); ++j)
            bytes += layout_.layers[j].grid.bands.size() * static_cast< std::size_t >(L + 1) * (2 * L + 1) *
                     (2 * cache_[j].K + 1) * sizeof(double);
        if (bytes <= wigner_cache_bytes)
            for (std::size_t j = 0; j < layout_.layers.size(); ++j)
                for (std::size_t b = 0; b < layout_.layers[j].grid.bands.size(); ++b)
                    cache_[j].wigner.push_back(build_table(j, b));
        diagonal_ = diagonal_estimate();
    }

    const FrameLayout& layout() const noexcept { return layout_; }
    int band_limit() const noexcept { return layout_.L; }
    int order() const noexcept { return nominal_order(layout_.family); }

    const CoefficientTable& kernel(std::size_t layer, double tau) const { return cache_.at(layer).kernels.at(tau); }

    /// W(rho_j, g) = (1/4pi) <Psi_g, f> for every grid rotation.
    TransformCoefficients analyze(const CoefficientTable& f_in) const
    {
        const int L = layout_.L;
        const CoefficientTable f = f_in.resized(L);
        TransformCoefficients out;
        out.layout = layout_;
        out.values.resize(layout_.layers.size());
        for (std::size_t j = 0; j < layout_.layers.size(); ++j)
        {
            const auto& lay = layout_.layers[j];
            const auto& cache = cache_[j];
            auto& vals = out.values[j];
            vals.assign(lay.sample_count(), 0.0);
            for (std::size_t bi = 0; bi < lay.grid.bands.size(); ++bi)
            {
                const auto table = band_table(j, bi);
                const auto& band = lay.grid.bands[bi];
                parallel_for(band.n_cells,
                             [&](std::size_t b, std::size_t e, std::size_t)
                             {
                                 for (std::size_t c = band.first + b; c < band.first + e; ++c)
                                 {
                                     const auto u = axial_spectrum(f, cache.kernels.at(lay.tau[c]),
                                                                   cache.kcut.at(lay.tau[c]), *table, lay.grid.cells[c].phi);
                                     for (std::size_t i = 0; i < lay.grid.cells[c].n_axial; ++i)
                                         vals[lay.offset[c] + i] = evaluate_axial(u, lay.grid.axial_angle(c, i)) / (4.0 * pi);
                                 }
                             });
            }
        }
        return out;
    }

    /// T* c = (1/4pi) sum_g w_g c_g Psi_g, in harmonic coefficients.
    CoefficientTable adjoint(const TransformCoefficients& coeffs) const
    {
        const int L = layout_.L;
        CoefficientTable total(L);
        if (coeffs.values.size() != layout_.layers.size())
            throw ConfigError("adjoint: coefficient layout does not match frame");
        for (std::size_t j = 0; j < layout_.layers.size(); ++j)
        {
            const auto& lay = layout_.layers[j];
            const auto& cache = cache_[j];
            if (coeffs.values[j].size() != lay.sample_count())
                throw ConfigError("adjoint: coefficient count does not match frame");
            const std::size_t nw = worker_count();
            std::vector< CoefficientTable > partial(nw, CoefficientTable(L));
            for (std::size_t bi = 0; bi < lay.grid.bands.size(); ++bi)
            {
                const auto table = band_table(j, bi);
                const auto& band = lay.grid.bands[bi];
                parallel_for(
                    band.n_cells,
                    [&](std::size_t b, std::size_t e, std::size_t w)
                    {
                        std::vector< complex > v(static_cast< std::size_t >(2 * cache.K + 1));
                        for (std::size_t c = band.first + b; c < band.first + e; ++c)
                            adjoint_carrier(lay, cache, *table, c, coeffs.values[j], v, partial[w]);
                    },
                    nw);
            }
            for (const auto& p : partial)
                for (std::size_t i = 0; i < total.size(); ++i)
                    total.data()[i] += p.data()[i];
        }
        return total;
    }

    /// S f = T* T f.
    CoefficientTable apply(const CoefficientTable& f) const { return adjoint(analyze(f)); }

    /// Continuous-limit diagonal of S: sum_j Delta_j sum_c |cell| 2pi/(2l+1) sum_k |Psi_l^k|^2 / (4pi)^2.
    std::vector< double > diagonal_estimate() const
    {
        const int L = layout_.L;
        std::vector< double > lam(static_cast< std::size_t >(L + 1), 0.0);
        for (std::size_t j = 0; j < layout_.layers.size(); ++j)
        {
            const auto& lay = layout_.layers[j];
            for (std::size_t c = 0; c < lay.grid.carrier_count(); ++c)
            {
                const auto& P = cache_[j].kernels.at(lay.tau[c]);
                const double w = lay.weight * lay.grid.cells[c].measure * 2.0 * pi / (16.0 * pi * pi);
                for (int l = 0; l <= L; ++l)
                {
                    double s = 0.0;
                    for (int k = -l; k <= l; ++k)
                        s += std::norm(P(l, k));
                    lam[static_cast< std::size_t >(l)] += w * s / (2.0 * l + 1.0);
                }
            }
        }
        return lam;
    }

    /// One preconditioned step P^{-1} T* W on degrees above the order.
    CoefficientTable quasi_inverse(const TransformCoefficients& coeffs) const
    {
        CoefficientTable x = adjoint(coeffs);
        precondition(x);
        return x;
    }

    ReconstructionResult reconstruct(const TransformCoefficients& coeffs, const FrameOperatorConfig& cfg = {}) const
    {
        cfg.validate();
        CoefficientTable b = adjoint(coeffs);
        mask(b);
        return cfg.solver == FrameSolver::ConjugateGradient ? solve_cg(b, cfg) : solve_richardson(b, cfg);
    }

    /// Extreme eigenvalue estimates of P^{-1} S on the reconstructable subspace (power iterations).
    std::pair< double, double > preconditioned_bounds(std::uint64_t seed = 1, int iterations = 60) const
    {
        auto op = [&](const CoefficientTable& x)
        {
            CoefficientTable y = apply(x);
            mask(y);
            precondition(y);
            return y;
        };
        CoefficientTable x = random_coefficients(seed);
        double top = 0.0;
        for (int it = 0; it < iterations; ++it)
        {
            CoefficientTable y = op(x);
            top = std::sqrt(y.norm_squared() / x.norm_squared());
            normalize(y);
            x = y;
        }
        // power iteration on top*I - P^{-1}S gives top - bottom
        x = random_coefficients(seed + 1);
        double gap = 0.0;
        for (int it = 0; it < iterations; ++it)
        {
            CoefficientTable y = op(x);
            for (std::size_t i = 0; i < y.size(); ++i)
                y.data()[i] = top * x.data()[i] - y.data()[i];
            mask(y);
            gap = std::sqrt(y.norm_squared() / x.norm_squared());
            normalize(y);
            x = y;
        }
        return {std::max(top - gap, 0.0), top};
    }

    /// Random coefficients with unit norm, zero at l <= order, conjugate symmetric (real signal).
    CoefficientTable random_coefficients(std::uint64_t seed) const
    {
        std::mt19937_64 rng(seed);
        std::normal_distribution< double > nd;
        CoefficientTable x(layout_.L);
        for (int l = order() + 1; l <= layout_.L; ++l)
        {
            x(l, 0) = nd(rng);
            for (int k = 1; k <= l; ++k)
            {
                // Y_l^{-k} = conj(Y_l^k), so a real signal has c_{l,-k} = conj(c_{l,k})
                x(l, k) = complex(nd(rng), nd(rng)) / std::sqrt(2.0);
                x(l, -k) = std::conj(x(l, k));
            }
        }
        normalize(x);
        return x;
    }

    /// Zero degrees l <= order.
    void mask(CoefficientTable& x) const { x.zero_low_degrees(order()); }

    void precondition(CoefficientTable& x) const
    {
        const auto& lam = diagonal_;
        for (int l = 0; l <= layout_.L; ++l)
        {
            const double d = lam[static_cast< std::size_t >(l)];
            for (int k = -l; k <= l; ++k)
                x(l, k) = (l <= order() || !(d > 0.0)) ? complex(0.0) : x(l, k) / d;
        }
    }

private:
    struct Layer
    {
        std::map< double, CoefficientTable > kernels;
        std::map< double, int > kcut;
        std::vector< std::shared_ptr< const WignerTable > > wigner; // per band, empty when not cached
        int K = 1;
    };

    static void normalize(CoefficientTable& x)
    {
        const double n = std::sqrt(x.norm_squared());
        if (n > 0.0)
            for (auto& v : x.data())
                v /= n;
    }

    std::shared_ptr< const WignerTable > build_table(std::size_t j, std::size_t band) const
    {
        const auto& lay = layout_.layers[j];
        const double beta = lay.grid.cells[lay.grid.bands[band].first].theta;
        return std::make_shared< const WignerTable >(layout_.L, cache_[j].K, beta);
    }

    std::shared_ptr< const WignerTable > band_table(std::size_t j, std::size_t band) const
    {
        if (!cache_[j].wigner.empty())
            return cache_[j].wigner[band];
        return build_table(j, band);
    }

    void adjoint_carrier(const ScaleLayer& lay, const Layer& cache, const WignerTable& D, std::size_t c,
                         const std::vector< complex >& vals, std::vector< complex >& v, CoefficientTable& out) const
    {
        const int L = layout_.L;
        const auto& cell = lay.grid.cells[c];
        const CoefficientTable& P = cache.kernels.at(lay.tau[c]);
        const int K = cache.kcut.at(lay.tau[c]);
        const double w = lay.sample_weight(c) / (4.0 * pi);
        std::fill(v.begin(), v.end(), complex(0.0));
        for (int k = -K; k <= K; ++k)
        {
            if (k % 2 == 0)
                continue;
            complex s = 0.0;
            for (std::size_t i = 0; i < cell.n_axial; ++i)
                s += vals[lay.offset[c] + i] * std::polar(1.0, -k * lay.grid.axial_angle(c, i));
            v[static_cast< std::size_t >(k + cache.K)] = w * s;
        }
        for (int l = 1; l <= L; ++l)
            for (int m = -l; m <= l; ++m)
            {
                complex s = 0.0;
                for (int k = -std::min(l, K); k <= std::min(l, K); ++k)
                    if (k % 2)
                        s += detail::cs_sign(k) * D.get(l, m, k) * P(l, k) * v[static_cast< std::size_t >(k + cache.K)];
                out(l, m) += detail::cs_sign(m) * std::polar(1.0, -m * cell.phi) * s;
            }
    }

    ReconstructionResult solve_cg(const CoefficientTable& b, const FrameOperatorConfig& cfg) const
    {
        const int L = layout_.L;
        const double bn = std::sqrt(b.norm_squared());
        ReconstructionResult res{CoefficientTable(L), 0, 0.0};
        if (bn == 0.0)
            return res;
        CoefficientTable r = b;
        CoefficientTable z = r;
        precondition(z);
        CoefficientTable p = z;
        double rz = inner_product(r, z).real();
        for (int it = 1; it <= cfg.max_iterations; ++it)
        {
            CoefficientTable Sp = apply(p);
            mask(Sp);
            const double pSp = inner_product(p, Sp).real();
            if (!(pSp > 0.0))
                throw NumericalError("reconstruct: frame operator not positive on search direction", res.residual);
            const double alpha = rz / pSp;
            for (std::size_t i = 0; i < r.size(); ++i)
            {
                res.coefficients.data()[i] += alpha * p.data()[i];
                r.data()[i] -= alpha * Sp.data()[i];
            }
            res.iterations = it;
            res.residual = std::sqrt(r.norm_squared()) / bn;
            if (res.residual < cfg.tolerance)
                return res;
            z = r;
            precondition(z);
            const double rz_new = inner_product(r, z).real();
            const double beta = rz_new / rz;
            rz = rz_new;
            for (std::size_t i = 0; i < p.size(); ++i)
                p.data()[i] = z.data()[i] + beta * p.data()[i];
        }
        throw NumericalError("reconstruct: no convergence after " + std::to_string(cfg.max_iterations) +
                                 " iterations (residual " + std::to_string(res.residual) + ")",
                             res.residual);
    }

    ReconstructionResult solve_richardson(const CoefficientTable& b, const FrameOperatorConfig& cfg) const
    {
        const int L = layout_.L;
        const double bn = std::sqrt(b.norm_squared());
        ReconstructionResult res{CoefficientTable(L), 0, 0.0};
        if (bn == 0.0)
            return res;
        double lambda = cfg.relaxation;
        if (!(lambda > 0.0))
        {
            const auto [lo, hi] = preconditioned_bounds(cfg.seed);
            lambda = 2.0 / (lo + hi);
        }
        for (int it = 1; it <= cfg.max_iterations; ++it)
        {
            CoefficientTable r = apply(res.coefficients);
            mask(r);
            for (std::size_t i = 0; i < r.size(); ++i)
                r.data()[i] = b.data()[i] - r.data()[i];
            res.iterations = it;
            res.residual = std::sqrt(r.norm_squared()) / bn;
            if (res.residual < cfg.tolerance)
                return res;
            precondition(r);
            for (std::size_t i = 0; i < r.size(); ++i)
                res.coefficients.data()[i] += lambda * r.data()[i];
        }
        throw NumericalError("reconstruct: Richardson iteration did not converge (residual " +
                                 std::to_string(res.residual) + ")",
                             res.residual);
    }

    FrameLayout layout_;
    std::vector< Layer > cache_;
    std::vector< double > diagonal_;
};

/// Forward transform of a sampled signal (harmonic path).
inline TransformCoefficients forward_transform(const SphericalSignal& f, const WaveletFrame& frame)
{
    return frame.analyze(analyze_signal(f, frame.band_limit()));
}

/// Forward transform by direct quadrature of the rotated kernel on an oversampled grid.
/// The band-limited f is resynthesized at quad_band, so the product is integrated exactly up
/// to the kernel's tail above quad_band - L.
inline TransformCoefficients forward_transform_spatial(const CoefficientTable& f, const FrameLayout& layout,
                                                       int quad_band)
{
    if (quad_band < 2 * layout.L)
        throw NumericalError("forward_transform_spatial: quadrature band must be >= 2L");
    const SphericalGridSpec spec = SphericalGridSpec::for_band(quad_band);
    const SphericalSignal fs = synthesize_signal(f.resized(layout.L), spec);
    const double dphi = 2.0 * pi / static_cast< double >(spec.n_phi);
    std::vector< Vec3 > pts;
    std::vector< double > wts;
    std::vector< complex > fv;
    for (std::size_t i = 0; i < spec.n_theta; ++i)
        for (std::size_t j = 0; j < spec.n_phi; ++j)
        {
            pts.push_back(to_point(fs.theta(i), fs.phi(j)));
            wts.push_back(fs.colat().weights[i] * dphi);
            fv.push_back(fs.at(i, j));
        }
    TransformCoefficients out;
    out.layout = layout;
    out.values.resize(layout.layers.size());
    for (std::size_t jl = 0; jl < layout.layers.size(); ++jl)
    {
        const auto& lay = layout.layers[jl];
        auto& vals = out.values[jl];
        vals.assign(lay.sample_count(), 0.0);
        parallel_for(lay.grid.carrier_count(),
                     [&](std::size_t b, std::size_t e, std::size_t)
                     {
                         for (std::size_t c = b; c < e; ++c)
                         {
                             const WaveletSpec ws{layout.family, lay.rho, lay.tau[c]};
                             for (std::size_t a = 0; a < lay.grid.cells[c].n_axial; ++a)
                             {
                                 const Mat3 inv = transpose(lay.grid.rotation(c, a).matrix);
                                 complex s = 0.0;
                                 for (std::size_t q = 0; q < pts.size(); ++q)
                                 {
                                     const auto [t, p] = to_angles(mat_vec(inv, pts[q]));
                                     s += wts[q] * detail::radial_profile_unchecked(ws.family, ws.rho, t) *
                                          f_tau(ws.tau, p) * fv[q];
                                 }
                                 vals[lay.offset[c] + a] = s / (4.0 * pi);
                             }
                         }
                     });
    }
    return out;
}

/// Rayleigh quotients <f, S f>/||f||^2 over random band-limited f without low-order content.
inline std::pair< double, double > sample_frame_bounds(const WaveletFrame& frame, int samples, std::uint64_t seed)
{
    double lo = std::numeric_limits< double >::infinity(), hi = 0.0;
    for (int s = 0; s < samples; ++s)
    {
        const CoefficientTable f = frame.random_coefficients(seed + static_cast< std::uint64_t >(s));
        const double q = inner_product(f, frame.apply(f)).real() / f.norm_squared();
        lo = std::min(lo, q);
        hi = std::max(hi, q);
    }
    return {lo, hi};
}

} // namespace sphwav

#endif
