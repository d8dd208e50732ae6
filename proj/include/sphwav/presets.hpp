#ifndef SPHWAV_PRESETS_HPP
#define SPHWAV_PRESETS_HPP

// Synthetic test signals, all band-limited to L and real-valued.

#include <cmath>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "admissibility.hpp"
#include "error.hpp"
#include "profiles.hpp"
#include "so3.hpp"
#include "sphfn.hpp"
#include "transform.hpp"

namespace sphwav
{

using PresetParams = std::map< std::string, double >;

inline const std::vector< std::string >& preset_names()
{
    static const std::vector< std::string > names{"zonal-bump", "ridge", "two-ridges", "noise", "planted"};
    return names;
}

namespace detail
{

inline double param(const PresetParams& p, const std::string& key, double fallback)
{
    auto it = p.find(key);
    return it == p.end() ? fallback : it->second;
}

inline void check_params(const PresetParams& p, const std::string& preset, std::set< std::string > allowed)
{
    for (const auto& [k, v] : p)
    {
        if (!allowed.count(k))
            throw ConfigError("preset '" + preset + "' has no parameter '" + k + "'");
        if (!std::isfinite(v))
            throw ConfigError("preset parameter '" + k + "' must be finite");
    }
}

/// Band-L projection of fn by oversampled quadrature.
template < typename F >
CoefficientTable project(F&& fn, int L)
{
    const SphericalGridSpec fine{L, static_cast< std::size_t >(2 * L + 8), static_cast< std::size_t >(4 * L + 8)};
    return analyze_signal(SphericalSignal::sample(fine, fn), L);
}

/// Oriented feature at the north pole pointing along phi = 0: radial bump of width w times an odd
/// von Mises pair of concentration s^2, so angular width ~ 1/s.
inline CoefficientTable ridge_at_pole(int L, double s, double w)
{
    if (!(s > 0.0) || !(w > 0.0))
        throw ConfigError("ridge: sharpness and width must be positive");
    const double kappa = s * s;
    return project(
        [=](double t, double p)
        {
            const double radial = (t / w) * std::exp(0.5 - t * t / (2.0 * w * w));
            const double c = std::cos(p);
            return complex(radial * (std::exp(kappa * (c - 1.0)) - std::exp(-kappa * (c + 1.0))), 0.0);
        },
        L);
}

inline CoefficientTable ridge(int L, double theta, double phi, double orientation, double s, double w)
{
    return rotated_coefficients(ridge_at_pole(L, s, w), make_rotation(orientation, theta, phi));
}

} // namespace detail

/// Coefficients of a named preset. Unknown names and parameters raise ConfigError.
inline CoefficientTable synthesize_preset(const std::string& name, const PresetParams& p, int L, std::uint64_t seed)
{
    using detail::param;
    if (L < 1)
        throw ConfigError("synthesize: L must be >= 1");
    if (name == "zonal-bump")
    {
        detail::check_params(p, name, {"width"});
        const double w = param(p, "width", 0.4);
        if (!(w > 0.0))
            throw ConfigError("zonal-bump: width must be positive");
        CoefficientTable c = detail::project(
            [w](double t, double) { return complex(std::exp((std::cos(t) - 1.0) / (w * w)), 0.0); }, L);
        for (int l = 0; l <= L; ++l)
            for (int k = -l; k <= l; ++k)
                if (k != 0)
                    c(l, k) = 0.0;
        return c;
    }
    if (name == "ridge")
    {
        detail::check_params(p, name, {"theta", "phi", "orientation", "sharpness", "width"});
        return detail::ridge(L, param(p, "theta", pi / 2), param(p, "phi", 0.0), param(p, "orientation", 0.0),
                             param(p, "sharpness", 4.0), param(p, "width", 0.25));
    }
    if (name == "two-ridges")
    {
        // the second feature sits at the antipode of the first
        detail::check_params(p, name, {"theta", "phi", "orientation1", "orientation2", "sharpness1", "sharpness2",
                                       "width"});
        const double th = param(p, "theta", pi / 2), ph = param(p, "phi", 0.0), w = param(p, "width", 0.25);
        CoefficientTable a = detail::ridge(L, th, ph, param(p, "orientation1", 0.0), param(p, "sharpness1", 2.0), w);
        const CoefficientTable b =
            detail::ridge(L, pi - th, ph + pi, param(p, "orientation2", 0.0), param(p, "sharpness2", 8.0), w);
        for (std::size_t i = 0; i < a.size(); ++i)
            a.data()[i] += b.data()[i];
        return a;
    }
    if (name == "noise")
    {
        detail::check_params(p, name, {"zero_below"});
        const int m = static_cast< int >(param(p, "zero_below", 0.0));
        std::mt19937_64 rng(seed);
        std::normal_distribution< double > g;
        CoefficientTable c(L);
        for (int l = 0; l <= L; ++l)
        {
            c(l, 0) = g(rng);
            for (int k = 1; k <= l; ++k)
            {
                const double re = g(rng), im = g(rng);
                c(l, k) = complex(re, im) / std::sqrt(2.0);
                c(l, -k) = std::conj(c(l, k));
            }
        }
        c.zero_low_degrees(m);
        const double n = std::sqrt(c.norm_squared());
        if (n > 0.0)
            for (complex& v : c.data())
                v /= n;
        return c;
    }
    if (name == "planted")
    {
        detail::check_params(p, name, {"family", "rho", "tau", "theta", "phi", "phi1"});
        const Family fam = param(p, "family", 0.0) == 0.0 ? Family::Omega : Family::Upsilon;
        const WaveletSpec spec{fam, param(p, "rho", 0.5), param(p, "tau", 4.0)};
        spec.validate();
        const int K = std::min(L, default_k_cut(spec.tau));
        const CoefficientTable k = RadialBank(fam, spec.rho, L).coefficients(spec.tau, K);
        return rotated_coefficients(k, make_rotation(param(p, "phi1", 0.0), param(p, "theta", pi / 2),
                                                     param(p, "phi", 0.0)),
                                    K);
    }
    throw ConfigError("unknown preset '" + name + "'");
}

} // namespace sphwav

#endif
