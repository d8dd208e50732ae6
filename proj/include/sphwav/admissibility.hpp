#ifndef SPHWAV_ADMISSIBILITY_HPP
#define SPHWAV_ADMISSIBILITY_HPP

// Wavelet Fourier coefficients and the frame-type admissibility conditions.

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "error.hpp"
#include "profiles.hpp"
#include "quadrature.hpp"
#include "sphfn.hpp"

namespace sphwav
{

/// Quadrature for int_0^inf g(rho) d rho. Trapezoid rule after rho = exp((pi/2) sinh t), which
/// decays double-exponentially at both ends for the integrands met here (power law at 0,
/// exponential at infinity).
struct RhoQuadrature
{
    std::vector< double > nodes;
    std::vector< double > weights;
    double step = 0.0;

    static RhoQuadrature make(double h = 1.0 / 16.0, double t_min = -4.5, double t_max = 3.0)
    {
        if (!(h > 0.0) || !(t_max > t_min))
            throw ConfigError("RhoQuadrature: invalid step or range");
        RhoQuadrature q;
        q.step = h;
        const int n = static_cast< int >(std::ceil((t_max - t_min) / h));
        for (int i = 0; i <= n; ++i)
        {
            const double t = t_min + i * h;
            const double e = 0.5 * pi * std::sinh(t);
            const double rho = std::exp(e);
            if (rho > 700.0 || rho == 0.0)
                continue;
            q.nodes.push_back(rho);
            q.weights.push_back(h * rho * 0.5 * pi * std::cosh(t));
        }
        return q;
    }

    std::size_t size() const noexcept { return nodes.size(); }

    template < typename F >
    double integrate(F&& g) const
    {
        double s = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i)
            s += weights[i] * g(nodes[i]);
        return s;
    }

    /// Integrate at h and h/2; throws NumericalError if the two disagree beyond tol.
    template < typename F >
    static double integrate_checked(F&& g, double tol = 1e-9, double h = 1.0 / 16.0)
    {
        const double coarse = make(h).integrate(g);
        const double fine = make(0.5 * h).integrate(g);
        const double diff = std::abs(fine - coarse);
        if (diff > tol * std::abs(fine) && diff > 1e-300)
            throw NumericalError("rho quadrature did not settle under refinement", diff);
        return fine;
    }
};

// ---------------------------------------------------------------------------
// Coefficients

namespace detail
{
/// Panel edges 0, 2rho, 4rho, 8rho, ... pi so that the peak of width ~rho near the pole is resolved.
inline std::vector< double > colat_panels(double rho)
{
    std::vector< double > edges{0.0};
    double e = 2.0 * rho;
    while (e < 0.9 * pi)
    {
        edges.push_back(e);
        e *= 2.0;
    }
    edges.push_back(pi);
    return edges;
}

/// I_{lk} = int_0^pi profile(theta) lambda_l^k(cos theta) sin theta d theta for all 0 <= k <= l <= L,
/// stored in triangle layout. Rational profile, graded Gauss-Legendre panels.
inline std::vector< double > radial_moments(Family fam, double rho, int L)
{
    std::vector< double > out(triangle_size(L), 0.0);
    std::vector< double > lam(triangle_size(L));
    const auto edges = colat_panels(rho);
    const std::size_t n = static_cast< std::size_t >(std::max(24, L + 24));
    const QuadratureRule base = gauss_legendre(n);
    for (std::size_t p = 0; p + 1 < edges.size(); ++p)
    {
        const double a = edges[p], b = edges[p + 1];
        const double half = 0.5 * (b - a), mid = 0.5 * (b + a);
        for (std::size_t i = 0; i < n; ++i)
        {
            const double th = mid + half * base.nodes[i];
            const double w = half * base.weights[i] * std::sin(th) * radial_profile_unchecked(fam, rho, th);
            if (w == 0.0)
                continue;
            normalized_legendre_table(L, std::cos(th), lam);
            for (std::size_t q = 0; q < out.size(); ++q)
                out[q] += w * lam[q];
        }
    }
    return out;
}

inline double p1_norm_factor(int l)
{
    const double ld = l;
    return std::sqrt(ld * (ld + 1.0) / (2.0 * (2.0 * ld + 1.0)));
}

inline double closed_k1(Family fam, int l, double rho, double tau)
{
    const double r = std::exp(-rho);
    return -rho / (tau * pi) * p1_norm_factor(l) * radial_p1_coefficient(fam, l, r) *
           std::exp(-0.5 / (tau * tau));
}
} // namespace detail

/// Fourier coefficient <Y_l^k, Psi>. Real-valued; |k| = 1 from the closed form, other odd k by
/// quadrature of the rational profile, even k exactly zero.
inline complex wavelet_coefficient(const WaveletSpec& spec, HarmonicIndex idx)
{
    spec.validate();
    if (!idx.valid())
        throw IndexError("wavelet_coefficient: |k| > l");
    const int q = std::abs(idx.k);
    if (q % 2 == 0)
        return 0.0;
    if (q == 1)
        return detail::closed_k1(spec.family, idx.l, spec.rho, spec.tau);
    const auto mom = detail::radial_moments(spec.family, spec.rho, idx.l);
    return -mom[triangle_index(idx.l, q)] * f_tau_coefficient(spec.tau, q);
}

/// tau-independent part of the coefficients at one scale: Psi_l^k = radial(l, k) * (f_tau)_k.
class RadialBank
{
public:
    RadialBank(Family fam, double rho, int L) : family_(fam), rho_(rho), L_(L), table_(triangle_size(std::max(L, 0)), 0.0)
    {
        if (!(rho > 0.0))
            throw DomainError("RadialBank: rho must be positive");
        if (L < 0)
            throw DomainError("RadialBank: negative band limit");
        const auto mom = L >= 3 ? detail::radial_moments(fam, rho, L) : std::vector< double >(triangle_size(L), 0.0);
        const double r = std::exp(-rho);
        for (int l = 1; l <= L; ++l)
        {
            // closed form for k = 1: the k = 1 coefficient divided by (f_tau)_1
            table_[triangle_index(l, 1)] =
                -rho * detail::p1_norm_factor(l) * radial_p1_coefficient(fam, l, r) / (2.0 * pi * std::sqrt(2.0 * pi));
            for (int k = 3; k <= l; k += 2)
                table_[triangle_index(l, k)] = -mom[triangle_index(l, k)];
        }
    }

    Family family() const noexcept { return family_; }
    double rho() const noexcept { return rho_; }
    int band_limit() const noexcept { return L_; }

    /// (-1)^k int profile * lambda_l^k sin(t) dt for odd k > 0.
    double radial(int l, int k) const { return table_[triangle_index(l, std::abs(k))]; }

    CoefficientTable coefficients(double tau, int K_max = -1) const
    {
        if (!(tau >= 1.0))
            throw DomainError("RadialBank: tau must be >= 1");
        const int K = std::min(L_, K_max < 0 ? default_k_cut(tau) : K_max);
        CoefficientTable c(L_);
        for (int l = 1; l <= L_; ++l)
            for (int k = 1; k <= std::min(l, K); k += 2)
            {
                const double v = table_[triangle_index(l, k)] * f_tau_coefficient(tau, k);
                c(l, k) = v;
                c(l, -k) = v;
            }
        return c;
    }

private:
    Family family_;
    double rho_;
    int L_;
    std::vector< double > table_;
};

/// All coefficients up to degree L (odd |k| <= K_max; K_max < 0 selects the default cut).
inline CoefficientTable wavelet_coefficients(const WaveletSpec& spec, int L, int K_max = -1)
{
    spec.validate();
    return RadialBank(spec.family, spec.rho, L).coefficients(spec.tau, K_max);
}

/// Printed pointwise bound |Psi_l^k| <= (3 rho r / tau) sqrt((2l+1)/(2|k|(1-r^2))) e^{-k^2/(2tau^2)},
/// with 6 rho r^2 for the upsilon family.
inline double coefficient_upper_bound(const WaveletSpec& spec, HarmonicIndex idx)
{
    if (!idx.valid())
        throw IndexError("coefficient_upper_bound: |k| > l");
    const int q = std::abs(idx.k);
    if (q == 0)
        return 0.0;
    const double r = std::exp(-spec.rho);
    const double lead = spec.family == Family::Omega ? 3.0 * spec.rho * r : 6.0 * spec.rho * r * r;
    const double one_minus_r2 = -std::expm1(-2.0 * spec.rho);
    return lead / spec.tau * std::sqrt((2.0 * idx.l + 1.0) / (2.0 * q * one_minus_r2)) *
           std::exp(-0.5 * q * q / (spec.tau * spec.tau));
}

/// B_Omega = (2/tau^2)(ln tau + sqrt(pi)/2), B_Upsilon = (3/tau^2)(...).
inline double analytic_B(Family fam, double tau)
{
    if (!(tau >= 1.0))
        throw DomainError("analytic_B: tau must be >= 1");
    const double c = fam == Family::Omega ? 2.0 : 3.0;
    return c / (tau * tau) * (std::log(tau) + 0.5 * std::sqrt(pi));
}

/// int_0^inf rho * coeff_l(e^{-rho})^2 d rho with coeff = beta_l or gamma_l.
inline double rho_coefficient_moment(Family fam, int l)
{
    return RhoQuadrature::integrate_checked(
        [&](double rho)
        {
            const double b = radial_p1_coefficient(fam, l, std::exp(-rho));
            return rho * b * b;
        },
        1e-8);
}

/// The k = +-1 share of G(l) / (2l+1).
inline double k1_share(Family fam, double tau, int l)
{
    const double ld = l;
    return 2.0 * std::exp(-1.0 / (tau * tau)) / (tau * tau * pi * pi) * ld * (ld + 1.0) /
           (2.0 * (2.0 * ld + 1.0) * (2.0 * ld + 1.0)) * rho_coefficient_moment(fam, l);
}

/// G(l) = sum_k int_0^inf |Psi_l^k|^2 d rho / rho for l = 0..L, in one sweep over rho nodes.
inline std::vector< double > admissibility_integrals(Family fam, double tau, int L, int K_cut = -1,
                                                     double h = 1.0 / 16.0)
{
    if (!(tau >= 1.0))
        throw DomainError("admissibility: tau must be >= 1");
    const int K = std::min(L, K_cut < 0 ? default_k_cut(tau, 1e-12) : K_cut);
    const RhoQuadrature rq = RhoQuadrature::make(h);
    std::vector< double > G(static_cast< std::size_t >(L + 1), 0.0);
    std::vector< double > fk(static_cast< std::size_t >(K + 1), 0.0);
    for (int k = 1; k <= K; k += 2)
        fk[static_cast< std::size_t >(k)] = f_tau_coefficient(tau, k);

    for (std::size_t i = 0; i < rq.size(); ++i)
    {
        const double rho = rq.nodes[i];
        const double w = rq.weights[i] / rho;
        for (int l = 1; l <= L; ++l)
        {
            const double c = detail::closed_k1(fam, l, rho, tau);
            G[static_cast< std::size_t >(l)] += w * 2.0 * c * c;
        }
        // higher orders contribute ~rho^2 |.|^2 near 0; skip below 1e-9 where they are far below 1e-16
        if (K < 3 || rho < 1e-9)
            continue;
        const auto mom = detail::radial_moments(fam, rho, L);
        for (int l = 3; l <= L; ++l)
            for (int k = 3; k <= std::min(l, K); k += 2)
            {
                const double c = mom[triangle_index(l, k)] * fk[static_cast< std::size_t >(k)];
                G[static_cast< std::size_t >(l)] += w * 2.0 * c * c;
            }
    }
    return G;
}

inline double admissibility_integral(Family fam, double tau, int l, int K_cut = -1)
{
    if (l < 0)
        throw DomainError("admissibility_integral: l must be >= 0");
    return admissibility_integrals(fam, tau, l, K_cut)[static_cast< std::size_t >(l)];
}

struct AdmissibilityReport
{
    Family family = Family::Omega;
    double tau = 1.0;
    int order = 0;
    int L_max = 0;
    int K_cut = 0;
    std::vector< double > G;        // G(l), l = 0..L_max
    std::vector< double > G_coarse; // same at twice the rho step
    double A = 0.0;                 // min_{l > order} G(l)/(2l+1)
    double B = 0.0;                 // max_l G(l)/(2l+1)
    double B_analytic = 0.0;
    double vanishing_residual = 0.0; // max_{l <= order} G(l)
    double refinement_change = 0.0;  // max relative change between rho steps
    double decay_exponent = 0.0;     // slope of log(G/(2l+1)) vs log l over the upper half

    bool positive() const noexcept { return A > 0.0; }
    bool bounded() const noexcept { return B <= B_analytic * (1.0 + 1e-6); }
    bool vanishes() const noexcept { return vanishing_residual < 1e-12; }
    bool passed() const noexcept { return positive() && bounded() && vanishes(); }
};

inline AdmissibilityReport admissibility_report(Family fam, double tau, int L_max, int K_cut = -1)
{
    if (L_max < 10)
        throw ConfigError("admissibility_report: L_max must be >= 10");
    AdmissibilityReport rep;
    rep.family = fam;
    rep.tau = tau;
    rep.order = nominal_order(fam);
    rep.L_max = L_max;
    rep.K_cut = std::min(L_max, K_cut < 0 ? default_k_cut(tau, 1e-12) : K_cut);
    rep.G = admissibility_integrals(fam, tau, L_max, rep.K_cut, 1.0 / 32.0);
    rep.G_coarse = admissibility_integrals(fam, tau, L_max, rep.K_cut, 1.0 / 16.0);
    rep.B_analytic = analytic_B(fam, tau);
    rep.A = std::numeric_limits< double >::infinity();
    for (int l = 0; l <= L_max; ++l)
    {
        const auto i = static_cast< std::size_t >(l);
        const double g = rep.G[i] / (2.0 * l + 1.0);
        if (l <= rep.order)
            rep.vanishing_residual = std::max(rep.vanishing_residual, std::abs(rep.G[i]));
        else
            rep.A = std::min(rep.A, g);
        rep.B = std::max(rep.B, g);
        if (rep.G[i] > 0.0)
            rep.refinement_change =
                std::max(rep.refinement_change, std::abs(rep.G[i] - rep.G_coarse[i]) / rep.G[i]);
    }
    // least-squares slope on log-log over l in [L/2, L]
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (int l = std::max(2, L_max / 2); l <= L_max; ++l)
    {
        const double g = rep.G[static_cast< std::size_t >(l)] / (2.0 * l + 1.0);
        if (!(g > 0.0))
            continue;
        const double x = std::log(l), y = std::log(g);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    if (n >= 2)
        rep.decay_exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return rep;
}

/// L^2(S^2) norm squared of the band-limited kernel, by Parseval.
inline double wavelet_norm_squared(const WaveletSpec& spec, int L)
{
    return wavelet_coefficients(spec, L).norm_squared();
}

} // namespace sphwav

#endif
