#ifndef SPHWAV_PROFILES_HPP
#define SPHWAV_PROFILES_HPP

// Kernel constructions: the periodized difference-of-Gaussians angular profile f_tau,
// the Poisson kernel, and the colatitudinal profiles
//   omega_rho   = rho sin^5(t) r d/dr [ r d/dr p_rho ],
//   upsilon_rho = rho sin^5(t) r^2 d^2/dr^2 p_rho,      r = e^{-rho},
// in rational, Legendre-series and P_l^1-series form.

#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "error.hpp"
#include "quadrature.hpp"
#include "sphfn.hpp"

namespace sphwav
{

enum class Family
{
    Omega,
    Upsilon
};

inline std::string to_string(Family f)
{
    return f == Family::Omega ? "omega" : "upsilon";
}

inline Family parse_family(const std::string& name)
{
    if (name == "omega" || name == "Omega" || name == "O")
        return Family::Omega;
    if (name == "upsilon" || name == "Upsilon" || name == "U")
        return Family::Upsilon;
    throw ConfigError("unknown wavelet family '" + name + "' (expected omega or upsilon)");
}

/// Degree m below which the family's coefficients are meant to vanish (l <= m).
constexpr int nominal_order(Family f) noexcept
{
    return f == Family::Omega ? 0 : 1;
}

/// Smallest scale accepted by the pointwise profile evaluators.
inline constexpr double min_supported_rho = 1e-4;

struct WaveletSpec
{
    Family family = Family::Omega;
    double rho = 1.0;
    double tau = 1.0;

    void validate(double tau_cap = std::numeric_limits< double >::infinity()) const
    {
        if (!(rho > 0.0))
            throw DomainError("WaveletSpec: scale rho must be positive");
        if (!(tau >= 1.0))
            throw DomainError("WaveletSpec: selectivity tau must be >= 1");
        if (tau > tau_cap)
            throw DomainError("WaveletSpec: tau exceeds configured cap");
    }

    double r() const noexcept { return std::exp(-rho); }
};

// ---------------------------------------------------------------------------
// Angular profile

inline double F_tau(double tau, double phi)
{
    const double a = tau * phi;
    const double b = tau * (phi - pi);
    return std::exp(-0.5 * a * a) - std::exp(-0.5 * b * b);
}

namespace detail
{
/// Number of periodization images so that tau^2 (2 pi J - pi)^2 / 2 > 38.
inline int periodization_images(double tau)
{
    const double reach = std::sqrt(76.0) / tau + pi;
    return static_cast< int >(std::ceil(reach / (2.0 * pi))) + 1;
}

inline double wrap_angle(double phi)
{
    double w = std::fmod(phi, 2.0 * pi);
    if (w < 0.0)
        w += 2.0 * pi;
    return w;
}
} // namespace detail

/// Periodization sum_j F_tau(phi + 2 j pi).
inline double f_tau(double tau, double phi)
{
    if (!(tau >= 1.0))
        throw DomainError("f_tau: tau must be >= 1");
    const double p = detail::wrap_angle(phi);
    const int J = detail::periodization_images(tau);
    double s = 0.0;
    for (int j = -J; j <= J; ++j)
        s += F_tau(tau, p + 2.0 * pi * j);
    return s;
}

inline double f_tau_derivative(double tau, double phi)
{
    const double p = detail::wrap_angle(phi);
    const int J = detail::periodization_images(tau);
    const double t2 = tau * tau;
    double s = 0.0;
    for (int j = -J; j <= J; ++j)
    {
        const double x = p + 2.0 * pi * j;
        const double y = x - pi;
        s += -t2 * x * std::exp(-0.5 * t2 * x * x) + t2 * y * std::exp(-0.5 * t2 * y * y);
    }
    return s;
}

/// Truncated Fourier form (1/tau) sqrt(2/pi) sum_{k odd, |k| <= K} e^{-k^2/(2 tau^2)} e^{ik phi}.
inline double f_tau_series(double tau, double phi, int K_max)
{
    double s = 0.0;
    for (int k = 1; k <= K_max; k += 2)
        s += std::exp(-0.5 * k * k / (tau * tau)) * std::cos(k * phi);
    return 2.0 * s / tau * std::sqrt(2.0 / pi);
}

/// Smallest odd K with e^{-K^2/2tau^2} / K < eps.
inline int default_k_cut(double tau, double eps = 1e-14)
{
    int K = 1;
    while (std::exp(-0.5 * static_cast< double >(K) * K / (tau * tau)) / K >= eps)
        K += 2;
    return K;
}

/// Fourier coefficients (f_tau)^_k = int_0^{2pi} f_tau e^{-ik phi} dphi.
struct AngularProfileSeries
{
    double tau = 1.0;
    int K_max = 1;
    std::vector< double > odd; // odd[i] is the coefficient of k = 2i + 1

    double coefficient(int k) const noexcept
    {
        const int q = std::abs(k);
        if (q % 2 == 0 || q > K_max)
            return 0.0;
        return odd[static_cast< std::size_t >(q / 2)];
    }

    /// sum_{|k| > K_max} |coefficient|, bounded by the first omitted term times a geometric factor.
    double tail_bound() const noexcept
    {
        const double k = K_max + 2.0;
        const double first = 2.0 * std::sqrt(2.0 * pi) / tau * std::exp(-0.5 * k * k / (tau * tau));
        const double ratio = std::exp(-2.0 * (k + 1.0) / (tau * tau));
        return 2.0 * first / (1.0 - ratio);
    }
};

inline double f_tau_coefficient(double tau, int k)
{
    if (k % 2 == 0)
        return 0.0;
    return 2.0 * std::sqrt(2.0 * pi) / tau * std::exp(-0.5 * static_cast< double >(k) * k / (tau * tau));
}

inline AngularProfileSeries f_tau_coefficients(double tau, int K_max)
{
    if (!(tau >= 1.0))
        throw DomainError("f_tau_coefficients: tau must be >= 1");
    AngularProfileSeries s;
    s.tau = tau;
    s.K_max = K_max % 2 == 0 ? K_max - 1 : K_max;
    for (int k = 1; k <= s.K_max; k += 2)
        s.odd.push_back(f_tau_coefficient(tau, k));
    return s;
}

/// int_0^{2pi} f_tau^2 dphi = (1/2pi) sum_k |coefficient_k|^2.
inline double f_tau_norm_squared(double tau)
{
    double s = 0.0;
    const int K = default_k_cut(tau, 1e-18);
    for (int k = 1; k <= K; k += 2)
        s += std::exp(-static_cast< double >(k) * k / (tau * tau));
    return 8.0 * s / (tau * tau);
}

// ---------------------------------------------------------------------------
// Colatitudinal profiles

namespace detail
{
inline void check_rho(double rho)
{
    if (!(rho >= min_supported_rho))
        throw DomainError("profile evaluation: rho below supported range (" + std::to_string(rho) + ")");
}

/// Cancellation-free variables: a = 1 - r, b = 1 - cos t, D = 1 - 2 r cos t + r^2 = a^2 + 2 r b.
struct RadialVars
{
    double r, a, b, s, c, D;

    RadialVars(double rho, double theta)
    {
        r = std::exp(-rho);
        a = -std::expm1(-rho);
        const double h = std::sin(0.5 * theta);
        b = 2.0 * h * h;
        s = std::sin(theta);
        c = std::cos(theta);
        D = a * a + 2.0 * r * b;
    }
};

// Numerators in (a, b); equal to r(10-19r^2+r^4) - (3-14r^2-5r^4)c - r(9-r^2)c^2 and
// 5-23r^2+2r^4 + 4r(7+r^2)c - (15+r^2)c^2 respectively.
inline double omega_numerator(double a, double b)
{
    const double a2 = a * a, a3 = a2 * a, a4 = a3 * a, a5 = a4 * a, b2 = b * b;
    return -a5 - 5.0 * a4 * b + 10.0 * a4 - a3 * b2 + 22.0 * a3 * b - 12.0 * a3 + 3.0 * a2 * b2 - 50.0 * a2 * b +
           6.0 * a * b2 + 36.0 * a * b - 8.0 * b2;
}

inline double omega_numerator_db(double a, double b)
{
    const double a2 = a * a, a3 = a2 * a, a4 = a3 * a;
    return -5.0 * a4 - 2.0 * a3 * b + 22.0 * a3 + 6.0 * a2 * b - 50.0 * a2 + 12.0 * a * b + 36.0 * a - 16.0 * b;
}

inline double upsilon_numerator(double a, double b)
{
    const double a2 = a * a, a3 = a2 * a, a4 = a3 * a, b2 = b * b;
    return 2.0 * a4 + 4.0 * a3 * b - 12.0 * a3 - a2 * b2 - 10.0 * a2 * b + 2.0 * a * b2 + 36.0 * a * b - 16.0 * b2;
}

inline double upsilon_numerator_db(double a, double b)
{
    const double a2 = a * a, a3 = a2 * a;
    return 4.0 * a3 - 2.0 * a2 * b - 10.0 * a2 + 4.0 * a * b + 36.0 * a - 32.0 * b;
}

/// Unchecked rational profile; prefactor -rho r^p / (4 pi) with p = 1 (omega) or 2 (upsilon).
inline double radial_profile_unchecked(Family fam, double rho, double theta)
{
    const RadialVars v(rho, theta);
    const double num = fam == Family::Omega ? omega_numerator(v.a, v.b) : upsilon_numerator(v.a, v.b);
    const double pre = fam == Family::Omega ? v.r : v.r * v.r;
    const double s5 = v.s * v.s * v.s * v.s * v.s;
    return -rho * pre * num * s5 / (4.0 * pi * std::pow(v.D, 3.5));
}

inline double radial_profile_derivative_unchecked(Family fam, double rho, double theta)
{
    const RadialVars v(rho, theta);
    const bool om = fam == Family::Omega;
    const double num = om ? omega_numerator(v.a, v.b) : upsilon_numerator(v.a, v.b);
    const double dnum = (om ? omega_numerator_db(v.a, v.b) : upsilon_numerator_db(v.a, v.b)) * v.s;
    const double pre = om ? v.r : v.r * v.r;
    const double s4 = v.s * v.s * v.s * v.s;
    const double s5 = s4 * v.s;
    const double D72 = std::pow(v.D, 3.5);
    const double dD = 2.0 * v.r * v.s;
    const double d = dnum * s5 / D72 + num * 5.0 * s4 * v.c / D72 - 3.5 * num * s5 * dD / (D72 * v.D);
    return -rho * pre * d / (4.0 * pi);
}

/// Smallest L with (2L+1) L^2 r^L < eps.
inline int series_truncation(double r, double eps = 1e-14)
{
    int L = 1;
    while ((2.0 * L + 1.0) * L * L * std::pow(r, L) >= eps)
        ++L;
    return L;
}
} // namespace detail

/// p_rho(t) = (1/4pi) (1 - r^2) / (1 - 2 r cos t + r^2)^{3/2}.
inline double poisson_kernel(double rho, double theta)
{
    if (!(rho > 0.0))
        throw DomainError("poisson_kernel: rho must be positive");
    const detail::RadialVars v(rho, theta);
    const double one_minus_r2 = v.a * (1.0 + v.r);
    return one_minus_r2 / (4.0 * pi * std::pow(v.D, 1.5));
}

inline double poisson_kernel_series(double rho, double theta)
{
    const double r = std::exp(-rho);
    const double t = std::cos(theta);
    const int L = detail::series_truncation(r);
    double p0 = 1.0, p1 = t, rl = r;
    double s = 1.0 + 3.0 * r * t;
    for (int l = 1; l < L; ++l)
    {
        const double p2 = ((2.0 * l + 1.0) * t * p1 - l * p0) / (l + 1.0);
        p0 = p1;
        p1 = p2;
        rl *= r;
        s += (2.0 * l + 3.0) * rl * p1;
    }
    return s / (4.0 * pi);
}

inline double omega_profile(double rho, double theta)
{
    detail::check_rho(rho);
    return detail::radial_profile_unchecked(Family::Omega, rho, theta);
}

inline double upsilon_profile(double rho, double theta)
{
    detail::check_rho(rho);
    return detail::radial_profile_unchecked(Family::Upsilon, rho, theta);
}

inline double radial_profile(Family fam, double rho, double theta)
{
    detail::check_rho(rho);
    return detail::radial_profile_unchecked(fam, rho, theta);
}

/// d/dtheta of the colatitudinal profile.
inline double radial_profile_derivative(Family fam, double rho, double theta)
{
    detail::check_rho(rho);
    return detail::radial_profile_derivative_unchecked(fam, rho, theta);
}

/// rho sin^5(t)/(4pi) sum_l (2l+1) w_l r^l P_l(cos t), w_l = l^2 (omega) or l(l-1) (upsilon).
inline double radial_profile_series(Family fam, double rho, double theta)
{
    detail::check_rho(rho);
    const double r = std::exp(-rho);
    const double t = std::cos(theta);
    const double st = std::sin(theta);
    const int L = detail::series_truncation(r);
    double p0 = 1.0, p1 = t, rl = r;
    double s = fam == Family::Omega ? 3.0 * r * t : 0.0;
    for (int l = 1; l < L; ++l)
    {
        const double p2 = ((2.0 * l + 1.0) * t * p1 - l * p0) / (l + 1.0);
        p0 = p1;
        p1 = p2;
        rl *= r;
        const double n = l + 1.0;
        const double w = fam == Family::Omega ? n * n : n * (n - 1.0);
        s += (2.0 * n + 1.0) * w * rl * p1;
    }
    return rho * st * st * st * st * st * s / (4.0 * pi);
}

inline double omega_profile_series(double rho, double theta)
{
    return radial_profile_series(Family::Omega, rho, theta);
}

inline double upsilon_profile_series(double rho, double theta)
{
    return radial_profile_series(Family::Upsilon, rho, theta);
}

// ---------------------------------------------------------------------------
// P_l^1 expansions

/// Coefficients c_0..c_5 with (2l+1) sin^5(t) P_l(cos t) = sum_i c_i P^1_{l-5+2i}(cos t), l >= 4.
inline std::array< double, 6 > sin5_expansion(int l)
{
    if (l < 4)
        throw DomainError("sin5_expansion: requires l >= 4");
    const double n = l;
    return {
        (n - 3) * (n - 2) * (n - 1) * n / ((2 * n - 7) * (2 * n - 5) * (2 * n - 3) * (2 * n - 1)),
        -(n - 1) * n * (5 * n * n - 9 * n - 26) / ((2 * n - 7) * (2 * n - 3) * (2 * n - 1) * (2 * n + 3)),
        2 * (5 * n * n * n * n + 2 * n * n * n - 41 * n * n - 14 * n + 60) /
            ((2 * n - 5) * (2 * n - 3) * (2 * n + 3) * (2 * n + 5)),
        -2 * (5 * n * n * n * n + 18 * n * n * n - 17 * n * n - 54 * n + 36) /
            ((2 * n - 3) * (2 * n - 1) * (2 * n + 5) * (2 * n + 7)),
        (n + 1) * (n + 2) * (5 * n * n + 19 * n - 12) / ((2 * n - 1) * (2 * n + 3) * (2 * n + 5) * (2 * n + 9)),
        -(n + 1) * (n + 2) * (n + 3) * (n + 4) / ((2 * n + 3) * (2 * n + 5) * (2 * n + 7) * (2 * n + 9)),
    };
}

namespace detail
{
/// Coefficient of P_l^1 in sin^5(t) P_n(cos t), by Gauss-Legendre projection (exact: polynomial integrand).
inline double sin5_projection(int n, int l)
{
    if (l < 1 || n < 0 || n > l + 5 || n < l - 5)
        return 0.0;
    const QuadratureRule rule = gauss_legendre(static_cast< std::size_t >(l + 8));
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i)
    {
        const double t = rule.nodes[i];
        const double s2 = (1.0 - t) * (1.0 + t);
        const double s = std::sqrt(s2);
        // lambda_l^1 = N_l1 P_l^1 keeps magnitudes bounded at large l
        acc += rule.weights[i] * s2 * s2 * s * legendre_P(n, t) * normalized_legendre(l, 1, t);
    }
    // P_l^1 = lambda_l^1 / N_l1 and ||P_l^1||^2 = 2 l (l+1) / (2l+1)
    const double ld = l;
    const double N = std::sqrt((2.0 * ld + 1.0) / (4.0 * pi * ld * (ld + 1.0)));
    return acc / N * (2.0 * ld + 1.0) / (2.0 * ld * (ld + 1.0));
}

inline double degree_weight(Family fam, int n)
{
    const double nd = n;
    return fam == Family::Omega ? nd * nd : nd * (nd - 1.0);
}
} // namespace detail

/// P_l^1 coefficient of (4pi/rho) times the colatitudinal profile, by projecting the Legendre series
/// term by term. Valid for every l >= 1.
inline double radial_p1_coefficient_projection(Family fam, int l, double r)
{
    if (l < 1)
        throw DomainError("P_l^1 coefficient: requires l >= 1");
    double s = 0.0;
    for (int n = std::max(1, l - 5); n <= l + 5; ++n)
    {
        if ((n + l) % 2 == 0)
            continue;
        s += (2.0 * n + 1.0) * detail::degree_weight(fam, n) * std::pow(r, n) * detail::sin5_projection(n, l);
    }
    return s;
}

namespace detail
{
/// Six-term closed form, l >= 9.
inline double radial_p1_coefficient_closed(Family fam, int l, double r)
{
    const double n = l;
    const double d4p = (2 * n + 3) * (2 * n + 5) * (2 * n + 7) * (2 * n + 9);
    const double q5 = 5 * n * n + 21 * n - 8;
    const double q1 = 5 * n * n * n * n + 22 * n * n * n - 5 * n * n - 70 * n + 12;
    const double qm1 = 5 * n * n * n * n - 2 * n * n * n - 41 * n * n + 14 * n + 60;
    const double qm3 = 5 * n * n - 11 * n - 24;
    const double rl = std::pow(r, l - 5);
    const double r2 = r * r;

    double c5, c3, c1, cm1, cm3, cm5;
    if (fam == Family::Omega)
    {
        c5 = (n + 2) * (n + 3) * (n + 4) * (n + 5) * (n + 5) * (n + 5) / d4p;
        c3 = -(n + 2) * (n + 3) * (n + 3) * (n + 3) * q5 / ((2 * n - 1) * (2 * n + 3) * (2 * n + 5) * (2 * n + 9));
        c1 = 2 * (n + 1) * (n + 1) * q1 / ((2 * n - 3) * (2 * n - 1) * (2 * n + 5) * (2 * n + 7));
        cm1 = -2 * (n - 1) * (n - 1) * qm1 / ((2 * n - 5) * (2 * n - 3) * (2 * n + 3) * (2 * n + 5));
        cm3 = (n - 3) * (n - 3) * (n - 2) * (n - 1) * qm3 / ((2 * n - 7) * (2 * n - 3) * (2 * n - 1) * (2 * n + 3));
        cm5 = -(n - 5) * (n - 5) * (n - 4) * (n - 3) * (n - 2) * (n - 1) /
              ((2 * n - 7) * (2 * n - 5) * (2 * n - 3) * (2 * n - 1));
    }
    else
    {
        c5 = (n + 2) * (n + 3) * (n + 4) * (n + 4) * (n + 5) * (n + 5) / d4p;
        c3 = -(n + 2) * (n + 2) * (n + 3) * (n + 3) * q5 / ((2 * n - 1) * (2 * n + 3) * (2 * n + 5) * (2 * n + 9));
        c1 = 2 * n * (n + 1) * q1 / ((2 * n - 3) * (2 * n - 1) * (2 * n + 5) * (2 * n + 7));
        cm1 = -2 * (n - 2) * (n - 1) * qm1 / ((2 * n - 5) * (2 * n - 3) * (2 * n + 3) * (2 * n + 5));
        cm3 = (n - 4) * (n - 3) * (n - 2) * (n - 1) * qm3 / ((2 * n - 7) * (2 * n - 3) * (2 * n - 1) * (2 * n + 3));
        cm5 = -(n - 6) * (n - 5) * (n - 4) * (n - 3) * (n - 2) * (n - 1) /
              ((2 * n - 7) * (2 * n - 5) * (2 * n - 3) * (2 * n - 1));
    }
    // Horner in r^2 starting from r^{l-5}
    return rl * (cm5 + r2 * (cm3 + r2 * (cm1 + r2 * (c1 + r2 * (c3 + r2 * c5)))));
}
} // namespace detail

/// beta_l: omega_rho = (rho/4pi) sum_{l>=1} beta_l P_l^1(cos t). Closed form for l >= 9,
/// term-wise projection below.
inline double beta_l(int l, double r)
{
    if (l < 1)
        throw DomainError("beta_l: requires l >= 1");
    if (!(r > 0.0 && r <= 1.0))
        throw DomainError("beta_l: requires r in (0, 1]");
    return l >= 9 ? detail::radial_p1_coefficient_closed(Family::Omega, l, r)
                  : radial_p1_coefficient_projection(Family::Omega, l, r);
}

/// gamma_l: upsilon_rho = (rho/4pi) sum_l gamma_l P_l^1(cos t). Note gamma_1 does not vanish.
inline double gamma_l(int l, double r)
{
    if (l < 1)
        throw DomainError("gamma_l: requires l >= 1");
    if (!(r > 0.0 && r <= 1.0))
        throw DomainError("gamma_l: requires r in (0, 1]");
    return l >= 9 ? detail::radial_p1_coefficient_closed(Family::Upsilon, l, r)
                  : radial_p1_coefficient_projection(Family::Upsilon, l, r);
}

inline double radial_p1_coefficient(Family fam, int l, double r)
{
    return fam == Family::Omega ? beta_l(l, r) : gamma_l(l, r);
}

/// Truncated expansion sum_l coeffs[l] P_l^k(cos t) scaled by rho/4pi.
struct LegendreExpansion
{
    int order = 1;
    double rho = 1.0;
    std::vector< double > coeffs; // index l; coeffs[0] unused
    int L_max = 0;

    double evaluate(double theta) const
    {
        std::vector< double > lam(triangle_size(L_max));
        normalized_legendre_table(L_max, std::cos(theta), lam);
        double s = 0.0;
        for (int l = std::max(order, 1); l <= L_max; ++l)
        {
            const double ld = l;
            const double N = std::sqrt((2.0 * ld + 1.0) / (4.0 * pi * ld * (ld + 1.0)));
            s += coeffs[static_cast< std::size_t >(l)] * lam[triangle_index(l, 1)] / N;
        }
        return rho / (4.0 * pi) * s;
    }
};

/// P_l^1 expansion of the colatitudinal profile, truncated once l^3 r^{l-5} < eps.
inline LegendreExpansion radial_legendre_expansion(Family fam, double rho, double eps = 1e-13)
{
    detail::check_rho(rho);
    const double r = std::exp(-rho);
    LegendreExpansion e;
    e.rho = rho;
    int L = 9;
    while (std::pow(L, 3) * std::pow(r, L - 5) >= eps)
        ++L;
    e.L_max = L;
    e.coeffs.assign(static_cast< std::size_t >(L + 1), 0.0);
    for (int l = 1; l <= L; ++l)
        e.coeffs[static_cast< std::size_t >(l)] = radial_p1_coefficient(fam, l, r);
    return e;
}

/// Separable kernel value radial(theta) * f_tau(phi).
inline double evaluate_wavelet(const WaveletSpec& spec, double theta, double phi)
{
    spec.validate();
    return radial_profile(spec.family, spec.rho, theta) * f_tau(spec.tau, phi);
}

} // namespace sphwav

#endif
