#ifndef SPHWAV_SPHFN_HPP
#define SPHWAV_SPHFN_HPP

// Legendre machinery, spherical harmonics and band-limited spherical signals.
//
// Conventions:
//   x = (cos t, sin t cos p, sin t sin p), the north pole is e = (1, 0, 0);
//   <F, G> = int conj(F) G dsigma with int dsigma = 4 pi;
//   P_l^k(t) = (-1)^k (1 - t^2)^{k/2} d^k/dt^k P_l(t);
//   Y_l^k = (-1)^k sqrt((2l+1)/(4 pi) (l-k)!/(l+k)!) P_l^k(cos t) e^{ik p}, Y_l^{-k} = conj(Y_l^k).
// The two (-1)^k factors cancel, so Y_l^k carries no Condon-Shortley phase.

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "error.hpp"
#include "quadrature.hpp"

namespace sphwav
{

using complex = std::complex< double >;

inline constexpr double pi = std::numbers::pi;

struct HarmonicIndex
{
    int l = 0;
    int k = 0;

    bool valid() const noexcept { return l >= 0 && std::abs(k) <= l; }
};

// ---------------------------------------------------------------------------
// Legendre functions

inline void check_unit_interval(double t, const char* who)
{
    if (!(std::abs(t) <= 1.0))
        throw DomainError(std::string(who) + ": argument outside [-1, 1]");
}

inline double legendre_P(int l, double t)
{
    if (l < 0)
        throw DomainError("legendre_P: negative degree");
    check_unit_interval(t, "legendre_P");
    double p0 = 1.0;
    if (l == 0)
        return p0;
    double p1 = t;
    for (int n = 1; n < l; ++n)
    {
        const double p2 = ((2.0 * n + 1.0) * t * p1 - n * p0) / (n + 1.0);
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

/// Unnormalized P_l^k with the (-1)^k factor, via the (l - k)-recurrence seeded at P_k^k.
/// Overflows for large l + k; use normalized_legendre beyond l ~ 150.
inline double assoc_legendre_P(int l, int k, double t)
{
    if (l < 0 || k < 0 || k > l)
        throw DomainError("assoc_legendre_P: need 0 <= k <= l");
    check_unit_interval(t, "assoc_legendre_P");
    const double s = std::sqrt((1.0 - t) * (1.0 + t));
    double pkk = 1.0;
    for (int i = 1; i <= k; ++i)
        pkk *= -(2.0 * i - 1.0) * s;
    if (l == k)
        return pkk;
    double p0 = pkk;
    double p1 = t * (2.0 * k + 1.0) * pkk;
    for (int n = k + 2; n <= l; ++n)
    {
        const double p2 = ((2.0 * n - 1.0) * t * p1 - (n + k - 1.0) * p0) / (n - k);
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

/// Flat index of (l, k), 0 <= k <= l, in a lower-triangular table.
constexpr std::size_t triangle_index(int l, int k) noexcept
{
    return static_cast< std::size_t >(l) * static_cast< std::size_t >(l + 1) / 2 + static_cast< std::size_t >(k);
}

constexpr std::size_t triangle_size(int L) noexcept
{
    return triangle_index(L + 1, 0);
}

/// lambda_l^k(t) = sqrt((2l+1)/(4 pi) (l-k)!/(l+k)!) P_l^k(t) for all 0 <= k <= l <= L.
/// Uses the normalized recurrence, stable for large degrees.
inline void normalized_legendre_table(int L, double t, std::span< double > out)
{
    if (out.size() < triangle_size(L))
        throw IndexError("normalized_legendre_table: output too small");
    const double s = std::sqrt(std::max(0.0, (1.0 - t) * (1.0 + t)));
    double diag = std::sqrt(1.0 / (4.0 * pi));
    for (int k = 0; k <= L; ++k)
    {
        if (k > 0)
            diag *= -std::sqrt((2.0 * k + 1.0) / (2.0 * k)) * s;
        out[triangle_index(k, k)] = diag;
        if (k == L)
            break;
        double p0 = diag;
        double p1 = t * std::sqrt(2.0 * k + 3.0) * diag;
        out[triangle_index(k + 1, k)] = p1;
        for (int l = k + 2; l <= L; ++l)
        {
            const double ld = l, kd = k;
            const double a = std::sqrt((4.0 * ld * ld - 1.0) / (ld * ld - kd * kd));
            const double b = std::sqrt(((ld - 1.0) * (ld - 1.0) - kd * kd) / (4.0 * (ld - 1.0) * (ld - 1.0) - 1.0));
            const double p2 = a * (t * p1 - b * p0);
            out[triangle_index(l, k)] = p2;
            p0 = p1;
            p1 = p2;
        }
    }
}

inline double normalized_legendre(int l, int k, double t)
{
    if (l < 0 || k < 0 || k > l)
        throw DomainError("normalized_legendre: need 0 <= k <= l");
    check_unit_interval(t, "normalized_legendre");
    std::vector< double > table(triangle_size(l));
    normalized_legendre_table(l, t, table);
    return table[triangle_index(l, k)];
}

inline complex spherical_harmonic(HarmonicIndex idx, double theta, double phi)
{
    if (!idx.valid())
        throw IndexError("spherical_harmonic: need |k| <= l");
    const int q = std::abs(idx.k);
    const double sign = (q % 2 == 0) ? 1.0 : -1.0;
    const double lam = normalized_legendre(idx.l, q, std::cos(theta));
    return sign * lam * std::polar(1.0, idx.k * phi);
}

// ---------------------------------------------------------------------------
// Grids

/// Gauss-Legendre nodes in u = cos(theta), mapped to colatitudes in increasing order.
struct ColatGrid
{
    std::vector< double > theta;
    std::vector< double > cos_theta;
    std::vector< double > weights; // integrate g(theta) sin(theta) dtheta

    std::size_t size() const noexcept { return theta.size(); }
};

inline ColatGrid make_colat_grid(std::size_t n)
{
    const QuadratureRule rule = gauss_legendre(n);
    ColatGrid grid;
    grid.theta.resize(n);
    grid.cos_theta.resize(n);
    grid.weights.resize(n);
    // u ascending -> theta descending; reverse
    for (std::size_t i = 0; i < n; ++i)
    {
        const std::size_t src = n - 1 - i;
        grid.cos_theta[i] = rule.nodes[src];
        grid.theta[i] = std::acos(rule.nodes[src]);
        grid.weights[i] = rule.weights[src];
    }
    return grid;
}

struct SphericalGridSpec
{
    int L_band = 0;
    std::size_t n_theta = 1;
    std::size_t n_phi = 1;

    /// Smallest grid integrating products of band-L functions exactly.
    static SphericalGridSpec for_band(int L)
    {
        return {L, static_cast< std::size_t >(L + 1), static_cast< std::size_t >(2 * L + 1)};
    }

    bool resolves(int L) const noexcept
    {
        return L >= 0 && n_theta >= static_cast< std::size_t >(L + 1) && n_phi >= static_cast< std::size_t >(2 * L + 1);
    }

    double phi(std::size_t j) const noexcept { return 2.0 * pi * static_cast< double >(j) / static_cast< double >(n_phi); }

    bool operator==(const SphericalGridSpec&) const = default;
};

// ---------------------------------------------------------------------------
// Coefficient tables and signals

/// Dense coefficients c_l^k for 0 <= l <= L, -l <= k <= l; flat index l^2 + l + k.
class CoefficientTable
{
public:
    CoefficientTable() = default;
    explicit CoefficientTable(int L) : L_(L), data_(static_cast< std::size_t >((L + 1) * (L + 1)))
    {
        if (L < 0)
            throw DomainError("CoefficientTable: negative band limit");
    }

    static constexpr std::size_t index(int l, int k) noexcept
    {
        return static_cast< std::size_t >(l * l + l + k);
    }

    int band_limit() const noexcept { return L_; }
    std::size_t size() const noexcept { return data_.size(); }

    complex& operator()(int l, int k) { return data_[checked(l, k)]; }
    const complex& operator()(int l, int k) const { return data_[checked(l, k)]; }

    std::span< complex > data() noexcept { return data_; }
    std::span< const complex > data() const noexcept { return data_; }

    /// Squared L2 norm by Parseval.
    double norm_squared() const noexcept
    {
        double s = 0.0;
        for (const complex& c : data_)
            s += std::norm(c);
        return s;
    }

    /// Zero every entry with l <= m.
    void zero_low_degrees(int m)
    {
        for (int l = 0; l <= std::min(m, L_); ++l)
            for (int k = -l; k <= l; ++k)
                data_[index(l, k)] = 0.0;
    }

    /// Copy truncated or zero-padded to band limit L.
    CoefficientTable resized(int L) const
    {
        CoefficientTable out(L);
        for (int l = 0; l <= std::min(L, L_); ++l)
            for (int k = -l; k <= l; ++k)
                out.data_[index(l, k)] = data_[index(l, k)];
        return out;
    }

private:
    std::size_t checked(int l, int k) const
    {
        if (l < 0 || l > L_ || std::abs(k) > l)
            throw IndexError("CoefficientTable: index (" + std::to_string(l) + "," + std::to_string(k) + ") out of range");
        return index(l, k);
    }

    int L_ = -1;
    std::vector< complex > data_;
};

/// <a, b> = sum conj(a) b over the common band.
inline complex inner_product(const CoefficientTable& a, const CoefficientTable& b)
{
    const std::size_t n = std::min(a.size(), b.size());
    complex s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        s += std::conj(a.data()[i]) * b.data()[i];
    return s;
}

enum class ValueKind
{
    Real,
    Complex
};

/// Samples on the Gauss-theta x uniform-phi grid, theta-major.
class SphericalSignal
{
public:
    SphericalSignal() = default;
    SphericalSignal(SphericalGridSpec spec, ValueKind kind = ValueKind::Real)
        : spec_(spec), colat_(make_colat_grid(spec.n_theta)), kind_(kind), values_(spec.n_theta * spec.n_phi)
    {}

    template < typename F >
    static SphericalSignal sample(SphericalGridSpec spec, F&& fn, ValueKind kind = ValueKind::Real)
    {
        SphericalSignal s(spec, kind);
        for (std::size_t i = 0; i < spec.n_theta; ++i)
            for (std::size_t j = 0; j < spec.n_phi; ++j)
                s.at(i, j) = fn(s.theta(i), spec.phi(j));
        return s;
    }

    const SphericalGridSpec& spec() const noexcept { return spec_; }
    const ColatGrid& colat() const noexcept { return colat_; }
    ValueKind kind() const noexcept { return kind_; }
    void set_kind(ValueKind k) noexcept { kind_ = k; }

    double theta(std::size_t i) const noexcept { return colat_.theta[i]; }
    double phi(std::size_t j) const noexcept { return spec_.phi(j); }

    complex& at(std::size_t i, std::size_t j) noexcept { return values_[i * spec_.n_phi + j]; }
    const complex& at(std::size_t i, std::size_t j) const noexcept { return values_[i * spec_.n_phi + j]; }

    std::span< complex > values() noexcept { return values_; }
    std::span< const complex > values() const noexcept { return values_; }

    /// Quadrature of g(f(x)) over the sphere.
    template < typename G >
    double integrate(G&& g) const
    {
        const double dphi = 2.0 * pi / static_cast< double >(spec_.n_phi);
        double s = 0.0;
        for (std::size_t i = 0; i < spec_.n_theta; ++i)
        {
            double ring = 0.0;
            for (std::size_t j = 0; j < spec_.n_phi; ++j)
                ring += g(at(i, j));
            s += colat_.weights[i] * dphi * ring;
        }
        return s;
    }

    double norm_squared() const
    {
        return integrate([](const complex& v) { return std::norm(v); });
    }

private:
    SphericalGridSpec spec_{};
    ColatGrid colat_{};
    ValueKind kind_ = ValueKind::Real;
    std::vector< complex > values_;
};

// ---------------------------------------------------------------------------
// Analysis and synthesis (direct sums; O(n_theta (n_phi + L) L))

/// c_l^k = <Y_l^k, f> by separable quadrature. Throws NumericalError if the grid aliases L.
inline CoefficientTable analyze_signal(const SphericalSignal& f, int L)
{
    const SphericalGridSpec& spec = f.spec();
    if (!spec.resolves(L))
        throw NumericalError("analyze_signal: grid " + std::to_string(spec.n_theta) + "x" + std::to_string(spec.n_phi) +
                             " aliases band limit " + std::to_string(L));

    CoefficientTable out(L);
    const std::size_t np = spec.n_phi;
    const double dphi = 2.0 * pi / static_cast< double >(np);
    std::vector< complex > ring(static_cast< std::size_t >(2 * L + 1));
    std::vector< double > lam(triangle_size(L));
    std::vector< complex > twiddle(np);
    for (std::size_t m = 0; m < np; ++m)
        twiddle[m] = std::polar(1.0, -dphi * static_cast< double >(m));

    for (std::size_t i = 0; i < spec.n_theta; ++i)
    {
        // ring DFT F(k) = dphi * sum_j f_ij e^{-ik phi_j}
        for (int k = -L; k <= L; ++k)
        {
            complex acc = 0.0;
            for (std::size_t j = 0; j < np; ++j)
            {
                const auto kk = static_cast< std::size_t >(k % static_cast< long >(np) + static_cast< long >(np));
                acc += f.at(i, j) * twiddle[(kk * j) % np];
            }
            ring[static_cast< std::size_t >(k + L)] = acc * dphi;
        }
        normalized_legendre_table(L, f.colat().cos_theta[i], lam);
        const double w = f.colat().weights[i];
        for (int l = 0; l <= L; ++l)
            for (int k = -l; k <= l; ++k)
            {
                const int q = std::abs(k);
                const double sign = (q % 2 == 0) ? 1.0 : -1.0;
                out(l, k) += w * sign * lam[triangle_index(l, q)] * ring[static_cast< std::size_t >(k + L)];
            }
    }
    return out;
}

/// Pointwise sum of c_l^k Y_l^k on the grid.
inline SphericalSignal synthesize_signal(const CoefficientTable& c, SphericalGridSpec spec)
{
    const int L = c.band_limit();
    bool real = true;
    for (int l = 0; l <= L && real; ++l)
        for (int k = 1; k <= l; ++k)
            if (std::abs(c(l, -k) - std::conj(c(l, k))) > 1e-14 * (1.0 + std::abs(c(l, k))))
            {
                real = false;
                break;
            }
    for (int l = 0; l <= L && real; ++l)
        if (std::abs(c(l, 0).imag()) > 1e-14 * (1.0 + std::abs(c(l, 0))))
            real = false;

    SphericalSignal out(spec, real ? ValueKind::Real : ValueKind::Complex);
    std::vector< double > lam(triangle_size(L));
    std::vector< complex > column(static_cast< std::size_t >(2 * L + 1));
    const std::size_t np = spec.n_phi;
    for (std::size_t i = 0; i < spec.n_theta; ++i)
    {
        normalized_legendre_table(L, out.colat().cos_theta[i], lam);
        for (int k = -L; k <= L; ++k)
        {
            const int q = std::abs(k);
            const double sign = (q % 2 == 0) ? 1.0 : -1.0;
            complex acc = 0.0;
            for (int l = q; l <= L; ++l)
                acc += c(l, k) * lam[triangle_index(l, q)];
            column[static_cast< std::size_t >(k + L)] = sign * acc;
        }
        for (std::size_t j = 0; j < np; ++j)
        {
            const double phi = spec.phi(j);
            complex v = 0.0;
            for (int k = -L; k <= L; ++k)
                v += column[static_cast< std::size_t >(k + L)] * std::polar(1.0, k * phi);
            out.at(i, j) = real ? complex(v.real(), 0.0) : v;
        }
    }
    return out;
}

/// Band-limited function value at an arbitrary point.
inline complex evaluate(const CoefficientTable& c, double theta, double phi)
{
    const int L = c.band_limit();
    std::vector< double > lam(triangle_size(L));
    normalized_legendre_table(L, std::cos(theta), lam);
    complex v = 0.0;
    for (int l = 0; l <= L; ++l)
        for (int k = -l; k <= l; ++k)
        {
            const int q = std::abs(k);
            const double sign = (q % 2 == 0) ? 1.0 : -1.0;
            v += c(l, k) * sign * lam[triangle_index(l, q)] * std::polar(1.0, k * phi);
        }
    return v;
}

} // namespace sphwav

#endif
