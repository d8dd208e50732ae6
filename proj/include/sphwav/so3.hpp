#ifndef SPHWAV_SO3_HPP
#define SPHWAV_SO3_HPP

// Rotations, Wigner small-d matrices, scale sequences and (delta2, delta1) grids on SO(3).
//
// Coordinates: x = (cos t, sin t cos p, sin t sin p), north pole e = xi_1. In the right-handed
// frame (x', y', z') = (xi_2, xi_3, xi_1) these are ordinary spherical coordinates, so the
// ZYZ Euler machinery applies unchanged with z' = xi_1.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include "error.hpp"
#include "sphfn.hpp"

namespace sphwav
{

using Vec3 = std::array< double, 3 >;
using Mat3 = std::array< std::array< double, 3 >, 3 >;

inline Vec3 to_point(double theta, double phi)
{
    const double s = std::sin(theta);
    return {std::cos(theta), s * std::cos(phi), s * std::sin(phi)};
}

/// (theta, phi) of a unit vector; phi in [0, 2pi), set to 0 at the poles.
inline std::pair< double, double > to_angles(const Vec3& x)
{
    const double rho = std::hypot(x[1], x[2]);
    const double theta = std::atan2(rho, x[0]);
    if (rho == 0.0)
        return {theta, 0.0};
    double phi = std::atan2(x[2], x[1]);
    if (phi < 0.0)
        phi += 2.0 * pi;
    return {theta, phi};
}

inline double geodesic_distance(const Vec3& a, const Vec3& b)
{
    // atan2 form stays accurate for nearly equal and nearly antipodal points
    const Vec3 c{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
    const double cross = std::sqrt(c[0] * c[0] + c[1] * c[1] + c[2] * c[2]);
    return std::atan2(cross, a[0] * b[0] + a[1] * b[1] + a[2] * b[2]);
}

inline Mat3 multiply(const Mat3& a, const Mat3& b)
{
    Mat3 c{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                c[i][j] += a[i][k] * b[k][j];
    return c;
}

inline Mat3 transpose(const Mat3& a)
{
    Mat3 t{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            t[i][j] = a[j][i];
    return t;
}

inline Vec3 mat_vec(const Mat3& m, const Vec3& x)
{
    return {m[0][0] * x[0] + m[0][1] * x[1] + m[0][2] * x[2], m[1][0] * x[0] + m[1][1] * x[1] + m[1][2] * x[2],
            m[2][0] * x[0] + m[2][1] * x[1] + m[2][2] * x[2]};
}

/// Rotation in the plane (xi_j, xi_{j+1}), j = 1 or 2, turning xi_j towards xi_{j+1}.
inline Mat3 plane_rotation(int j, double angle)
{
    if (j != 1 && j != 2)
        throw DomainError("plane_rotation: plane index must be 1 or 2");
    const double c = std::cos(angle), s = std::sin(angle);
    Mat3 m{};
    m[0][0] = m[1][1] = m[2][2] = 1.0;
    const int a = j - 1, b = j;
    m[a][a] = c;
    m[b][b] = c;
    m[b][a] = s;
    m[a][b] = -s;
    return m;
}

/// M = g2(phi2) g1(theta2) g2(phi1): spin about the pole by phi1, tilt to colatitude theta2,
/// then turn to longitude phi2. M maps the pole onto the carrier point; the kernel moved to
/// the carrier is x -> Psi(M^T x).
struct Rotation
{
    double phi1 = 0.0;
    double theta2 = 0.0;
    double phi2 = 0.0;
    Mat3 matrix{};

    Vec3 carrier() const { return mat_vec(matrix, {1.0, 0.0, 0.0}); }
    Vec3 forward(const Vec3& x) const { return mat_vec(matrix, x); }
    Vec3 inverse(const Vec3& x) const { return mat_vec(transpose(matrix), x); }
};

inline Rotation make_rotation(double phi1, double theta2, double phi2)
{
    Rotation g{phi1, theta2, phi2, {}};
    g.matrix = multiply(plane_rotation(2, phi2), multiply(plane_rotation(1, theta2), plane_rotation(2, phi1)));
    return g;
}

/// x -> Psi(g^{-1} x) for a kernel given in (theta, phi).
template < typename Kernel >
std::function< double(double, double) > rotate_signal_pullback(const Rotation& g, Kernel psi)
{
    const Mat3 inv = transpose(g.matrix);
    return [inv, psi](double theta, double phi)
    {
        const auto [t, p] = to_angles(mat_vec(inv, to_point(theta, phi)));
        return psi(t, p);
    };
}

// ---------------------------------------------------------------------------
// Wigner small-d, d^l_{m k}(beta) = <l m| exp(-i beta J_y) |l k>.

namespace detail
{
inline double log_factorial(int n)
{
    return std::lgamma(static_cast< double >(n) + 1.0);
}

/// d^j_{j,k}(beta) = sqrt((2j)!/((j+k)!(j-k)!)) cos(beta/2)^{j+k} (-sin(beta/2))^{j-k}.
inline double wigner_top(int j, int k, double beta)
{
    const double c = std::cos(0.5 * beta), s = std::sin(0.5 * beta);
    const double lg = 0.5 * (log_factorial(2 * j) - log_factorial(j + k) - log_factorial(j - k));
    const double v = std::exp(lg) * std::pow(c, j + k) * std::pow(s, j - k);
    return (j - k) % 2 ? -v : v;
}

/// d^{l0}_{mk} with l0 = max(|m|, |k|).
inline double wigner_seed(int m, int k, double beta)
{
    const int l0 = std::max(std::abs(m), std::abs(k));
    auto sign = [](int e) { return e % 2 == 0 ? 1.0 : -1.0; };
    if (m == l0)
        return wigner_top(l0, k, beta);
    if (m == -l0) // d_{-l0,k} = d_{-k,l0} = (-1)^{l0+k} d_{l0,-k}
        return sign(l0 + k) * wigner_top(l0, -k, beta);
    if (k == l0) // d_{m,l0} = (-1)^{l0-m} d_{l0,m}
        return sign(l0 - m) * wigner_top(l0, m, beta);
    // k == -l0: d_{m,-l0} = d_{l0,-m}
    return wigner_top(l0, -m, beta);
}
} // namespace detail

/// d^l_{mk}(beta) for 0 <= l <= L, |m| <= l, |k| <= min(l, K), via the three-term recurrence in l.
class WignerTable
{
public:
    WignerTable() = default;

    WignerTable(int L, int K, double beta) : L_(L), K_(std::min(K, L)), beta_(beta)
    {
        if (L < 0 || K < 0)
            throw DomainError("WignerTable: negative band limit");
        data_.assign(static_cast< std::size_t >(L_ + 1) * (2 * L_ + 1) * (2 * K_ + 1), 0.0);
        const double cb = std::cos(beta);
        for (int m = -L_; m <= L_; ++m)
            for (int k = -K_; k <= K_; ++k)
            {
                const int l0 = std::max(std::abs(m), std::abs(k));
                double prev = 0.0;
                double cur = detail::wigner_seed(m, k, beta);
                at(l0, m, k) = cur;
                for (int l = l0; l < L_; ++l)
                {
                    const double ld = l;
                    const double l1 = ld + 1.0;
                    const double a = l1 * (2.0 * ld + 1.0) / std::sqrt((l1 * l1 - m * m) * (l1 * l1 - k * k));
                    const double mk = l == 0 ? 0.0 : static_cast< double >(m) * k / (ld * l1);
                    const double back =
                        l == 0 ? 0.0 : std::sqrt((ld * ld - m * m) * (ld * ld - k * k)) / (ld * (2.0 * ld + 1.0));
                    const double next = a * ((cb - mk) * cur - back * prev);
                    prev = cur;
                    cur = next;
                    at(l + 1, m, k) = cur;
                }
            }
    }

    int band_limit() const noexcept { return L_; }
    int order_limit() const noexcept { return K_; }
    double beta() const noexcept { return beta_; }

    double operator()(int l, int m, int k) const
    {
        if (l < 0 || l > L_ || std::abs(m) > l || std::abs(k) > std::min(l, K_))
            throw IndexError("WignerTable: index out of range");
        return data_[index(l, m, k)];
    }

    /// Unchecked access; valid when |m| <= l, |k| <= min(l, K).
    double get(int l, int m, int k) const noexcept { return data_[index(l, m, k)]; }

private:
    std::size_t index(int l, int m, int k) const noexcept
    {
        return (static_cast< std::size_t >(l) * (2 * L_ + 1) + static_cast< std::size_t >(m + L_)) * (2 * K_ + 1) +
               static_cast< std::size_t >(k + K_);
    }
    double& at(int l, int m, int k) noexcept { return data_[index(l, m, k)]; }

    int L_ = 0;
    int K_ = 0;
    double beta_ = 0.0;
    std::vector< double > data_;
};

/// Explicit sum formula; slow, used as an independent check.
inline double wigner_d_direct(int l, int m, int k, double beta)
{
    if (std::abs(m) > l || std::abs(k) > l)
        throw IndexError("wigner_d_direct: index out of range");
    const double c = std::cos(0.5 * beta), s = std::sin(0.5 * beta);
    const double pre = 0.5 * (detail::log_factorial(l + m) + detail::log_factorial(l - m) +
                              detail::log_factorial(l + k) + detail::log_factorial(l - k));
    double sum = 0.0;
    for (int q = std::max(0, k - m); q <= std::min(l + k, l - m); ++q)
    {
        const double lg = pre - detail::log_factorial(l + k - q) - detail::log_factorial(q) -
                          detail::log_factorial(m - k + q) - detail::log_factorial(l - m - q);
        const double term = std::exp(lg) * std::pow(c, 2 * l + k - m - 2 * q) * std::pow(s, m - k + 2 * q);
        sum += (m - k + q) % 2 ? -term : term;
    }
    return sum;
}

// ---------------------------------------------------------------------------
// Scales

struct ScaleConstraints
{
    double a0 = 0.0; // rho_0 must be >= a0 (and > 0)
    double X = 4.0;  // consecutive ratio must lie in (1, X)
};

struct ScaleSequence
{
    double rho0 = 1.0;
    double q = 0.5;
    int J_max = 0;
    std::vector< double > rho;

    std::size_t size() const noexcept { return rho.size(); }

    /// Delta_j = ln(rho_j / rho_{j+1}), the discrete stand-in for d rho / rho.
    double weight(std::size_t j) const
    {
        if (j >= rho.size())
            throw IndexError("ScaleSequence: scale index out of range");
        return -std::log(q);
    }
};

inline ScaleSequence make_scale_sequence(double rho0, double q, int J_max, ScaleConstraints lim = {})
{
    if (!(rho0 > 0.0) || rho0 < lim.a0)
        throw ConfigError("scale sequence: rho0 must be positive and >= a0");
    if (!(q < 1.0) || !(1.0 / q < lim.X))
        throw ConfigError("scale sequence: ratio 1/q must lie in (1, X)");
    if (J_max < 0)
        throw ConfigError("scale sequence: J_max must be >= 0");
    ScaleSequence s{rho0, q, J_max, {}};
    for (int j = 0; j <= J_max; ++j)
        s.rho.push_back(rho0 * std::pow(q, j));
    return s;
}

/// Explicit list of scales (must be strictly decreasing with a constant-free ratio check).
inline ScaleSequence make_scale_sequence(const std::vector< double >& rhos, ScaleConstraints lim = {})
{
    if (rhos.empty())
        throw ConfigError("scale sequence: empty");
    if (rhos.size() == 1)
        return make_scale_sequence(rhos[0], 0.5, 0, lim);
    const double q = rhos[1] / rhos[0];
    for (std::size_t j = 1; j < rhos.size(); ++j)
        if (std::abs(rhos[j] / rhos[j - 1] - q) > 1e-12 * q)
            throw ConfigError("scale sequence: scales must be geometric");
    return make_scale_sequence(rhos[0], q, static_cast< int >(rhos.size()) - 1, lim);
}

// ---------------------------------------------------------------------------
// Grid of type (delta2, delta1)

struct CarrierCell
{
    double theta = 0.0;   // carrier colatitude (area midpoint of the band)
    double phi = 0.0;     // carrier longitude (cell midpoint)
    double measure = 0.0; // cell area
    double diameter = 0.0;
    std::size_t band = 0;
    std::size_t n_axial = 1; // axial angles 2 pi i / n_axial
};

struct LatitudeBand
{
    double theta_a = 0.0, theta_b = 0.0;
    std::size_t n_cells = 1;
    std::size_t first = 0; // index of the band's first carrier
};

namespace detail
{
/// Boundary-sampled diameter of the cell [ta, tb] x [0, dphi].
inline double cell_diameter(double ta, double tb, double dphi)
{
    constexpr int n = 12;
    std::vector< Vec3 > pts;
    for (int i = 0; i <= n; ++i)
    {
        const double u = static_cast< double >(i) / n;
        const double t = ta + u * (tb - ta);
        const double p = u * dphi;
        pts.push_back(to_point(ta, p));
        pts.push_back(to_point(tb, p));
        pts.push_back(to_point(t, 0.0));
        pts.push_back(to_point(t, dphi));
    }
    double d = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            d = std::max(d, geodesic_distance(pts[i], pts[j]));
    return d;
}
} // namespace detail

inline std::size_t axial_count(double delta1)
{
    if (!(delta1 > 0.0))
        throw ConfigError("axial arc bound must be positive");
    return static_cast< std::size_t >(std::ceil(2.0 * pi / delta1 - 1e-12));
}

class SO3Grid
{
public:
    double delta2 = 0.0;
    double delta1 = 0.0;
    std::vector< LatitudeBand > bands;
    std::vector< CarrierCell > cells;

    std::size_t carrier_count() const noexcept { return cells.size(); }

    std::size_t rotation_count() const noexcept
    {
        std::size_t n = 0;
        for (const auto& c : cells)
            n += c.n_axial;
        return n;
    }

    double axial_angle(std::size_t carrier, std::size_t i) const
    {
        return 2.0 * pi * static_cast< double >(i) / static_cast< double >(cells[carrier].n_axial);
    }

    Rotation rotation(std::size_t carrier, std::size_t i) const
    {
        const auto& c = cells[carrier];
        return make_rotation(axial_angle(carrier, i), c.theta, c.phi);
    }

    /// Reassign the axial count of one carrier from a local arc bound.
    void set_axial_bound(std::size_t carrier, double d1) { cells.at(carrier).n_axial = axial_count(d1); }

    double total_measure() const noexcept
    {
        double s = 0.0;
        for (const auto& c : cells)
            s += c.measure;
        return s;
    }
};

inline SO3Grid make_so3_grid(double delta2, double delta1)
{
    if (!(delta2 > 0.0) || delta2 > pi + 1e-12)
        throw ConfigError("so3 grid: delta2 must lie in (0, pi]");
    if (!(delta1 > 0.0) || delta1 > 2.0 * pi)
        throw ConfigError("so3 grid: delta1 must lie in (0, 2pi]");
    SO3Grid g;
    g.delta2 = delta2;
    g.delta1 = delta1;
    const std::size_t n_axial = axial_count(delta1);
    const auto nb = static_cast< std::size_t >(std::ceil(pi / (delta2 / std::sqrt(2.0)) - 1e-12));
    for (std::size_t b = 0; b < nb; ++b)
    {
        const double ta = pi * static_cast< double >(b) / static_cast< double >(nb);
        const double tb = pi * static_cast< double >(b + 1) / static_cast< double >(nb);
        std::size_t n = 1;
        double diam = detail::cell_diameter(ta, tb, 2.0 * pi);
        while (diam > delta2)
        {
            ++n;
            diam = detail::cell_diameter(ta, tb, 2.0 * pi / static_cast< double >(n));
        }
        LatitudeBand band{ta, tb, n, g.cells.size()};
        g.bands.push_back(band);
        const double dphi = 2.0 * pi / static_cast< double >(n);
        const double ca = std::cos(ta), cb = std::cos(tb);
        const double theta_c = std::acos(0.5 * (ca + cb));
        for (std::size_t j = 0; j < n; ++j)
        {
            CarrierCell c;
            c.theta = theta_c;
            c.phi = (static_cast< double >(j) + 0.5) * dphi;
            c.measure = (ca - cb) * dphi;
            c.diameter = diam;
            c.band = b;
            c.n_axial = n_axial;
            g.cells.push_back(c);
        }
    }
    return g;
}

} // namespace sphwav

#endif
