#ifndef SPHWAV_IO_HPP
#define SPHWAV_IO_HPP

// File formats: signal files, coefficient tables, transform coefficients, selectivity maps, grids,
// plus the JSON run configuration.

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "error.hpp"
#include "multiselect.hpp"
#include "profiles.hpp"
#include "so3.hpp"
#include "sphfn.hpp"
#include "transform.hpp"

namespace sphwav
{

enum class FileFormat
{
    Csv,
    Bin
};

inline FileFormat parse_format(const std::string& s)
{
    if (s == "csv")
        return FileFormat::Csv;
    if (s == "bin")
        return FileFormat::Bin;
    throw ConfigError("unknown format '" + s + "' (expected csv or bin)");
}

namespace detail
{

inline void put_f64(std::ostream& os, double v)
{
    const auto bits = std::bit_cast< std::uint64_t >(v);
    char b[8];
    for (int i = 0; i < 8; ++i)
        b[i] = static_cast< char >((bits >> (8 * i)) & 0xffu);
    os.write(b, 8);
}

inline double get_f64(std::istream& is, const char* field)
{
    unsigned char b[8];
    if (!is.read(reinterpret_cast< char* >(b), 8))
        throw FormatError(field, std::string("truncated payload (") + field + ")");
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i)
        bits |= static_cast< std::uint64_t >(b[i]) << (8 * i);
    return std::bit_cast< double >(bits);
}

/// "MAGIC key=value ..." -> map; checks the magic token.
inline std::map< std::string, std::string > parse_header(std::istream& is, const std::string& magic)
{
    std::string line;
    if (!std::getline(is, line))
        throw FormatError("magic", "empty file");
    std::istringstream ss(line);
    std::string tok;
    ss >> tok;
    if (tok != magic)
        throw FormatError("magic", "bad magic '" + tok + "', expected " + magic);
    std::map< std::string, std::string > kv;
    while (ss >> tok)
    {
        const auto eq = tok.find('=');
        if (eq == std::string::npos || eq == 0)
            throw FormatError(tok, "malformed header token '" + tok + "'");
        kv[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
    return kv;
}

inline const std::string& header_field(const std::map< std::string, std::string >& kv, const std::string& key)
{
    auto it = kv.find(key);
    if (it == kv.end())
        throw FormatError(key, "header field '" + key + "' missing");
    return it->second;
}

inline long long header_int(const std::map< std::string, std::string >& kv, const std::string& key, long long lo)
{
    const std::string& s = header_field(kv, key);
    std::size_t pos = 0;
    long long v = 0;
    try
    {
        v = std::stoll(s, &pos);
    }
    catch (const std::exception&)
    {
        pos = 0;
    }
    if (pos != s.size() || s.empty())
        throw FormatError(key, "header field '" + key + "' is not an integer: '" + s + "'");
    if (v < lo)
        throw FormatError(key, "header field '" + key + "' out of range: " + s);
    return v;
}

inline std::ofstream open_out(const std::string& path, bool binary)
{
    std::ofstream os(path, binary ? std::ios::binary : std::ios::out);
    if (!os)
        throw ConfigError("cannot open '" + path + "' for writing");
    os << std::setprecision(17);
    return os;
}

inline std::ifstream open_in(const std::string& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw ConfigError("cannot open '" + path + "' for reading");
    return is;
}

inline std::vector< double > csv_numbers(const std::string& line, std::size_t expect, std::size_t lineno)
{
    std::vector< double > out;
    std::istringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ','))
    {
        try
        {
            std::size_t pos = 0;
            out.push_back(std::stod(cell, &pos));
        }
        catch (const std::exception&)
        {
            throw FormatError("line " + std::to_string(lineno), "non-numeric CSV cell '" + cell + "'");
        }
    }
    if (out.size() != expect)
        throw FormatError("line " + std::to_string(lineno), "expected " + std::to_string(expect) + " columns, got " +
                                                                std::to_string(out.size()));
    return out;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Signal files: "SPHSIG1 grid=gauss n_theta=N n_phi=M L_band=L kind=real|complex", then little-endian
// float64 samples, theta-major, (re, im) interleaved for complex.

inline void write_signal(std::ostream& os, const SphericalSignal& f)
{
    const auto& s = f.spec();
    const bool cplx = f.kind() == ValueKind::Complex;
    os << "SPHSIG1 grid=gauss n_theta=" << s.n_theta << " n_phi=" << s.n_phi << " L_band=" << s.L_band
       << " kind=" << (cplx ? "complex" : "real") << '\n';
    for (const complex& v : f.values())
    {
        detail::put_f64(os, v.real());
        if (cplx)
            detail::put_f64(os, v.imag());
    }
    if (!os)
        throw ConfigError("signal write failed");
}

inline SphericalSignal read_signal(std::istream& is)
{
    const auto kv = detail::parse_header(is, "SPHSIG1");
    if (detail::header_field(kv, "grid") != "gauss")
        throw FormatError("grid", "unsupported grid kind '" + kv.at("grid") + "'");
    SphericalGridSpec spec;
    spec.n_theta = static_cast< std::size_t >(detail::header_int(kv, "n_theta", 1));
    spec.n_phi = static_cast< std::size_t >(detail::header_int(kv, "n_phi", 1));
    spec.L_band = static_cast< int >(detail::header_int(kv, "L_band", 0));
    const std::string& kind = detail::header_field(kv, "kind");
    if (kind != "real" && kind != "complex")
        throw FormatError("kind", "value kind must be real or complex, got '" + kind + "'");
    if (spec.n_theta * spec.n_phi > (std::size_t{1} << 30))
        throw FormatError("n_theta", "grid too large");
    const bool cplx = kind == "complex";
    SphericalSignal f(spec, cplx ? ValueKind::Complex : ValueKind::Real);
    for (complex& v : f.values())
    {
        const double re = detail::get_f64(is, "payload");
        const double im = cplx ? detail::get_f64(is, "payload") : 0.0;
        v = {re, im};
    }
    if (is.peek() != std::char_traits< char >::eof())
        throw FormatError("payload", "trailing bytes after payload");
    return f;
}

inline void write_signal(const std::string& path, const SphericalSignal& f)
{
    auto os = detail::open_out(path, true);
    write_signal(os, f);
}

inline SphericalSignal read_signal(const std::string& path)
{
    auto is = detail::open_in(path);
    return read_signal(is);
}

/// Human-readable companion: theta, phi, re, im per sample.
inline void write_signal_csv(std::ostream& os, const SphericalSignal& f)
{
    os << std::setprecision(17) << "theta,phi,re,im\n";
    for (std::size_t i = 0; i < f.spec().n_theta; ++i)
        for (std::size_t j = 0; j < f.spec().n_phi; ++j)
            os << f.theta(i) << ',' << f.phi(j) << ',' << f.at(i, j).real() << ',' << f.at(i, j).imag() << '\n';
}

// ---------------------------------------------------------------------------
// Coefficient tables: csv "l,k,re,im" or "SPHCOF1 L=..." + (re, im) float64 pairs in (l, k) order.

inline void write_coefficients(std::ostream& os, const CoefficientTable& c, FileFormat fmt)
{
    const int L = c.band_limit();
    if (fmt == FileFormat::Csv)
    {
        os << std::setprecision(17) << "l,k,re,im\n";
        for (int l = 0; l <= L; ++l)
            for (int k = -l; k <= l; ++k)
                os << l << ',' << k << ',' << c(l, k).real() << ',' << c(l, k).imag() << '\n';
        return;
    }
    os << "SPHCOF1 L=" << L << '\n';
    for (const complex& v : c.data())
    {
        detail::put_f64(os, v.real());
        detail::put_f64(os, v.imag());
    }
}

inline CoefficientTable read_coefficients(std::istream& is)
{
    if (is.peek() == 'S')
    {
        const auto kv = detail::parse_header(is, "SPHCOF1");
        const auto L = detail::header_int(kv, "L", 0);
        if (L > 4096)
            throw FormatError("L", "band limit too large");
        CoefficientTable c(static_cast< int >(L));
        for (complex& v : c.data())
        {
            const double re = detail::get_f64(is, "payload");
            v = {re, detail::get_f64(is, "payload")};
        }
        return c;
    }
    std::string line;
    std::getline(is, line);
    if (line.rfind("l,k,re,im", 0) != 0)
        throw FormatError("header", "coefficient CSV must start with 'l,k,re,im'");
    std::vector< std::array< double, 4 > > rows;
    std::size_t n = 1;
    int L = 0;
    while (std::getline(is, line))
    {
        ++n;
        if (line.empty())
            continue;
        const auto v = detail::csv_numbers(line, 4, n);
        rows.push_back({v[0], v[1], v[2], v[3]});
        L = std::max(L, static_cast< int >(v[0]));
    }
    CoefficientTable c(L);
    for (const auto& r : rows)
    {
        const int l = static_cast< int >(r[0]), k = static_cast< int >(r[1]);
        if (l < 0 || std::abs(k) > l)
            throw FormatError("k", "invalid harmonic index in coefficient CSV");
        c(l, k) = {r[2], r[3]};
    }
    return c;
}

// ---------------------------------------------------------------------------
// Transform coefficients: one record per rotation (j, carrier, i, theta2, phi2, phi1, tau, re, im).

inline void write_transform(std::ostream& os, const TransformCoefficients& tc, FileFormat fmt)
{
    const auto& layout = tc.layout;
    if (fmt == FileFormat::Csv)
        os << std::setprecision(17) << "j,carrier,i,theta2,phi2,phi1,tau,re,im\n";
    else
        os << "SPHWTC1 family=" << to_string(layout.family) << " L=" << layout.L << " scales=" << layout.layers.size()
           << " count=" << tc.size() << '\n';
    for (std::size_t j = 0; j < layout.layers.size(); ++j)
    {
        const auto& lay = layout.layers[j];
        for (std::size_t c = 0; c < lay.grid.carrier_count(); ++c)
        {
            const auto& cell = lay.grid.cells[c];
            for (std::size_t i = 0; i < cell.n_axial; ++i)
            {
                const complex v = tc.values[j][lay.offset[c] + i];
                const double rec[9] = {double(j), double(c), double(i), cell.theta, cell.phi,
                                       lay.grid.axial_angle(c, i), lay.tau[c], v.real(), v.imag()};
                if (fmt == FileFormat::Csv)
                {
                    os << j << ',' << c << ',' << i;
                    for (int q = 3; q < 9; ++q)
                        os << ',' << rec[q];
                    os << '\n';
                }
                else
                    for (double x : rec)
                        detail::put_f64(os, x);
            }
        }
    }
}

/// One transform record as stored on disk.
struct TransformRecord
{
    std::size_t j = 0, carrier = 0, i = 0;
    double theta2 = 0, phi2 = 0, phi1 = 0, tau = 1, re = 0, im = 0;
};

inline std::vector< TransformRecord > read_transform_records(std::istream& is)
{
    std::vector< TransformRecord > out;
    auto make = [](const double* r)
    {
        for (int q = 0; q < 3; ++q)
            if (r[q] < 0 || r[q] != std::floor(r[q]))
                throw FormatError("index", "non-integer index in transform record");
        return TransformRecord{static_cast< std::size_t >(r[0]), static_cast< std::size_t >(r[1]),
                               static_cast< std::size_t >(r[2]), r[3], r[4], r[5], r[6], r[7], r[8]};
    };
    if (is.peek() == 'S')
    {
        const auto kv = detail::parse_header(is, "SPHWTC1");
        const auto count = detail::header_int(kv, "count", 0);
        for (long long n = 0; n < count; ++n)
        {
            double r[9];
            for (double& x : r)
                x = detail::get_f64(is, "payload");
            out.push_back(make(r));
        }
        return out;
    }
    std::string line;
    std::getline(is, line);
    if (line.rfind("j,carrier,i,", 0) != 0)
        throw FormatError("header", "transform CSV must start with 'j,carrier,i,...'");
    std::size_t n = 1;
    while (std::getline(is, line))
    {
        ++n;
        if (line.empty())
            continue;
        const auto v = detail::csv_numbers(line, 9, n);
        out.push_back(make(v.data()));
    }
    return out;
}

/// Rebuild coefficients on `layout` (grids from the run configuration); taus and axial counts come from the
/// records. Throws FormatError if the records do not fit the layout.
inline TransformCoefficients transform_from_records(FrameLayout layout, const std::vector< TransformRecord >& recs)
{
    std::vector< std::vector< std::size_t > > counts(layout.layers.size());
    for (std::size_t j = 0; j < layout.layers.size(); ++j)
        counts[j].assign(layout.layers[j].grid.carrier_count(), 0);
    for (const auto& r : recs)
    {
        if (r.j >= layout.layers.size() || r.carrier >= counts[r.j].size())
            throw FormatError("carrier", "transform record outside the configured grid");
        counts[r.j][r.carrier] = std::max(counts[r.j][r.carrier], r.i + 1);
        layout.layers[r.j].tau[r.carrier] = r.tau;
    }
    for (std::size_t j = 0; j < layout.layers.size(); ++j)
    {
        auto& lay = layout.layers[j];
        for (std::size_t c = 0; c < lay.grid.carrier_count(); ++c)
        {
            if (counts[j][c] == 0)
                throw FormatError("carrier", "carrier " + std::to_string(c) + " of scale " + std::to_string(j) +
                                                 " has no records");
            lay.grid.cells[c].n_axial = counts[j][c];
        }
        lay.finalize();
    }
    TransformCoefficients tc;
    tc.layout = layout;
    for (const auto& lay : layout.layers)
        tc.values.emplace_back(lay.sample_count(), complex(0.0));
    for (const auto& r : recs)
    {
        const auto& lay = tc.layout.layers[r.j];
        if (std::abs(lay.grid.cells[r.carrier].theta - r.theta2) > 1e-9 ||
            std::abs(lay.grid.cells[r.carrier].phi - r.phi2) > 1e-9)
            throw FormatError("theta2", "transform record carrier does not match the configured grid");
        tc.values[r.j][lay.offset[r.carrier] + r.i] = {r.re, r.im};
    }
    return tc;
}

// ---------------------------------------------------------------------------
// Selectivity maps and grids (CSV only)

inline void write_selectivity_map(std::ostream& os, const SelectivityMap& map)
{
    os << std::setprecision(17) << "j,alpha2,theta2,phi2,tau,phi1,value\n";
    for (const auto& e : map.entries)
        os << e.scale << ',' << e.carrier << ',' << e.theta << ',' << e.phi << ',' << e.tau << ',' << e.phi1 << ','
           << e.value << '\n';
}

inline SelectivityMap read_selectivity_map(std::istream& is)
{
    std::string line;
    std::getline(is, line);
    if (line.rfind("j,alpha2,", 0) != 0)
        throw FormatError("header", "selectivity map CSV must start with 'j,alpha2,...'");
    SelectivityMap map;
    std::size_t n = 1;
    while (std::getline(is, line))
    {
        ++n;
        if (line.empty())
            continue;
        const auto v = detail::csv_numbers(line, 7, n);
        map.entries.push_back({static_cast< std::size_t >(v[0]), static_cast< std::size_t >(v[1]), v[2], v[3], v[4],
                               v[5], v[6]});
    }
    return map;
}

/// One row per rotation: theta2, phi2, phi1 and the SO(3) cell measure (S^2 cell measure x 2pi/n_axial).
inline void write_grid(std::ostream& os, const SO3Grid& grid)
{
    os << std::setprecision(17) << "theta2,phi2,phi1,measure\n";
    for (std::size_t c = 0; c < grid.carrier_count(); ++c)
    {
        const auto& cell = grid.cells[c];
        const double m = cell.measure * 2.0 * pi / static_cast< double >(cell.n_axial);
        for (std::size_t i = 0; i < cell.n_axial; ++i)
            os << cell.theta << ',' << cell.phi << ',' << grid.axial_angle(c, i) << ',' << m << '\n';
    }
}

// ---------------------------------------------------------------------------
// Run configuration

struct RunConfig
{
    Family family = Family::Omega;
    std::vector< double > T{1.0, 2.0, 4.0, 8.0, 16.0};
    double tau_cap = 16.0;
    double tau = 4.0; // uniform tau for analyze
    double rho0 = 1.0;
    double q = 0.5;
    int J_max = 3;
    int L = 16;
    std::size_t n_theta = 0; // 0 -> L + 1
    std::size_t n_phi = 0;   // 0 -> 2L + 1
    double delta2 = 0.2;
    double delta1 = 0.2;
    bool use_budget = false;
    double delta = 0.1;
    double calibration = 0.1;
    double rho_step = 1.0 / 16.0;
    int k_cut = 0; // 0 -> automatic
    int L_max = 64;
    double tolerance = 1e-10;
    int max_iterations = 500;
    std::string solver = "cg";
    int norm_power = 1;
    std::string tau_mode = "discrete";
    std::uint64_t seed = 1;

    SphericalGridSpec grid_spec() const
    {
        const auto base = SphericalGridSpec::for_band(L);
        return {L, n_theta ? n_theta : base.n_theta, n_phi ? n_phi : base.n_phi};
    }

    SelectivitySet selectivity() const { return {T, tau_cap}; }

    SelectionConfig selection() const
    {
        SelectionConfig s;
        s.norm_power = norm_power;
        s.mode = tau_mode == "continuous" ? TauMode::Continuous : TauMode::Discrete;
        return s;
    }

    FrameOperatorConfig operator_config() const
    {
        FrameOperatorConfig c;
        c.max_iterations = max_iterations;
        c.tolerance = tolerance;
        c.solver = solver == "richardson" ? FrameSolver::Richardson : FrameSolver::ConjugateGradient;
        c.seed = seed;
        return c;
    }

    ScaleSequence scales() const { return make_scale_sequence(rho0, q, J_max); }

    void validate() const
    {
        if (L < 1)
            throw ConfigError("config: L must be >= 1");
        if (!grid_spec().resolves(L))
            throw ConfigError("config: n_theta/n_phi too small for L");
        selectivity().validate();
        if (!(tau >= 1.0))
            throw ConfigError("config: tau must be >= 1");
        if (!(delta2 > 0.0) || !(delta1 > 0.0))
            throw ConfigError("config: delta2 and delta1 must be positive");
        if (!(delta > 0.0) || !(calibration > 0.0))
            throw ConfigError("config: delta and calibration must be positive");
        if (!(rho_step > 0.0))
            throw ConfigError("config: rho_step must be positive");
        if (solver != "cg" && solver != "richardson")
            throw ConfigError("config: solver must be cg or richardson");
        if (tau_mode != "discrete" && tau_mode != "continuous")
            throw ConfigError("config: tau_mode must be discrete or continuous");
        if (norm_power < 0)
            throw ConfigError("config: norm_power must be >= 0");
        scales();
        operator_config().validate();
    }
};

inline nlohmann::json to_json(const RunConfig& c)
{
    return {{"family", to_string(c.family)},
            {"T", c.T},
            {"tau_cap", c.tau_cap},
            {"tau", c.tau},
            {"rho0", c.rho0},
            {"q", c.q},
            {"J_max", c.J_max},
            {"L", c.L},
            {"n_theta", c.n_theta},
            {"n_phi", c.n_phi},
            {"delta2", c.delta2},
            {"delta1", c.delta1},
            {"use_budget", c.use_budget},
            {"delta", c.delta},
            {"calibration", c.calibration},
            {"rho_step", c.rho_step},
            {"k_cut", c.k_cut},
            {"L_max", c.L_max},
            {"tolerance", c.tolerance},
            {"max_iterations", c.max_iterations},
            {"solver", c.solver},
            {"norm_power", c.norm_power},
            {"tau_mode", c.tau_mode},
            {"seed", c.seed}};
}

/// Unknown keys and mistyped values raise FormatError naming the key.
inline RunConfig config_from_json(const nlohmann::json& j, RunConfig c = {})
{
    if (!j.is_object())
        throw FormatError("config", "configuration must be a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it)
    {
        const std::string& k = it.key();
        const auto& v = it.value();
        try
        {
            if (k == "family")
                c.family = parse_family(v.get< std::string >());
            else if (k == "T")
                c.T = v.get< std::vector< double > >();
            else if (k == "tau_cap")
                c.tau_cap = v.get< double >();
            else if (k == "tau")
                c.tau = v.get< double >();
            else if (k == "rho0")
                c.rho0 = v.get< double >();
            else if (k == "q")
                c.q = v.get< double >();
            else if (k == "J_max")
                c.J_max = v.get< int >();
            else if (k == "L")
                c.L = v.get< int >();
            else if (k == "n_theta")
                c.n_theta = v.get< std::size_t >();
            else if (k == "n_phi")
                c.n_phi = v.get< std::size_t >();
            else if (k == "delta2")
                c.delta2 = v.get< double >();
            else if (k == "delta1")
                c.delta1 = v.get< double >();
            else if (k == "use_budget")
                c.use_budget = v.get< bool >();
            else if (k == "delta")
                c.delta = v.get< double >();
            else if (k == "calibration")
                c.calibration = v.get< double >();
            else if (k == "rho_step")
                c.rho_step = v.get< double >();
            else if (k == "k_cut")
                c.k_cut = v.get< int >();
            else if (k == "L_max")
                c.L_max = v.get< int >();
            else if (k == "tolerance")
                c.tolerance = v.get< double >();
            else if (k == "max_iterations")
                c.max_iterations = v.get< int >();
            else if (k == "solver")
                c.solver = v.get< std::string >();
            else if (k == "norm_power")
                c.norm_power = v.get< int >();
            else if (k == "tau_mode")
                c.tau_mode = v.get< std::string >();
            else if (k == "seed")
                c.seed = v.get< std::uint64_t >();
            else
                throw FormatError(k, "unknown configuration key '" + k + "'");
        }
        catch (const nlohmann::json::exception& e)
        {
            throw FormatError(k, "configuration key '" + k + "' has the wrong type");
        }
        catch (const ConfigError& e)
        {
            throw FormatError(k, "configuration key '" + k + "': " + e.what());
        }
    }
    return c;
}

inline RunConfig load_config(const std::string& path)
{
    auto is = detail::open_in(path);
    nlohmann::json j;
    try
    {
        is >> j;
    }
    catch (const nlohmann::json::parse_error& e)
    {
        throw FormatError("config", std::string("configuration is not valid JSON: ") + e.what());
    }
    return config_from_json(j);
}

} // namespace sphwav

#endif
