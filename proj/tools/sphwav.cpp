// sphwav command-line driver.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "sphwav/sphwav.hpp"

namespace
{

using namespace sphwav;

struct Common
{
    std::string config;
    std::optional< std::uint64_t > seed;
    std::string out;
    std::string format = "csv";
};

void add_common(CLI::App* cmd, Common& c)
{
    cmd->add_option("--config", c.config, "JSON run configuration");
    cmd->add_option("--seed", c.seed, "random seed (overrides config)");
    cmd->add_option("--out", c.out, "output path (default: stdout for CSV)");
    cmd->add_option("--format", c.format, "csv or bin")->check(CLI::IsMember({"csv", "bin"}));
}

RunConfig load(const Common& c)
{
    RunConfig cfg = c.config.empty() ? RunConfig{} : load_config(c.config);
    if (c.seed)
        cfg.seed = *c.seed;
    return cfg;
}

/// Text goes to --out or stdout; binary requires --out.
template < typename Writer >
void emit(const Common& c, bool binary, Writer&& w)
{
    if (c.out.empty())
    {
        if (binary)
            throw ConfigError("--format bin requires --out");
        w(std::cout);
        return;
    }
    std::ofstream os(c.out, binary ? std::ios::binary : std::ios::out);
    if (!os)
        throw ConfigError("cannot open '" + c.out + "' for writing");
    w(os);
    if (!os)
        throw ConfigError("write to '" + c.out + "' failed");
}

std::vector< SO3Grid > grids_for(const RunConfig& cfg, std::optional< DiscretizationBudget >& budget)
{
    const ScaleSequence scales = cfg.scales();
    if (cfg.use_budget)
    {
        budget = budget_discretization(cfg.family, scales, cfg.selectivity(), cfg.delta, cfg.calibration);
        return budgeted_grids(*budget);
    }
    return std::vector< SO3Grid >(scales.size(), make_so3_grid(cfg.delta2, cfg.delta1));
}

FrameLayout uniform_layout(const RunConfig& cfg, const std::vector< SO3Grid >& grids)
{
    const ScaleSequence scales = cfg.scales();
    FrameLayout layout;
    layout.family = cfg.family;
    layout.L = cfg.L;
    for (std::size_t j = 0; j < scales.size(); ++j)
    {
        ScaleLayer lay;
        lay.rho = scales.rho[j];
        lay.weight = scales.weight(j);
        lay.grid = grids[j];
        lay.tau.assign(lay.grid.carrier_count(), cfg.tau);
        lay.finalize();
        layout.layers.push_back(std::move(lay));
    }
    return layout;
}

PresetParams parse_params(const std::vector< std::string >& kvs)
{
    PresetParams p;
    for (const auto& s : kvs)
    {
        const auto eq = s.find('=');
        if (eq == std::string::npos || eq == 0)
            throw ConfigError("--param expects key=value, got '" + s + "'");
        const std::string key = s.substr(0, eq), val = s.substr(eq + 1);
        if (key == "family")
        {
            p[key] = parse_family(val) == Family::Omega ? 0.0 : 1.0;
            continue;
        }
        try
        {
            std::size_t pos = 0;
            p[key] = std::stod(val, &pos);
            if (pos != val.size())
                throw std::invalid_argument(val);
        }
        catch (const std::exception&)
        {
            throw ConfigError("--param " + key + ": not a number '" + val + "'");
        }
    }
    return p;
}

CoefficientTable signal_coefficients(const std::string& path, int L)
{
    const SphericalSignal f = read_signal(path);
    return analyze_signal(f, L);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Spherical wavelets with angular selectivity"};
    app.require_subcommand(1);

    Common common;

    // profile
    auto* profile = app.add_subcommand("profile", "angular profiles f_tau on [-pi/2, 3pi/2]");
    std::vector< double > profile_taus{1, 2, 4, 8, 16};
    std::size_t profile_samples = 401;
    profile->add_option("--tau", profile_taus, "tau values")->delimiter(',');
    profile->add_option("--samples", profile_samples, "sample count")->check(CLI::PositiveNumber);
    add_common(profile, common);

    // kernel
    auto* kernel = app.add_subcommand("kernel", "sample a wavelet kernel at the north pole");
    std::optional< std::string > k_family;
    std::optional< double > k_rho, k_tau;
    std::size_t k_nt = 64, k_np = 128;
    kernel->add_option("--family", k_family, "omega or upsilon");
    kernel->add_option("--rho", k_rho, "scale (default rho0 from config)");
    kernel->add_option("--tau", k_tau, "angular selectivity");
    kernel->add_option("--n-theta", k_nt, "colatitude samples")->check(CLI::PositiveNumber);
    kernel->add_option("--n-phi", k_np, "longitude samples")->check(CLI::PositiveNumber);
    add_common(kernel, common);

    // verify
    auto* verify = app.add_subcommand("verify", "admissibility report");
    std::optional< std::string > v_family;
    std::optional< double > v_tau;
    std::optional< int > v_lmax;
    verify->add_option("--family", v_family, "omega or upsilon");
    verify->add_option("--tau", v_tau, "angular selectivity");
    verify->add_option("--L-max", v_lmax, "largest degree (>= 10)");
    add_common(verify, common);

    // synthesize
    auto* synth = app.add_subcommand("synthesize", "generate a preset test signal");
    std::string s_preset;
    std::vector< std::string > s_params;
    std::optional< int > s_L;
    std::string s_coeffs;
    synth->add_option("--preset", s_preset, "zonal-bump, ridge, two-ridges, noise, planted")->required();
    synth->add_option("--param", s_params, "preset parameter key=value (repeatable)");
    synth->add_option("--L", s_L, "band limit");
    synth->add_option("--coeffs-out", s_coeffs, "also write the harmonic coefficients (csv)");
    add_common(synth, common);

    // analyze
    auto* analyze = app.add_subcommand("analyze", "discrete wavelet transform of a signal");
    std::string a_in, a_grid;
    bool a_adaptive = false;
    std::size_t a_grid_scale = 0;
    std::optional< int > a_L;
    analyze->add_option("--in", a_in, "signal file")->required();
    analyze->add_flag("--adaptive", a_adaptive, "per-carrier tau from the selectivity search");
    analyze->add_option("--grid-out", a_grid, "write the rotation grid of one scale (csv)");
    analyze->add_option("--grid-scale", a_grid_scale, "scale index for --grid-out");
    analyze->add_option("--L", a_L, "band limit (default: signal header, else config)");
    add_common(analyze, common);

    // select
    auto* select = app.add_subcommand("select", "selectivity map of a signal");
    std::string sel_in;
    std::optional< int > sel_L;
    select->add_option("--in", sel_in, "signal file")->required();
    select->add_option("--L", sel_L, "band limit (default: signal header, else config)");
    add_common(select, common);

    // reconstruct
    auto* recon = app.add_subcommand("reconstruct", "invert transform coefficients by frame iteration");
    std::string r_in, r_ref, r_coeffs;
    double r_max_error = 1e-3;
    recon->add_option("--in", r_in, "transform coefficient file (csv or bin)")->required();
    recon->add_option("--reference", r_ref, "signal file to compare against");
    recon->add_option("--max-error", r_max_error, "fail if the relative error to --reference exceeds this");
    recon->add_option("--coeffs-out", r_coeffs, "also write the harmonic coefficients (csv)");
    add_common(recon, common);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try
    {
        const FileFormat fmt = parse_format(common.format);
        const bool bin = fmt == FileFormat::Bin;
        RunConfig cfg = load(common);

        if (*profile)
        {
            for (double t : profile_taus)
                if (!(t >= 1.0))
                    throw ConfigError("profile: tau must be >= 1");
            if (bin)
                throw ConfigError("profile: only csv output");
            emit(common, false,
                 [&](std::ostream& os)
                 {
                     os << std::setprecision(17) << "phi";
                     for (double t : profile_taus)
                         os << ",f_" << t;
                     os << '\n';
                     for (std::size_t i = 0; i < profile_samples; ++i)
                     {
                         const double phi =
                             profile_samples == 1
                                 ? -pi / 2
                                 : -pi / 2 + 2.0 * pi * static_cast< double >(i) / double(profile_samples - 1);
                         os << phi;
                         for (double t : profile_taus)
                             os << ',' << f_tau(t, phi);
                         os << '\n';
                     }
                 });
            return 0;
        }

        if (*kernel)
        {
            const WaveletSpec spec{k_family ? parse_family(*k_family) : cfg.family, k_rho.value_or(cfg.rho0),
                                   k_tau.value_or(cfg.tau)};
            spec.validate();
            const SphericalGridSpec gs{cfg.L, k_nt, k_np};
            const SphericalSignal f = SphericalSignal::sample(
                gs, [&](double t, double p) { return complex(evaluate_wavelet(spec, t, p), 0.0); });
            emit(common, bin,
                 [&](std::ostream& os)
                 {
                     if (bin)
                         write_signal(os, f);
                     else
                         write_signal_csv(os, f);
                 });
            return 0;
        }

        if (*verify)
        {
            const Family fam = v_family ? parse_family(*v_family) : cfg.family;
            const double tau = v_tau.value_or(cfg.tau);
            const int lmax = v_lmax.value_or(cfg.L_max);
            const AdmissibilityReport rep = admissibility_report(fam, tau, lmax, cfg.k_cut > 0 ? cfg.k_cut : -1);
            std::fprintf(stderr,
                         "family=%s tau=%g L_max=%d order=%d\n  A=%.6e B=%.6e B_analytic=%.6e\n"
                         "  vanishing_residual=%.3e refinement_change=%.3e decay_exponent=%.3f\n"
                         "  positive=%s bounded=%s vanishes=%s -> %s\n",
                         to_string(fam).c_str(), tau, lmax, rep.order, rep.A, rep.B, rep.B_analytic,
                         rep.vanishing_residual, rep.refinement_change, rep.decay_exponent,
                         rep.positive() ? "yes" : "no", rep.bounded() ? "yes" : "no", rep.vanishes() ? "yes" : "no",
                         rep.passed() ? "PASS" : "FAIL");
            if (!common.out.empty())
                emit(common, false,
                     [&](std::ostream& os)
                     {
                         os << std::setprecision(17) << "l,G,G_over_2l1,G_coarse\n";
                         for (int l = 0; l <= lmax; ++l)
                             os << l << ',' << rep.G[l] << ',' << rep.G[l] / (2 * l + 1) << ',' << rep.G_coarse[l]
                                << '\n';
                     });
            return rep.passed() ? 0 : 1;
        }

        if (*synth)
        {
            const int L = s_L.value_or(cfg.L);
            cfg.L = L;
            cfg.validate();
            const CoefficientTable c = synthesize_preset(s_preset, parse_params(s_params), L, cfg.seed);
            SphericalSignal f = synthesize_signal(c, cfg.grid_spec());
            if (f.kind() == ValueKind::Complex)
                throw NumericalError("synthesize: preset produced a complex signal");
            emit(common, bin,
                 [&](std::ostream& os)
                 {
                     if (bin)
                         write_signal(os, f);
                     else
                         write_signal_csv(os, f);
                 });
            if (!s_coeffs.empty())
            {
                std::ofstream os(s_coeffs);
                write_coefficients(os, c, FileFormat::Csv);
            }
            return 0;
        }

        if (*analyze || *select)
        {
            const std::string& in = *analyze ? a_in : sel_in;
            const SphericalSignal f = read_signal(in);
            const auto& Lopt = *analyze ? a_L : sel_L;
            cfg.L = Lopt.value_or(f.spec().L_band > 0 ? f.spec().L_band : cfg.L);
            cfg.validate();
            const CoefficientTable c = analyze_signal(f, cfg.L);
            std::optional< DiscretizationBudget > budget;
            const auto grids = grids_for(cfg, budget);

            if (*select)
            {
                const SelectivityMap map =
                    selectivity_map(c, cfg.family, cfg.scales(), grids, cfg.selectivity(), cfg.selection());
                if (bin)
                    throw ConfigError("select: only csv output");
                emit(common, false, [&](std::ostream& os) { write_selectivity_map(os, map); });
                return 0;
            }

            TransformCoefficients tc;
            if (a_adaptive)
                tc = adaptive_analysis(c, cfg.family, cfg.scales(), grids, cfg.selectivity(), cfg.selection(),
                                       budget ? &*budget : nullptr)
                         .coefficients;
            else
                tc = WaveletFrame(uniform_layout(cfg, grids)).analyze(c);
            emit(common, bin, [&](std::ostream& os) { write_transform(os, tc, fmt); });
            if (!a_grid.empty())
            {
                if (a_grid_scale >= tc.layout.layers.size())
                    throw ConfigError("--grid-scale out of range");
                std::ofstream os(a_grid);
                write_grid(os, tc.layout.layers[a_grid_scale].grid);
            }
            return 0;
        }

        if (*recon)
        {
            cfg.validate();
            std::ifstream is(r_in, std::ios::binary);
            if (!is)
                throw ConfigError("cannot open '" + r_in + "'");
            const auto recs = read_transform_records(is);
            std::optional< DiscretizationBudget > budget;
            const TransformCoefficients tc = transform_from_records(uniform_layout(cfg, grids_for(cfg, budget)), recs);
            const WaveletFrame frame(tc.layout);
            const ReconstructionResult res = frame.reconstruct(tc, cfg.operator_config());
            std::fprintf(stderr, "iterations=%d residual=%.3e\n", res.iterations, res.residual);
            const SphericalSignal f = synthesize_signal(res.coefficients, cfg.grid_spec());
            emit(common, bin,
                 [&](std::ostream& os)
                 {
                     if (bin)
                         write_signal(os, f);
                     else
                         write_signal_csv(os, f);
                 });
            if (!r_coeffs.empty())
            {
                std::ofstream os(r_coeffs);
                write_coefficients(os, res.coefficients, FileFormat::Csv);
            }
            if (!r_ref.empty())
            {
                CoefficientTable ref = signal_coefficients(r_ref, cfg.L);
                ref.zero_low_degrees(nominal_order(cfg.family));
                double num = 0.0;
                for (std::size_t i = 0; i < ref.size(); ++i)
                    num += std::norm(ref.data()[i] - res.coefficients.data()[i]);
                const double rel = std::sqrt(num / ref.norm_squared());
                std::fprintf(stderr, "relative_error=%.3e (limit %.1e)\n", rel, r_max_error);
                if (!(rel <= r_max_error))
                    return 1;
            }
            return 0;
        }
    }
    catch (const NumericalError& e)
    {
        std::fprintf(stderr, "numerical failure: %s (residual %.3e)\n", e.what(), e.residual());
        return 1;
    }
    catch (const FormatError& e)
    {
        std::fprintf(stderr, "format error in field '%s': %s\n", e.field().c_str(), e.what());
        return 2;
    }
    catch (const std::exception& e)
    {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 2;
}
