// SPDX-License-Identifier: Apache-2.0
//
// latdpc: capacity bounds, gap tables, transceiver simulation and broadcast
// rate regions for ergodic fading dirty-paper channels, emitted as
// deterministic CSV/JSON tables. Exit codes: 0 ok, 2 usage/configuration,
// 3 numerical, 4 resource.

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "latdpc/bc_regions.hpp"
#include "latdpc/bounds.hpp"
#include "latdpc/dpc_sim.hpp"
#include "latdpc/errors.hpp"
#include "latdpc/kernels.hpp"
#include "latdpc/lattice.hpp"
#include "latdpc/numerics.hpp"
#include "latdpc/table.hpp"

namespace {

constexpr const char* kVersion = "latdpc 0.1.0";
constexpr double kChiSq15Crit99 = 30.577914166892494;  // chi-square(15), p = 0.01

using latdpc::format_g17;

struct CommonOpts {
    std::int64_t samples = 100000;
    std::uint64_t seed = 42;
    std::int64_t block_size = 4096;
    int threads = 0;
    std::string output;
    std::string format = "csv";
    std::string kernel = "auto";
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--samples", o.samples, "Monte Carlo samples per estimate");
    cmd->add_option("--seed", o.seed, "Master seed");
    cmd->add_option("--block-size", o.block_size, "Monte Carlo block size");
    cmd->add_option("--threads", o.threads, "Worker threads (0 = all cores); results do not depend on it");
    cmd->add_option("-o,--output", o.output, "Output path (default stdout)");
    cmd->add_option("--format", o.format, "Output format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--kernel", o.kernel, "Kernel variant: auto, scalar, avx2")
        ->check(CLI::IsMember({"auto", "scalar", "avx2"}));
}

latdpc::SeedSpec seed_spec(const CommonOpts& o) { return {o.seed, o.block_size}; }

void emit(const latdpc::ResultTable& table, const CommonOpts& o) {
    if (o.output.empty()) {
        table.write(std::cout, o.format);
        return;
    }
    std::ofstream out(o.output, std::ios::binary);
    if (!out) throw latdpc::ConfigError("cannot open output file: " + o.output);
    table.write(out, o.format);
}

void meta_common(latdpc::ResultTable& t, const CommonOpts& o, const std::string& echo) {
    t.add_meta("version", kVersion);
    t.add_meta("command", echo);
    t.add_meta("seed", std::to_string(o.seed));
    t.add_meta("n_samples", std::to_string(o.samples));
    t.add_meta("block_size", std::to_string(o.block_size));
}

struct FadingOpts {
    std::string kind = "rayleigh";
    double m_shape = 2.0;
    double h_scale = 1.0;
};

void add_fading(CLI::App* cmd, FadingOpts& f, const std::string& prefix = "--fading") {
    cmd->add_option(prefix, f.kind, "Fading kind: rayleigh, nakagami, deterministic")
        ->check(CLI::IsMember({"rayleigh", "nakagami", "deterministic"}));
    cmd->add_option("--m-shape", f.m_shape, "Nakagami shape m");
    cmd->add_option("--h-scale", f.h_scale, "Scale of the deterministic identity channel");
}

latdpc::FadingSpec make_fading(const FadingOpts& f, int tx, int rx) {
    if (f.kind == "rayleigh") return latdpc::FadingSpec::rayleigh(tx, rx);
    if (f.kind == "nakagami") {
        if (tx != 1 || rx != 1) throw latdpc::ConfigError("nakagami fading requires M = N = 1");
        return latdpc::FadingSpec::nakagami(f.m_shape);
    }
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(rx, tx);
    for (int i = 0; i < std::min(tx, rx); ++i) h(i, i) = f.h_scale;
    return latdpc::FadingSpec::deterministic(h);
}

// Optional JSON config mirroring the long flags of one subcommand:
// {"samples": 1000, "format": "json", ...}. Values are injected as argv
// tokens right after the subcommand so explicit flags still win.
std::vector<std::string> inject_config(const std::vector<std::string>& args) {
    std::string path;
    std::size_t cmd_pos = std::string::npos;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
        if (cmd_pos == std::string::npos && !args[i].empty() && args[i][0] != '-') cmd_pos = i;
    }
    if (path.empty()) return args;
    std::ifstream in(path);
    if (!in) throw latdpc::ConfigError("cannot open config file: " + path);
    nlohmann::json j;
    in >> j;
    if (!j.is_object()) throw latdpc::ConfigError("config file must hold one JSON object");
    if (cmd_pos == std::string::npos) throw latdpc::ConfigError("--config requires a subcommand");
    std::vector<std::string> out(args.begin(), args.begin() + static_cast<std::ptrdiff_t>(cmd_pos) + 1);
    for (const auto& [key, value] : j.items()) {
        out.push_back("--" + key);
        if (value.is_string())
            out.push_back(value.get<std::string>());
        else if (value.is_boolean()) {
            if (!value.get<bool>()) out.pop_back();
        } else
            out.push_back(value.dump());
    }
    out.insert(out.end(), args.begin() + static_cast<std::ptrdiff_t>(cmd_pos) + 1, args.end());
    return out;
}

// ---------------------------------------------------------------- bounds --

struct BoundsOpts {
    CommonOpts common;
    FadingOpts fading{"rayleigh", 2.0, 1.0};
    int m = 1, n = 1;
    double snr_db_min = 0.0, snr_db_max = 30.0, snr_db_step = 2.0;
    double ps_db = 80.0;
    std::string preset;
};

void apply_bounds_preset(BoundsOpts& o) {
    if (o.preset.empty()) return;
    if (o.preset == "fig2") {
        o.fading.kind = "rayleigh";
        o.m = o.n = 2;
        o.ps_db = 80.0;
    } else if (o.preset == "fig3") {
        o.fading.kind = "nakagami";
        o.fading.m_shape = 2.0;
        o.m = o.n = 1;
        o.ps_db = 80.0;
    } else if (o.preset == "fig4") {
        o.fading.kind = "rayleigh";
        o.m = o.n = 1;
        o.ps_db = 80.0;
    } else {
        throw latdpc::ConfigError("bounds: unknown preset " + o.preset + " (fig2, fig3, fig4)");
    }
}

latdpc::ResultTable run_bounds(BoundsOpts& o, const std::string& echo) {
    apply_bounds_preset(o);
    if (!(o.snr_db_step > 0.0)) throw latdpc::ConfigError("bounds: snr-db-step must be positive");
    const latdpc::FadingSpec spec = make_fading(o.fading, o.m, o.n);
    latdpc::ResultTable t;
    meta_common(t, o.common, echo);
    t.add_meta("fading", o.fading.kind);
    t.add_meta("M", std::to_string(o.m));
    t.add_meta("N", std::to_string(o.n));
    t.add_meta("ps_db", format_g17(o.ps_db));
    t.header = {"snr_db", "outer", "outer_se", "dpc", "dpc_se", "lattice", "lattice_se"};
    const latdpc::SeedSpec seed = seed_spec(o.common);
    for (double snr_db = o.snr_db_min; snr_db <= o.snr_db_max + 1e-9; snr_db += o.snr_db_step) {
        latdpc::PowerConfig cfg;
        cfg.pw = 1.0;
        cfg.px = latdpc::db_to_linear(snr_db);
        cfg.ps = latdpc::db_to_linear(o.ps_db);
        cfg.m = o.m;
        cfg.n = o.n;
        const auto outer = latdpc::outer_bound(cfg, spec, o.common.samples, seed, o.common.threads);
        const auto dpc = latdpc::dpc_inner(cfg, spec, o.common.samples, seed, o.common.threads);
        const auto lat = latdpc::lattice_inner(cfg, spec, o.common.samples, seed, o.common.threads);
        t.add_row({snr_db, outer.mean, outer.std_error, dpc.mean, dpc.std_error, lat.mean,
                   lat.std_error});
    }
    return t;
}

// ------------------------------------------------------------- gap-table --

struct GapTableOpts {
    CommonOpts common;
    std::vector<int> m_list = {1, 2, 3, 4};
    int n_min = 2, n_max = 30;
    std::string preset;
};

latdpc::ResultTable run_gap_table(GapTableOpts& o, const std::string& echo) {
    if (!o.preset.empty() && o.preset != "fig1")
        throw latdpc::ConfigError("gap-table: unknown preset " + o.preset + " (fig1)");
    if (o.preset == "fig1") {
        o.m_list = {1, 2, 3, 4};
        o.n_min = 2;
        o.n_max = 30;
    }
    latdpc::ResultTable t;
    meta_common(t, o.common, echo);
    t.header = {"M", "N", "gap_bits"};
    for (int m : o.m_list)
        for (int n = o.n_min; n <= o.n_max; ++n) {
            if (n <= m) {
                std::cerr << "warning: skipping M=" << m << " N=" << n << " (requires N > M)\n";
                continue;
            }
            t.add_row({static_cast<double>(m), static_cast<double>(n), latdpc::gap_rayleigh_mimo(m, n)});
        }
    return t;
}

// ------------------------------------------------------------- bc-region --

struct BcRegionOpts {
    CommonOpts common;
    std::string mode = "lattice-fixed";
    int m = 2, n1 = 2, n2 = 4;
    double pxw1_db = 0.0, pxw2_db = 20.0;
    FadingOpts user1{"deterministic", 2.0, 1.0};
    FadingOpts user2{"rayleigh", 2.0, 1.0};
    int alpha_steps = 21;
    std::string preset;
};

void apply_bc_preset(BcRegionOpts& o) {
    if (o.preset.empty()) return;
    if (o.preset == "fig5") {
        o.m = 2;
        o.n1 = 2;
        o.n2 = 4;
        o.user1 = {"deterministic", 2.0, 1.0};
        o.user2 = {"rayleigh", 2.0, 1.0};
    } else if (o.preset == "fig6") {
        o.m = o.n1 = o.n2 = 1;
        o.user1 = {"deterministic", 2.0, 1.0};
        o.user2 = {"nakagami", 2.0, 1.0};
    } else if (o.preset == "fig7") {
        // Scalar analog of the doubly-faded region (the fading model limits
        // Nakagami draws to single-antenna links).
        o.m = o.n1 = o.n2 = 1;
        o.user1 = {"nakagami", 2.0, 1.0};
        o.user2 = {"nakagami", 2.0, 1.0};
        if (o.mode == "lattice-fixed") o.mode = "lattice-faded";
    } else {
        throw latdpc::ConfigError("bc-region: unknown preset " + o.preset + " (fig5, fig6, fig7)");
    }
    o.pxw1_db = 0.0;
    o.pxw2_db = 20.0;
}

latdpc::ResultTable run_bc_region(BcRegionOpts& o, const std::string& echo) {
    apply_bc_preset(o);
    latdpc::BcConfig bc;
    bc.m = o.m;
    bc.n1 = o.n1;
    bc.n2 = o.n2;
    bc.pw1 = 1.0;
    bc.pw2 = latdpc::db_to_linear(o.pxw1_db) / latdpc::db_to_linear(o.pxw2_db);
    bc.px = latdpc::db_to_linear(o.pxw1_db);
    bc.user1 = make_fading(o.user1, o.m, o.n1);
    bc.user2 = make_fading(o.user2, o.m, o.n2);
    if (o.alpha_steps < 2) throw latdpc::ConfigError("bc-region: alpha-steps must be >= 2");
    for (int i = 0; i < o.alpha_steps; ++i)
        bc.alpha_grid.push_back(static_cast<double>(i) / (o.alpha_steps - 1));

    latdpc::BcMode mode;
    if (o.mode == "lattice-fixed")
        mode = latdpc::BcMode::lattice_fixed;
    else if (o.mode == "lattice-faded")
        mode = latdpc::BcMode::lattice_faded;
    else if (o.mode == "dpc-csit")
        mode = latdpc::BcMode::dpc_csit;
    else if (o.mode == "time-share")
        mode = latdpc::BcMode::time_share;
    else
        throw latdpc::ConfigError("bc-region: unknown mode " + o.mode);

    const latdpc::RegionCurve curve =
        latdpc::sweep_region(mode, bc, o.common.samples, seed_spec(o.common), o.common.threads);

    latdpc::ResultTable t;
    meta_common(t, o.common, echo);
    t.add_meta("mode", o.mode);
    t.add_meta("M", std::to_string(o.m));
    t.add_meta("N1", std::to_string(o.n1));
    t.add_meta("N2", std::to_string(o.n2));
    t.add_meta("pxw1_db", format_g17(o.pxw1_db));
    t.add_meta("pxw2_db", format_g17(o.pxw2_db));
    t.header = {"alpha", "R1", "R1_se", "R2", "R2_se"};
    for (const auto& p : curve.points) t.add_row({p.alpha, p.r1, p.r1_se, p.r2, p.r2_se});
    return t;
}

// --------------------------------------------------------------- dpc-sim --

struct DpcSimOpts {
    CommonOpts common;
    FadingOpts fading{"rayleigh", 2.0, 1.0};
    int m = 1, n = 1;
    std::vector<int> n_sym_list = {64};
    std::vector<int> ratio_list = {2};
    double px_db = 6.0, ps_db = 6.0, pw = 1.0;
    double epsilon = 0.1;
    std::int64_t frames = 1000;
    std::int64_t radius_samples = 20000;
};

latdpc::ResultTable run_dpc_sim(DpcSimOpts& o, const std::string& echo) {
    latdpc::ResultTable t;
    meta_common(t, o.common, echo);
    t.add_meta("fading", o.fading.kind);
    t.add_meta("frames", std::to_string(o.frames));
    t.add_meta("epsilon", format_g17(o.epsilon));
    t.header = {"n_sym", "rate_bits", "ser", "mean_z_norm", "radius_sq", "concentration_prob"};
    const latdpc::SeedSpec seed = seed_spec(o.common);
    for (int n_sym : o.n_sym_list)
        for (int ratio : o.ratio_list) {
            latdpc::PowerConfig cfg;
            cfg.px = latdpc::db_to_linear(o.px_db) * o.pw;
            cfg.ps = latdpc::db_to_linear(o.ps_db) * o.pw;
            cfg.pw = o.pw;
            cfg.m = o.m;
            cfg.n = o.n;
            const latdpc::FadingSpec spec = make_fading(o.fading, o.m, o.n);
            const latdpc::ChannelModel model = o.fading.kind == "deterministic"
                                                   ? latdpc::ChannelModel::real_direct
                                                   : latdpc::ChannelModel::complex_split;
            const int mr = model == latdpc::ChannelModel::real_direct ? o.m : 2 * o.m;
            latdpc::DpcConfig dpc{cfg,
                                  spec,
                                  latdpc::make_self_similar_code(mr * n_sym, cfg.px / mr, ratio),
                                  n_sym,
                                  o.epsilon,
                                  model,
                                  1.0};
            const auto stats = latdpc::run_trials(dpc, o.frames, seed, o.common.threads);
            const auto conc =
                latdpc::noise_concentration(dpc, o.frames, seed, o.radius_samples, o.common.threads);
            t.add_row({static_cast<double>(n_sym), dpc.code.rate_bits_per_dim(), stats.ser,
                       stats.mean_z_norm_sq, conc.radius_sq, conc.probability});
        }
    return t;
}

// --------------------------------------------------------- lattice-check --

struct LatticeCheckOpts {
    CommonOpts common;
    int dim = 2;
    double q = 4.0;
    int ratio = 4;
    std::int64_t check_samples = 100000;
};

latdpc::ResultTable run_lattice_check(LatticeCheckOpts& o, const std::string& echo) {
    using latdpc::Lattice;
    latdpc::ResultTable t;
    meta_common(t, o.common, echo);
    t.add_meta("dim", std::to_string(o.dim));
    t.add_meta("q", format_g17(o.q));
    t.add_meta("ratio", std::to_string(o.ratio));
    t.header = {"measured", "expected", "pass"};
    t.label_header = "check";

    const Lattice coarse = Lattice::scaled_integer(o.dim, o.q);
    const latdpc::NestedLatticeCode code(coarse, Lattice::scaled_integer(o.dim, o.q / o.ratio));
    // One derived stream per check, so each is reproducible in isolation.
    auto check_stream = [&o](std::uint64_t idx) {
        return latdpc::RandomStream::derive(o.common.seed, latdpc::stream_domain::lattice_mc, idx);
    };
    const std::int64_t n = o.check_samples;

    auto push = [&t](const std::string& label, double measured, double expected, bool pass) {
        t.row_labels.push_back(label);
        t.add_row({measured, expected, pass ? 1.0 : 0.0});
    };

    // Closed-form second moment q^2/12 against a Monte Carlo dither estimate.
    {
        const double expected = coarse.second_moment();
        latdpc::RandomStream s2 = check_stream(10);
        const double measured = coarse.second_moment_mc(n, s2);
        push("second_moment", measured, expected, std::abs(measured - expected) <= 0.02 * expected);
    }
    // Normalized second moment of qZ^n is 1/12, above the sphere bound.
    {
        const double g = coarse.normalized_second_moment();
        push("normalized_second_moment", g, 1.0 / 12.0, std::abs(g - 1.0 / 12.0) < 1e-12);
        push("sphere_bound", g, 1.0 / (2.0 * M_PI * std::exp(1.0)), g > 1.0 / (2.0 * M_PI * std::exp(1.0)));
    }
    // Modulo distributive law over random pairs.
    {
        double worst = 0.0;
        latdpc::RandomStream s3 = check_stream(11);
        for (int i = 0; i < 1000; ++i) {
            Eigen::VectorXd a(o.dim), b(o.dim);
            for (int j = 0; j < o.dim; ++j) {
                a[j] = s3.uniform(-40.0 * o.q, 40.0 * o.q);
                b[j] = s3.uniform(-40.0 * o.q, 40.0 * o.q);
            }
            const Eigen::VectorXd lhs = coarse.fold(a + coarse.fold(b));
            const Eigen::VectorXd rhs = coarse.fold(a + b);
            worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
        }
        push("mod_distributive", worst, 0.0, worst <= 1e-9 * o.q);
    }
    // Dither statistics: zero mean, second moment, membership.
    {
        Eigen::VectorXd mean = Eigen::VectorXd::Zero(o.dim);
        double power = 0.0;
        bool member = true;
        latdpc::RandomStream s4 = check_stream(12);
        for (std::int64_t i = 0; i < n; ++i) {
            const Eigen::VectorXd d = coarse.sample_dither(s4);
            mean += d;
            power += d.squaredNorm();
            if (i < 1000 && (coarse.fold(d) - d).cwiseAbs().maxCoeff() != 0.0) member = false;
        }
        mean /= static_cast<double>(n);
        power /= static_cast<double>(n) * o.dim;
        const double sigma = std::sqrt(coarse.second_moment() / static_cast<double>(n));
        push("dither_mean", mean.cwiseAbs().maxCoeff(), 0.0, mean.cwiseAbs().maxCoeff() <= 3.0 * sigma);
        push("dither_second_moment", power, coarse.second_moment(),
             std::abs(power - coarse.second_moment()) <= 0.02 * coarse.second_moment());
        push("dither_membership", member ? 1.0 : 0.0, 1.0, member);
    }
    // Crypto lemma: mod(g - d) uniform; 16-bin chi-square per coordinate.
    {
        Eigen::VectorXd g(o.dim);
        for (int j = 0; j < o.dim; ++j) g[j] = 0.3 * o.q * (j % 2 == 0 ? 1.0 : -0.4);
        std::vector<std::vector<std::int64_t>> hist(
            static_cast<std::size_t>(o.dim), std::vector<std::int64_t>(16, 0));
        const std::int64_t n_chi = n;
        latdpc::RandomStream s5 = check_stream(13);
        for (std::int64_t i = 0; i < n_chi; ++i) {
            const Eigen::VectorXd d = coarse.sample_dither(s5);
            const Eigen::VectorXd v = coarse.fold(g - d);
            for (int j = 0; j < o.dim; ++j) {
                int bin = static_cast<int>((v[j] / o.q + 0.5) * 16.0);
                bin = std::min(15, std::max(0, bin));
                ++hist[static_cast<std::size_t>(j)][static_cast<std::size_t>(bin)];
            }
        }
        double worst = 0.0;
        for (int j = 0; j < o.dim; ++j) {
            const double expected = static_cast<double>(n_chi) / 16.0;
            double chi2 = 0.0;
            for (int b = 0; b < 16; ++b) {
                const double diff = static_cast<double>(hist[static_cast<std::size_t>(j)][static_cast<std::size_t>(b)]) - expected;
                chi2 += diff * diff / expected;
            }
            worst = std::max(worst, chi2);
        }
        push("crypto_lemma_chi2", worst, kChiSq15Crit99, worst < kChiSq15Crit99);
    }
    // Codebook cardinality 2^{n*rate}.
    {
        const double expected = std::exp2(o.dim * code.rate_bits_per_dim());
        const double measured = static_cast<double>(code.codebook().size());
        push("codebook_cardinality", measured, expected, measured == expected);
    }
    return t;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lattice strategies and capacity bounds for ergodic fading dirty-paper channels"};
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path, "JSON config file mirroring the flags")
        ->expected(0, 1);

    BoundsOpts bounds_opts;
    auto* bounds_cmd = app.add_subcommand("bounds", "Outer bound, DPC and lattice rates over an SNR sweep");
    bounds_cmd->add_option("--config", config_path, "JSON config file mirroring the flags");
    add_common(bounds_cmd, bounds_opts.common);
    add_fading(bounds_cmd, bounds_opts.fading);
    bounds_cmd->add_option("-M,--tx", bounds_opts.m, "Transmit antennas");
    bounds_cmd->add_option("-N,--rx", bounds_opts.n, "Receive antennas");
    bounds_cmd->add_option("--snr-db-min", bounds_opts.snr_db_min, "Px/Pw sweep start (dB)");
    bounds_cmd->add_option("--snr-db-max", bounds_opts.snr_db_max, "Px/Pw sweep end (dB)");
    bounds_cmd->add_option("--snr-db-step", bounds_opts.snr_db_step, "Px/Pw sweep step (dB)");
    bounds_cmd->add_option("--ps-db", bounds_opts.ps_db, "Ps/Pw (dB)");
    bounds_cmd->add_option("--preset", bounds_opts.preset, "Figure preset: fig2, fig3, fig4");

    GapTableOpts gap_opts;
    auto* gap_cmd = app.add_subcommand("gap-table", "Closed-form Rayleigh MIMO gap bound table");
    gap_cmd->add_option("--config", config_path, "JSON config file mirroring the flags");
    add_common(gap_cmd, gap_opts.common);
    gap_cmd->add_option("--m-list", gap_opts.m_list, "Transmit antenna counts")->delimiter(',');
    gap_cmd->add_option("--n-min", gap_opts.n_min, "Smallest receive antenna count");
    gap_cmd->add_option("--n-max", gap_opts.n_max, "Largest receive antenna count");
    gap_cmd->add_option("--preset", gap_opts.preset, "Figure preset: fig1");

    BcRegionOpts bc_opts;
    auto* bc_cmd = app.add_subcommand("bc-region", "Two-user broadcast rate-region boundary");
    bc_cmd->add_option("--config", config_path, "JSON config file mirroring the flags");
    add_common(bc_cmd, bc_opts.common);
    bc_cmd->add_option("--mode", bc_opts.mode, "lattice-fixed, lattice-faded, dpc-csit or time-share")
        ->check(CLI::IsMember({"lattice-fixed", "lattice-faded", "dpc-csit", "time-share"}));
    bc_cmd->add_option("-M,--tx", bc_opts.m, "Transmit antennas");
    bc_cmd->add_option("--n1", bc_opts.n1, "Receiver-1 antennas");
    bc_cmd->add_option("--n2", bc_opts.n2, "Receiver-2 antennas");
    bc_cmd->add_option("--pxw1-db", bc_opts.pxw1_db, "Px/Pw1 (dB)");
    bc_cmd->add_option("--pxw2-db", bc_opts.pxw2_db, "Px/Pw2 (dB)");
    bc_cmd->add_option("--user1", bc_opts.user1.kind, "User-1 fading kind")
        ->check(CLI::IsMember({"rayleigh", "nakagami", "deterministic"}));
    bc_cmd->add_option("--user2", bc_opts.user2.kind, "User-2 fading kind")
        ->check(CLI::IsMember({"rayleigh", "nakagami", "deterministic"}));
    bc_cmd->add_option("--user1-m-shape", bc_opts.user1.m_shape, "User-1 Nakagami shape");
    bc_cmd->add_option("--user2-m-shape", bc_opts.user2.m_shape, "User-2 Nakagami shape");
    bc_cmd->add_option("--g-scale", bc_opts.user1.h_scale, "Deterministic user-1 channel scale");
    bc_cmd->add_option("--alpha-steps", bc_opts.alpha_steps, "Points on the alpha grid");
    bc_cmd->add_option("--preset", bc_opts.preset, "Figure preset: fig5, fig6, fig7");

    DpcSimOpts sim_opts;
    auto* sim_cmd = app.add_subcommand("dpc-sim", "End-to-end nested-lattice transceiver simulation");
    sim_cmd->add_option("--config", config_path, "JSON config file mirroring the flags");
    add_common(sim_cmd, sim_opts.common);
    add_fading(sim_cmd, sim_opts.fading);
    sim_cmd->add_option("-M,--tx", sim_opts.m, "Transmit antennas");
    sim_cmd->add_option("-N,--rx", sim_opts.n, "Receive antennas");
    sim_cmd->add_option("--n-sym-list", sim_opts.n_sym_list, "Channel uses per frame")->delimiter(',');
    sim_cmd->add_option("--ratio-list", sim_opts.ratio_list, "Coarse/fine cell ratios (rate = log2 ratio)")
        ->delimiter(',');
    sim_cmd->add_option("--px-db", sim_opts.px_db, "Px/Pw (dB)");
    sim_cmd->add_option("--ps-db", sim_opts.ps_db, "Ps/Pw (dB)");
    sim_cmd->add_option("--pw", sim_opts.pw, "Noise power (linear)");
    sim_cmd->add_option("--epsilon", sim_opts.epsilon, "Decision-sphere slack");
    sim_cmd->add_option("--frames", sim_opts.frames, "Simulated frames per row");
    sim_cmd->add_option("--radius-samples", sim_opts.radius_samples, "Samples for the decision radius");

    LatticeCheckOpts lat_opts;
    auto* lat_cmd = app.add_subcommand("lattice-check", "Lattice property checks as pass/fail rows");
    lat_cmd->add_option("--config", config_path, "JSON config file mirroring the flags");
    add_common(lat_cmd, lat_opts.common);
    lat_cmd->add_option("--dim", lat_opts.dim, "Lattice dimension");
    lat_cmd->add_option("--q", lat_opts.q, "Coarse scale");
    lat_cmd->add_option("--ratio", lat_opts.ratio, "Coarse/fine cell ratio");
    lat_cmd->add_option("--check-samples", lat_opts.check_samples, "Samples for statistical checks");

    std::vector<std::string> args(argv + 1, argv + argc);
    std::ostringstream echo_stream;
    echo_stream << "latdpc";
    for (const auto& a : args) echo_stream << ' ' << a;
    const std::string echo = echo_stream.str();

    try {
        const std::vector<std::string> expanded = inject_config(args);
        std::vector<const char*> cargv;
        cargv.push_back("latdpc");
        for (const auto& a : expanded) cargv.push_back(a.c_str());
        try {
            app.parse(static_cast<int>(cargv.size()), cargv.data());
        } catch (const CLI::CallForHelp& e) {
            return app.exit(e);
        } catch (const CLI::CallForVersion& e) {
            return app.exit(e);
        } catch (const CLI::ParseError& e) {
            app.exit(e);
            return 2;
        }

        CommonOpts* active_common = nullptr;
        if (bounds_cmd->parsed()) active_common = &bounds_opts.common;
        if (gap_cmd->parsed()) active_common = &gap_opts.common;
        if (bc_cmd->parsed()) active_common = &bc_opts.common;
        if (sim_cmd->parsed()) active_common = &sim_opts.common;
        if (lat_cmd->parsed()) active_common = &lat_opts.common;
        if (active_common && !latdpc::kern::select(active_common->kernel))
            throw latdpc::ConfigError("kernel variant not available: " + active_common->kernel);

        if (bounds_cmd->parsed())
            emit(run_bounds(bounds_opts, echo), bounds_opts.common);
        else if (gap_cmd->parsed())
            emit(run_gap_table(gap_opts, echo), gap_opts.common);
        else if (bc_cmd->parsed())
            emit(run_bc_region(bc_opts, echo), bc_opts.common);
        else if (sim_cmd->parsed())
            emit(run_dpc_sim(sim_opts, echo), sim_opts.common);
        else if (lat_cmd->parsed())
            emit(run_lattice_check(lat_opts, echo), lat_opts.common);
        return 0;
    } catch (const latdpc::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const latdpc::ResourceError& e) {
        std::cerr << "resource error: " << e.what() << "\n";
        return 4;
    } catch (const latdpc::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
