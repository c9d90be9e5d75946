// SPDX-License-Identifier: Apache-2.0
//
// risnr: slot-level simulator for RIS-aided 5G NR downlink scheduling
// Copyright (C) 2026 The risnr authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "risnr/array_model.hpp"
#include "risnr/config.hpp"
#include "risnr/sim_engine.hpp"

namespace fs = std::filesystem;
using namespace risnr;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct Globals {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<double> duration_s;
    std::optional<std::string> out_dir;
    std::vector<std::string> sets;
};

ExperimentConfig load_config(const Globals& g)
{
    ExperimentConfig cfg;
    if (!g.config_path.empty()) {
        std::ifstream in(g.config_path);
        if (!in)
            throw ConfigError("--config", fmt::format("cannot open '{}'", g.config_path));
        cfg = parse_config(in);
    }
    for (const auto& kv : g.sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw ConfigError("--set", fmt::format("expected key=value, got '{}'", kv));
        set_config_value(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (g.seed)
        cfg.seed = *g.seed;
    if (g.duration_s)
        cfg.duration_s = *g.duration_s;
    if (g.out_dir)
        cfg.out_dir = *g.out_dir;
    return cfg;
}

std::ofstream open_out(const ExperimentConfig& cfg, const std::string& name)
{
    const fs::path dir(cfg.out_dir);
    fs::create_directories(dir);
    const auto path = dir / name;
    std::ofstream os(path);
    if (!os)
        throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
    return os;
}

void emit_run(const ExperimentConfig& cfg, const RunResult& res, const std::string& stem)
{
    {
        auto os = open_out(cfg, stem + "_trace.csv");
        write_trace_csv(os, res.trace);
    }
    {
        auto os = open_out(cfg, stem + "_summary.txt");
        write_summary(os, res.summary);
    }
    {
        auto os = open_out(cfg, stem + "_config.txt");
        os << serialize_config(cfg);
    }
    write_summary(std::cout, res.summary);
}

RisMode parse_mode(const std::string& s)
{
    ExperimentConfig probe;
    set_config_value(probe, "ris.mode", s);
    return probe.ris_mode;
}

int cmd_beam_pattern(const Globals& g, double steer, bool sweep, double illum_az, double illum_el,
                     double step, bool continuous)
{
    const auto cfg = load_config(g);
    cfg.validate();
    const auto& geo = cfg.geometry;
    const Illumination illum{illum_az, illum_el};
    std::vector<double> targets;
    if (sweep)
        for (int a = 0; a <= 60; a += 5)
            targets.push_back(a);
    else
        targets.push_back(steer);
    for (double t : targets)
        if (!(std::abs(t) <= 90.0))
            throw ConfigError("--steer", fmt::format("angle {} outside [-90, 90]", t));

    auto metrics_os = open_out(cfg, "beam_metrics.csv");
    metrics_os << "steer_deg,peak_deg,peak_gain_db,hpbw_deg,sll_db\n";
    for (double t : targets) {
        const auto prof = steering_profile(t, illum, geo.n_h, geo.n_v, geo.spacing_ratio);
        const auto phases = continuous ? prof.continuous : code_to_phases(quantize_one_bit(prof.continuous));
        const auto cut = pattern_cut(phases, illum, geo.n_h, geo.n_v, geo.spacing_ratio, step);
        const auto m = beam_metrics(cut);
        {
            auto os = open_out(cfg, fmt::format("beam_pattern_{}.csv", t));
            write_pattern_csv(os, cut);
        }
        const auto line = fmt::format("{},{:.3f},{:.3f},{:.3f},{:.3f}\n", t, m.peak_angle_deg, m.peak_gain_db,
                                      m.hpbw_deg, m.sll_db);
        metrics_os << line;
        fmt::print("steer={} peak={:.2f} hpbw={:.2f} sll={:.2f} dB\n", t, m.peak_angle_deg, m.hpbw_deg,
                   m.sll_db);
    }
    return kExitOk;
}

int cmd_single_ue(const Globals& g, int ue, const std::string& ris)
{
    if (ris != "on" && ris != "off")
        throw ConfigError("--ris", "expected on or off");
    const auto cfg = preset_single_ue(ue, ris == "on", load_config(g));
    cfg.validate();
    const auto res = run(cfg);
    emit_run(cfg, res, fmt::format("single_ue{}_{}", ue, ris));
    return kExitOk;
}

int cmd_schedule(const Globals& g, std::optional<double> alpha, const std::string& mode)
{
    auto base = load_config(g);
    const auto cfg = preset_schedule(alpha.value_or(base.alpha), parse_mode(mode), base);
    cfg.validate();
    const auto res = run(cfg);
    emit_run(cfg, res, "schedule");

    const auto aligned = aligned_states(cfg);
    const auto hist = scheduling_histogram(res.trace, aligned, cfg.active_ues);
    auto os = open_out(cfg, "schedule_histogram.csv");
    os << "ue,aligned_fraction,misaligned_fraction\n";
    for (const auto& h : hist) {
        os << fmt::format("{},{:.4f},{:.4f}\n", h.ue, h.aligned_fraction, h.misaligned_fraction);
        fmt::print("hist.ue{}.aligned={:.4f} hist.ue{}.misaligned={:.4f}\n", h.ue, h.aligned_fraction, h.ue,
                   h.misaligned_fraction);
    }
    return kExitOk;
}

int cmd_sweep(const Globals& g, const std::vector<double>& alphas, bool no_refs)
{
    const auto cfg = load_config(g);
    cfg.validate();
    for (double a : alphas) {
        auto probe = cfg;
        probe.alpha = a;
        probe.validate();
    }
    const auto rows = sweep_alpha(cfg, alphas, !no_refs);
    auto os = open_out(cfg, "sweep_alpha.csv");
    write_sweep_csv(os, rows);
    write_sweep_csv(std::cout, rows);
    return kExitOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"risnr: slot-level RIS-aided NR downlink simulator"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--config", g.config_path, "key = value config file");
    app.add_option("--seed", g.seed, "master seed");
    app.add_option("--duration-s", g.duration_s, "simulated seconds");
    app.add_option("--out-dir", g.out_dir, "output directory");
    app.add_option("--set", g.sets, "override one key (key=value), repeatable")->take_all();

    auto* beam = app.add_subcommand("beam-pattern", "1-bit steered pattern cut and beam metrics");
    double steer = 30.0, illum_az = 0.0, illum_el = 20.0, step = 0.05;
    bool sweep = false, continuous = false;
    beam->add_option("--steer", steer, "steering angle, deg");
    beam->add_flag("--sweep", sweep, "steer 0..60 deg in 5 deg steps");
    beam->add_option("--illum-az", illum_az, "feed azimuth, deg");
    beam->add_option("--illum-el", illum_el, "feed elevation, deg");
    beam->add_option("--step", step, "cut grid step, deg")->check(CLI::Range(1e-3, 0.1));
    beam->add_flag("--continuous", continuous, "use unquantized phases");

    auto* single = app.add_subcommand("single-ue", "one UE attached, surface on (genie) or off");
    int ue = 0;
    std::string ris = "on";
    single->add_option("--ue", ue, "configured UE index");
    single->add_option("--ris", ris, "on or off");

    auto* sched = app.add_subcommand("schedule", "two-UE scheduling run with trace and histogram");
    std::optional<double> alpha;
    std::string mode = "periodic";
    sched->add_option("--alpha", alpha, "PF EWMA weight");
    sched->add_option("--mode", mode, "periodic, iid, genie or off");

    auto* sw = app.add_subcommand("sweep-alpha", "throughput against 1/alpha with reference rows");
    std::vector<double> alphas{0.01, 0.0005, 0.00005};
    bool no_refs = false;
    sw->add_option("--alphas", alphas, "alpha values")->delimiter(',');
    sw->add_flag("--no-references", no_refs, "skip genie and no-surface rows");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (*beam)
            return cmd_beam_pattern(g, steer, sweep, illum_az, illum_el, step, continuous);
        if (*single)
            return cmd_single_ue(g, ue, ris);
        if (*sched)
            return cmd_schedule(g, alpha, mode);
        if (*sw)
            return cmd_sweep(g, alphas, no_refs);
    } catch (const ConfigError& e) {
        fmt::print(stderr, "config error: {}\n", e.what());
        return kExitConfig;
    } catch (const std::exception& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return kExitRuntime;
    }
    return kExitRuntime;
}
