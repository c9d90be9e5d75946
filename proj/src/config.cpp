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

#include "risnr/config.hpp"

#include <charconv>
#include <cmath>
#include <functional>
#include <istream>
#include <sstream>

#include <fmt/format.h>

namespace risnr {

namespace {

std::string_view trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep)
{
    std::vector<std::string_view> out;
    if (trim(s).empty())
        return out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
        if (pos == std::string_view::npos)
            break;
        start = pos + 1;
    }
    return out;
}

double parse_double(std::string_view key, std::string_view v)
{
    v = trim(v);
    double out = 0.0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc{} || res.ptr != v.data() + v.size())
        throw ConfigError(std::string(key), fmt::format("expected a number, got '{}'", v));
    return out;
}

template <typename Int>
Int parse_int(std::string_view key, std::string_view v)
{
    v = trim(v);
    Int out{};
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc{} || res.ptr != v.data() + v.size())
        throw ConfigError(std::string(key), fmt::format("expected an integer, got '{}'", v));
    return out;
}

bool parse_bool(std::string_view key, std::string_view v)
{
    v = trim(v);
    if (v == "true" || v == "1" || v == "on")
        return true;
    if (v == "false" || v == "0" || v == "off")
        return false;
    throw ConfigError(std::string(key), fmt::format("expected true/false, got '{}'", v));
}

std::vector<double> parse_doubles(std::string_view key, std::string_view v)
{
    std::vector<double> out;
    for (auto item : split(v, ','))
        out.push_back(parse_double(key, item));
    return out;
}

std::vector<AnglePair> parse_angles(std::string_view key, std::string_view v)
{
    std::vector<AnglePair> out;
    for (auto item : split(v, ',')) {
        const auto parts = split(item, ':');
        if (parts.size() != 2)
            throw ConfigError(std::string(key), fmt::format("expected nu:psi pairs, got '{}'", item));
        out.push_back({parse_double(key, parts[0]), parse_double(key, parts[1])});
    }
    return out;
}

std::string fmt_doubles(const std::vector<double>& v)
{
    return fmt::format("{}", fmt::join(v, ","));
}

std::string fmt_angles(const std::vector<AnglePair>& v)
{
    std::vector<std::string> items;
    for (const auto& a : v)
        items.push_back(fmt::format("{}:{}", a.nu_deg, a.psi_deg));
    return fmt::format("{}", fmt::join(items, ","));
}

RisMode parse_ris_mode(std::string_view key, std::string_view v)
{
    v = trim(v);
    if (v == "periodic")
        return RisMode::periodic;
    if (v == "iid")
        return RisMode::iid;
    if (v == "genie")
        return RisMode::genie;
    if (v == "off")
        return RisMode::off;
    throw ConfigError(std::string(key), fmt::format("unknown mode '{}'", v));
}

SchedKind parse_sched(std::string_view key, std::string_view v)
{
    v = trim(v);
    if (v == "pf")
        return SchedKind::pf;
    if (v == "rr")
        return SchedKind::rr;
    throw ConfigError(std::string(key), fmt::format("unknown scheduler '{}'", v));
}

RateBasis parse_basis(std::string_view key, std::string_view v)
{
    v = trim(v);
    if (v == "sinr")
        return RateBasis::sinr;
    if (v == "snr")
        return RateBasis::snr;
    if (v == "mcs")
        return RateBasis::mcs;
    throw ConfigError(std::string(key), fmt::format("unknown rate basis '{}'", v));
}

struct KeyDef {
    const char* key;
    std::function<void(ExperimentConfig&, std::string_view)> set;
    std::function<std::string(const ExperimentConfig&)> get;
};

#define RISNR_DOUBLE(name, field)                                                                 \
    KeyDef{name, [](ExperimentConfig& c, std::string_view v) { c.field = parse_double(name, v); }, \
           [](const ExperimentConfig& c) { return fmt::format("{}", c.field); }}
#define RISNR_INT(name, field, type)                                                                \
    KeyDef{name, [](ExperimentConfig& c, std::string_view v) { c.field = parse_int<type>(name, v); }, \
           [](const ExperimentConfig& c) { return fmt::format("{}", c.field); }}
#define RISNR_DOUBLES(name, field)                                                                 \
    KeyDef{name, [](ExperimentConfig& c, std::string_view v) { c.field = parse_doubles(name, v); }, \
           [](const ExperimentConfig& c) { return fmt_doubles(c.field); }}

const std::vector<KeyDef>& registry()
{
    static const std::vector<KeyDef> keys = {
        RISNR_INT("geometry.n_h", geometry.n_h, int),
        RISNR_INT("geometry.n_v", geometry.n_v, int),
        RISNR_DOUBLE("geometry.spacing_ratio", geometry.spacing_ratio),
        KeyDef{"ue.angles",
               [](ExperimentConfig& c, std::string_view v) { c.ue_angles = parse_angles("ue.angles", v); },
               [](const ExperimentConfig& c) { return fmt_angles(c.ue_angles); }},
        KeyDef{"ue.active",
               [](ExperimentConfig& c, std::string_view v) {
                   c.active_ues.clear();
                   for (auto item : split(v, ','))
                       c.active_ues.push_back(parse_int<int>("ue.active", item));
               },
               [](const ExperimentConfig& c) { return fmt::format("{}", fmt::join(c.active_ues, ",")); }},
        RISNR_DOUBLE("link.tx_power_dbm", tx_power_dbm),
        RISNR_DOUBLES("link.pathloss_db", pathloss_db),
        RISNR_DOUBLE("link.noise_dbm", noise_dbm),
        RISNR_DOUBLE("link.rsrp_offset_db", rsrp_offset_db),
        RISNR_DOUBLE("link.snr_ceiling_db", snr_ceiling_db),
        RISNR_DOUBLES("link.diffuse_rel_db", diffuse_rel_db),
        RISNR_DOUBLES("link.norris_rel_db", norris_rel_db),
        RISNR_DOUBLE("link.amplitude", amplitude),
        KeyDef{"channel.rician_k_db",
               [](ExperimentConfig& c, std::string_view v) {
                   if (trim(v) == "none")
                       c.rician_k_db.reset();
                   else
                       c.rician_k_db = parse_double("channel.rician_k_db", v);
               },
               [](const ExperimentConfig& c) {
                   return c.rician_k_db ? fmt::format("{}", *c.rician_k_db) : std::string("none");
               }},
        RISNR_INT("channel.coherence_slots", coherence_slots, std::int64_t),
        KeyDef{"ris.mode",
               [](ExperimentConfig& c, std::string_view v) { c.ris_mode = parse_ris_mode("ris.mode", v); },
               [](const ExperimentConfig& c) { return std::string(to_string(c.ris_mode)); }},
        RISNR_INT("ris.ts_slots", ts_slots, std::int64_t),
        RISNR_INT("ris.seed", ris_seed, std::uint64_t),
        KeyDef{"ris.angles",
               [](ExperimentConfig& c, std::string_view v) { c.ris_angles = parse_angles("ris.angles", v); },
               [](const ExperimentConfig& c) { return fmt_angles(c.ris_angles); }},
        RISNR_DOUBLES("ris.probs", ris_probs),
        RISNR_INT("ris.offset_slots", ris_offset_slots, std::int64_t),
        KeyDef{"ris.one_bit",
               [](ExperimentConfig& c, std::string_view v) { c.ris_one_bit = parse_bool("ris.one_bit", v); },
               [](const ExperimentConfig& c) { return std::string(c.ris_one_bit ? "true" : "false"); }},
        KeyDef{"sched.kind",
               [](ExperimentConfig& c, std::string_view v) { c.sched_kind = parse_sched("sched.kind", v); },
               [](const ExperimentConfig& c) { return std::string(to_string(c.sched_kind)); }},
        RISNR_DOUBLE("sched.alpha", alpha),
        RISNR_DOUBLE("sched.floor", ewma_floor),
        KeyDef{"sched.rate_basis",
               [](ExperimentConfig& c, std::string_view v) { c.rate_basis = parse_basis("sched.rate_basis", v); },
               [](const ExperimentConfig& c) { return std::string(to_string(c.rate_basis)); }},
        RISNR_DOUBLE("la.impl_margin_db", la.impl_margin_db),
        RISNR_DOUBLE("la.slope", la.slope),
        RISNR_DOUBLE("la.cqi_backoff_db", la.cqi_backoff_db),
        RISNR_DOUBLE("la.window_ms", la.window_ms),
        RISNR_DOUBLE("la.cqi_period_ms", la.cqi_period_ms),
        RISNR_DOUBLE("la.bler_low", la.bler_low),
        RISNR_DOUBLE("la.bler_high", la.bler_high),
        RISNR_INT("la.mcs_min", la.mcs_min, int),
        RISNR_INT("la.mcs_init", la.mcs_init, int),
        RISNR_DOUBLE("sim.duration_s", duration_s),
        RISNR_INT("sim.seed", seed, std::uint64_t),
        RISNR_DOUBLE("sim.ts_scaling", ts_scaling),
        RISNR_INT("sim.prbs", prbs, int),
        KeyDef{"sim.out_dir", [](ExperimentConfig& c, std::string_view v) { c.out_dir = std::string(trim(v)); },
               [](const ExperimentConfig& c) { return c.out_dir; }},
    };
    return keys;
}

#undef RISNR_DOUBLE
#undef RISNR_INT
#undef RISNR_DOUBLES

void require(bool ok, const char* key, const std::string& what)
{
    if (!ok)
        throw ConfigError(key, what);
}

} // namespace

const char* to_string(RisMode m)
{
    switch (m) {
    case RisMode::periodic: return "periodic";
    case RisMode::iid: return "iid";
    case RisMode::genie: return "genie";
    case RisMode::off: return "off";
    }
    return "?";
}

const char* to_string(SchedKind k) { return k == SchedKind::pf ? "pf" : "rr"; }

const char* to_string(RateBasis b)
{
    switch (b) {
    case RateBasis::sinr: return "sinr";
    case RateBasis::snr: return "snr";
    case RateBasis::mcs: return "mcs";
    }
    return "?";
}

void set_config_value(ExperimentConfig& cfg, std::string_view key, std::string_view value)
{
    key = trim(key);
    for (const auto& def : registry())
        if (key == def.key) {
            def.set(cfg, value);
            return;
        }
    throw ConfigError(std::string(key), "unknown configuration key");
}

ExperimentConfig parse_config(std::istream& is, ExperimentConfig base)
{
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        std::string_view v(line);
        if (const auto hash = v.find('#'); hash != std::string_view::npos)
            v = v.substr(0, hash);
        v = trim(v);
        if (v.empty())
            continue;
        const auto eq = v.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError(fmt::format("line {}", lineno), "expected key = value");
        set_config_value(base, v.substr(0, eq), v.substr(eq + 1));
    }
    return base;
}

ExperimentConfig parse_config_text(std::string_view text, ExperimentConfig base)
{
    std::istringstream is{std::string(text)};
    return parse_config(is, std::move(base));
}

std::string serialize_config(const ExperimentConfig& cfg)
{
    std::string out;
    for (const auto& def : registry())
        out += fmt::format("{} = {}\n", def.key, def.get(cfg));
    return out;
}

std::vector<std::string> config_keys()
{
    std::vector<std::string> out;
    for (const auto& def : registry())
        out.emplace_back(def.key);
    return out;
}

void ExperimentConfig::validate() const
{
    require(geometry.n_h >= 1, "geometry.n_h", "must be >= 1");
    require(geometry.n_v >= 1, "geometry.n_v", "must be >= 1");
    require(geometry.spacing_ratio > 0.0, "geometry.spacing_ratio", "must be positive");
    require(!ue_angles.empty(), "ue.angles", "need at least one UE");
    for (const auto& a : ue_angles)
        require(std::abs(a.nu_deg) <= 90.0 && std::abs(a.psi_deg) <= 90.0, "ue.angles",
                "angles must lie in [-90, 90]");
    require(!active_ues.empty(), "ue.active", "need at least one active UE");
    for (std::size_t i = 0; i < active_ues.size(); ++i) {
        require(active_ues[i] >= 0 && active_ues[i] < static_cast<int>(ue_angles.size()), "ue.active",
                "index out of range");
        for (std::size_t j = 0; j < i; ++j)
            require(active_ues[i] != active_ues[j], "ue.active", "duplicate UE index");
    }
    const auto K = ue_angles.size();
    require(pathloss_db.size() == K, "link.pathloss_db", "need one value per UE");
    require(diffuse_rel_db.size() == K, "link.diffuse_rel_db", "need one value per UE");
    require(norris_rel_db.size() == K, "link.norris_rel_db", "need one value per UE");
    require(std::isfinite(tx_power_dbm), "link.tx_power_dbm", "must be finite");
    require(std::isfinite(noise_dbm), "link.noise_dbm", "must be finite");
    require(amplitude > 0.0, "link.amplitude", "must be positive");
    require(!std::isnan(snr_ceiling_db), "link.snr_ceiling_db", "must be a number or inf");
    require(coherence_slots >= 0, "channel.coherence_slots", "must be >= 0");
    require(ts_slots >= 1, "ris.ts_slots", "must be >= 1");
    for (const auto& a : state_angles())
        require(std::abs(a.nu_deg) <= 90.0 && std::abs(a.psi_deg) <= 90.0, "ris.angles",
                "angles must lie in [-90, 90]");
    if (!ris_probs.empty()) {
        require(ris_probs.size() == state_angles().size(), "ris.probs", "need one value per state");
        double total = 0.0;
        for (double p : ris_probs) {
            require(p >= 0.0, "ris.probs", "probabilities must be non-negative");
            total += p;
        }
        require(std::abs(total - 1.0) <= 1e-9, "ris.probs", "probabilities must sum to 1");
    }
    require(alpha > 0.0 && alpha < 1.0, "sched.alpha", "must lie in (0, 1)");
    require(ewma_floor > 0.0, "sched.floor", "must be positive");
    require(alpha * ts_scaling < 1.0, "sim.ts_scaling", "scaled alpha must stay below 1");
    require(la.slope > 0.0, "la.slope", "must be positive");
    require(la.window_ms > 0.0, "la.window_ms", "must be positive");
    require(la.cqi_period_ms > 0.0, "la.cqi_period_ms", "must be positive");
    require(la.bler_low >= 0.0 && la.bler_low < la.bler_high && la.bler_high <= 1.0, "la.bler_low",
            "need 0 <= bler_low < bler_high <= 1");
    require(la.mcs_min >= 0 && la.mcs_min <= McsTable::kMaxIndex, "la.mcs_min", "out of range");
    require(la.mcs_init >= la.mcs_min && la.mcs_init <= McsTable::kMaxIndex, "la.mcs_init",
            "must lie in [mcs_min, 28]");
    require(duration_s >= 0.0 && std::isfinite(duration_s), "sim.duration_s", "must be >= 0");
    require(ts_scaling >= 1.0, "sim.ts_scaling", "must be >= 1");
    require(prbs >= 1 && prbs <= 275, "sim.prbs", "must lie in [1, 275]");
}

ExperimentConfig preset_schedule(double alpha, RisMode mode, ExperimentConfig cfg)
{
    cfg.alpha = alpha;
    cfg.ris_mode = mode;
    if (mode == RisMode::genie)
        cfg.sched_kind = SchedKind::rr;
    return cfg;
}

ExperimentConfig preset_single_ue(int ue, bool ris_on, ExperimentConfig cfg)
{
    cfg.active_ues = {ue};
    cfg.ris_mode = ris_on ? RisMode::genie : RisMode::off;
    cfg.sched_kind = SchedKind::rr;
    return cfg;
}

ExperimentConfig preset_genie_rr(ExperimentConfig cfg)
{
    cfg.ris_mode = RisMode::genie;
    cfg.sched_kind = SchedKind::rr;
    return cfg;
}

} // namespace risnr
