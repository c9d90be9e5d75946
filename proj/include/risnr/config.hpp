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

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "risnr/link_adaptation.hpp"
#include "risnr/ris_controller.hpp"

namespace risnr {

/// Validation or parse failure for one configuration key.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string key, const std::string& what)
        : std::runtime_error(key + ": " + what), key_(std::move(key))
    {
    }
    const std::string& key() const { return key_; }

private:
    std::string key_;
};

enum class RisMode { periodic, iid, genie, off };
enum class SchedKind { pf, rr };

/// What the PF metric reads as a UE's instantaneous rate.
enum class RateBasis {
    sinr, ///< log2(1 + distortion-limited SINR)
    snr,  ///< log2(1 + thermal SNR)
    mcs,  ///< spectral efficiency of the UE's current MCS
};

/// Everything a run needs. Defaults are the two-UE lab preset: 32x32 surface
/// at quarter-wavelength pitch, UEs at 30/45 deg azimuth, 106 PRBs at 30 kHz.
struct ExperimentConfig {
    SurfaceGeometry geometry{};
    std::vector<AnglePair> ue_angles{{30.0, 0.0}, {45.0, 0.0}};
    std::vector<int> active_ues{0, 1};

    // Link budget. Every *_rel_db is a power relative to the coherent gain
    // (N * amplitude)^2 of a perfectly aligned surface.
    double tx_power_dbm = 23.0;
    std::vector<double> pathloss_db{128.0, 125.0};
    double noise_dbm = -64.0;
    double rsrp_offset_db = -60.3205;
    double snr_ceiling_db = 13.0;
    std::vector<double> diffuse_rel_db{-11.4794, -12.9588};
    std::vector<double> norris_rel_db{-6.885, -7.885};
    double amplitude = 1.0;
    std::optional<double> rician_k_db{};
    std::int64_t coherence_slots = 0; ///< 0 keeps every channel static

    // Surface control.
    RisMode ris_mode = RisMode::periodic;
    std::int64_t ts_slots = 18000;
    std::uint64_t ris_seed = 0; ///< 0 derives the stream from the master seed
    std::vector<AnglePair> ris_angles{}; ///< empty: one state per UE
    std::vector<double> ris_probs{};     ///< empty: uniform
    std::int64_t ris_offset_slots = 0;
    bool ris_one_bit = false;

    // Scheduler.
    SchedKind sched_kind = SchedKind::pf;
    double alpha = 5e-5;
    double ewma_floor = 1e-6;
    RateBasis rate_basis = RateBasis::snr;

    LaConfig la{};

    double duration_s = 120.0;
    std::uint64_t seed = 1;
    double ts_scaling = 1.0;
    int prbs = 106;
    std::string out_dir = ".";

    bool operator==(const ExperimentConfig&) const = default;

    /// Throws ConfigError naming the first offending key.
    void validate() const;

    std::vector<AnglePair> state_angles() const { return ris_angles.empty() ? ue_angles : ris_angles; }
};

/// Set one dotted key from its text form.
void set_config_value(ExperimentConfig& cfg, std::string_view key, std::string_view value);

/// Parse `key = value` lines; '#' starts a comment. Unknown keys are errors.
ExperimentConfig parse_config(std::istream& is, ExperimentConfig base = {});
ExperimentConfig parse_config_text(std::string_view text, ExperimentConfig base = {});

/// Every key in registry order, one `key = value` line each.
std::string serialize_config(const ExperimentConfig& cfg);

std::vector<std::string> config_keys();

const char* to_string(RisMode m);
const char* to_string(SchedKind k);
const char* to_string(RateBasis b);

// Presets. Each one edits only the fields it owns, so a config file or --set
// overrides applied to `base` survive.
ExperimentConfig preset_schedule(double alpha, RisMode mode, ExperimentConfig base = {});
ExperimentConfig preset_single_ue(int ue, bool ris_on, ExperimentConfig base = {});
ExperimentConfig preset_genie_rr(ExperimentConfig base = {});

} // namespace risnr
