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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "risnr/config.hpp"

using namespace risnr;

namespace {

std::string error_key(const ExperimentConfig& base, std::string_view text)
{
    try {
        parse_config_text(text, base).validate();
    } catch (const ConfigError& e) {
        return e.key();
    }
    return {};
}

} // namespace

TEST_CASE("defaults validate and serialize to every key")
{
    const ExperimentConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    const auto text = serialize_config(cfg);
    for (const auto& k : config_keys())
        CHECK(text.find(k + " = ") != std::string::npos);
}

TEST_CASE("serialized config parses back to the same value")
{
    ExperimentConfig cfg;
    cfg.ue_angles = {{12.5, -3.0}, {40.0, 7.25}, {-20.0, 0.0}};
    cfg.active_ues = {2, 0};
    cfg.pathloss_db = {120.0, 121.5, 130.0};
    cfg.diffuse_rel_db = {-10.0, -11.0, -12.0};
    cfg.norris_rel_db = {-6.0, -7.0, -8.0};
    cfg.rician_k_db = 7.5;
    cfg.snr_ceiling_db = std::numeric_limits<double>::infinity();
    cfg.ris_mode = RisMode::iid;
    cfg.ris_probs = {0.2, 0.3, 0.5};
    cfg.ris_one_bit = true;
    cfg.rate_basis = RateBasis::mcs;
    cfg.sched_kind = SchedKind::rr;
    cfg.alpha = 0.0123456789;
    cfg.la.cqi_backoff_db = 1.5;
    cfg.seed = 18446744073709551615ULL;
    cfg.out_dir = "/tmp/some dir";
    const auto back = parse_config_text(serialize_config(cfg));
    CHECK(back == cfg);
    CHECK(parse_config_text(serialize_config(ExperimentConfig{})) == ExperimentConfig{});
}

TEST_CASE("comments and blank lines are skipped")
{
    const auto cfg = parse_config_text("# header\n\n  sched.alpha = 0.01  # trailing\nsim.seed=7\n");
    CHECK(cfg.alpha == 0.01);
    CHECK(cfg.seed == 7);
}

TEST_CASE("unset optional values round-trip as none")
{
    ExperimentConfig cfg;
    cfg.rician_k_db = 3.0;
    cfg = parse_config_text("channel.rician_k_db = none\n", cfg);
    CHECK_FALSE(cfg.rician_k_db.has_value());
}

TEST_CASE("errors name the offending key")
{
    const ExperimentConfig base;
    CHECK(error_key(base, "sched.alpha = 1.5") == "sched.alpha");
    CHECK(error_key(base, "sched.alpha = 0") == "sched.alpha");
    CHECK(error_key(base, "sched.alpha = abc") == "sched.alpha");
    CHECK(error_key(base, "ris.ts_slots = 0") == "ris.ts_slots");
    CHECK(error_key(base, "ris.mode = sometimes") == "ris.mode");
    CHECK(error_key(base, "ris.probs = 0.4,0.4") == "ris.probs");
    CHECK(error_key(base, "ue.active = 0,5") == "ue.active");
    CHECK(error_key(base, "ue.angles = 30:0\nue.active = 0") == "link.pathloss_db");
    CHECK(error_key(base, "sim.prbs = 0") == "sim.prbs");
    CHECK(error_key(base, "geometry.n_h = 0") == "geometry.n_h");
    CHECK(error_key(base, "no_such.key = 1") == "no_such.key");
    CHECK(error_key(base, "just some words") == "line 1");
    CHECK(error_key(base, "sim.seed = 1") == "");
}

TEST_CASE("set_config_value accepts every registered key")
{
    ExperimentConfig cfg;
    const auto text = serialize_config(cfg);
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        const auto eq = line.find(" = ");
        REQUIRE(eq != std::string::npos);
        CHECK_NOTHROW(set_config_value(cfg, line.substr(0, eq), line.substr(eq + 3)));
    }
    CHECK(cfg == ExperimentConfig{});
}

TEST_CASE("presets")
{
    const auto s = preset_schedule(0.01, RisMode::genie);
    CHECK(s.alpha == 0.01);
    CHECK(s.ris_mode == RisMode::genie);
    CHECK(s.sched_kind == SchedKind::rr);
    CHECK(preset_schedule(0.01, RisMode::periodic).sched_kind == SchedKind::pf);

    ExperimentConfig base;
    base.seed = 9;
    const auto u = preset_single_ue(1, false, base);
    CHECK(u.active_ues == std::vector<int>{1});
    CHECK(u.ris_mode == RisMode::off);
    CHECK(u.seed == 9);
    CHECK(preset_single_ue(0, true).ris_mode == RisMode::genie);
    CHECK(preset_genie_rr().sched_kind == SchedKind::rr);
}
