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

#include "risnr/link_adaptation.hpp"

using namespace risnr;

namespace {

const McsTable& table() { return McsTable::nr_64qam(); }

} // namespace

TEST_CASE("MCS table transcribes the 64QAM rows")
{
    const auto& t = table();
    REQUIRE(t.size() == 29);
    CHECK(t.at(0).modulation_order == 2);
    CHECK(t.at(0).code_rate_x1024 == 120);
    CHECK(t.se(0) == 0.2344);
    CHECK(t.at(10).modulation_order == 4);
    CHECK(t.at(10).code_rate_x1024 == 340);
    CHECK(t.se(16) == 2.5703);
    CHECK(t.at(17).modulation_order == 6);
    CHECK(t.se(17) == 2.5664);
    CHECK(t.at(28).code_rate_x1024 == 948);
    CHECK(t.se(28) == 5.5547);
    for (int m = 0; m <= 28; ++m) {
        const auto& e = t.at(m);
        CHECK(e.index == m);
        // Printed efficiency is order * rate / 1024 rounded to four places.
        CHECK(std::abs(e.se - e.modulation_order * e.code_rate_x1024 / 1024.0) < 1e-4);
    }
    CHECK_THROWS_AS(t.at(29), std::invalid_argument);
    CHECK_THROWS_AS(t.at(-1), std::invalid_argument);
}

TEST_CASE("spectral efficiency increases except at the 16QAM to 64QAM switch")
{
    const auto& t = table();
    for (int m = 1; m <= 28; ++m) {
        CAPTURE(m);
        if (m == 17)
            CHECK(t.se(m) < t.se(m - 1));
        else
            CHECK(t.se(m) > t.se(m - 1));
    }
}

TEST_CASE("thresholds invert the Shannon bound plus the margin")
{
    CHECK(mcs_threshold_db(14, table(), 3.0) == doctest::Approx(10.0 * std::log10(std::exp2(2.1602) - 1.0) + 3.0));
    CHECK(mcs_threshold_db(14, table(), 3.0) == doctest::Approx(8.403).epsilon(1e-3));
}

TEST_CASE("BLER curve is one half at threshold and decays logistically")
{
    for (int m : {0, 9, 17, 28}) {
        const double th = mcs_threshold_db(m, table(), 3.0);
        CHECK(bler(th, m, table(), 2.0) == doctest::Approx(0.5));
        CHECK(bler(th + 1.0, m, table(), 2.0) == doctest::Approx(1.0 / (1.0 + std::exp(2.0))));
        CHECK(bler(th + 10.0, m, table(), 2.0) < 1e-8);
        CHECK(bler(th - 10.0, m, table(), 2.0) > 1.0 - 1e-8);
        CHECK(bler(th + 1e4, m, table(), 2.0) == 0.0);
        CHECK(bler(th - 1e4, m, table(), 2.0) == 1.0);
    }
}

TEST_CASE("BLER is non-increasing in SNR for every MCS")
{
    for (int m = 0; m <= 28; ++m) {
        double prev = 1.0;
        for (double s = -20.0; s <= 40.0; s += 0.25) {
            const double b = bler(s, m, table(), 2.0);
            CHECK(b <= prev);
            CHECK(b >= 0.0);
            CHECK(b <= 1.0);
            prev = b;
        }
    }
}

TEST_CASE("windowed BLER counts retransmissions over scheduled slots")
{
    BlerWindow w;
    CHECK(measure_bler(w) == 0.0);
    for (int i = 0; i < 10; ++i)
        w.record(i < 2);
    CHECK(w.scheduled == 10);
    CHECK(measure_bler(w) == doctest::Approx(0.2));
}

TEST_CASE("outer loop steps the MCS by one and clamps")
{
    LaConfig cfg;
    auto s = LinkAdaptState::initial(cfg);
    CHECK(s.mcs == 3);
    s.mcs = 10;
    CHECK(step_mcs(s, 0.01, cfg).mcs == 11);
    CHECK(step_mcs(s, 0.30, cfg).mcs == 9);
    CHECK(step_mcs(s, 0.10, cfg).mcs == 10);
    CHECK(step_mcs(s, 0.05, cfg).mcs == 10);
    CHECK(step_mcs(s, 0.15, cfg).mcs == 10);
    s.mcs = 3;
    CHECK(step_mcs(s, 0.9, cfg).mcs == 3);
    s.mcs = 12;
    s.mcs_max_from_cqi = 12;
    CHECK(step_mcs(s, 0.0, cfg).mcs == 12);
    s.mcs = 28;
    s.mcs_max_from_cqi = 28;
    CHECK(step_mcs(s, 0.0, cfg).mcs == 28);
}

TEST_CASE("CQI caps the MCS at the highest threshold within reach")
{
    LaConfig cfg;
    const double th14 = mcs_threshold_db(14, table(), cfg.impl_margin_db);
    const double th15 = mcs_threshold_db(15, table(), cfg.impl_margin_db);
    CHECK(cqi_update(th14, table(), cfg) == 14);
    CHECK(cqi_update(0.5 * (th14 + th15), table(), cfg) == 14);
    CHECK(cqi_update(th15, table(), cfg) == 15);
    CHECK(cqi_update(50.0, table(), cfg) == 28);
    CHECK(cqi_update(-30.0, table(), cfg) == cfg.mcs_min);
    cfg.cqi_backoff_db = 2.0;
    CHECK(cqi_update(th14 + 2.0, table(), cfg) == 14);
    CHECK(cqi_update(th14 + 1.9, table(), cfg) < 14);
}

TEST_CASE("HARQ retransmits up to four transmissions in total")
{
    HarqProcess p;
    p.active = true;
    CHECK(harq_on_nack(p) == HarqAction::retransmit);
    CHECK(harq_on_nack(p) == HarqAction::retransmit);
    CHECK(harq_on_nack(p) == HarqAction::retransmit);
    CHECK(p.attempts == 4);
    CHECK(p.active);
    CHECK(harq_on_nack(p) == HarqAction::discard);
    CHECK_FALSE(p.active);
}

TEST_CASE("link adaptation config validation")
{
    LaConfig c;
    CHECK_NOTHROW(c.validate());
    c.bler_low = 0.2;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = {};
    c.mcs_init = 2;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = {};
    c.slope = 0.0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}
