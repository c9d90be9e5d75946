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

#include <map>

#include "risnr/ris_controller.hpp"

using namespace risnr;

namespace {

const SurfaceGeometry kSmall{4, 4, 0.25};

SamplingDistribution three_states(std::vector<double> probs = {})
{
    return make_distribution({{0.0, 0.0}, {20.0, 0.0}, {40.0, 5.0}}, probs, kSmall);
}

} // namespace

TEST_CASE("uniform probabilities are filled in when none are given")
{
    const auto d = three_states();
    REQUIRE(d.size() == 3);
    for (double p : d.probs)
        CHECK(p == doctest::Approx(1.0 / 3.0));
    CHECK(d.states[2].nu_deg == 40.0);
    CHECK(d.states[2].psi_deg == 5.0);
    CHECK(two_state_distribution({30, 0}, {45, 0}, kSmall).probs == std::vector<double>{0.5, 0.5});
}

TEST_CASE("distribution validation")
{
    CHECK_THROWS_AS(three_states({0.5, 0.5, 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(three_states({0.5, 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(three_states({1.2, -0.1, -0.1}), std::invalid_argument);
    CHECK_THROWS_AS(make_distribution({}, {}, kSmall), std::invalid_argument);
    CHECK_NOTHROW(three_states({0.0, 0.25, 0.75}));
}

TEST_CASE("periodic schedule cycles every ts slots")
{
    const auto d = three_states();
    SwitchPolicy p{SwitchMode::periodic, 18000, 0, 0};
    CHECK(state_at_slot(0, p, d) == 0);
    CHECK(state_at_slot(17999, p, d) == 0);
    CHECK(state_at_slot(18000, p, d) == 1);
    CHECK(state_at_slot(36000, p, d) == 2);
    CHECK(state_at_slot(54000, p, d) == 0);
    p.offset_slots = 100;
    CHECK(state_at_slot(17899, p, d) == 0);
    CHECK(state_at_slot(17900, p, d) == 1);
    p.offset_slots = -1;
    CHECK(state_at_slot(0, p, d) == 2);
}

TEST_CASE("slot queries reject bad input")
{
    const auto d = three_states();
    CHECK_THROWS_AS(state_at_slot(-1, SwitchPolicy{}, d), std::invalid_argument);
    SwitchPolicy p;
    p.ts_slots = 0;
    CHECK_THROWS_AS(state_at_slot(0, p, d), std::invalid_argument);
}

TEST_CASE("iid draws are constant within an interval and reproducible")
{
    const auto d = three_states({0.2, 0.3, 0.5});
    const SwitchPolicy p{SwitchMode::iid, 7, 1234, 0};
    for (std::int64_t k = 0; k < 50; ++k) {
        const auto s = state_at_slot(7 * k, p, d);
        for (std::int64_t j = 1; j < 7; ++j)
            CHECK(state_at_slot(7 * k + j, p, d) == s);
        CHECK(state_at_slot(7 * k + 3, p, d) == s);
    }
    SwitchPolicy other = p;
    other.seed = 4321;
    int differs = 0;
    for (std::int64_t k = 0; k < 50; ++k)
        differs += state_at_slot(7 * k, p, d) != state_at_slot(7 * k, other, d);
    CHECK(differs > 0);
}

TEST_CASE("iid state frequencies match the distribution")
{
    const std::vector<double> probs{0.2, 0.3, 0.5};
    const auto d = three_states(probs);
    const SwitchPolicy p{SwitchMode::iid, 1, 99, 0};
    const int n = 20000;
    std::map<std::size_t, int> count;
    for (int t = 0; t < n; ++t)
        ++count[state_at_slot(t, p, d)];
    for (std::size_t i = 0; i < probs.size(); ++i) {
        const double sigma = std::sqrt(probs[i] * (1.0 - probs[i]) / n);
        CAPTURE(i);
        CHECK(std::abs(count[i] / double(n) - probs[i]) < 4.0 * sigma);
    }
    // A zero-probability state is never drawn.
    const auto z = three_states({0.0, 0.5, 0.5});
    for (int t = 0; t < 2000; ++t)
        CHECK(state_at_slot(t, p, z) != 0);
}

TEST_CASE("genie lookup finds the state steered at a UE")
{
    const auto d = three_states();
    CHECK(genie_state_for({20.0, 0.0}, d) == 1);
    CHECK(genie_state_for({40.0, 5.0}, d) == 2);
    CHECK_THROWS_AS(genie_state_for({40.0, 0.0}, d), NotFoundError);
}
