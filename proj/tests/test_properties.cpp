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
#include <map>
#include <sstream>

#include "risnr/channel.hpp"
#include "risnr/config.hpp"
#include "risnr/rng.hpp"
#include "risnr/scheduler.hpp"
#include "risnr/sim_engine.hpp"

using namespace risnr;

namespace {

constexpr int kInstances = 1000;

double log_uniform(Rng& rng, double lo, double hi)
{
    return std::exp(std::log(lo) + rng.uniform() * (std::log(hi) - std::log(lo)));
}

ExperimentConfig random_config(Rng& rng)
{
    ExperimentConfig c;
    c.duration_s = 0.05 + 0.45 * rng.uniform();
    c.seed = static_cast<std::uint64_t>(rng.uniform() * 1e12);
    c.ts_slots = 1 + static_cast<std::int64_t>(rng.uniform() * 400);
    c.alpha = log_uniform(rng, 1e-4, 0.5);
    c.noise_dbm = -70.0 + 12.0 * rng.uniform();
    c.la.slope = 0.5 + 2.5 * rng.uniform();
    const double m = rng.uniform();
    c.ris_mode = m < 0.4 ? RisMode::periodic : m < 0.7 ? RisMode::iid : m < 0.85 ? RisMode::genie : RisMode::off;
    c.sched_kind = rng.uniform() < 0.7 ? SchedKind::pf : SchedKind::rr;
    const double b = rng.uniform();
    c.rate_basis = b < 0.33 ? RateBasis::sinr : b < 0.66 ? RateBasis::snr : RateBasis::mcs;
    if (rng.uniform() < 0.3) {
        c.rician_k_db = 10.0 * rng.uniform();
        c.coherence_slots = 1 + static_cast<std::int64_t>(rng.uniform() * 100);
    }
    c.ris_one_bit = rng.uniform() < 0.3;
    if (rng.uniform() < 0.2)
        c.active_ues = {1};
    return c;
}

} // namespace

TEST_CASE("BLER is monotone in SNR and bounded")
{
    Rng rng(11);
    const auto& t = McsTable::nr_64qam();
    for (int i = 0; i < kInstances; ++i) {
        const int m = static_cast<int>(rng.uniform() * 29);
        const double a = -20.0 + 60.0 * rng.uniform();
        const double b = a + 10.0 * rng.uniform();
        const double slope = 0.1 + 4.0 * rng.uniform();
        const double ba = bler(a, m, t, slope), bb = bler(b, m, t, slope);
        CHECK(bb <= ba);
        CHECK(ba <= 1.0);
        CHECK(bb >= 0.0);
    }
}

TEST_CASE("PF selection is invariant to a common rate scale")
{
    Rng rng(12);
    const PfConfig cfg{5e-5, 1e-12};
    for (int i = 0; i < kInstances; ++i) {
        const auto k = 2 + static_cast<std::size_t>(rng.uniform() * 7);
        const double c = log_uniform(rng, 1e-2, 1e2);
        std::vector<UeSchedState> s(k), scaled(k);
        std::vector<double> r(k), rs(k);
        for (std::size_t j = 0; j < k; ++j) {
            s[j].t_avg = log_uniform(rng, 1e-2, 10.0);
            r[j] = 8.0 * rng.uniform();
            scaled[j].t_avg = c * s[j].t_avg;
            rs[j] = c * r[j];
        }
        CHECK(select_ue(s, r, cfg) == select_ue(scaled, rs, cfg));
    }
}

TEST_CASE("EWMA of a UE served every slot converges to its rate")
{
    Rng rng(13);
    for (int i = 0; i < kInstances; ++i) {
        const double alpha = log_uniform(rng, 1e-3, 0.5);
        const double rate = 0.1 + 7.9 * rng.uniform();
        std::vector<UeSchedState> s(1);
        const std::vector<double> r{rate};
        const auto n = static_cast<int>(std::ceil(8.0 / alpha));
        for (int t = 0; t < n; ++t)
            ewma_update(s, 0, r, alpha);
        CHECK(std::abs(s[0].t_avg - rate) <= 1e-3 * rate);
    }
}

TEST_CASE("EWMA stays positive and bounded by the largest rate")
{
    Rng rng(14);
    for (int i = 0; i < kInstances; ++i) {
        const double alpha = log_uniform(rng, 1e-4, 0.9);
        std::vector<UeSchedState> s(3);
        double top = s[0].t_avg;
        for (int t = 0; t < 50; ++t) {
            std::vector<double> r{8.0 * rng.uniform(), 8.0 * rng.uniform(), 8.0 * rng.uniform()};
            for (double x : r)
                top = std::max(top, x);
            ewma_update(s, select_ue(s, r, PfConfig{}), r, alpha);
        }
        for (const auto& u : s) {
            CHECK(u.t_avg >= 1e-6);
            CHECK(u.t_avg <= top);
        }
    }
}

TEST_CASE("short memory with anti-phase channels splits service evenly")
{
    std::vector<UeSchedState> s(2);
    int served0 = 0;
    const int n = 20000;
    for (int t = 0; t < n; ++t) {
        const bool even = (t / 50) % 2 == 0;
        const std::vector<double> r{even ? 4.0 : 1.0, even ? 1.0 : 4.0};
        const auto k = select_ue(s, r, PfConfig{0.9, 1e-6});
        served0 += k == 0;
        ewma_update(s, k, r, 0.9);
    }
    CHECK(served0 / double(n) == doctest::Approx(0.5).epsilon(0.1));
}

TEST_CASE("config text round-trips for random configs")
{
    Rng rng(15);
    for (int i = 0; i < kInstances; ++i) {
        const auto c = random_config(rng);
        CHECK(parse_config_text(serialize_config(c)) == c);
    }
}

TEST_CASE("random runs conserve bits and keep trace invariants")
{
    Rng rng(16);
    const auto& table = McsTable::nr_64qam();
    for (int i = 0; i < kInstances; ++i) {
        const auto c = random_config(rng);
        CAPTURE(serialize_config(c));
        const auto r = run(c);
        for (const auto& u : r.summary.ues)
            CHECK(u.acked_bits + u.discarded_bits + u.inflight_bits == u.new_bits);
        std::map<int, std::pair<std::int64_t, int>> last_tx;
        for (const auto& rec : r.trace) {
            if (rec.outcome == Outcome::idle) {
                CHECK_FALSE(rec.ue.has_value());
                continue;
            }
            REQUIRE(rec.ue.has_value());
            CHECK(rec.tb_bits > 0);
            CHECK(rec.mcs >= c.la.mcs_min);
            CHECK(rec.mcs <= McsTable::kMaxIndex);
            if (rec.is_retx) {
                // A retransmission repeats the block it replaces.
                REQUIRE(last_tx.count(*rec.ue) == 1);
                CHECK(last_tx[*rec.ue].first == rec.tb_bits);
                CHECK(last_tx[*rec.ue].second == rec.mcs);
            } else {
                const int sym = rec.kind == SlotKind::mixed ? 6 : 13;
                CHECK(rec.tb_bits == tb_bits(rec.mcs, table, c.prbs, sym));
            }
            last_tx[*rec.ue] = {rec.tb_bits, rec.mcs};
        }
    }
}

TEST_CASE("runs are deterministic for random configs")
{
    Rng rng(17);
    for (int i = 0; i < 100; ++i) {
        const auto c = random_config(rng);
        std::ostringstream a, b;
        write_trace_csv(a, run(c).trace);
        write_trace_csv(b, run(c).trace);
        CHECK(a.str() == b.str());
    }
}

TEST_CASE("long-memory PF serves each UE mostly under its own beam")
{
    for (std::uint64_t seed : {1, 2, 3}) {
        ExperimentConfig c;
        c.seed = seed;
        const auto s = run(c, {false}).summary;
        for (const auto& u : s.ues) {
            CAPTURE(u.ue);
            const double own = double(u.served_aligned) / double(u.served_aligned + u.served_misaligned);
            CHECK(own >= 0.75);
        }
    }
}

TEST_CASE("surface gain never lowers the aligned SNR")
{
    Rng rng(18);
    for (int i = 0; i < kInstances; ++i) {
        const double s = log_uniform(rng, 1e-3, 1e5);
        const double g = 1.0 + log_uniform(rng, 1e-3, 1e3);
        const double ceil = -5.0 + 40.0 * rng.uniform();
        CHECK(distortion_limited_snr(g * s, ceil) >= distortion_limited_snr(s, ceil));
    }
}
