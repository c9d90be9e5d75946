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

#include <array>
#include <cstdint>

namespace risnr {

struct McsEntry {
    int index;
    int modulation_order;
    double code_rate_x1024;
    double se; ///< bit/s/Hz as printed in the table
};

/// PDSCH MCS index table 1 (64QAM), TS 38.214 Table 5.1.3.1-1.
class McsTable {
public:
    static constexpr int kMaxIndex = 28;

    static const McsTable& nr_64qam();

    const McsEntry& at(int mcs) const;
    double se(int mcs) const { return at(mcs).se; }
    int size() const { return static_cast<int>(entries_.size()); }
    const std::array<McsEntry, 29>& entries() const { return entries_; }

private:
    explicit McsTable(const std::array<McsEntry, 29>& e) : entries_(e) {}
    std::array<McsEntry, 29> entries_;
};

struct LaConfig {
    double impl_margin_db = 3.0;
    double slope = 2.0;          ///< logistic steepness, 1/dB
    double cqi_backoff_db = 0.0;
    double window_ms = 100.0;
    double cqi_period_ms = 80.0;
    double bler_low = 0.05;
    double bler_high = 0.15;
    int mcs_min = 3;
    int mcs_init = 3;

    bool operator==(const LaConfig&) const = default;
    void validate() const;
};

/// SNR (dB) at which the block error probability of `mcs` is one half.
double mcs_threshold_db(int mcs, const McsTable& table, double impl_margin_db);

/// Logistic block-error model around the Shannon threshold of each MCS.
double bler(double snr_db, int mcs, const McsTable& table, double model_slope,
            double impl_margin_db = 3.0);

struct BlerWindow {
    std::uint32_t scheduled = 0;
    std::uint32_t retx = 0;

    void record(bool is_retx)
    {
        ++scheduled;
        if (is_retx)
            ++retx;
    }
};

/// retx / scheduled; an empty window reads 0.
double measure_bler(const BlerWindow& window);

struct LinkAdaptState {
    int mcs = 3;
    int mcs_min = 3;
    int mcs_max_from_cqi = McsTable::kMaxIndex;
    BlerWindow bler_window;
    double cqi_timer_ms = 0.0;

    static LinkAdaptState initial(const LaConfig& cfg);
};

/// One outer-loop step: +1 below bler_low, -1 above bler_high, then clamp.
LinkAdaptState step_mcs(LinkAdaptState state, double measured_bler, const LaConfig& cfg);

/// Highest MCS whose threshold is at or below snr_db - backoff, floored at mcs_min.
int cqi_update(double snr_db, const McsTable& table, const LaConfig& cfg);

struct HarqProcess {
    std::int64_t tb_bits = 0;
    int mcs_used = 0;
    int attempts = 1;  ///< transmissions so far, 1..kMaxAttempts
    bool active = false;

    static constexpr int kMaxAttempts = 4;
};

enum class HarqAction { retransmit, discard };

/// On NACK: retransmit at the same MCS until four attempts have been spent.
HarqAction harq_on_nack(HarqProcess& proc);

} // namespace risnr
