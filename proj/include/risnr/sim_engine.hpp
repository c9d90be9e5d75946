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
#include <span>
#include <string>
#include <vector>

#include "risnr/config.hpp"
#include "risnr/link_adaptation.hpp"

namespace risnr {

inline constexpr double kSlotMs = 0.5; // numerology 1

enum class SlotKind { dl, mixed, ul };

struct TddPattern {
    std::vector<SlotKind> kinds;
    int dl_symbols_full = 13;
    int dl_symbols_mixed = 6;

    int period_slots() const { return static_cast<int>(kinds.size()); }

    /// DDDDDDMUUU
    static TddPattern nr_default();
};

struct SlotInfo {
    SlotKind kind;
    int dl_symbols;
};

SlotInfo slot_kind(std::int64_t t, const TddPattern& pattern);

/// floor(se * 12 * prbs * symbols); symbols must be positive.
std::int64_t tb_bits(int mcs, const McsTable& table, int prbs, int symbols);

enum class Outcome { idle, ack, nack };

const char* to_string(Outcome o);

struct SlotRecord {
    std::int64_t slot = 0;
    double time_ms = 0.0;
    int ris_state = -1; ///< -1 when the surface is off
    SlotKind kind = SlotKind::dl;
    std::optional<int> ue; ///< configured UE index
    std::vector<double> rsrp_dbm; ///< one entry per configured UE
    double snr_db = 0.0;
    int mcs = 0;
    std::int64_t tb_bits = 0;
    Outcome outcome = Outcome::idle;
    bool is_retx = false;
};

struct UeSummary {
    int ue = 0;
    double throughput_mbps = 0.0;
    double rsrp_mean_dbm = 0.0;
    double rsrp_aligned_dbm = 0.0;    ///< NaN if the UE never saw its own beam
    double rsrp_misaligned_dbm = 0.0; ///< NaN if it never saw another beam
    double bler = 0.0;
    double mean_mcs = 0.0;
    std::int64_t transmissions = 0;
    std::int64_t retransmissions = 0;
    std::int64_t served_aligned = 0;
    std::int64_t served_misaligned = 0;
    std::int64_t served_misaligned_retx = 0;
    std::int64_t served_unsteered = 0; ///< surface off
    double frac_aligned = 0.0;    ///< of all DL-bearing slots
    double frac_misaligned = 0.0; ///< of all DL-bearing slots
    std::int64_t new_bits = 0;
    std::int64_t acked_bits = 0;
    std::int64_t discarded_bits = 0;
    std::int64_t inflight_bits = 0;

    std::int64_t served_slots() const
    {
        return served_aligned + served_misaligned + served_unsteered;
    }
};

struct RunSummary {
    std::vector<UeSummary> ues; ///< one per active UE, in active order
    double aggregate_mbps = 0.0;
    double duration_s = 0.0; ///< simulated, after time compression
    std::int64_t slots = 0;
    std::int64_t dl_slots = 0; ///< DL plus mixed

    const UeSummary& for_ue(int ue) const;
};

struct RunResult {
    std::vector<SlotRecord> trace;
    RunSummary summary;
};

struct RunOptions {
    bool keep_trace = true;
};

/// Validates the config, then simulates every slot in order.
RunResult run(const ExperimentConfig& cfg, RunOptions options = {});

/// Index of the surface state steered at each configured UE, -1 if none.
std::vector<int> aligned_states(const ExperimentConfig& cfg);

void write_trace_csv(std::ostream& os, std::span<const SlotRecord> trace);
void write_summary(std::ostream& os, const RunSummary& summary);

struct HistogramRow {
    int ue = 0;
    double aligned_fraction = 0.0;
    double misaligned_fraction = 0.0;
};

/// Per-UE service split by beam alignment, as fractions of DL-bearing slots.
std::vector<HistogramRow> scheduling_histogram(std::span<const SlotRecord> trace,
                                               std::span<const int> aligned_state_per_ue,
                                               std::span<const int> ues);

enum class RsrpStep { drop, rise };

struct TransitionCheck {
    std::int64_t slot = 0; ///< first slot of the new dwell
    int ue = 0;
    RsrpStep step = RsrpStep::drop;
    bool observed = false; ///< the UE was served in the first window
    double bler = 0.0;
};

/// BLER of each UE over the first tumbling window after every beam change,
/// counting only slots from the change onward.
std::vector<TransitionCheck> transition_report(std::span<const SlotRecord> trace,
                                               std::span<const int> ues,
                                               std::int64_t window_slots);

struct SweepRow {
    std::string label; ///< "pf", "genie-rr" or "no-ris"
    double alpha = 0.0;
    RunSummary summary;
    double fairness_share = 0.0; ///< smallest per-UE share of served slots
};

/// One run per alpha, plus optional genie and no-surface reference rows.
/// Points run concurrently; rows come back in input order.
std::vector<SweepRow> sweep_alpha(const ExperimentConfig& base, std::span<const double> alphas,
                                  bool with_references = true);

void write_sweep_csv(std::ostream& os, std::span<const SweepRow> rows);

} // namespace risnr
