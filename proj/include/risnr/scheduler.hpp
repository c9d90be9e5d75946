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
#include <span>
#include <vector>

namespace risnr {

/// Per-UE proportional-fair bookkeeping.
struct UeSchedState {
    double t_avg = 1e-6;       ///< EWMA of served spectral efficiency
    double last_inst_se = 0.0; ///< most recent instantaneous SE
    bool pending_retx = false;
    std::uint64_t served_slots = 0;
    std::uint64_t served_slots_aligned = 0;
};

enum class TieRule { lowest_index };

struct PfConfig {
    double alpha = 5e-5;
    double ewma_floor = 1e-6;
    TieRule tie_rule = TieRule::lowest_index;

    void validate() const;
};

double pf_metric(double inst_se, double t_avg, double floor);

/// Lowest-index pending retransmission wins; otherwise argmax of the PF metric.
std::size_t select_ue(std::span<const UeSchedState> states, std::span<const double> inst_se,
                      const PfConfig& cfg);

/// T_k <- (1 - alpha) T_k + [k == scheduled] alpha R_k for every UE, held at
/// or above `floor`.
void ewma_update(std::span<UeSchedState> states, std::size_t scheduled,
                 std::span<const double> inst_se, double alpha, double floor = 1e-6);

std::size_t rr_select(std::uint64_t dl_slot_counter, std::size_t n_ues);

/// Round robin that still lets a pending retransmission jump the queue.
std::size_t rr_select_with_retx(std::span<const UeSchedState> states,
                                std::uint64_t dl_slot_counter);

} // namespace risnr
