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

#include "risnr/scheduler.hpp"

#include <algorithm>
#include <stdexcept>

namespace risnr {

void PfConfig::validate() const
{
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("PF alpha must lie in (0, 1)");
    if (!(ewma_floor > 0.0))
        throw std::invalid_argument("PF ewma floor must be positive");
}

double pf_metric(double inst_se, double t_avg, double floor)
{
    return inst_se / std::max(t_avg, floor);
}

std::size_t select_ue(std::span<const UeSchedState> states, std::span<const double> inst_se,
                      const PfConfig& cfg)
{
    if (states.empty())
        throw std::invalid_argument("select_ue: no UEs");
    if (states.size() != inst_se.size())
        throw std::invalid_argument("select_ue: state and rate lists differ in length");

    for (std::size_t k = 0; k < states.size(); ++k)
        if (states[k].pending_retx)
            return k;

    std::size_t best = 0;
    double best_metric = pf_metric(inst_se[0], states[0].t_avg, cfg.ewma_floor);
    for (std::size_t k = 1; k < states.size(); ++k) {
        const double m = pf_metric(inst_se[k], states[k].t_avg, cfg.ewma_floor);
        if (m > best_metric) { // strict: ties keep the lower index
            best = k;
            best_metric = m;
        }
    }
    return best;
}

void ewma_update(std::span<UeSchedState> states, std::size_t scheduled,
                 std::span<const double> inst_se, double alpha, double floor)
{
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("ewma_update: alpha must lie in (0, 1)");
    if (states.size() != inst_se.size())
        throw std::invalid_argument("ewma_update: state and rate lists differ in length");
    for (std::size_t k = 0; k < states.size(); ++k) {
        auto& s = states[k];
        s.last_inst_se = inst_se[k];
        double next = (1.0 - alpha) * s.t_avg;
        if (k == scheduled)
            next += alpha * inst_se[k];
        s.t_avg = std::max(next, floor);
    }
}

std::size_t rr_select(std::uint64_t dl_slot_counter, std::size_t n_ues)
{
    if (n_ues == 0)
        throw std::invalid_argument("rr_select: no UEs");
    return static_cast<std::size_t>(dl_slot_counter % n_ues);
}

std::size_t rr_select_with_retx(std::span<const UeSchedState> states,
                                std::uint64_t dl_slot_counter)
{
    for (std::size_t k = 0; k < states.size(); ++k)
        if (states[k].pending_retx)
            return k;
    return rr_select(dl_slot_counter, states.size());
}

} // namespace risnr
