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

#include "risnr/link_adaptation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace risnr {

const McsTable& McsTable::nr_64qam()
{
    static const McsTable table({{
        {0, 2, 120, 0.2344},  {1, 2, 157, 0.3066},  {2, 2, 193, 0.3770},  {3, 2, 251, 0.4902},
        {4, 2, 308, 0.6016},  {5, 2, 379, 0.7402},  {6, 2, 449, 0.8770},  {7, 2, 526, 1.0273},
        {8, 2, 602, 1.1758},  {9, 2, 679, 1.3262},  {10, 4, 340, 1.3281}, {11, 4, 378, 1.4766},
        {12, 4, 434, 1.6953}, {13, 4, 490, 1.9141}, {14, 4, 553, 2.1602}, {15, 4, 616, 2.4063},
        {16, 4, 658, 2.5703}, {17, 6, 438, 2.5664}, {18, 6, 466, 2.7305}, {19, 6, 517, 3.0293},
        {20, 6, 567, 3.3223}, {21, 6, 616, 3.6094}, {22, 6, 666, 3.9023}, {23, 6, 719, 4.2129},
        {24, 6, 772, 4.5234}, {25, 6, 822, 4.8164}, {26, 6, 873, 5.1152}, {27, 6, 910, 5.3320},
        {28, 6, 948, 5.5547},
    }});
    return table;
}

const McsEntry& McsTable::at(int mcs) const
{
    if (mcs < 0 || mcs > kMaxIndex)
        throw std::invalid_argument("MCS index out of range: " + std::to_string(mcs));
    return entries_[static_cast<std::size_t>(mcs)];
}

void LaConfig::validate() const
{
    if (!(slope > 0.0))
        throw std::invalid_argument("la.slope must be positive");
    if (!(window_ms > 0.0) || !(cqi_period_ms > 0.0))
        throw std::invalid_argument("la.window_ms and la.cqi_period_ms must be positive");
    if (!(bler_low < bler_high))
        throw std::invalid_argument("la.bler_low must be below la.bler_high");
    if (mcs_min < 0 || mcs_min > McsTable::kMaxIndex)
        throw std::invalid_argument("la.mcs_min out of range");
    if (mcs_init < mcs_min || mcs_init > McsTable::kMaxIndex)
        throw std::invalid_argument("la.mcs_init out of range");
}

double mcs_threshold_db(int mcs, const McsTable& table, double impl_margin_db)
{
    return 10.0 * std::log10(std::exp2(table.se(mcs)) - 1.0) + impl_margin_db;
}

double bler(double snr_db, int mcs, const McsTable& table, double model_slope,
            double impl_margin_db)
{
    const double x = model_slope * (snr_db - mcs_threshold_db(mcs, table, impl_margin_db));
    // Split the branches so neither exp() can overflow.
    if (x >= 0.0) {
        const double e = std::exp(-x);
        return e / (1.0 + e);
    }
    return 1.0 / (1.0 + std::exp(x));
}

double measure_bler(const BlerWindow& window)
{
    if (window.scheduled == 0)
        return 0.0;
    return static_cast<double>(window.retx) / static_cast<double>(window.scheduled);
}

LinkAdaptState LinkAdaptState::initial(const LaConfig& cfg)
{
    LinkAdaptState s;
    s.mcs = cfg.mcs_init;
    s.mcs_min = cfg.mcs_min;
    s.mcs_max_from_cqi = McsTable::kMaxIndex;
    return s;
}

LinkAdaptState step_mcs(LinkAdaptState state, double measured_bler, const LaConfig& cfg)
{
    if (measured_bler < cfg.bler_low)
        ++state.mcs;
    else if (measured_bler > cfg.bler_high)
        --state.mcs;
    state.mcs = std::clamp(state.mcs, state.mcs_min, std::max(state.mcs_min, state.mcs_max_from_cqi));
    return state;
}

int cqi_update(double snr_db, const McsTable& table, const LaConfig& cfg)
{
    const double usable = snr_db - cfg.cqi_backoff_db;
    int cap = cfg.mcs_min;
    for (int m = cfg.mcs_min; m <= McsTable::kMaxIndex; ++m)
        if (mcs_threshold_db(m, table, cfg.impl_margin_db) <= usable)
            cap = m;
    return cap;
}

HarqAction harq_on_nack(HarqProcess& proc)
{
    if (proc.attempts < HarqProcess::kMaxAttempts) {
        ++proc.attempts;
        return HarqAction::retransmit;
    }
    proc.active = false;
    return HarqAction::discard;
}

} // namespace risnr
