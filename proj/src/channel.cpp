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

#include "risnr/channel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace risnr {

double linear_to_db(double x) { return 10.0 * std::log10(x); }
double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

CascadedChannel cascade(std::span<const cdouble> h1, std::span<const cdouble> h2k)
{
    if (h1.size() != h2k.size())
        throw std::invalid_argument("cascade: length mismatch " + std::to_string(h1.size()) +
                                    " vs " + std::to_string(h2k.size()));
    CascadedChannel out;
    out.h_c.resize(h1.size());
    for (std::size_t i = 0; i < h1.size(); ++i)
        out.h_c[i] = h1[i] * h2k[i];
    return out;
}

CascadedChannel los_cascaded_channel(double nu_deg, double psi_deg, int n_h, int n_v,
                                     double spacing_ratio, double amplitude,
                                     std::optional<double> rician_k_db, Rng& rng)
{
    if (!(amplitude > 0.0))
        throw std::invalid_argument("channel amplitude must be positive");
    const auto los = upa_profile(nu_deg, psi_deg, n_h, n_v, spacing_ratio);

    CascadedChannel ch;
    ch.nu_deg = nu_deg;
    ch.psi_deg = psi_deg;
    ch.h_c.resize(los.size());
    for (std::size_t i = 0; i < los.size(); ++i)
        ch.h_c[i] = amplitude * los.continuous[i];

    if (rician_k_db) {
        const double scatter_power = amplitude * amplitude / db_to_linear(*rician_k_db);
        for (auto& h : ch.h_c)
            h += rng.complex_normal(scatter_power);
    }
    return ch;
}

cdouble effective_channel(std::span<const cdouble> phi, std::span<const cdouble> h_c)
{
    if (phi.size() != h_c.size())
        throw std::invalid_argument("effective_channel: length mismatch " +
                                    std::to_string(phi.size()) + " vs " + std::to_string(h_c.size()));
    cdouble acc(0.0, 0.0);
    for (std::size_t i = 0; i < phi.size(); ++i)
        acc += std::conj(phi[i]) * h_c[i];
    return acc;
}

cdouble effective_channel(const RisPhaseProfile& phi, const CascadedChannel& h_c)
{
    return effective_channel(phi.continuous, h_c.h_c);
}

double snr_linear_from_gain(double power_gain, const LinkBudget& budget)
{
    return power_gain * db_to_linear(budget.tx_power_dbm - budget.pathloss_db - budget.noise_dbm);
}

double snr_linear(cdouble h_k, const LinkBudget& budget)
{
    return snr_linear_from_gain(std::norm(h_k), budget);
}

double spectral_efficiency(double snr_lin)
{
    if (snr_lin < 0.0 || std::isnan(snr_lin))
        throw std::invalid_argument("spectral_efficiency: snr must be non-negative");
    return std::log2(1.0 + snr_lin);
}

double rsrp_dbm_from_gain(double power_gain, const LinkBudget& budget)
{
    if (!(power_gain > 0.0))
        return kRsrpFloorDbm;
    const double v =
        budget.tx_power_dbm - budget.pathloss_db + linear_to_db(power_gain) + budget.rsrp_offset_db;
    return std::max(v, kRsrpFloorDbm);
}

double rsrp_dbm(cdouble h_k, const LinkBudget& budget)
{
    return rsrp_dbm_from_gain(std::norm(h_k), budget);
}

double calibrate_rsrp_offset(const LinkBudget& budget, double power_gain, double target_rsrp_dbm)
{
    if (!(power_gain > 0.0))
        throw std::invalid_argument("calibration needs a positive power gain");
    return target_rsrp_dbm - (budget.tx_power_dbm - budget.pathloss_db + linear_to_db(power_gain));
}

double distortion_limited_snr(double snr_lin, double ceiling_db)
{
    if (!std::isfinite(ceiling_db))
        return snr_lin;
    if (snr_lin <= 0.0)
        return 0.0;
    return 1.0 / (1.0 / snr_lin + 1.0 / db_to_linear(ceiling_db));
}

} // namespace risnr
