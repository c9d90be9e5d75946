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

#include <optional>
#include <span>

#include "risnr/array_model.hpp"
#include "risnr/rng.hpp"

namespace risnr {

/// NR reporting floor, returned for a dead link.
inline constexpr double kRsrpFloorDbm = -156.0;

struct CascadedChannel {
    CVector h_c;
    int ue_id = 0;
    double nu_deg = 0.0;
    double psi_deg = 0.0;

    std::size_t size() const { return h_c.size(); }
};

/// Large-scale terms that turn an effective channel gain into SNR and RSRP.
/// snr = |h|^2 * P / sigma^2 with P = tx_power - pathloss, all in dB(m).
struct LinkBudget {
    double tx_power_dbm = 23.0;
    double pathloss_db = 128.0;
    double noise_dbm = -64.8;
    double rsrp_offset_db = 0.0;
};

CascadedChannel cascade(std::span<const cdouble> h1, std::span<const cdouble> h2k);

/// amplitude * (a(nu) kron a(psi)), optionally plus i.i.d. CN scatter with
/// per-element power amplitude^2 / K.
CascadedChannel los_cascaded_channel(double nu_deg, double psi_deg, int n_h, int n_v,
                                     double spacing_ratio, double amplitude,
                                     std::optional<double> rician_k_db, Rng& rng);

/// phi^H h_c.
cdouble effective_channel(std::span<const cdouble> phi, std::span<const cdouble> h_c);
cdouble effective_channel(const RisPhaseProfile& phi, const CascadedChannel& h_c);

double snr_linear(cdouble h_k, const LinkBudget& budget);
/// Same mapping from a power gain, used when diffuse paths add in power.
double snr_linear_from_gain(double power_gain, const LinkBudget& budget);

/// log2(1 + snr) in bit/s/Hz.
double spectral_efficiency(double snr_linear);

double rsrp_dbm(cdouble h_k, const LinkBudget& budget);
double rsrp_dbm_from_gain(double power_gain, const LinkBudget& budget);

/// Offset that makes `power_gain` read `target_rsrp_dbm`.
double calibrate_rsrp_offset(const LinkBudget& budget, double power_gain, double target_rsrp_dbm);

/// Post-detection SINR when transmitter/receiver distortion caps the usable
/// SNR at `ceiling_db`: 1 / (1/snr + 1/ceiling). A non-finite ceiling is a no-op.
double distortion_limited_snr(double snr_linear, double ceiling_db);

double linear_to_db(double x);
double db_to_linear(double db);

} // namespace risnr
