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

#include "risnr/ris_controller.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include <fmt/format.h>

#include "risnr/rng.hpp"

namespace risnr {

void SamplingDistribution::validate() const
{
    if (states.empty())
        throw std::invalid_argument("sampling distribution needs at least one state");
    if (states.size() != probs.size())
        throw std::invalid_argument("sampling distribution: states and probs differ in length");
    for (double p : probs)
        if (!(p >= 0.0))
            throw std::invalid_argument("sampling distribution: negative probability");
    const double total = std::accumulate(probs.begin(), probs.end(), 0.0);
    if (std::abs(total - 1.0) > 1e-9)
        throw std::invalid_argument(fmt::format("sampling distribution: probs sum to {}", total));
}

SamplingDistribution make_distribution(const std::vector<AnglePair>& angles,
                                       const std::vector<double>& probs, SurfaceGeometry geometry)
{
    SamplingDistribution dist;
    dist.states.reserve(angles.size());
    for (const auto& a : angles)
        dist.states.push_back(
            upa_profile(a.nu_deg, a.psi_deg, geometry.n_h, geometry.n_v, geometry.spacing_ratio));
    dist.probs = probs;
    if (dist.probs.empty() && !angles.empty())
        dist.probs.assign(angles.size(), 1.0 / static_cast<double>(angles.size()));
    dist.validate();
    return dist;
}

SamplingDistribution two_state_distribution(AnglePair first, AnglePair second,
                                            SurfaceGeometry geometry)
{
    return make_distribution({first, second}, {0.5, 0.5}, geometry);
}

std::size_t state_at_slot(std::int64_t t, const SwitchPolicy& policy,
                          const SamplingDistribution& dist)
{
    if (t < 0)
        throw std::invalid_argument("slot index must be non-negative");
    if (policy.ts_slots < 1)
        throw std::invalid_argument("ts_slots must be >= 1");
    const auto shifted = t + policy.offset_slots;
    const auto interval = shifted >= 0 ? shifted / policy.ts_slots
                                       : -((-shifted + policy.ts_slots - 1) / policy.ts_slots);
    const auto L = static_cast<std::int64_t>(dist.size());
    if (policy.mode == SwitchMode::periodic)
        return static_cast<std::size_t>(((interval % L) + L) % L);

    Rng draw(stream_seed(policy.seed, static_cast<std::uint64_t>(interval)));
    return draw.categorical(dist.probs);
}

std::size_t genie_state_for(AnglePair ue, const SamplingDistribution& dist)
{
    constexpr double tol = 1e-9;
    for (std::size_t i = 0; i < dist.size(); ++i) {
        const auto& s = dist.states[i];
        if (std::abs(s.nu_deg - ue.nu_deg) < tol && std::abs(s.psi_deg - ue.psi_deg) < tol)
            return i;
    }
    throw NotFoundError(
        fmt::format("no surface state steered at ({}, {}) deg", ue.nu_deg, ue.psi_deg));
}

} // namespace risnr
