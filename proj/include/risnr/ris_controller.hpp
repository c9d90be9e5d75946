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
#include <stdexcept>
#include <vector>

#include "risnr/array_model.hpp"

namespace risnr {

class NotFoundError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SurfaceGeometry {
    int n_h = 32;
    int n_v = 32;
    double spacing_ratio = 0.25;

    bool operator==(const SurfaceGeometry&) const = default;
};

/// L selectable surface states with their selection probabilities.
struct SamplingDistribution {
    std::vector<RisPhaseProfile> states;
    std::vector<double> probs;

    std::size_t size() const { return states.size(); }
    void validate() const;
};

enum class SwitchMode { iid, periodic };

struct SwitchPolicy {
    SwitchMode mode = SwitchMode::periodic;
    std::int64_t ts_slots = 18000;
    std::uint64_t seed = 0;
    std::int64_t offset_slots = 0; ///< shifts the dwell grid relative to slot 0
};

struct AnglePair {
    double nu_deg = 0.0;
    double psi_deg = 0.0;

    bool operator==(const AnglePair&) const = default;
};

SamplingDistribution two_state_distribution(AnglePair first, AnglePair second,
                                            SurfaceGeometry geometry);

SamplingDistribution make_distribution(const std::vector<AnglePair>& angles,
                                       const std::vector<double>& probs, SurfaceGeometry geometry);

/// Active state for slot t. Periodic mode cycles floor(t/ts) mod L; iid mode
/// draws a fresh state per dwell interval from a counter-based generator, so
/// the answer depends only on (t, policy, dist) and never on call order.
std::size_t state_at_slot(std::int64_t t, const SwitchPolicy& policy,
                          const SamplingDistribution& dist);

/// Index of the state steered at `ue`; NotFoundError if the codebook has none.
std::size_t genie_state_for(AnglePair ue, const SamplingDistribution& dist);

} // namespace risnr
