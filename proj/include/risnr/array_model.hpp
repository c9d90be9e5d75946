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

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <vector>

namespace risnr {

using cdouble = std::complex<double>;
using CVector = std::vector<cdouble>;
using BitCode = std::vector<std::uint8_t>;

inline constexpr double kPi = 3.14159265358979323846;

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

/// Raised when a beam pattern has no usable main lobe on the observation grid.
class DegeneratePatternError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Uniform linear array response: element n carries exp(-j*2*pi*n*(d/lambda)*sin(angle)).
struct SteeringVector {
    CVector elements;
    double angle_deg = 0.0;
    double spacing_ratio = 0.25;
};

/// Planar phase profile for an n_h x n_v surface, stored row-major with the
/// horizontal index outermost (index = ih * n_v + iv), i.e. a(nu) kron a(psi).
struct RisPhaseProfile {
    CVector continuous;
    BitCode code; ///< 0 -> phase 0, 1 -> phase pi
    double nu_deg = 0.0;
    double psi_deg = 0.0;
    int n_h = 1;
    int n_v = 1;

    std::size_t size() const { return continuous.size(); }
};

/// Far-field cut metrics. Gains are relative to the coherent sum of all
/// elements (0 dB means every element adds in phase).
struct BeamMetrics {
    double peak_angle_deg = 0.0;
    double peak_gain_db = 0.0;
    double hpbw_deg = 0.0;
    double sll_db = 0.0;
};

/// Plane-wave feed direction. Elevation illumination moves the one-bit
/// mirror lobe out of the azimuth observation cut.
struct Illumination {
    double az_deg = 0.0;
    double el_deg = 0.0;
};

struct PatternSample {
    double angle_deg;
    double gain_db;
};

SteeringVector steering_vector(double angle_deg, int n, double spacing_ratio);

RisPhaseProfile upa_profile(double nu_deg, double psi_deg, int n_h, int n_v, double spacing_ratio);

/// Conjugate-matched profile (continuous and one-bit) that redirects a plane
/// wave arriving from `illum` toward azimuth `target_deg` in the elevation-0 cut.
RisPhaseProfile steering_profile(double target_deg, Illumination illum, int n_h, int n_v,
                                 double spacing_ratio);

/// Nearest of {0, pi} per element. A wrapped distance of exactly pi/2 maps to 0.
BitCode quantize_one_bit(std::span<const cdouble> continuous);

/// Phase vector exp(j*pi*code).
CVector code_to_phases(std::span<const std::uint8_t> code);

/// Cascaded feed-to-observer response of every element. The elevation
/// observation angle is zero.
CVector incident_response(Illumination illum, double obs_angle_deg, int n_h, int n_v,
                          double spacing_ratio);

cdouble array_factor(std::span<const std::uint8_t> code, Illumination illum, double obs_angle_deg,
                     int n_h, int n_v, double spacing_ratio);
cdouble array_factor(std::span<const std::uint8_t> code, double illum_angle_deg,
                     double obs_angle_deg, int n_h, int n_v, double spacing_ratio);

/// Same sum for an arbitrary (continuous) conjugated phase vector.
cdouble array_factor(std::span<const cdouble> phases, Illumination illum, double obs_angle_deg,
                     int n_h, int n_v, double spacing_ratio);

std::vector<PatternSample> pattern_cut(std::span<const cdouble> phases, Illumination illum, int n_h,
                                       int n_v, double spacing_ratio, double grid_step_deg);

BeamMetrics beam_metrics(std::span<const PatternSample> pattern);
BeamMetrics beam_metrics(std::span<const std::uint8_t> code, Illumination illum, int n_h, int n_v,
                         double spacing_ratio, double grid_step_deg = 0.05);

void write_pattern_csv(std::ostream& os, std::span<const PatternSample> pattern);

/// Best binary code for |sum_i (-1)^c_i h_i| by rotating a half-plane
/// decision boundary over all 2N critical directions.
BitCode optimal_one_bit_code(std::span<const cdouble> h);

} // namespace risnr
