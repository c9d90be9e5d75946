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

#include "risnr/array_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include <fmt/format.h>

namespace risnr {

namespace {

void check_dims(int n_h, int n_v)
{
    if (n_h < 1 || n_v < 1)
        throw std::invalid_argument("array dimensions must be >= 1, got " + std::to_string(n_h) +
                                    "x" + std::to_string(n_v));
}

void check_angle(double angle_deg)
{
    if (!std::isfinite(angle_deg) || std::abs(angle_deg) > 90.0)
        throw std::invalid_argument("angle must lie in [-90, 90] deg, got " +
                                    std::to_string(angle_deg));
}

// Per-element progressive phase for a direction cosine sum `u` (sin terms added).
inline double element_phase(int index, double spacing_ratio, double u)
{
    return -2.0 * kPi * spacing_ratio * static_cast<double>(index) * u;
}

} // namespace

SteeringVector steering_vector(double angle_deg, int n, double spacing_ratio)
{
    if (n < 1)
        throw std::invalid_argument("steering vector needs n >= 1");
    if (!(spacing_ratio > 0.0))
        throw std::invalid_argument("spacing ratio must be positive");
    check_angle(angle_deg);

    SteeringVector sv;
    sv.angle_deg = angle_deg;
    sv.spacing_ratio = spacing_ratio;
    sv.elements.resize(static_cast<std::size_t>(n));
    const double s = std::sin(deg_to_rad(angle_deg));
    sv.elements[0] = cdouble(1.0, 0.0);
    for (int i = 1; i < n; ++i)
        sv.elements[static_cast<std::size_t>(i)] = std::polar(1.0, element_phase(i, spacing_ratio, s));
    return sv;
}

RisPhaseProfile upa_profile(double nu_deg, double psi_deg, int n_h, int n_v, double spacing_ratio)
{
    check_dims(n_h, n_v);
    const auto a_nu = steering_vector(nu_deg, n_h, spacing_ratio);
    const auto a_psi = steering_vector(psi_deg, n_v, spacing_ratio);

    RisPhaseProfile p;
    p.nu_deg = nu_deg;
    p.psi_deg = psi_deg;
    p.n_h = n_h;
    p.n_v = n_v;
    p.continuous.reserve(static_cast<std::size_t>(n_h) * static_cast<std::size_t>(n_v));
    for (const auto& x : a_nu.elements)
        for (const auto& y : a_psi.elements)
            p.continuous.push_back(x * y);
    p.code = quantize_one_bit(p.continuous);
    return p;
}

RisPhaseProfile steering_profile(double target_deg, Illumination illum, int n_h, int n_v,
                                 double spacing_ratio)
{
    check_dims(n_h, n_v);
    check_angle(target_deg);
    check_angle(illum.az_deg);
    check_angle(illum.el_deg);

    RisPhaseProfile p;
    p.nu_deg = target_deg;
    p.psi_deg = illum.el_deg;
    p.n_h = n_h;
    p.n_v = n_v;
    p.continuous = incident_response(illum, target_deg, n_h, n_v, spacing_ratio);
    p.code = quantize_one_bit(p.continuous);
    return p;
}

BitCode quantize_one_bit(std::span<const cdouble> continuous)
{
    BitCode code(continuous.size());
    for (std::size_t i = 0; i < continuous.size(); ++i) {
        const cdouble z = continuous[i];
        if (z == cdouble(0.0, 0.0))
            throw std::invalid_argument("cannot quantize zero-magnitude element " + std::to_string(i));
        const double dist_zero = std::abs(std::arg(z));
        const double dist_pi = kPi - dist_zero;
        code[i] = dist_pi < dist_zero ? 1 : 0;
    }
    return code;
}

CVector code_to_phases(std::span<const std::uint8_t> code)
{
    CVector out(code.size());
    for (std::size_t i = 0; i < code.size(); ++i)
        out[i] = code[i] ? cdouble(-1.0, 0.0) : cdouble(1.0, 0.0);
    return out;
}

CVector incident_response(Illumination illum, double obs_angle_deg, int n_h, int n_v,
                          double spacing_ratio)
{
    check_dims(n_h, n_v);
    const double u_h = std::sin(deg_to_rad(illum.az_deg)) + std::sin(deg_to_rad(obs_angle_deg));
    const double u_v = std::sin(deg_to_rad(illum.el_deg));
    CVector h;
    h.reserve(static_cast<std::size_t>(n_h) * static_cast<std::size_t>(n_v));
    for (int ih = 0; ih < n_h; ++ih)
        for (int iv = 0; iv < n_v; ++iv)
            h.push_back(std::polar(1.0, element_phase(ih, spacing_ratio, u_h) +
                                            element_phase(iv, spacing_ratio, u_v)));
    return h;
}

cdouble array_factor(std::span<const cdouble> phases, Illumination illum, double obs_angle_deg,
                     int n_h, int n_v, double spacing_ratio)
{
    if (phases.size() != static_cast<std::size_t>(n_h) * static_cast<std::size_t>(n_v))
        throw std::invalid_argument("phase vector length does not match n_h*n_v");
    const auto h = incident_response(illum, obs_angle_deg, n_h, n_v, spacing_ratio);
    cdouble acc(0.0, 0.0);
    for (std::size_t i = 0; i < h.size(); ++i)
        acc += std::conj(phases[i]) * h[i];
    return acc;
}

cdouble array_factor(std::span<const std::uint8_t> code, Illumination illum, double obs_angle_deg,
                     int n_h, int n_v, double spacing_ratio)
{
    if (code.size() != static_cast<std::size_t>(n_h) * static_cast<std::size_t>(n_v))
        throw std::invalid_argument("code length " + std::to_string(code.size()) +
                                    " does not match n_h*n_v");
    const auto phases = code_to_phases(code);
    return array_factor(std::span<const cdouble>(phases), illum, obs_angle_deg, n_h, n_v,
                        spacing_ratio);
}

cdouble array_factor(std::span<const std::uint8_t> code, double illum_angle_deg,
                     double obs_angle_deg, int n_h, int n_v, double spacing_ratio)
{
    return array_factor(code, Illumination{illum_angle_deg, 0.0}, obs_angle_deg, n_h, n_v,
                        spacing_ratio);
}

std::vector<PatternSample> pattern_cut(std::span<const cdouble> phases, Illumination illum, int n_h,
                                       int n_v, double spacing_ratio, double grid_step_deg)
{
    check_dims(n_h, n_v);
    if (phases.size() != static_cast<std::size_t>(n_h) * static_cast<std::size_t>(n_v))
        throw std::invalid_argument("phase vector length does not match n_h*n_v");
    if (!(grid_step_deg > 0.0))
        throw std::invalid_argument("grid step must be positive");

    // The observation cut only varies the horizontal phase, so collapse each
    // column against the fixed vertical illumination term first.
    const double u_v = std::sin(deg_to_rad(illum.el_deg));
    CVector column(static_cast<std::size_t>(n_h), cdouble(0.0, 0.0));
    for (int ih = 0; ih < n_h; ++ih)
        for (int iv = 0; iv < n_v; ++iv)
            column[static_cast<std::size_t>(ih)] +=
                std::conj(phases[static_cast<std::size_t>(ih * n_v + iv)]) *
                std::polar(1.0, element_phase(iv, spacing_ratio, u_v));

    const double norm = static_cast<double>(phases.size());
    const double sin_az = std::sin(deg_to_rad(illum.az_deg));
    const auto count = static_cast<int>(std::lround(180.0 / grid_step_deg)) + 1;
    std::vector<PatternSample> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) {
        const double obs = std::min(90.0, -90.0 + grid_step_deg * k);
        const double u_h = sin_az + std::sin(deg_to_rad(obs));
        cdouble acc(0.0, 0.0);
        for (int ih = 0; ih < n_h; ++ih)
            acc += column[static_cast<std::size_t>(ih)] *
                   std::polar(1.0, element_phase(ih, spacing_ratio, u_h));
        const double mag = std::abs(acc) / norm;
        out.push_back({obs, mag > 0.0 ? 20.0 * std::log10(mag)
                                      : -std::numeric_limits<double>::infinity()});
    }
    return out;
}

BeamMetrics beam_metrics(std::span<const PatternSample> pattern)
{
    if (pattern.size() < 3)
        throw DegeneratePatternError("pattern needs at least three samples");

    const auto peak_it = std::max_element(pattern.begin(), pattern.end(),
                                          [](const auto& a, const auto& b) { return a.gain_db < b.gain_db; });
    const auto k = static_cast<std::size_t>(peak_it - pattern.begin());
    const double peak = peak_it->gain_db;
    const double half = peak - 10.0 * std::log10(2.0);

    auto crossing = [&](std::size_t from, std::size_t to) {
        const auto& a = pattern[from];
        const auto& b = pattern[to];
        const double t = (a.gain_db - half) / (a.gain_db - b.gain_db);
        return a.angle_deg + t * (b.angle_deg - a.angle_deg);
    };

    std::size_t l = k;
    while (l > 0 && pattern[l - 1].gain_db >= half)
        --l;
    if (l == 0)
        throw DegeneratePatternError("no -3 dB crossing below the peak inside the scan range");
    std::size_t r = k;
    while (r + 1 < pattern.size() && pattern[r + 1].gain_db >= half)
        ++r;
    if (r + 1 == pattern.size())
        throw DegeneratePatternError("no -3 dB crossing above the peak inside the scan range");
    const double left = crossing(l, l - 1);
    const double right = crossing(r, r + 1);

    // Main lobe extends to the first local minimum on each side.
    std::size_t nl = k;
    while (nl > 0 && pattern[nl - 1].gain_db < pattern[nl].gain_db)
        --nl;
    std::size_t nr = k;
    while (nr + 1 < pattern.size() && pattern[nr + 1].gain_db < pattern[nr].gain_db)
        ++nr;

    double side = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < nl; ++i)
        side = std::max(side, pattern[i].gain_db);
    for (std::size_t i = nr + 1; i < pattern.size(); ++i)
        side = std::max(side, pattern[i].gain_db);

    BeamMetrics m;
    m.peak_angle_deg = peak_it->angle_deg;
    m.peak_gain_db = peak;
    m.hpbw_deg = right - left;
    m.sll_db = side - peak;
    return m;
}

BeamMetrics beam_metrics(std::span<const std::uint8_t> code, Illumination illum, int n_h, int n_v,
                         double spacing_ratio, double grid_step_deg)
{
    if (grid_step_deg > 0.1)
        throw std::invalid_argument("beam metrics need a grid step of at most 0.1 deg");
    if (code.size() != static_cast<std::size_t>(n_h) * static_cast<std::size_t>(n_v))
        throw std::invalid_argument("code length does not match n_h*n_v");
    const auto phases = code_to_phases(code);
    const auto cut = pattern_cut(phases, illum, n_h, n_v, spacing_ratio, grid_step_deg);
    return beam_metrics(cut);
}

void write_pattern_csv(std::ostream& os, std::span<const PatternSample> pattern)
{
    os << "angle_deg,gain_db\n";
    for (const auto& s : pattern)
        os << fmt::format("{:.3f},{:.4f}\n", s.angle_deg, std::max(s.gain_db, -300.0));
}

BitCode optimal_one_bit_code(std::span<const cdouble> h)
{
    const std::size_t n = h.size();
    BitCode best(n, 0);
    if (n == 0)
        return best;

    // The sign pattern sign(Re(h_i e^{-j beta})) only changes where beta
    // crosses arg(h_i) +- pi/2; one probe per arc covers every candidate.
    std::vector<double> edges;
    edges.reserve(2 * n);
    for (const auto& z : h) {
        if (z == cdouble(0.0, 0.0))
            continue;
        for (double off : {kPi / 2.0, -kPi / 2.0}) {
            double e = std::remainder(std::arg(z) + off, 2.0 * kPi);
            edges.push_back(e);
        }
    }
    if (edges.empty())
        return best;
    std::sort(edges.begin(), edges.end());

    double best_value = -1.0;
    BitCode trial(n);
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const double next = (e + 1 < edges.size()) ? edges[e + 1] : edges[0] + 2.0 * kPi;
        const double beta = 0.5 * (edges[e] + next);
        const cdouble rot = std::polar(1.0, -beta);
        cdouble acc(0.0, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            trial[i] = (h[i] * rot).real() < 0.0 ? 1 : 0;
            acc += trial[i] ? -h[i] : h[i];
        }
        const double value = std::abs(acc);
        if (value > best_value) {
            best_value = value;
            best = trial;
        }
    }
    return best;
}

} // namespace risnr
