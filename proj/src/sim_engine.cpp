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

#include "risnr/sim_engine.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <ostream>
#include <stdexcept>

#include <fmt/format.h>

#include "risnr/channel.hpp"
#include "risnr/rng.hpp"
#include "risnr/scheduler.hpp"

namespace risnr {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

SwitchPolicy make_policy(const ExperimentConfig& cfg, std::int64_t ts_slots)
{
    SwitchPolicy p;
    p.mode = cfg.ris_mode == RisMode::iid ? SwitchMode::iid : SwitchMode::periodic;
    p.ts_slots = ts_slots;
    p.seed = cfg.ris_seed != 0 ? cfg.ris_seed : stream_seed(cfg.seed, static_cast<std::uint64_t>(Stream::ris));
    p.offset_slots = cfg.ris_offset_slots;
    return p;
}

SamplingDistribution make_states(const ExperimentConfig& cfg)
{
    auto dist = make_distribution(cfg.state_angles(), cfg.ris_probs, cfg.geometry);
    if (cfg.ris_one_bit)
        for (auto& s : dist.states) {
            s.code = quantize_one_bit(s.continuous);
            s.continuous = code_to_phases(s.code);
        }
    return dist;
}

// Link quantities for one UE under one surface configuration.
struct LinkPoint {
    double rsrp_dbm;
    double sinr_db;
    double inst_se; ///< from the distortion-limited SINR
    double thermal_se;
};

class LinkTable {
public:
    LinkTable(const ExperimentConfig& cfg, const SamplingDistribution& dist)
        : cfg_(cfg), dist_(dist), rng_(cfg.seed, Stream::channel)
    {
        const double n = static_cast<double>(cfg.geometry.n_h * cfg.geometry.n_v);
        norm_ = (n * cfg.amplitude) * (n * cfg.amplitude);
        const auto K = cfg.ue_angles.size();
        budgets_.resize(K);
        for (std::size_t k = 0; k < K; ++k)
            budgets_[k] = {cfg.tx_power_dbm, cfg.pathloss_db[k], cfg.noise_dbm, cfg.rsrp_offset_db};
        redraw();
        off_.resize(K);
        for (std::size_t k = 0; k < K; ++k)
            off_[k] = point(k, db_to_linear(cfg.norris_rel_db[k]));
    }

    // New scatter realization for every UE; the line-of-sight part is fixed.
    void redraw()
    {
        const auto K = cfg_.ue_angles.size();
        on_.assign(dist_.size(), std::vector<LinkPoint>(K));
        for (std::size_t k = 0; k < K; ++k) {
            const auto& a = cfg_.ue_angles[k];
            const auto ch = los_cascaded_channel(a.nu_deg, a.psi_deg, cfg_.geometry.n_h, cfg_.geometry.n_v,
                                                 cfg_.geometry.spacing_ratio, cfg_.amplitude,
                                                 cfg_.rician_k_db, rng_);
            const double diffuse = db_to_linear(cfg_.diffuse_rel_db[k]);
            for (std::size_t l = 0; l < dist_.size(); ++l) {
                const double coherent = std::norm(effective_channel(dist_.states[l], ch)) / norm_;
                on_[l][k] = point(k, coherent + diffuse);
            }
        }
    }

    const LinkPoint& at(int state, std::size_t ue) const
    {
        return state < 0 ? off_[ue] : on_[static_cast<std::size_t>(state)][ue];
    }

private:
    LinkPoint point(std::size_t k, double rel_power) const
    {
        const double gain = norm_ * rel_power;
        const double snr = snr_linear_from_gain(gain, budgets_[k]);
        const double sinr = distortion_limited_snr(snr, cfg_.snr_ceiling_db);
        return {rsrp_dbm_from_gain(gain, budgets_[k]), linear_to_db(sinr), spectral_efficiency(sinr),
                spectral_efficiency(snr)};
    }

    const ExperimentConfig& cfg_;
    const SamplingDistribution& dist_;
    Rng rng_;
    double norm_ = 1.0;
    std::vector<LinkBudget> budgets_;
    std::vector<std::vector<LinkPoint>> on_;
    std::vector<LinkPoint> off_;
};

struct UeRun {
    LinkAdaptState la;
    HarqProcess harq;
    UeSummary out;
    double mcs_sum = 0.0;
    double rsrp_sum = 0.0, rsrp_aligned_sum = 0.0, rsrp_misaligned_sum = 0.0;
    std::int64_t rsrp_n = 0, rsrp_aligned_n = 0, rsrp_misaligned_n = 0;
};

double mean_or_nan(double sum, std::int64_t n) { return n > 0 ? sum / static_cast<double>(n) : kNaN; }

} // namespace

TddPattern TddPattern::nr_default()
{
    TddPattern p;
    p.kinds = {SlotKind::dl, SlotKind::dl, SlotKind::dl,    SlotKind::dl, SlotKind::dl,
               SlotKind::dl, SlotKind::mixed, SlotKind::ul, SlotKind::ul, SlotKind::ul};
    return p;
}

SlotInfo slot_kind(std::int64_t t, const TddPattern& pattern)
{
    if (t < 0)
        throw std::invalid_argument("slot index must be non-negative");
    if (pattern.kinds.empty())
        throw std::invalid_argument("empty TDD pattern");
    const auto kind = pattern.kinds[static_cast<std::size_t>(t % pattern.period_slots())];
    switch (kind) {
    case SlotKind::dl: return {kind, pattern.dl_symbols_full};
    case SlotKind::mixed: return {kind, pattern.dl_symbols_mixed};
    case SlotKind::ul: break;
    }
    return {SlotKind::ul, 0};
}

std::int64_t tb_bits(int mcs, const McsTable& table, int prbs, int symbols)
{
    if (symbols <= 0)
        throw std::invalid_argument("tb_bits: symbols must be positive");
    if (prbs <= 0)
        throw std::invalid_argument("tb_bits: prbs must be positive");
    return static_cast<std::int64_t>(std::floor(table.se(mcs) * 12.0 * prbs * symbols));
}

const char* to_string(Outcome o)
{
    switch (o) {
    case Outcome::ack: return "ack";
    case Outcome::nack: return "nack";
    case Outcome::idle: break;
    }
    return "idle";
}

const UeSummary& RunSummary::for_ue(int ue) const
{
    for (const auto& u : ues)
        if (u.ue == ue)
            return u;
    throw NotFoundError(fmt::format("UE {} is not active in this run", ue));
}

std::vector<int> aligned_states(const ExperimentConfig& cfg)
{
    const auto dist = make_distribution(cfg.state_angles(), cfg.ris_probs, cfg.geometry);
    std::vector<int> out;
    for (const auto& a : cfg.ue_angles) {
        try {
            out.push_back(static_cast<int>(genie_state_for(a, dist)));
        } catch (const NotFoundError&) {
            out.push_back(-1);
        }
    }
    return out;
}

RunResult run(const ExperimentConfig& cfg, RunOptions options)
{
    cfg.validate();
    const auto& table = McsTable::nr_64qam();
    const auto tdd = TddPattern::nr_default();

    const double c = cfg.ts_scaling;
    const double alpha = cfg.alpha * c;
    const auto ts_slots = std::max<std::int64_t>(1, std::llround(static_cast<double>(cfg.ts_slots) / c));
    const double duration_s = cfg.duration_s / c;
    const auto n_slots = std::llround(duration_s * 1000.0 / kSlotMs);
    const auto window_slots = std::max<std::int64_t>(1, std::llround(cfg.la.window_ms / kSlotMs));
    const auto cqi_slots = std::max<std::int64_t>(1, std::llround(cfg.la.cqi_period_ms / kSlotMs));

    const auto dist = make_states(cfg);
    const auto policy = make_policy(cfg, ts_slots);
    const auto aligned = aligned_states(cfg);
    const bool genie = cfg.ris_mode == RisMode::genie;
    const bool surface_on = cfg.ris_mode != RisMode::off;
    if (genie)
        for (int k : cfg.active_ues)
            if (aligned[static_cast<std::size_t>(k)] < 0)
                throw ConfigError("ris.angles", fmt::format("genie mode needs a state steered at UE {}", k));

    LinkTable links(cfg, dist);
    Rng outcome_rng(cfg.seed, Stream::outcome);
    const PfConfig pf{alpha, cfg.ewma_floor, TieRule::lowest_index};
    const bool rescatter = cfg.rician_k_db.has_value() && cfg.coherence_slots > 0;

    const auto n_active = cfg.active_ues.size();
    const auto n_ues = cfg.ue_angles.size();
    std::vector<UeRun> ue(n_active);
    std::vector<UeSchedState> sched(n_active);
    for (std::size_t i = 0; i < n_active; ++i) {
        ue[i].la = LinkAdaptState::initial(cfg.la);
        ue[i].out.ue = cfg.active_ues[i];
        sched[i].t_avg = cfg.ewma_floor;
    }

    RunResult result;
    if (options.keep_trace)
        result.trace.reserve(static_cast<std::size_t>(n_slots));
    auto& summary = result.summary;
    summary.duration_s = duration_s;
    summary.slots = n_slots;

    int state = surface_on ? (genie ? aligned[static_cast<std::size_t>(cfg.active_ues[0])] : 0) : -1;
    std::uint64_t dl_counter = 0;
    std::vector<double> inst_se(n_active);

    for (std::int64_t t = 0; t < n_slots; ++t) {
        const auto info = slot_kind(t, tdd);

        if (rescatter && t > 0 && t % cfg.coherence_slots == 0)
            links.redraw();

        if (t > 0 && t % window_slots == 0)
            for (auto& u : ue) {
                // An idle window carries no evidence, so the MCS is left alone.
                if (u.la.bler_window.scheduled > 0)
                    u.la = step_mcs(u.la, measure_bler(u.la.bler_window), cfg.la);
                u.la.bler_window = {};
            }

        if (surface_on && !genie)
            state = static_cast<int>(state_at_slot(t, policy, dist));

        if (t % cqi_slots == 0)
            for (std::size_t i = 0; i < n_active; ++i) {
                const auto k = static_cast<std::size_t>(cfg.active_ues[i]);
                const int seen = genie ? aligned[k] : state;
                auto& la = ue[i].la;
                la.mcs_max_from_cqi = cqi_update(links.at(seen, k).sinr_db, table, cfg.la);
                la.mcs = std::clamp(la.mcs, la.mcs_min, std::max(la.mcs_min, la.mcs_max_from_cqi));
            }

        SlotRecord rec;
        rec.slot = t;
        rec.time_ms = static_cast<double>(t) * kSlotMs;
        rec.kind = info.kind;

        if (info.dl_symbols > 0) {
            ++summary.dl_slots;
            for (std::size_t i = 0; i < n_active; ++i) {
                const auto k = static_cast<std::size_t>(cfg.active_ues[i]);
                const auto& lp = links.at(genie ? aligned[k] : state, k);
                switch (cfg.rate_basis) {
                case RateBasis::sinr: inst_se[i] = lp.inst_se; break;
                case RateBasis::snr: inst_se[i] = lp.thermal_se; break;
                case RateBasis::mcs: inst_se[i] = table.se(ue[i].la.mcs); break;
                }
            }
            const std::size_t sel = cfg.sched_kind == SchedKind::pf
                                        ? select_ue(sched, inst_se, pf)
                                        : rr_select_with_retx(sched, dl_counter);
            ++dl_counter;
            const auto k = static_cast<std::size_t>(cfg.active_ues[sel]);
            if (genie)
                state = aligned[k];

            auto& u = ue[sel];
            const auto& link = links.at(state, k);
            const bool is_retx = sched[sel].pending_retx;
            if (!is_retx) {
                u.harq = {tb_bits(u.la.mcs, table, cfg.prbs, info.dl_symbols), u.la.mcs, 1, true};
                u.out.new_bits += u.harq.tb_bits;
            }
            const double p = bler(link.sinr_db, u.harq.mcs_used, table, cfg.la.slope, cfg.la.impl_margin_db);
            const bool nack = outcome_rng.bernoulli(p);

            u.la.bler_window.record(is_retx);
            ++u.out.transmissions;
            if (is_retx)
                ++u.out.retransmissions;
            u.mcs_sum += u.harq.mcs_used;

            if (!nack) {
                u.out.acked_bits += u.harq.tb_bits;
                u.harq.active = false;
                sched[sel].pending_retx = false;
            } else if (harq_on_nack(u.harq) == HarqAction::retransmit) {
                sched[sel].pending_retx = true;
            } else {
                u.out.discarded_bits += u.harq.tb_bits;
                sched[sel].pending_retx = false;
            }

            const int own = aligned[k];
            ++sched[sel].served_slots;
            if (state < 0) {
                ++u.out.served_unsteered;
            } else if (state == own) {
                ++u.out.served_aligned;
                ++sched[sel].served_slots_aligned;
            } else {
                ++u.out.served_misaligned;
                if (is_retx)
                    ++u.out.served_misaligned_retx;
            }

            ewma_update(sched, sel, inst_se, pf.alpha, pf.ewma_floor);

            rec.ue = static_cast<int>(k);
            rec.snr_db = link.sinr_db;
            rec.mcs = u.harq.mcs_used;
            rec.tb_bits = u.harq.tb_bits;
            rec.outcome = nack ? Outcome::nack : Outcome::ack;
            rec.is_retx = is_retx;

            for (std::size_t i = 0; i < n_active; ++i) {
                const auto kk = static_cast<std::size_t>(cfg.active_ues[i]);
                const double r = links.at(state, kk).rsrp_dbm;
                auto& v = ue[i];
                v.rsrp_sum += r;
                ++v.rsrp_n;
                if (state >= 0 && state == aligned[kk]) {
                    v.rsrp_aligned_sum += r;
                    ++v.rsrp_aligned_n;
                } else if (state >= 0) {
                    v.rsrp_misaligned_sum += r;
                    ++v.rsrp_misaligned_n;
                }
            }
        }
        rec.ris_state = state;

        if (options.keep_trace) {
            rec.rsrp_dbm.resize(n_ues);
            for (std::size_t k = 0; k < n_ues; ++k)
                rec.rsrp_dbm[k] = links.at(state, k).rsrp_dbm;
            result.trace.push_back(std::move(rec));
        }
    }

    for (auto& u : ue) {
        auto& o = u.out;
        o.inflight_bits = u.harq.active ? u.harq.tb_bits : 0;
        o.throughput_mbps = duration_s > 0.0 ? static_cast<double>(o.acked_bits) / duration_s / 1e6 : 0.0;
        o.bler = o.transmissions > 0
                     ? static_cast<double>(o.retransmissions) / static_cast<double>(o.transmissions)
                     : 0.0;
        o.mean_mcs = o.transmissions > 0 ? u.mcs_sum / static_cast<double>(o.transmissions) : 0.0;
        o.rsrp_mean_dbm = mean_or_nan(u.rsrp_sum, u.rsrp_n);
        o.rsrp_aligned_dbm = mean_or_nan(u.rsrp_aligned_sum, u.rsrp_aligned_n);
        o.rsrp_misaligned_dbm = mean_or_nan(u.rsrp_misaligned_sum, u.rsrp_misaligned_n);
        if (summary.dl_slots > 0) {
            const auto dl = static_cast<double>(summary.dl_slots);
            o.frac_aligned = static_cast<double>(o.served_aligned) / dl;
            o.frac_misaligned = static_cast<double>(o.served_misaligned) / dl;
        }
        summary.aggregate_mbps += o.throughput_mbps;
        summary.ues.push_back(o);
    }
    return result;
}

void write_trace_csv(std::ostream& os, std::span<const SlotRecord> trace)
{
    fmt::memory_buffer buf;
    auto out = std::back_inserter(buf);
    fmt::format_to(out, "slot,time_ms,ris_state,ue,rsrp0_dbm,rsrp1_dbm,snr_db,mcs,tb_bits,outcome,is_retx\n");
    for (const auto& r : trace) {
        fmt::format_to(out, "{},{:.1f},{},", r.slot, r.time_ms, r.ris_state);
        if (r.ue)
            fmt::format_to(out, "{}", *r.ue);
        for (std::size_t k = 0; k < 2; ++k) {
            if (k < r.rsrp_dbm.size())
                fmt::format_to(out, ",{:.3f}", r.rsrp_dbm[k]);
            else
                fmt::format_to(out, ",");
        }
        if (r.ue)
            fmt::format_to(out, ",{:.3f},{},{},{},{}\n", r.snr_db, r.mcs, r.tb_bits, to_string(r.outcome),
                           r.is_retx ? 1 : 0);
        else
            fmt::format_to(out, ",,,0,idle,0\n");
        if (buf.size() > (1u << 20)) {
            os.write(buf.data(), static_cast<std::streamsize>(buf.size()));
            buf.clear();
        }
    }
    os.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

void write_summary(std::ostream& os, const RunSummary& s)
{
    os << fmt::format("duration_s={}\nslots={}\ndl_slots={}\naggregate_mbps={:.4f}\n", s.duration_s, s.slots,
                      s.dl_slots, s.aggregate_mbps);
    for (const auto& u : s.ues) {
        const auto p = fmt::format("ue{}.", u.ue);
        os << fmt::format("{}throughput_mbps={:.4f}\n", p, u.throughput_mbps)
           << fmt::format("{}rsrp_mean_dbm={:.3f}\n", p, u.rsrp_mean_dbm)
           << fmt::format("{}rsrp_aligned_dbm={:.3f}\n", p, u.rsrp_aligned_dbm)
           << fmt::format("{}rsrp_misaligned_dbm={:.3f}\n", p, u.rsrp_misaligned_dbm)
           << fmt::format("{}bler={:.4f}\n", p, u.bler) << fmt::format("{}mean_mcs={:.3f}\n", p, u.mean_mcs)
           << fmt::format("{}transmissions={}\n{}retransmissions={}\n", p, u.transmissions, p, u.retransmissions)
           << fmt::format("{}frac_aligned={:.4f}\n{}frac_misaligned={:.4f}\n", p, u.frac_aligned, p,
                          u.frac_misaligned)
           << fmt::format("{}served_misaligned_retx={}\n", p, u.served_misaligned_retx)
           << fmt::format("{}new_bits={}\n{}acked_bits={}\n{}discarded_bits={}\n{}inflight_bits={}\n", p,
                          u.new_bits, p, u.acked_bits, p, u.discarded_bits, p, u.inflight_bits);
    }
}

std::vector<HistogramRow> scheduling_histogram(std::span<const SlotRecord> trace,
                                               std::span<const int> aligned_state_per_ue,
                                               std::span<const int> ues)
{
    std::int64_t dl = 0;
    std::vector<HistogramRow> rows;
    std::vector<std::int64_t> hit(ues.size(), 0), miss(ues.size(), 0);
    for (const auto& r : trace) {
        if (r.kind == SlotKind::ul)
            continue;
        ++dl;
        if (!r.ue || r.ris_state < 0)
            continue;
        for (std::size_t i = 0; i < ues.size(); ++i)
            if (*r.ue == ues[i]) {
                if (r.ris_state == aligned_state_per_ue[static_cast<std::size_t>(ues[i])])
                    ++hit[i];
                else
                    ++miss[i];
            }
    }
    for (std::size_t i = 0; i < ues.size(); ++i) {
        HistogramRow row;
        row.ue = ues[i];
        if (dl > 0) {
            row.aligned_fraction = static_cast<double>(hit[i]) / static_cast<double>(dl);
            row.misaligned_fraction = static_cast<double>(miss[i]) / static_cast<double>(dl);
        }
        rows.push_back(row);
    }
    return rows;
}

std::vector<TransitionCheck> transition_report(std::span<const SlotRecord> trace,
                                               std::span<const int> ues,
                                               std::int64_t window_slots)
{
    if (window_slots < 1)
        throw std::invalid_argument("transition_report: window must be at least one slot");
    std::vector<std::size_t> changes;
    for (std::size_t i = 1; i < trace.size(); ++i)
        if (trace[i].ris_state >= 0 && trace[i - 1].ris_state >= 0 &&
            trace[i].ris_state != trace[i - 1].ris_state)
            changes.push_back(i);

    std::vector<TransitionCheck> out;
    for (std::size_t c = 0; c < changes.size(); ++c) {
        const std::size_t begin = changes[c];
        const std::size_t end = c + 1 < changes.size() ? changes[c + 1] : trace.size();
        for (int k : ues) {
            const auto kk = static_cast<std::size_t>(k);
            const double before = trace[begin - 1].rsrp_dbm.at(kk);
            const double after = trace[begin].rsrp_dbm.at(kk);
            if (before == after)
                continue;
            TransitionCheck chk;
            chk.slot = trace[begin].slot;
            chk.ue = k;
            chk.step = after < before ? RsrpStep::drop : RsrpStep::rise;

            const std::int64_t window = trace[begin].slot / window_slots;
            std::int64_t sent = 0, retx = 0;
            for (std::size_t i = begin; i < end && trace[i].slot / window_slots == window; ++i) {
                const auto& r = trace[i];
                if (r.ue && *r.ue == k) {
                    ++sent;
                    if (r.is_retx)
                        ++retx;
                }
            }
            if (sent > 0) {
                chk.observed = true;
                chk.bler = static_cast<double>(retx) / static_cast<double>(sent);
            }
            out.push_back(chk);
        }
    }
    return out;
}

std::vector<SweepRow> sweep_alpha(const ExperimentConfig& base, std::span<const double> alphas,
                                  bool with_references)
{
    if (alphas.empty())
        throw std::invalid_argument("sweep_alpha: need at least one alpha");

    struct Job {
        std::string label;
        double alpha;
        ExperimentConfig cfg;
    };
    std::vector<Job> jobs;
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        auto cfg = base;
        cfg.alpha = alphas[i];
        cfg.seed = stream_seed(base.seed, 100 + i);
        jobs.push_back({"pf", alphas[i], cfg});
    }
    if (with_references) {
        auto genie = base;
        genie.ris_mode = RisMode::genie;
        genie.sched_kind = SchedKind::rr;
        genie.seed = stream_seed(base.seed, 90);
        jobs.push_back({"genie-rr", base.alpha, genie});
        auto off = base;
        off.ris_mode = RisMode::off;
        off.sched_kind = SchedKind::rr;
        off.seed = stream_seed(base.seed, 91);
        jobs.push_back({"no-ris", base.alpha, off});
    }
    for (const auto& j : jobs)
        j.cfg.validate();

    std::vector<std::future<RunSummary>> futures;
    for (const auto& j : jobs)
        futures.push_back(std::async(std::launch::async,
                                     [cfg = j.cfg] { return run(cfg, {.keep_trace = false}).summary; }));

    std::vector<SweepRow> rows;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        SweepRow row{jobs[i].label, jobs[i].alpha, futures[i].get(), 0.0};
        std::int64_t total = 0;
        for (const auto& u : row.summary.ues)
            total += u.served_slots();
        if (total > 0) {
            row.fairness_share = 1.0;
            for (const auto& u : row.summary.ues)
                row.fairness_share =
                    std::min(row.fairness_share, static_cast<double>(u.served_slots()) / static_cast<double>(total));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_sweep_csv(std::ostream& os, std::span<const SweepRow> rows)
{
    os << "label,alpha,inv_alpha,aggregate_mbps,fairness_share";
    const std::size_t n = rows.empty() ? 0 : rows.front().summary.ues.size();
    for (std::size_t i = 0; i < n; ++i)
        os << fmt::format(",ue{}_mbps", rows.front().summary.ues[i].ue);
    os << '\n';
    for (const auto& r : rows) {
        os << fmt::format("{},{},{},{:.4f},{:.4f}", r.label, r.alpha, 1.0 / r.alpha, r.summary.aggregate_mbps,
                          r.fairness_share);
        for (const auto& u : r.summary.ues)
            os << fmt::format(",{:.4f}", u.throughput_mbps);
        os << '\n';
    }
}

} // namespace risnr
