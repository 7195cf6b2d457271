#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "coprime/core.hpp"
#include "coprime/diffsets.hpp"
#include "coprime/patterns.hpp"

namespace coprime {

/// One dwell of a multiplexing switch: arrive at `position` at `time`, hold
/// for `hold` ticks (covering every `sample_ticks` entry), then settle for
/// `transition` ticks before the next event.
struct SwitchEvent {
    Tick time = 0;
    std::string position; // signal_id the switch connects
    Tick hold = 0;
    Tick transition = 0; // 0 for the last event
    std::vector<Tick> sample_ticks;
};

struct SwitchSchedule {
    std::string switch_id;
    TickGrid grid;          // schedule grid; pattern_scale times finer than the input
    Tick pattern_scale = 1; // 2 when the dwell boundaries need half-tick resolution
    std::vector<SwitchEvent> events;
};

struct ScheduleOptions {
    /// Ticks (on the schedule grid) the switch keeps holding after the last
    /// sample of a dwell.
    Tick hold_tail = 1;
};

/// Builds one schedule per sampler from patterns grouped by sampler_id.
/// Within a sampler the samples of all patterns are interleaved in time and
/// maximal same-signal runs become dwell events. Position changes sit at
/// the midpoint of the inter-run gap, so the settling margin is symmetric
/// and the transition window grows with the governing inter-sample distance
/// (Nd/2-type gaps on the N sampler, MN-type gaps on the M sampler). When a
/// gap is too tight to hold and settle on the input grid, the schedule is
/// emitted at twice the resolution, mirroring the half-period refinement of
/// the sampling theory; gaps that cannot fit even then raise TooFast.
inline std::vector<SwitchSchedule> build_schedule(const std::vector<SamplingPattern>& patterns,
                                                  const ScheduleOptions& opts = {}) {
    if (opts.hold_tail < 1)
        raise(ErrorCode::InvalidParam, "hold_tail must be >= 1 tick");

    // Group by sampler, preserving first-appearance order.
    std::vector<std::string> order;
    std::map<std::string, std::vector<const SamplingPattern*>> groups;
    for (const auto& p : patterns) {
        auto [it, inserted] = groups.try_emplace(p.sampler_id);
        if (inserted)
            order.push_back(p.sampler_id);
        it->second.push_back(&p);
    }

    std::vector<SwitchSchedule> schedules;
    schedules.reserve(order.size());
    for (const auto& sampler : order) {
        const auto& group = groups[sampler];
        const TickGrid grid = group.front()->grid;

        std::vector<std::pair<Tick, const SamplingPattern*>> slots;
        for (const SamplingPattern* p : group) {
            if (p->grid != grid)
                raise(ErrorCode::GridMismatch, "sampler '" + sampler + "' mixes grids");
            for (Tick t : p->instants)
                slots.emplace_back(t, p);
        }
        std::sort(slots.begin(), slots.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        for (std::size_t i = 1; i < slots.size(); ++i)
            if (slots[i].first == slots[i - 1].first)
                raise(ErrorCode::SlotCollision,
                      "sampler '" + sampler + "' has two samples at tick " +
                          std::to_string(slots[i].first));

        // The tightest gap that must fit a hold tail plus a positive
        // transition decides whether the schedule needs a finer grid.
        Tick min_gap = 0;
        for (std::size_t i = 1; i < slots.size(); ++i)
            if (slots[i].second->signal_id != slots[i - 1].second->signal_id) {
                const Tick gap = slots[i].first - slots[i - 1].first;
                if (min_gap == 0 || gap < min_gap)
                    min_gap = gap;
            }
        Tick scale = 1;
        if (min_gap > 0 && min_gap < opts.hold_tail + 1) {
            if (2 * min_gap < opts.hold_tail + 1)
                raise(ErrorCode::TooFast, "sampler '" + sampler + "' switches faster than a " +
                                              std::to_string(opts.hold_tail) +
                                              "-tick hold allows");
            scale = 2;
        }

        SwitchSchedule sched{sampler, TickGrid{grid.q * static_cast<int>(scale),
                                               grid.span_ticks * scale},
                             scale, {}};
        std::size_t i = 0;
        while (i < slots.size()) {
            // Maximal run of samples of one signal.
            std::size_t j = i;
            while (j + 1 < slots.size() &&
                   slots[j + 1].second->signal_id == slots[i].second->signal_id)
                ++j;
            SwitchEvent ev;
            ev.position = slots[i].second->signal_id;
            for (std::size_t k = i; k <= j; ++k)
                ev.sample_ticks.push_back(slots[k].first * scale);
            if (sched.events.empty()) {
                ev.time = 0;
            } else {
                const Tick prev_last = sched.events.back().sample_ticks.back();
                const Tick gap = slots[i].first * scale - prev_last;
                const Tick midpoint = prev_last + (gap + 1) / 2;
                ev.time = std::max(midpoint, prev_last + opts.hold_tail + 1);
            }
            ev.hold = slots[j].first * scale + opts.hold_tail - ev.time;
            if (!sched.events.empty()) {
                SwitchEvent& prev = sched.events.back();
                prev.transition = ev.time - (prev.time + prev.hold);
            }
            sched.events.push_back(std::move(ev));
            i = j + 1;
        }
        schedules.push_back(std::move(sched));
    }
    return schedules;
}

struct ReplaySample {
    Tick tick = 0; // on the input pattern grid
    std::string signal_id;
};

/// Walks a schedule and records which signal is sampled at each instant,
/// mapped back to the input pattern grid; the round trip against the input
/// patterns is an identity.
inline std::vector<ReplaySample> replay_schedule(const SwitchSchedule& sched) {
    std::vector<ReplaySample> out;
    for (const auto& ev : sched.events)
        for (Tick t : ev.sample_ticks)
            out.push_back({t / sched.pattern_scale, ev.position});
    std::sort(out.begin(), out.end(),
              [](const ReplaySample& a, const ReplaySample& b) { return a.tick < b.tick; });
    return out;
}

/// Instants of one signal claimed by both ExSCA samplers at once. Any entry
/// is an aliasing hazard; the shift parameters should be chosen so the
/// designed signal's list stays empty.
struct ExscaOverlapReport {
    struct SignalOverlap {
        int signal = 0;
        std::vector<Tick> ticks;
    };
    std::vector<SignalOverlap> per_signal;

    bool aliasing_hazard() const {
        for (const auto& s : per_signal)
            if (!s.ticks.empty())
                return true;
        return false;
    }

    const std::vector<Tick>& ticks_for(int signal) const {
        for (const auto& s : per_signal)
            if (s.signal == signal)
                return s.ticks;
        raise(ErrorCode::InvalidParam, "signal " + std::to_string(signal) + " not in report");
    }
};

inline ExscaOverlapReport check_exsca_overlap(const ExscaConfig& cfg, Tick span_periods) {
    ExscaOverlapReport rep;
    for (int signal = 1; signal <= 2; ++signal) {
        BranchPair b = gen_exsca(cfg, signal, span_periods);
        std::vector<Tick> both;
        std::set_intersection(b.coarse.instants.begin(), b.coarse.instants.end(),
                              b.fine.instants.begin(), b.fine.instants.end(),
                              std::back_inserter(both));
        rep.per_signal.push_back({signal, std::move(both)});
    }
    return rep;
}

struct ShiftCandidate {
    Tick s12 = 0;
    bool feasible = false;           // second signal free of sampler coincidences
    std::vector<Tick> overlap_ticks; // second-signal coincidences, if any
    std::int64_t covered_lags = 0;   // distinct lags with nonzero combined x2 weight
};

struct ShiftSearchResult {
    Tick best_s12 = 0;
    std::vector<ShiftCandidate> candidates;

    const ShiftCandidate& candidate(Tick s12) const {
        for (const auto& c : candidates)
            if (c.s12 == s12)
                return c;
        raise(ErrorCode::InvalidParam, "shift " + std::to_string(s12) + " was not scanned");
    }
};

/// Exhaustive scan of the second-sampler shift s12 in [0, ex*N), with
/// s11 = 0 as the origin. A candidate is feasible when the second signal's
/// two samplers never coincide inside the span (the coincidence that
/// creates the aliasing hazard); feasible candidates are ranked by the
/// number of distinct lags the combined second-signal pattern covers, ties
/// broken by the smaller shift. Throws NoFeasibleShift when every candidate
/// has coinciding samples.
inline ShiftSearchResult search_shift(const CoprimePair& pair, int ex, Tick span_periods) {
    if (ex < 1)
        raise(ErrorCode::InvalidParam, "sparsity factor ex must be >= 1");
    ShiftSearchResult result;
    std::optional<Tick> best;
    std::int64_t best_lags = -1;
    for (Tick s12 = 0; s12 < Tick{ex} * pair.n; ++s12) {
        ShiftCandidate cand;
        cand.s12 = s12;
        try {
            ExscaConfig cfg = make_exsca_config(pair, ex, 0, s12);
            BranchPair x2 = gen_exsca(cfg, 2, span_periods);
            std::set_intersection(x2.coarse.instants.begin(), x2.coarse.instants.end(),
                                  x2.fine.instants.begin(), x2.fine.instants.end(),
                                  std::back_inserter(cand.overlap_ticks));
            cand.feasible = cand.overlap_ticks.empty();
            const SamplingPattern merged = x2.merged();
            cand.covered_lags =
                weight_brute_force(merged, merged.grid.span_ticks - 1).covered_lags_symmetric();
        } catch (const Error&) {
            cand.feasible = false; // shift not representable inside the span
        }
        if (cand.feasible && cand.covered_lags > best_lags) {
            best = s12;
            best_lags = cand.covered_lags;
        }
        result.candidates.push_back(std::move(cand));
    }
    if (!best)
        raise(ErrorCode::NoFeasibleShift,
              "every shift in [0, " + std::to_string(ex * pair.n) +
                  ") makes the second signal's samplers coincide");
    result.best_s12 = *best;
    return result;
}

/// Bipartite signals-to-samplers model for the generalized acquisition
/// setup: rs signals, q samplers, signals need not connect to every
/// sampler. An edge's demand period is the inter-sample spacing the signal
/// needs from that sampler (its Nyquist period when unset, the co-prime
/// branch spacing ex*M*d / ex*N*d in sparse setups).
struct AssignmentModel {
    struct Signal {
        std::string id;
        double nyquist_period = 1.0;
    };
    struct Sampler {
        std::string id;
        double min_period = 1.0; // fastest spacing the hardware sustains
    };
    struct Edge {
        std::string signal_id;
        std::string sampler_id;
        double demand_period = 0.0; // 0 means the signal's Nyquist period
    };
    std::vector<Signal> signals;
    std::vector<Sampler> samplers;
    std::vector<Edge> edges;
};

struct AssignmentReport {
    struct SamplerLoad {
        std::string sampler_id;
        double utilization = 0.0; // sum of min_period / demand_period over edges
        bool feasible = true;     // utilization <= 1
    };
    std::vector<SamplerLoad> loads;
    std::vector<std::string> unconnected_signals;
    std::vector<std::string> overdriven_edges; // demand faster than the sampler allows
    bool feasible = false;
};

/// Rate-feasibility check: every signal must reach at least one sampler,
/// no edge may demand spacing below the sampler's minimum period, and each
/// sampler's multiplexing load (sum of min_period/demand_period) may not
/// exceed one.
inline AssignmentReport plan_assignment(const AssignmentModel& model) {
    if (model.signals.empty())
        raise(ErrorCode::InvalidParam, "assignment model needs at least one signal");
    AssignmentReport rep;

    std::map<std::string, double> signal_period;
    for (const auto& s : model.signals) {
        if (s.nyquist_period <= 0.0)
            raise(ErrorCode::InvalidParam, "signal '" + s.id + "' needs a positive period");
        signal_period[s.id] = s.nyquist_period;
    }
    std::map<std::string, double> util;
    std::map<std::string, double> min_period;
    for (const auto& s : model.samplers) {
        if (s.min_period <= 0.0)
            raise(ErrorCode::InvalidParam, "sampler '" + s.id + "' needs a positive period");
        util[s.id] = 0.0;
        min_period[s.id] = s.min_period;
    }

    std::map<std::string, int> edges_per_signal;
    for (const auto& e : model.edges) {
        auto sig = signal_period.find(e.signal_id);
        auto smp = util.find(e.sampler_id);
        if (sig == signal_period.end() || smp == util.end())
            raise(ErrorCode::InvalidParam, "edge references unknown signal or sampler");
        const double demand = e.demand_period > 0.0 ? e.demand_period : sig->second;
        if (demand < min_period[e.sampler_id])
            rep.overdriven_edges.push_back(e.signal_id + "->" + e.sampler_id);
        smp->second += min_period[e.sampler_id] / demand;
        ++edges_per_signal[e.signal_id];
    }

    bool ok = rep.overdriven_edges.empty();
    for (const auto& s : model.signals)
        if (edges_per_signal[s.id] == 0) {
            rep.unconnected_signals.push_back(s.id);
            ok = false;
        }
    for (const auto& s : model.samplers) {
        const double u = util[s.id];
        const bool fit = u <= 1.0 + 1e-12;
        rep.loads.push_back({s.id, u, fit});
        ok &= fit;
    }
    rep.feasible = ok;
    return rep;
}

} // namespace coprime
