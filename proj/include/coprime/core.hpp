#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "coprime/error.hpp"

namespace coprime {

using Tick = std::int64_t;

/// Validated co-prime sub-sampler parameters. The two branches sample with
/// inter-sample distances m*d and n*d, where d is the Nyquist period of the
/// fastest signal.
struct CoprimePair {
    int m = 0;
    int n = 0;
    double d = 1.0;

    friend bool operator==(const CoprimePair&, const CoprimePair&) = default;
};

/// Rational tick lattice shared by every pattern in one analysis. Resolution
/// is d/q, so q=2 makes half-period instants like 1.5*d land on integer
/// ticks and difference arithmetic stays exact.
struct TickGrid {
    int q = 1;
    Tick span_ticks = 0;

    friend bool operator==(const TickGrid&, const TickGrid&) = default;
};

/// A set of sample instants on a tick grid. Instants are strictly
/// increasing, unique and all less than the grid span. `overlap_ticks`
/// records instants that were claimed by both inputs of a merge; generators
/// always leave it empty.
struct SamplingPattern {
    TickGrid grid;
    std::vector<Tick> instants;
    std::string signal_id;
    std::string sampler_id;
    std::vector<Tick> overlap_ticks;

    std::size_t size() const noexcept { return instants.size(); }
    bool empty() const noexcept { return instants.empty(); }
    bool has_overlap() const noexcept { return !overlap_ticks.empty(); }

    /// Instant in units of the Nyquist period d (tick / q).
    double instant_in_periods(std::size_t i) const { return static_cast<double>(instants[i]) / grid.q; }
};

inline CoprimePair make_coprime_pair(int m, int n, double d = 1.0) {
    if (m <= 1 || n <= 1)
        raise(ErrorCode::InvalidParam, "co-prime factors must both be >= 2, got (" +
                                           std::to_string(m) + ", " + std::to_string(n) + ")");
    if (d <= 0.0)
        raise(ErrorCode::InvalidParam, "Nyquist period d must be positive");
    if (m == n || std::gcd(m, n) != 1)
        raise(ErrorCode::NotCoprime, "gcd(" + std::to_string(m) + ", " + std::to_string(n) + ") != 1");
    return CoprimePair{m, n, d};
}

inline TickGrid make_grid(int q, Tick span_ticks) {
    if (q < 1)
        raise(ErrorCode::InvalidParam, "grid subdivision q must be >= 1");
    if (span_ticks < 1)
        raise(ErrorCode::InvalidParam, "grid span must be >= 1 tick");
    return TickGrid{q, span_ticks};
}

/// Validates the pattern invariants (sorted, unique, inside the span).
/// Empty instant lists are allowed.
inline SamplingPattern make_pattern(TickGrid grid, std::vector<Tick> instants,
                                    std::string signal_id, std::string sampler_id) {
    if (grid.q < 1 || grid.span_ticks < 1)
        raise(ErrorCode::InvalidParam, "pattern requires a valid grid");
    for (std::size_t i = 0; i < instants.size(); ++i) {
        if (instants[i] < 0 || instants[i] >= grid.span_ticks)
            raise(ErrorCode::InvalidParam, "instant " + std::to_string(instants[i]) +
                                               " outside grid span " + std::to_string(grid.span_ticks));
        if (i > 0 && instants[i] <= instants[i - 1])
            raise(ErrorCode::InvalidParam, "instants must be strictly increasing");
    }
    return SamplingPattern{grid, std::move(instants), std::move(signal_id), std::move(sampler_id), {}};
}

/// Union of the instants of two branches of the same signal. Duplicates are
/// collapsed and reported through `overlap_ticks` on the result; coinciding
/// samples are a design hazard to surface downstream, not an error.
inline SamplingPattern merge_patterns(const SamplingPattern& a, const SamplingPattern& b) {
    if (a.grid != b.grid)
        raise(ErrorCode::GridMismatch, "cannot merge patterns on different grids");
    if (a.signal_id != b.signal_id)
        raise(ErrorCode::InvalidParam, "cannot merge patterns of different signals");

    std::vector<Tick> merged;
    merged.reserve(a.instants.size() + b.instants.size());
    std::set_union(a.instants.begin(), a.instants.end(), b.instants.begin(), b.instants.end(),
                   std::back_inserter(merged));

    std::vector<Tick> dup;
    std::set_intersection(a.instants.begin(), a.instants.end(), b.instants.begin(),
                          b.instants.end(), std::back_inserter(dup));

    std::string sampler = a.sampler_id == b.sampler_id ? a.sampler_id
                                                       : a.sampler_id + "+" + b.sampler_id;
    return SamplingPattern{a.grid, std::move(merged), a.signal_id, std::move(sampler), std::move(dup)};
}

/// 0/1 occupancy vector of length span_ticks.
inline std::vector<std::uint8_t> to_indicator(const SamplingPattern& p) {
    std::vector<std::uint8_t> ind(static_cast<std::size_t>(p.grid.span_ticks), 0);
    for (Tick t : p.instants)
        ind[static_cast<std::size_t>(t)] = 1;
    return ind;
}

inline SamplingPattern from_indicator(TickGrid grid, const std::vector<std::uint8_t>& ind,
                                      std::string signal_id, std::string sampler_id) {
    if (static_cast<Tick>(ind.size()) != grid.span_ticks)
        raise(ErrorCode::InvalidParam, "indicator length does not match grid span");
    std::vector<Tick> instants;
    for (std::size_t k = 0; k < ind.size(); ++k)
        if (ind[k])
            instants.push_back(static_cast<Tick>(k));
    return make_pattern(grid, std::move(instants), std::move(signal_id), std::move(sampler_id));
}

/// Re-expresses a pattern on a finer grid. new_q must be a multiple of
/// the current q; instants and span scale exactly.
inline SamplingPattern rescale(const SamplingPattern& p, int new_q) {
    if (new_q < p.grid.q || new_q % p.grid.q != 0)
        raise(ErrorCode::GridResolution,
              "cannot rescale q=" + std::to_string(p.grid.q) + " to q=" + std::to_string(new_q));
    const Tick f = new_q / p.grid.q;
    SamplingPattern out = p;
    out.grid.q = new_q;
    out.grid.span_ticks *= f;
    for (Tick& t : out.instants)
        t *= f;
    for (Tick& t : out.overlap_ticks)
        t *= f;
    return out;
}

} // namespace coprime
