#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "coprime/core.hpp"
#include "coprime/patterns.hpp"

namespace coprime {

/// Per-lag contributor counts z(l) of one pattern. Only l >= 0 is stored;
/// self weights are symmetric, z(-l) = z(l). z(0) equals the pattern size.
struct WeightFunction {
    TickGrid grid;
    Tick lag_max = 0;
    std::vector<std::int64_t> weights; // index l in [0, lag_max]

    std::int64_t at(Tick lag) const {
        const Tick a = lag < 0 ? -lag : lag;
        if (a > lag_max)
            raise(ErrorCode::LagOutOfRange, "lag " + std::to_string(lag) + " beyond lag_max");
        return weights[static_cast<std::size_t>(a)];
    }

    /// Sum over the full symmetric range [-lag_max, lag_max]. Equals the
    /// squared pattern size when lag_max covers the whole span.
    std::int64_t sum_symmetric() const {
        std::int64_t s = weights[0];
        for (std::size_t l = 1; l < weights.size(); ++l)
            s += 2 * weights[l];
        return s;
    }

    std::int64_t covered_lags_symmetric() const {
        std::int64_t c = weights[0] > 0 ? 1 : 0;
        for (std::size_t l = 1; l < weights.size(); ++l)
            if (weights[l] > 0)
                c += 2;
        return c;
    }
};

/// Pair counts across two patterns, w_ab(l) = #{(ta, tb) : tb - ta = l}.
/// Not symmetric in general; the full range [-lag_max, lag_max] is stored.
struct CrossWeightFunction {
    TickGrid grid;
    Tick lag_max = 0;
    std::vector<std::int64_t> weights; // index lag + lag_max

    std::int64_t at(Tick lag) const {
        if (lag < -lag_max || lag > lag_max)
            raise(ErrorCode::LagOutOfRange, "lag " + std::to_string(lag) + " beyond lag_max");
        return weights[static_cast<std::size_t>(lag + lag_max)];
    }
};

enum class DiffKind { self, cross };

/// Multiset of pairwise instant differences, the lag-domain view of a
/// pattern (self) or of a pattern pair (cross).
struct DifferenceSet {
    DiffKind kind = DiffKind::self;
    std::vector<Tick> entries; // sorted, with multiplicity
    std::string source_a;
    std::string source_b;
};

inline DifferenceSet self_differences(const SamplingPattern& p) {
    DifferenceSet out{DiffKind::self, {}, p.sampler_id, p.sampler_id};
    out.entries.reserve(p.size() * p.size());
    for (Tick a : p.instants)
        for (Tick b : p.instants)
            out.entries.push_back(b - a);
    std::sort(out.entries.begin(), out.entries.end());
    return out;
}

inline DifferenceSet cross_differences(const SamplingPattern& a, const SamplingPattern& b) {
    if (a.grid != b.grid)
        raise(ErrorCode::GridMismatch, "cross differences need a shared grid");
    DifferenceSet out{DiffKind::cross, {}, a.sampler_id, b.sampler_id};
    out.entries.reserve(a.size() * b.size());
    for (Tick ta : a.instants)
        for (Tick tb : b.instants)
            out.entries.push_back(tb - ta);
    std::sort(out.entries.begin(), out.entries.end());
    return out;
}

/// Contributor count by direct pair enumeration, w(l) = #{(a,b) : b-a = l}
/// for l in [0, lag_max]. The independent ground truth every closed form is
/// checked against.
inline WeightFunction weight_brute_force(const SamplingPattern& p, Tick lag_max) {
    if (lag_max < 0 || lag_max >= p.grid.span_ticks)
        raise(ErrorCode::LagOutOfRange, "lag_max must lie in [0, span)");
    WeightFunction w{p.grid, lag_max, std::vector<std::int64_t>(static_cast<std::size_t>(lag_max) + 1, 0)};
    for (Tick a : p.instants)
        for (Tick b : p.instants) {
            const Tick l = b - a;
            if (l >= 0 && l <= lag_max)
                ++w.weights[static_cast<std::size_t>(l)];
        }
    return w;
}

/// Term-by-term decomposition of the closed form for z2(l).
struct Z2Terms {
    std::int64_t a = 0;
    std::int64_t b = 0;
    std::int64_t c = 0;
    std::int64_t d = 0;

    std::int64_t total() const { return a + b + c + d; }
};

/// Closed-form contributor count for the time-multiplexed second signal
/// of the extended co-prime scheme, valid for |l| <= 2MN-1:
///
///   A = sum_{n=-(N-1)}^{N-1} (N-|n|) delta(l - Mn)
///       + sum_{n=N+1}^{2N-1} delta(|l| - Mn)
///   B = sum_{m=-(2M-1)}^{2M-1} (2M-|m|) delta(l - Nm)
///   C = sum_{n=N+1}^{2N-1} sum_{m=M+1}^{2M-1} 2 delta(l - (Mn - Nm)) - delta(l)
///   D = sum_{n=N+1}^{2N-1} sum_{m=1}^{M-1} delta(|l| - |Mn - Nm|)
///
/// The delta(|l| - .) terms contribute at both +Mn and -Mn; this reading
/// reproduces the brute-force tally at every lag for all co-prime pairs up
/// to M, N = 12 (checked exhaustively in the tests).
inline Z2Terms weight_closed_form_z2_terms(const CoprimePair& pair, Tick l) {
    const Tick m = pair.m, n = pair.n;
    if (l < -(2 * m * n - 1) || l > 2 * m * n - 1)
        raise(ErrorCode::LagOutOfRange, "closed form defined for |l| <= 2MN-1");
    const auto delta = [](Tick x) -> std::int64_t { return x == 0 ? 1 : 0; };
    const Tick la = l < 0 ? -l : l;

    Z2Terms t;
    for (Tick k = -(n - 1); k <= n - 1; ++k)
        t.a += (n - (k < 0 ? -k : k)) * delta(l - m * k);
    for (Tick k = n + 1; k <= 2 * n - 1; ++k)
        t.a += delta(la - m * k);
    for (Tick k = -(2 * m - 1); k <= 2 * m - 1; ++k)
        t.b += (2 * m - (k < 0 ? -k : k)) * delta(l - n * k);
    for (Tick kn = n + 1; kn <= 2 * n - 1; ++kn)
        for (Tick km = m + 1; km <= 2 * m - 1; ++km)
            t.c += 2 * delta(l - (m * kn - n * km));
    t.c -= delta(l);
    for (Tick kn = n + 1; kn <= 2 * n - 1; ++kn)
        for (Tick km = 1; km <= m - 1; ++km) {
            const Tick diff = m * kn - n * km;
            t.d += delta(la - (diff < 0 ? -diff : diff));
        }
    return t;
}

inline std::int64_t weight_closed_form_z2(const CoprimePair& pair, Tick l) {
    return weight_closed_form_z2_terms(pair, l).total();
}

/// Relations between the contributor counts of the two multiplexed signals.
/// Everything is evaluated on the symmetric lag range [-(2MN-1), 2MN-1].
struct ZRelationReport {
    CoprimePair pair;
    bool plus_one_ok = false;   // z1(l) = z2(l)+1 at l = +-Mn, n in [1, N-1]
    bool minus_one_ok = false;  // z1(l) = z2(l)-1 at l = +-Mn, n in [N+1, 2N-1]
    bool elsewhere_equal = false;
    bool sums_equal = false;
    bool extra_lag_count_ok = false; // lags covered only by z2: 2(N-1) of them
    std::int64_t sum_z1 = 0;
    std::int64_t sum_z2 = 0;
    std::int64_t extra_unique_lags = 0; // over the symmetric range
    std::vector<Tick> differing_lags;   // l >= 0 with z1(l) != z2(l)

    bool pass() const {
        return plus_one_ok && minus_one_ok && elsewhere_equal && sums_equal && extra_lag_count_ok;
    }
};

inline ZRelationReport verify_z_relations(const CoprimePair& pair) {
    const Tick m = pair.m, n = pair.n;
    const Tick lag_max = 2 * m * n - 1;
    const WeightFunction z1 = weight_brute_force(gen_extended_x1(pair).merged(), lag_max);
    const WeightFunction z2 = weight_brute_force(gen_extended_x2(pair).merged(), lag_max);

    ZRelationReport rep;
    rep.pair = pair;
    rep.plus_one_ok = rep.minus_one_ok = rep.elsewhere_equal = true;
    for (Tick l = 0; l <= lag_max; ++l) {
        const std::int64_t a = z1.weights[static_cast<std::size_t>(l)];
        const std::int64_t b = z2.weights[static_cast<std::size_t>(l)];
        if (a != b)
            rep.differing_lags.push_back(l);
        const bool on_m_grid = l % m == 0;
        const Tick k = on_m_grid ? l / m : 0;
        if (on_m_grid && k >= 1 && k <= n - 1) {
            rep.plus_one_ok &= (a == b + 1);
        } else if (on_m_grid && k >= n + 1 && k <= 2 * n - 1) {
            rep.minus_one_ok &= (a == b - 1);
        } else {
            rep.elsewhere_equal &= (a == b);
        }
        if (b > 0 && a == 0)
            rep.extra_unique_lags += (l == 0 ? 1 : 2);
    }
    rep.sum_z1 = z1.sum_symmetric();
    rep.sum_z2 = z2.sum_symmetric();
    rep.sums_equal = rep.sum_z1 == rep.sum_z2;
    rep.extra_lag_count_ok = rep.extra_unique_lags == 2 * (n - 1);
    return rep;
}

/// Cross contributor counts between two patterns over [-lag_max, lag_max].
inline CrossWeightFunction cross_weight(const SamplingPattern& a, const SamplingPattern& b,
                                        Tick lag_max) {
    if (a.grid != b.grid)
        raise(ErrorCode::GridMismatch, "cross weight needs a shared grid");
    if (lag_max < 0)
        raise(ErrorCode::LagOutOfRange, "lag_max must be >= 0");
    CrossWeightFunction w{a.grid, lag_max,
                          std::vector<std::int64_t>(2 * static_cast<std::size_t>(lag_max) + 1, 0)};
    for (Tick ta : a.instants)
        for (Tick tb : b.instants) {
            const Tick l = tb - ta;
            if (l >= -lag_max && l <= lag_max)
                ++w.weights[static_cast<std::size_t>(l + lag_max)];
        }
    return w;
}

/// Correlogram bias window: the Fourier transform of the weight function,
///   B(w_k) = sum_l z(l) cos(w_k * l / q),  w_k = 2*pi*k/num_freqs,
/// real-valued because z is symmetric. Lags are phased in units of the
/// Nyquist period d, so B(0) always equals the symmetric sum of z.
inline std::vector<double> bias_window(const WeightFunction& w, int num_freqs) {
    if (num_freqs < 1)
        raise(ErrorCode::InvalidParam, "num_freqs must be >= 1");
    std::vector<double> out(static_cast<std::size_t>(num_freqs), 0.0);
    const double step = 1.0 / w.grid.q;
    for (int k = 0; k < num_freqs; ++k) {
        const double omega = 2.0 * std::numbers::pi * k / num_freqs;
        double acc = static_cast<double>(w.weights[0]);
        for (std::size_t l = 1; l < w.weights.size(); ++l)
            acc += 2.0 * static_cast<double>(w.weights[l]) *
                   std::cos(omega * static_cast<double>(l) * step);
        out[static_cast<std::size_t>(k)] = acc;
    }
    return out;
}

} // namespace coprime
