#pragma once

#include <string>
#include <utility>
#include <vector>

#include "coprime/core.hpp"

namespace coprime {

/// The two sub-sampler branches of one signal. For the extended co-prime
/// generators `coarse` is the M-spaced branch and `fine` the N-spaced one;
/// for ExSCA they are sampler-1 (spacing ex*M*d) and sampler-2 (ex*N*d).
struct BranchPair {
    SamplingPattern coarse;
    SamplingPattern fine;

    SamplingPattern merged() const { return merge_patterns(coarse, fine); }
};

/// Uniform sampling {offset, offset+period, ...} below `span`, the plain
/// Nyquist-TDM building block (t = k*d + d_t).
inline SamplingPattern gen_uniform(Tick period_ticks, Tick offset_ticks, Tick span, int q = 1,
                                   std::string signal_id = "x1", std::string sampler_id = "S") {
    if (period_ticks < 1)
        raise(ErrorCode::InvalidParam, "uniform pattern period must be >= 1 tick");
    if (offset_ticks < 0)
        raise(ErrorCode::InvalidParam, "uniform pattern offset must be >= 0");
    std::vector<Tick> instants;
    for (Tick t = offset_ticks; t < span; t += period_ticks)
        instants.push_back(t);
    return make_pattern(make_grid(q, span), std::move(instants), std::move(signal_id),
                        std::move(sampler_id));
}

namespace detail {

inline SamplingPattern progression(TickGrid grid, Tick start, Tick step, Tick count,
                                   std::string signal_id, std::string sampler_id) {
    std::vector<Tick> instants;
    instants.reserve(static_cast<std::size_t>(count));
    for (Tick k = 0; k < count; ++k)
        instants.push_back(start + step * k);
    return make_pattern(grid, std::move(instants), std::move(signal_id), std::move(sampler_id));
}

} // namespace detail

/// Extended co-prime branches for the first signal over one two-period
/// window 2*M*N*d: M-spaced instants M*n*d for n in [0, N-1] plus N-spaced
/// instants N*m*d for m in [0, 2M-1].
inline BranchPair gen_extended_x1(const CoprimePair& pair) {
    const Tick m = pair.m, n = pair.n;
    TickGrid grid = make_grid(1, 2 * m * n);
    return {detail::progression(grid, 0, m, n, "x1", "M"),
            detail::progression(grid, 0, n, 2 * m, "x1", "N")};
}

/// Extended co-prime branches for the second signal: the M-spaced branch is
/// pushed into the second co-prime period (n in [N, 2N-1]) where the
/// M-spaced sampler of the first signal sits idle; the N-spaced branch is
/// unchanged.
inline BranchPair gen_extended_x2(const CoprimePair& pair) {
    const Tick m = pair.m, n = pair.n;
    TickGrid grid = make_grid(1, 2 * m * n);
    return {detail::progression(grid, m * n, m, n, "x2", "M"),
            detail::progression(grid, 0, n, 2 * m, "x2", "N")};
}

/// Grid subdivision needed by the two-sampler TDM scheme: the second
/// signal's N-spaced branch is shifted by N*d/2, which needs q=2 when N is
/// odd.
inline int tdm_two_sampler_q(const CoprimePair& pair) { return pair.n % 2 == 0 ? 1 : 2; }

/// Second-signal branches for two-sampler TDM: M-spaced branch as in
/// gen_extended_x2, N-spaced branch at t = N*m*d + N*d/2 so that a single
/// N-spaced sampler can serve both signals. Cross differences of the result
/// fall on half-period lags.
inline BranchPair gen_tdm_two_sampler_x2(const CoprimePair& pair) {
    const Tick m = pair.m, n = pair.n;
    const int q = tdm_two_sampler_q(pair);
    if ((n * q) % 2 != 0)
        raise(ErrorCode::GridResolution, "half-period shift not representable on grid");
    TickGrid grid = make_grid(q, 2 * m * n * q);
    return {detail::progression(grid, m * n * q, m * q, n, "x2", "M"),
            detail::progression(grid, n * q / 2, n * q, 2 * m, "x2", "N")};
}

/// First-signal branches on the same grid as gen_tdm_two_sampler_x2; the
/// instants are those of gen_extended_x1.
inline BranchPair gen_tdm_two_sampler_x1(const CoprimePair& pair) {
    BranchPair b = gen_extended_x1(pair);
    const int q = tdm_two_sampler_q(pair);
    return {rescale(b.coarse, q), rescale(b.fine, q)};
}

/// Extremely sparse co-prime sampler configuration. Inter-sample distances
/// are ex*M*d and ex*N*d; s11/s12 are the sampler shifts for the first
/// signal in units of the Nyquist period d. The second signal is offset by
/// half an inter-sample distance on each sampler:
///   s21 = s11 + ex*M/2,   s22 = s12 + ex*N/2,
/// exact on a grid with q=2 whenever ex*M or ex*N is odd.
struct ExscaConfig {
    CoprimePair pair;
    int ex = 1;
    Tick s11 = 0;
    Tick s12 = 0;

    int q() const { return ((ex * pair.m) % 2 != 0 || (ex * pair.n) % 2 != 0) ? 2 : 1; }

    Tick s21_ticks() const { return s11 * q() + Tick{ex} * pair.m * q() / 2; }
    Tick s22_ticks() const { return s12 * q() + Tick{ex} * pair.n * q() / 2; }
};

inline ExscaConfig make_exsca_config(const CoprimePair& pair, int ex, Tick s11, Tick s12) {
    if (ex < 1)
        raise(ErrorCode::InvalidParam, "sparsity factor ex must be >= 1");
    if (s11 < 0 || s12 < 0)
        raise(ErrorCode::InvalidParam, "sampler shifts must be >= 0");
    return ExscaConfig{pair, ex, s11, s12};
}

/// ExSCA branches for one signal over a caller-chosen span in Nyquist
/// periods (the scheme has no canonical window). Signals 1 and 2 use the
/// half-distance shifts above. Signals 3..ex are an extrapolation of the
/// same idea with slot shifts s_i1 = s11 + (i-1)*M and s_i2 = s12 + (i-1)*N,
/// which is how three signals fit on two co-prime samplers at ex = 3.
inline BranchPair gen_exsca(const ExscaConfig& cfg, int signal, Tick span_periods) {
    if (signal < 1)
        raise(ErrorCode::InvalidParam, "signal index must be >= 1");
    if (signal > 2 && signal > cfg.ex)
        raise(ErrorCode::InvalidParam, "signal " + std::to_string(signal) +
                                           " needs ex >= " + std::to_string(signal));
    if (span_periods < 1)
        raise(ErrorCode::InvalidParam, "ExSCA span must be >= 1 Nyquist period");

    const int q = cfg.q();
    const Tick span = span_periods * q;
    const Tick step1 = Tick{cfg.ex} * cfg.pair.m * q;
    const Tick step2 = Tick{cfg.ex} * cfg.pair.n * q;

    Tick o1 = cfg.s11 * q;
    Tick o2 = cfg.s12 * q;
    if (signal == 2) {
        o1 = cfg.s21_ticks();
        o2 = cfg.s22_ticks();
    } else if (signal > 2) {
        o1 += Tick{signal - 1} * cfg.pair.m * q;
        o2 += Tick{signal - 1} * cfg.pair.n * q;
    }
    if (o1 >= span || o2 >= span)
        raise(ErrorCode::InvalidParam, "sampler shift lies outside the requested span");

    TickGrid grid = make_grid(q, span);
    const std::string sig = "x" + std::to_string(signal);
    auto count = [span](Tick start, Tick step) { return (span - start + step - 1) / step; };
    return {detail::progression(grid, o1, step1, count(o1, step1), sig, "s1"),
            detail::progression(grid, o2, step2, count(o2, step2), sig, "s2")};
}

} // namespace coprime
