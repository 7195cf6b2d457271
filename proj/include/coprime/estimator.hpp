#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "coprime/core.hpp"

namespace coprime {

/// Seeded Gaussian source. mt19937_64 is fully specified by the standard
/// and the Box-Muller mapping below avoids the implementation-defined
/// std::normal_distribution, so identical seeds give bitwise identical
/// streams on every platform.
class GaussianSource {
public:
    explicit GaussianSource(std::uint64_t seed) : engine_(seed) {}

    /// Uniform draw in [0, 1) with 53 random mantissa bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - uniform(); // (0, 1], keeps log finite
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

/// Synthetic wide-sense stationary test signal with a known analytic
/// autocorrelation, the oracle the estimators are validated against.
/// Sinusoid phases are drawn uniformly per realization, which is what makes
/// that model stationary. All dynamics run per grid tick.
struct SignalModel {
    enum class Kind { white_noise, ar1, sinusoids_plus_noise };

    struct Tone {
        double amplitude = 0.0;
        double freq = 0.0; // cycles per tick, in (0, 0.5]
    };

    Kind kind = Kind::white_noise;
    double variance = 1.0; // process variance (white, ar1); additive noise variance (sinusoids)
    double pole = 0.0;     // ar1 only, |pole| < 1
    std::vector<Tone> tones;
    std::uint64_t seed = 0;

    double analytic_autocorr(Tick lag) const {
        const Tick a = lag < 0 ? -lag : lag;
        switch (kind) {
        case Kind::white_noise:
            return a == 0 ? variance : 0.0;
        case Kind::ar1:
            return variance * std::pow(pole, static_cast<double>(a));
        case Kind::sinusoids_plus_noise: {
            double r = a == 0 ? variance : 0.0;
            for (const Tone& t : tones)
                r += 0.5 * t.amplitude * t.amplitude *
                     std::cos(2.0 * std::numbers::pi * t.freq * static_cast<double>(a));
            return r;
        }
        }
        return 0.0;
    }
};

inline SignalModel white_noise_model(double variance, std::uint64_t seed) {
    if (variance < 0.0)
        raise(ErrorCode::InvalidParam, "variance must be >= 0");
    return SignalModel{SignalModel::Kind::white_noise, variance, 0.0, {}, seed};
}

inline SignalModel ar1_model(double pole, double variance, std::uint64_t seed) {
    if (variance < 0.0)
        raise(ErrorCode::InvalidParam, "variance must be >= 0");
    if (!(std::abs(pole) < 1.0))
        raise(ErrorCode::InvalidParam, "AR(1) pole must satisfy |pole| < 1");
    return SignalModel{SignalModel::Kind::ar1, variance, pole, {}, seed};
}

inline SignalModel sinusoid_model(std::vector<SignalModel::Tone> tones, double noise_variance,
                                  std::uint64_t seed) {
    if (noise_variance < 0.0)
        raise(ErrorCode::InvalidParam, "variance must be >= 0");
    for (const auto& t : tones)
        if (t.freq <= 0.0 || t.freq > 0.5)
            raise(ErrorCode::InvalidParam, "tone frequency must lie in (0, 0.5] cycles/tick");
    return SignalModel{SignalModel::Kind::sinusoids_plus_noise, noise_variance, 0.0,
                       std::move(tones), seed};
}

/// A combined record on the Nyquist-rate tick grid: dense values with an
/// occupancy mask. Entries without a sample are exactly zero, matching the
/// zero-filled combined signals of the acquisition equations.
struct AcquisitionRecord {
    TickGrid grid; // span = pattern span * periods
    std::vector<double> values;
    std::vector<std::uint8_t> mask;
    std::string signal_id;

    std::int64_t occupied_count() const {
        std::int64_t c = 0;
        for (auto b : mask)
            c += b;
        return c;
    }
};

/// Simulates acquisition of `model` through `pattern`, extended
/// periodically for `num_periods` periods. The dense signal is generated on
/// the whole tick grid first and masked afterwards, so records with the
/// same model and seed agree bitwise regardless of the pattern.
inline AcquisitionRecord acquire(const SignalModel& model, const SamplingPattern& pattern,
                                 int num_periods) {
    if (num_periods < 1)
        raise(ErrorCode::InvalidParam, "num_periods must be >= 1");
    const Tick period = pattern.grid.span_ticks;
    const Tick total = period * num_periods;
    const auto n = static_cast<std::size_t>(total);

    std::vector<double> dense(n, 0.0);
    GaussianSource rng(model.seed);
    switch (model.kind) {
    case SignalModel::Kind::white_noise: {
        const double sigma = std::sqrt(model.variance);
        for (auto& v : dense)
            v = sigma * rng.normal();
        break;
    }
    case SignalModel::Kind::ar1: {
        const double sigma = std::sqrt(model.variance);
        const double sigma_e = sigma * std::sqrt(1.0 - model.pole * model.pole);
        dense[0] = sigma * rng.normal(); // start in the stationary distribution
        for (std::size_t k = 1; k < n; ++k)
            dense[k] = model.pole * dense[k - 1] + sigma_e * rng.normal();
        break;
    }
    case SignalModel::Kind::sinusoids_plus_noise: {
        std::vector<double> phases;
        phases.reserve(model.tones.size());
        for (std::size_t i = 0; i < model.tones.size(); ++i)
            phases.push_back(2.0 * std::numbers::pi * rng.uniform());
        const double sigma = std::sqrt(model.variance);
        for (std::size_t k = 0; k < n; ++k) {
            double v = sigma == 0.0 ? 0.0 : sigma * rng.normal();
            for (std::size_t i = 0; i < model.tones.size(); ++i)
                v += model.tones[i].amplitude *
                     std::sin(2.0 * std::numbers::pi * model.tones[i].freq *
                                  static_cast<double>(k) +
                              phases[i]);
            dense[k] = v;
        }
        break;
    }
    }

    AcquisitionRecord rec{TickGrid{pattern.grid.q, total}, std::vector<double>(n, 0.0),
                          std::vector<std::uint8_t>(n, 0), pattern.signal_id};
    for (int p = 0; p < num_periods; ++p)
        for (Tick t : pattern.instants) {
            const auto k = static_cast<std::size_t>(period * p + t);
            rec.mask[k] = 1;
            rec.values[k] = dense[k];
        }
    return rec;
}

/// One estimated correlation lag. `defined` is false when no sample pair
/// realizes the lag; such lags are reported, never silently zeroed.
struct LagEstimate {
    Tick lag = 0;
    double estimate = 0.0;
    std::int64_t count = 0;
    bool defined = false;
};

/// Unbiased lag-domain autocorrelation estimate,
///   r(l) = (1/C(l)) * sum over occupied pairs (k, k+l) of v[k]*v[k+l],
/// for l in [0, lag_max]. Pairs straddling period boundaries count, so for
/// P periods C(l) >= P*z(l).
inline std::vector<LagEstimate> estimate_autocorr(const AcquisitionRecord& rec, Tick lag_max) {
    if (lag_max < 0 || lag_max >= rec.grid.span_ticks)
        raise(ErrorCode::LagOutOfRange, "lag_max must lie in [0, record span)");
    std::vector<std::size_t> occupied;
    for (std::size_t k = 0; k < rec.mask.size(); ++k)
        if (rec.mask[k])
            occupied.push_back(k);

    std::vector<LagEstimate> out(static_cast<std::size_t>(lag_max) + 1);
    for (Tick l = 0; l <= lag_max; ++l) {
        double acc = 0.0;
        std::int64_t count = 0;
        const auto ul = static_cast<std::size_t>(l);
        for (std::size_t k : occupied) {
            const std::size_t j = k + ul;
            if (j < rec.mask.size() && rec.mask[j]) {
                acc += rec.values[k] * rec.values[j];
                ++count;
            }
        }
        auto& e = out[ul];
        e.lag = l;
        e.count = count;
        e.defined = count > 0;
        e.estimate = count > 0 ? acc / static_cast<double>(count)
                               : std::numeric_limits<double>::quiet_NaN();
    }
    return out;
}

/// Cross-correlation estimate r12(l) for l in [-lag_max, lag_max], averaged
/// over realized pairs (k, k+l) occupied in both records.
inline std::vector<LagEstimate> estimate_crosscorr(const AcquisitionRecord& rec1,
                                                   const AcquisitionRecord& rec2, Tick lag_max) {
    if (rec1.grid != rec2.grid)
        raise(ErrorCode::GridMismatch, "cross-correlation needs records on one grid");
    if (lag_max < 0 || lag_max >= rec1.grid.span_ticks)
        raise(ErrorCode::LagOutOfRange, "lag_max must lie in [0, record span)");

    const auto size = rec1.mask.size();
    std::vector<LagEstimate> out(2 * static_cast<std::size_t>(lag_max) + 1);
    for (Tick l = -lag_max; l <= lag_max; ++l) {
        double acc = 0.0;
        std::int64_t count = 0;
        for (std::size_t k = 0; k < size; ++k) {
            const Tick j = static_cast<Tick>(k) + l;
            if (j < 0 || j >= static_cast<Tick>(size))
                continue;
            if (rec1.mask[k] && rec2.mask[static_cast<std::size_t>(j)]) {
                acc += rec1.values[k] * rec2.values[static_cast<std::size_t>(j)];
                ++count;
            }
        }
        auto& e = out[static_cast<std::size_t>(l + lag_max)];
        e.lag = l;
        e.count = count;
        e.defined = count > 0;
        e.estimate = count > 0 ? acc / static_cast<double>(count)
                               : std::numeric_limits<double>::quiet_NaN();
    }
    return out;
}

struct Correlogram {
    std::vector<double> psd;
    bool had_undefined_lags = false; // undefined lags entered the DFT as zero
};

/// Correlogram PSD: DFT of the symmetrized lag-domain estimate on the
/// frequency grid w_k = 2*pi*k/num_freqs. Real by construction.
inline Correlogram correlogram_psd(const std::vector<LagEstimate>& autocorr, int num_freqs) {
    if (num_freqs < 1)
        raise(ErrorCode::InvalidParam, "num_freqs must be >= 1");
    bool any_defined = false;
    for (const auto& e : autocorr)
        any_defined |= e.defined;
    if (autocorr.empty() || !any_defined)
        raise(ErrorCode::UndefinedSpectrum, "no defined lags to transform");

    Correlogram out;
    out.psd.assign(static_cast<std::size_t>(num_freqs), 0.0);
    for (const auto& e : autocorr)
        out.had_undefined_lags |= !e.defined;
    for (int k = 0; k < num_freqs; ++k) {
        const double omega = 2.0 * std::numbers::pi * k / num_freqs;
        double acc = 0.0;
        for (const auto& e : autocorr) {
            if (!e.defined)
                continue;
            const double term = e.estimate * std::cos(omega * static_cast<double>(e.lag));
            acc += e.lag == 0 ? term : 2.0 * term;
        }
        out.psd[static_cast<std::size_t>(k)] = acc;
    }
    return out;
}

} // namespace coprime
