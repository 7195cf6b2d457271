#pragma once

#include <charconv>
#include <cmath>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "coprime/core.hpp"
#include "coprime/diffsets.hpp"
#include "coprime/estimator.hpp"
#include "coprime/scheduler.hpp"

namespace coprime {

/// Locale-independent shortest round-trip formatting, so CSV output is
/// byte-identical across runs and environments.
inline std::string format_double(double v) {
    if (std::isnan(v))
        return "nan";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

inline nlohmann::json pattern_to_json(const SamplingPattern& p) {
    return nlohmann::json{{"grid", {{"q", p.grid.q}, {"span_ticks", p.grid.span_ticks}}},
                          {"signal_id", p.signal_id},
                          {"sampler_id", p.sampler_id},
                          {"instants", p.instants}};
}

inline SamplingPattern pattern_from_json(const nlohmann::json& j) {
    if (!j.contains("grid") || !j.contains("signal_id") || !j.contains("sampler_id") ||
        !j.contains("instants"))
        raise(ErrorCode::BadConfig, "pattern JSON needs grid, signal_id, sampler_id, instants");
    const auto& g = j.at("grid");
    return make_pattern(make_grid(g.at("q").get<int>(), g.at("span_ticks").get<Tick>()),
                        j.at("instants").get<std::vector<Tick>>(),
                        j.at("signal_id").get<std::string>(),
                        j.at("sampler_id").get<std::string>());
}

inline void write_indicator_csv(std::ostream& os, const SamplingPattern& p) {
    os << "tick,indicator\n";
    const auto ind = to_indicator(p);
    for (std::size_t k = 0; k < ind.size(); ++k)
        os << k << "," << int(ind[k]) << "\n";
}

/// lag, z1, z2, closed_form_z2, match table for one co-prime pair over
/// l in [0, 2MN-1].
inline void write_weights_csv(std::ostream& os, const CoprimePair& pair) {
    const Tick lag_max = 2 * Tick{pair.m} * pair.n - 1;
    const WeightFunction z1 = weight_brute_force(gen_extended_x1(pair).merged(), lag_max);
    const WeightFunction z2 = weight_brute_force(gen_extended_x2(pair).merged(), lag_max);
    os << "lag,z1,z2,closed_form_z2,match\n";
    for (Tick l = 0; l <= lag_max; ++l) {
        const std::int64_t cf = weight_closed_form_z2(pair, l);
        const std::int64_t bf = z2.weights[static_cast<std::size_t>(l)];
        os << l << "," << z1.weights[static_cast<std::size_t>(l)] << "," << bf << "," << cf << ","
           << (cf == bf ? "true" : "false") << "\n";
    }
}

inline void write_relation_report(std::ostream& os, const ZRelationReport& rep) {
    os << "pair: (" << rep.pair.m << ", " << rep.pair.n << ")\n";
    os << "z1 = z2 + 1 at l = +-Mn, n in [1, N-1]: " << (rep.plus_one_ok ? "pass" : "FAIL") << "\n";
    os << "z1 = z2 - 1 at l = +-Mn, n in [N+1, 2N-1]: " << (rep.minus_one_ok ? "pass" : "FAIL")
       << "\n";
    os << "z1 = z2 elsewhere: " << (rep.elsewhere_equal ? "pass" : "FAIL") << "\n";
    os << "sum z1 = " << rep.sum_z1 << ", sum z2 = " << rep.sum_z2 << ": "
       << (rep.sums_equal ? "pass" : "FAIL") << "\n";
    os << "lags covered only by z2 (symmetric count): " << rep.extra_unique_lags << " expected "
       << 2 * (rep.pair.n - 1) << ": " << (rep.extra_lag_count_ok ? "pass" : "FAIL") << "\n";
    os << "differing lags (l >= 0):";
    for (Tick l : rep.differing_lags)
        os << " " << l;
    os << "\n";
    os << "overall: " << (rep.pass() ? "pass" : "FAIL") << "\n";
}

/// lag, estimate, count, analytic_truth rows. Undefined lags keep an empty
/// estimate field. The truth column is blank when no model is given.
inline void write_estimate_csv(std::ostream& os, const std::vector<LagEstimate>& estimates,
                               const SignalModel* truth_model = nullptr) {
    os << "lag,estimate,count,analytic_truth\n";
    for (const auto& e : estimates) {
        os << e.lag << ",";
        if (e.defined)
            os << format_double(e.estimate);
        os << "," << e.count << ",";
        if (truth_model)
            os << format_double(truth_model->analytic_autocorr(e.lag));
        os << "\n";
    }
}

inline void write_psd_csv(std::ostream& os, const std::vector<double>& psd) {
    os << "bin,omega,value\n";
    for (std::size_t k = 0; k < psd.size(); ++k) {
        const double omega = 2.0 * std::numbers::pi * static_cast<double>(k) /
                             static_cast<double>(psd.size());
        os << k << "," << format_double(omega) << "," << format_double(psd[k]) << "\n";
    }
}

inline nlohmann::json schedule_to_json(const std::vector<SwitchSchedule>& schedules) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& s : schedules) {
        nlohmann::json events = nlohmann::json::array();
        for (const auto& e : s.events)
            events.push_back({{"t", e.time},
                              {"position", e.position},
                              {"hold", e.hold},
                              {"transition", e.transition}});
        out.push_back({{"switch_id", s.switch_id}, {"events", events}});
    }
    return out;
}

/// One line per tick with every switch's state: the held position (with a
/// trailing '*' when a sample fires), '~' while transitioning, '-' idle.
/// Schedules that were refined to different resolutions are displayed on
/// their finest common grid.
inline void write_waveform(std::ostream& os, const std::vector<SwitchSchedule>& schedules) {
    if (schedules.empty())
        return;
    Tick span = 0;
    int finest_q = 1;
    for (const auto& s : schedules)
        finest_q = std::max(finest_q, s.grid.q);
    for (const auto& s : schedules)
        span = std::max(span, s.grid.span_ticks * (finest_q / s.grid.q));
    for (Tick t = 0; t < span; ++t) {
        os << t;
        for (const auto& s : schedules) {
            const Tick f = finest_q / s.grid.q;
            std::string state = "-";
            for (const auto& e : s.events) {
                if (t >= e.time * f && t < (e.time + e.hold) * f) {
                    state = e.position;
                    if (t % f == 0 && std::find(e.sample_ticks.begin(), e.sample_ticks.end(),
                                                t / f) != e.sample_ticks.end())
                        state += "*";
                    break;
                }
                if (t >= (e.time + e.hold) * f && t < (e.time + e.hold + e.transition) * f) {
                    state = "~";
                    break;
                }
            }
            os << "\t" << s.switch_id << "=" << state;
        }
        os << "\n";
    }
}

/// Experiment definition shared by the CLI subcommands. A JSON config file
/// populates the same fields as the command-line flags; unknown keys are
/// rejected so a typo cannot silently fall back to a default.
struct ExperimentConfig {
    int m = 4;
    int n = 3;
    double d = 1.0;
    std::string scheme = "extended"; // nyquist-tdm | extended | extended-tdm-2sampler | exsca
    int signal = 1;
    int ex = 1;
    Tick s11 = 0;
    Tick s12 = 0;
    Tick span = 0; // Nyquist periods; 0 means the scheme default (2MN)
    std::string model_kind = "white-noise"; // white-noise | ar1 | sinusoids
    double variance = 1.0;
    double pole = 0.0;
    std::vector<SignalModel::Tone> tones;
    int periods = 1;
    std::uint64_t seed = 0;
    Tick lag_max = -1; // -1 means span-1
    int num_freqs = 0; // 0 means no spectrum output
    std::string out;

    SignalModel model() const {
        if (model_kind == "white-noise")
            return white_noise_model(variance, seed);
        if (model_kind == "ar1")
            return ar1_model(pole, variance, seed);
        if (model_kind == "sinusoids")
            return sinusoid_model(tones, variance, seed);
        raise(ErrorCode::BadConfig, "unknown model kind '" + model_kind + "'");
    }
};

namespace detail {

inline void reject_unknown_keys(const nlohmann::json& j, std::initializer_list<const char*> known,
                                const std::string& where) {
    for (const auto& [key, value] : j.items()) {
        bool ok = false;
        for (const char* k : known)
            ok |= key == k;
        if (!ok)
            raise(ErrorCode::BadConfig, "unknown key '" + key + "' in " + where);
    }
}

template <typename T>
void read_if(const nlohmann::json& j, const char* key, T& out) {
    if (j.contains(key))
        out = j.at(key).get<T>();
}

} // namespace detail

/// Parses (and schema-validates) an experiment config, overlaying the
/// values present in `j` on top of `base`.
inline ExperimentConfig parse_experiment_config(const nlohmann::json& j,
                                                ExperimentConfig base = {}) {
    if (!j.is_object())
        raise(ErrorCode::BadConfig, "config root must be a JSON object");
    detail::reject_unknown_keys(j,
                                {"pair", "scheme", "signal", "ex", "s11", "s12", "span", "model",
                                 "periods", "seed", "lag_max", "num_freqs", "out"},
                                "config");
    ExperimentConfig cfg = std::move(base);
    if (j.contains("pair")) {
        const auto& p = j.at("pair");
        detail::reject_unknown_keys(p, {"m", "n", "d"}, "pair");
        detail::read_if(p, "m", cfg.m);
        detail::read_if(p, "n", cfg.n);
        detail::read_if(p, "d", cfg.d);
    }
    detail::read_if(j, "scheme", cfg.scheme);
    detail::read_if(j, "signal", cfg.signal);
    detail::read_if(j, "ex", cfg.ex);
    detail::read_if(j, "s11", cfg.s11);
    detail::read_if(j, "s12", cfg.s12);
    detail::read_if(j, "span", cfg.span);
    if (j.contains("model")) {
        const auto& m = j.at("model");
        detail::reject_unknown_keys(m, {"kind", "variance", "pole", "tones"}, "model");
        detail::read_if(m, "kind", cfg.model_kind);
        detail::read_if(m, "variance", cfg.variance);
        detail::read_if(m, "pole", cfg.pole);
        if (m.contains("tones")) {
            cfg.tones.clear();
            for (const auto& t : m.at("tones")) {
                detail::reject_unknown_keys(t, {"amplitude", "freq"}, "tone");
                SignalModel::Tone tone;
                detail::read_if(t, "amplitude", tone.amplitude);
                detail::read_if(t, "freq", tone.freq);
                cfg.tones.push_back(tone);
            }
        }
    }
    detail::read_if(j, "periods", cfg.periods);
    detail::read_if(j, "seed", cfg.seed);
    detail::read_if(j, "lag_max", cfg.lag_max);
    detail::read_if(j, "num_freqs", cfg.num_freqs);
    detail::read_if(j, "out", cfg.out);

    if (cfg.scheme != "nyquist-tdm" && cfg.scheme != "extended" &&
        cfg.scheme != "extended-tdm-2sampler" && cfg.scheme != "exsca")
        raise(ErrorCode::BadConfig, "unknown scheme '" + cfg.scheme + "'");
    return cfg;
}

} // namespace coprime
