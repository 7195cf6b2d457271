// Command-line surface of the co-prime TDM sampling toolkit:
//   pattern | weights | estimate | schedule | verify
// Exit codes: 0 success, 2 validation failure, 1 internal error.

#include <chrono>
#include <complex>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <optional>
#include <random>

#include <CLI11.hpp>

#include "coprime/coprime.hpp"

namespace {

using namespace coprime;

int log_level() {
    const char* env = std::getenv("COPRIME_TDM_LOG");
    if (!env)
        return 0;
    const std::string v(env);
    if (v == "debug")
        return 2;
    if (v == "info")
        return 1;
    return 0;
}

void log_info(const std::string& msg) {
    if (log_level() >= 1)
        std::cerr << "[coprime-tdm] " << msg << "\n";
}

void write_file(const std::string& path, const std::function<void(std::ostream&)>& fn) {
    std::ofstream os(path, std::ios::binary);
    if (!os)
        raise(ErrorCode::InvalidParam, "cannot open output file '" + path + "'");
    fn(os);
    log_info("wrote " + path);
}

/// Registers the shared experiment flags on one subcommand.
struct Flags {
    ExperimentConfig cfg;
    std::string config_path;

    void attach(CLI::App* cmd) {
        cmd->add_option("--m", cfg.m, "co-prime factor M");
        cmd->add_option("--n", cfg.n, "co-prime factor N");
        cmd->add_option("--d", cfg.d, "Nyquist period d (seconds)");
        cmd->add_option("--scheme", cfg.scheme,
                        "nyquist-tdm | extended | extended-tdm-2sampler | exsca");
        cmd->add_option("--signal", cfg.signal, "signal index (1-based)");
        cmd->add_option("--ex", cfg.ex, "ExSCA sparsity factor");
        cmd->add_option("--s11", cfg.s11, "ExSCA sampler-1 shift, Nyquist periods");
        cmd->add_option("--s12", cfg.s12, "ExSCA sampler-2 shift, Nyquist periods");
        cmd->add_option("--span", cfg.span, "window length in Nyquist periods");
        cmd->add_option("--periods", cfg.periods, "number of pattern periods to acquire");
        cmd->add_option("--seed", cfg.seed, "RNG seed");
        cmd->add_option("--lag-max", cfg.lag_max, "largest lag to estimate (ticks)");
        cmd->add_option("--num-freqs", cfg.num_freqs, "frequency bins for spectra");
        cmd->add_option("--out", cfg.out, "output path prefix (stdout when omitted)");
        cmd->add_option("--config", config_path,
                        "JSON experiment config; values in it override flags");
        cmd->add_option("--model", cfg.model_kind, "white-noise | ar1 | sinusoids");
        cmd->add_option("--variance", cfg.variance, "model variance");
        cmd->add_option("--pole", cfg.pole, "AR(1) pole");
    }

    ExperimentConfig resolve() const {
        if (config_path.empty())
            return cfg;
        std::ifstream is(config_path);
        if (!is)
            raise(ErrorCode::BadConfig, "cannot read config file '" + config_path + "'");
        nlohmann::json j;
        try {
            is >> j;
        } catch (const nlohmann::json::exception& e) {
            raise(ErrorCode::BadConfig, std::string("config parse error: ") + e.what());
        }
        return parse_experiment_config(j, cfg);
    }
};

struct SchemePatterns {
    std::vector<SamplingPattern> all;          // branch patterns tagged by sampler
    std::optional<SamplingPattern> requested;  // merged pattern of cfg.signal
};

/// Builds the branch patterns of every signal of the configured scheme and
/// the merged pattern of the requested signal.
SchemePatterns build_scheme(const ExperimentConfig& cfg) {
    const CoprimePair pair = make_coprime_pair(cfg.m, cfg.n, cfg.d);
    SchemePatterns out;

    if (cfg.scheme == "nyquist-tdm") {
        const Tick span = cfg.span > 0 ? cfg.span : 2 * Tick{cfg.m} * cfg.n;
        SamplingPattern x1 = gen_uniform(2, 0, 2 * span, 2, "x1", "S");
        SamplingPattern x2 = gen_uniform(2, 1, 2 * span, 2, "x2", "S");
        if (cfg.signal < 1 || cfg.signal > 2)
            raise(ErrorCode::InvalidParam, "nyquist-tdm defines signals 1 and 2");
        out.requested = cfg.signal == 1 ? x1 : x2;
        out.all = {std::move(x1), std::move(x2)};
        return out;
    }
    if (cfg.scheme == "extended" || cfg.scheme == "extended-tdm-2sampler") {
        const bool two_sampler = cfg.scheme == "extended-tdm-2sampler";
        BranchPair x1 = two_sampler ? gen_tdm_two_sampler_x1(pair) : gen_extended_x1(pair);
        BranchPair x2 = two_sampler ? gen_tdm_two_sampler_x2(pair) : gen_extended_x2(pair);
        if (!two_sampler) {
            // three physical samplers: the shared M sampler plus one
            // N-spaced sampler per signal
            x1.fine.sampler_id = "N1";
            x2.fine.sampler_id = "N2";
        }
        if (cfg.signal < 1 || cfg.signal > 2)
            raise(ErrorCode::InvalidParam, "extended schemes define signals 1 and 2");
        out.requested = (cfg.signal == 1 ? x1 : x2).merged();
        out.all = {x1.coarse, x1.fine, x2.coarse, x2.fine};
        return out;
    }
    // exsca
    if (cfg.span <= 0)
        raise(ErrorCode::InvalidParam, "exsca needs an explicit --span");
    const ExscaConfig ex = make_exsca_config(pair, cfg.ex, cfg.s11, cfg.s12);
    const int signals = std::max(2, std::min(cfg.ex, std::max(cfg.signal, 2)));
    for (int s = 1; s <= signals; ++s) {
        BranchPair b = gen_exsca(ex, s, cfg.span);
        if (s == cfg.signal)
            out.requested = b.merged();
        out.all.push_back(std::move(b.coarse));
        out.all.push_back(std::move(b.fine));
    }
    if (!out.requested)
        raise(ErrorCode::InvalidParam, "signal index outside the configured scheme");
    return out;
}

int cmd_pattern(const ExperimentConfig& cfg) {
    const SchemePatterns pats = build_scheme(cfg);
    const SamplingPattern& p = *pats.requested;
    const nlohmann::json j = pattern_to_json(p);
    if (cfg.out.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        write_file(cfg.out + ".json", [&](std::ostream& os) { os << j.dump(2) << "\n"; });
        write_file(cfg.out + ".csv", [&](std::ostream& os) { write_indicator_csv(os, p); });
    }
    return 0;
}

int cmd_weights(const ExperimentConfig& cfg) {
    const CoprimePair pair = make_coprime_pair(cfg.m, cfg.n, cfg.d);
    const ZRelationReport rep = verify_z_relations(pair);
    if (cfg.out.empty()) {
        write_weights_csv(std::cout, pair);
        write_relation_report(std::cerr, rep);
    } else {
        write_file(cfg.out + ".csv", [&](std::ostream& os) { write_weights_csv(os, pair); });
        write_file(cfg.out + ".relations.txt",
                   [&](std::ostream& os) { write_relation_report(os, rep); });
    }
    return 0;
}

int cmd_estimate(const ExperimentConfig& cfg) {
    const SchemePatterns pats = build_scheme(cfg);
    const SamplingPattern& p = *pats.requested;
    const SignalModel model = cfg.model();
    const AcquisitionRecord rec = acquire(model, p, cfg.periods);
    const Tick lag_max = cfg.lag_max >= 0 ? cfg.lag_max : p.grid.span_ticks - 1;
    const auto est = estimate_autocorr(rec, lag_max);

    if (cfg.out.empty()) {
        write_estimate_csv(std::cout, est, &model);
        if (cfg.num_freqs > 0)
            raise(ErrorCode::InvalidParam, "--num-freqs output needs --out");
    } else {
        write_file(cfg.out + ".csv", [&](std::ostream& os) { write_estimate_csv(os, est, &model); });
        if (cfg.num_freqs > 0) {
            const Correlogram c = correlogram_psd(est, cfg.num_freqs);
            if (c.had_undefined_lags)
                log_info("undefined lags entered the correlogram as zero");
            write_file(cfg.out + ".psd.csv", [&](std::ostream& os) { write_psd_csv(os, c.psd); });
        }
    }
    return 0;
}

int cmd_schedule(const ExperimentConfig& cfg) {
    const SchemePatterns pats = build_scheme(cfg);
    const auto schedules = build_schedule(pats.all);
    const nlohmann::json j = schedule_to_json(schedules);
    if (cfg.out.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        write_file(cfg.out + ".json", [&](std::ostream& os) { os << j.dump(2) << "\n"; });
        write_file(cfg.out + ".waveform.txt",
                   [&](std::ostream& os) { write_waveform(os, schedules); });
    }
    return 0;
}

// ---------------------------------------------------------------------------
// verify: the golden self-checks (worked-example patterns and weights, the
// closed form, the lag relations, the ExSCA example, the bias-window
// anchor). Prints one line per check, exits nonzero on any mismatch.

struct VerifyRun {
    int failures = 0;

    void check(const std::string& name, bool ok, const std::string& detail = "") {
        std::cout << (ok ? "PASS" : "FAIL") << "  " << name;
        if (!ok && !detail.empty())
            std::cout << "  (" << detail << ")";
        std::cout << "\n";
        failures += ok ? 0 : 1;
    }
};

int cmd_verify() {
    using Clock = std::chrono::steady_clock;
    VerifyRun run;
    const CoprimePair pair = make_coprime_pair(4, 3);

    {
        const auto t0 = Clock::now();
        const std::vector<std::uint8_t> p1 = {1, 0, 0, 1, 1, 0, 1, 0, 1, 1, 0, 0,
                                              1, 0, 0, 1, 0, 0, 1, 0, 0, 1, 0, 0};
        const std::vector<std::uint8_t> p2 = {1, 0, 0, 1, 0, 0, 1, 0, 0, 1, 0, 0,
                                              1, 0, 0, 1, 1, 0, 1, 0, 1, 1, 0, 0};
        const bool ok = to_indicator(gen_extended_x1(pair).merged()) == p1 &&
                        to_indicator(gen_extended_x2(pair).merged()) == p2;
        const double ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
        run.check("golden patterns p1/p2 (4,3)", ok && ms < 1.0,
                  ok ? "runtime over budget" : "indicator mismatch");
    }
    {
        const auto t0 = Clock::now();
        const std::vector<std::int64_t> z1g = {10, 2, 2, 7, 3, 2, 6, 1, 2, 5, 1, 1,
                                               4,  1, 1, 3, 0, 1, 2, 0, 0, 1, 0, 0};
        const std::vector<std::int64_t> z2g = {10, 2, 2, 7, 2, 2, 6, 1, 1, 5, 1, 1,
                                               4,  1, 1, 3, 1, 1, 2, 0, 1, 1, 0, 0};
        const WeightFunction z1 = weight_brute_force(gen_extended_x1(pair).merged(), 23);
        const WeightFunction z2 = weight_brute_force(gen_extended_x2(pair).merged(), 23);
        const bool ok = z1.weights == z1g && z2.weights == z2g && z1.sum_symmetric() == 100 &&
                        z2.sum_symmetric() == 100;
        const double ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
        run.check("golden weights z1/z2, sum z = 100", ok && ms < 1.0,
                  ok ? "runtime over budget" : "weight mismatch");
    }
    {
        const auto t0 = Clock::now();
        bool ok = true;
        std::string detail;
        for (int m = 2; m <= 12 && ok; ++m)
            for (int n = 2; n <= 12 && ok; ++n) {
                if (m == n || std::gcd(m, n) != 1)
                    continue;
                const CoprimePair pr = make_coprime_pair(m, n);
                const SamplingPattern merged = gen_extended_x2(pr).merged();
                const WeightFunction bf = weight_brute_force(merged, 2 * m * n - 1);
                for (Tick l = -(2 * m * n - 1); l <= 2 * m * n - 1 && ok; ++l)
                    if (weight_closed_form_z2(pr, l) != bf.at(l)) {
                        ok = false;
                        detail = "mismatch at (" + std::to_string(m) + "," + std::to_string(n) +
                                 "), l=" + std::to_string(l);
                    }
            }
        const double sec = std::chrono::duration<double>(Clock::now() - t0).count();
        run.check("closed-form z2 equals brute force for all M,N <= 12", ok && sec < 5.0,
                  ok ? "runtime over budget" : detail);
    }
    {
        const auto t0 = Clock::now();
        const ZRelationReport rep = verify_z_relations(pair);
        bool ok = rep.pass() && rep.sum_z1 == 100 && rep.sum_z2 == 100 &&
                  rep.differing_lags == std::vector<Tick>{4, 8, 16, 20} &&
                  rep.extra_unique_lags == 4;
        std::mt19937_64 rng(20260810);
        for (int i = 0; i < 20; ++i) {
            int m = 0, n = 0;
            do {
                m = 2 + static_cast<int>(rng() % 19);
                n = 2 + static_cast<int>(rng() % 19);
            } while (m == n || std::gcd(m, n) != 1);
            ok &= verify_z_relations(make_coprime_pair(m, n)).pass();
        }
        const double sec = std::chrono::duration<double>(Clock::now() - t0).count();
        run.check("z1/z2 lag relations, 20 random pairs", ok && sec < 5.0,
                  ok ? "runtime over budget" : "relation failure");
    }
    {
        const auto t0 = Clock::now();
        const ExscaConfig cfg = make_exsca_config(pair, 2, 0, 1);
        bool ok = cfg.s21_ticks() == 4 && cfg.s22_ticks() == 4;
        const auto rep = check_exsca_overlap(cfg, 48);
        const auto& ov = rep.ticks_for(2);
        ok &= !ov.empty() && std::find(ov.begin(), ov.end(), 4) != ov.end();
        ok &= ov == std::vector<Tick>{4, 28};
        const ShiftSearchResult res = search_shift(pair, 2, 48);
        ok &= !res.candidate(1).feasible && res.best_s12 != 1;
        const double sec = std::chrono::duration<double>(Clock::now() - t0).count();
        run.check("ExSCA shifts s21=s22=4, overlap {4,28}, s12=1 excluded", ok && sec < 1.0,
                  ok ? "runtime over budget" : "ExSCA mismatch");
    }
    {
        const WeightFunction z2 = weight_brute_force(gen_extended_x2(pair).merged(), 23);
        const std::vector<double> b = bias_window(z2, 256);
        bool ok = std::abs(b[0] - 100.0) <= 1e-9 * 100.0;
        double max_imag = 0.0;
        for (int k = 0; k < 256; ++k) {
            std::complex<double> acc = 0.0;
            const double omega = 2.0 * std::numbers::pi * k / 256.0;
            for (Tick l = -23; l <= 23; ++l)
                acc += static_cast<double>(z2.at(l)) *
                       std::exp(std::complex<double>(0.0, -omega * static_cast<double>(l)));
            max_imag = std::max(max_imag, std::abs(acc.imag()));
            ok &= std::abs(acc.real() - b[static_cast<std::size_t>(k)]) < 1e-9;
        }
        ok &= max_imag < 1e-12;
        run.check("bias window B(0) = 100, imaginary residue < 1e-12", ok);
    }

    std::cout << (run.failures == 0 ? "verify: all checks passed"
                                    : "verify: " + std::to_string(run.failures) + " check(s) FAILED")
              << "\n";
    return run.failures == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Co-prime time-division-multiplexed sub-Nyquist sampling toolkit"};
    app.require_subcommand(1);

    Flags pattern_flags, weights_flags, estimate_flags, schedule_flags;
    CLI::App* pattern = app.add_subcommand("pattern", "generate sampling patterns");
    pattern_flags.attach(pattern);
    CLI::App* weights = app.add_subcommand("weights", "weight functions and lag relations");
    weights_flags.attach(weights);
    CLI::App* estimate = app.add_subcommand("estimate", "simulate acquisition and estimate");
    estimate_flags.attach(estimate);
    CLI::App* schedule = app.add_subcommand("schedule", "emit TDM switch schedules");
    schedule_flags.attach(schedule);
    app.add_subcommand("verify", "run the golden self-checks");

    CLI11_PARSE(app, argc, argv);

    try {
        if (pattern->parsed())
            return cmd_pattern(pattern_flags.resolve());
        if (weights->parsed())
            return cmd_weights(weights_flags.resolve());
        if (estimate->parsed())
            return cmd_estimate(estimate_flags.resolve());
        if (schedule->parsed())
            return cmd_schedule(schedule_flags.resolve());
        return cmd_verify();
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}
