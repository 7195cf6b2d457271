#include <catch2/catch_amalgamated.hpp>

#include <complex>
#include <numeric>
#include <random>

#include "coprime/diffsets.hpp"

using namespace coprime;

namespace {

const std::vector<std::int64_t> kGoldenZ1 = {10, 2, 2, 7, 3, 2, 6, 1, 2, 5, 1, 1,
                                            4,  1, 1, 3, 0, 1, 2, 0, 0, 1, 0, 0};
const std::vector<std::int64_t> kGoldenZ2 = {10, 2, 2, 7, 2, 2, 6, 1, 1, 5, 1, 1,
                                            4,  1, 1, 3, 1, 1, 2, 0, 1, 1, 0, 0};

WeightFunction z_of(const BranchPair& b) {
    const SamplingPattern p = b.merged();
    return weight_brute_force(p, p.grid.span_ticks - 1);
}

} // namespace

TEST_CASE("brute-force weights reproduce the worked example") {
    const auto pair = make_coprime_pair(4, 3);
    const WeightFunction z1 = z_of(gen_extended_x1(pair));
    const WeightFunction z2 = z_of(gen_extended_x2(pair));
    CHECK(z1.weights == kGoldenZ1);
    CHECK(z2.weights == kGoldenZ2);
    CHECK(z1.sum_symmetric() == 100);
    CHECK(z2.sum_symmetric() == 100);
    CHECK(z1.at(-4) == z1.at(4));
}

TEST_CASE("weight of a uniform array is triangular") {
    const auto p = make_pattern(make_grid(1, 7), {0, 2, 4, 6}, "x", "S");
    const WeightFunction w = weight_brute_force(p, 6);
    CHECK(w.weights == std::vector<std::int64_t>{4, 0, 3, 0, 2, 0, 1});

    CHECK_THROWS_AS(weight_brute_force(p, 7), Error); // lag_max must stay below span
}

TEST_CASE("pair-count identity") {
    // Summed over the full symmetric lag range every ordered pair lands in
    // exactly one lag bin, so the total is the squared pattern size.
    std::mt19937_64 rng(3);
    for (int iter = 0; iter < 100; ++iter) {
        const Tick span = 2 + static_cast<Tick>(rng() % 60);
        std::vector<Tick> instants;
        for (Tick t = 0; t < span; ++t)
            if (rng() % 3 == 0)
                instants.push_back(t);
        const auto p = make_pattern(make_grid(1, span), std::move(instants), "x", "S");
        const WeightFunction w = weight_brute_force(p, span - 1);
        CHECK(w.sum_symmetric() == static_cast<std::int64_t>(p.size() * p.size()));
        if (!p.empty())
            CHECK(w.weights[0] == static_cast<std::int64_t>(p.size()));
    }
}

TEST_CASE("closed-form z2 at anchor lags") {
    const auto pair = make_coprime_pair(4, 3);

    const Z2Terms at0 = weight_closed_form_z2_terms(pair, 0);
    CHECK(at0.a == 3);
    CHECK(at0.b == 8);
    CHECK(at0.c == -1);
    CHECK(at0.d == 0);
    CHECK(at0.total() == 10);

    CHECK(weight_closed_form_z2(pair, 16) == 1);
    CHECK(weight_closed_form_z2(pair, -16) == 1);
    CHECK(weight_closed_form_z2(pair, 4) == 2);

    CHECK_THROWS_MATCHES(weight_closed_form_z2(pair, 24), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                             return e.code() == ErrorCode::LagOutOfRange;
                         }));
}

TEST_CASE("closed-form z2 equals brute force") {
    // (5,2) per-lag against the merged-pattern oracle.
    const auto pair = make_coprime_pair(5, 2);
    const WeightFunction z2 = z_of(gen_extended_x2(pair));
    CHECK(weight_closed_form_z2(pair, 0) == z2.weights[0]);
    for (Tick l = -(z2.lag_max); l <= z2.lag_max; ++l)
        CHECK(weight_closed_form_z2(pair, l) == z2.at(l));
}

TEST_CASE("z relations for the worked example") {
    const ZRelationReport rep = verify_z_relations(make_coprime_pair(4, 3));
    CHECK(rep.pass());
    CHECK(rep.sum_z1 == 100);
    CHECK(rep.sum_z2 == 100);
    CHECK(rep.differing_lags == std::vector<Tick>{4, 8, 16, 20});
    CHECK(rep.extra_unique_lags == 4); // +-16, +-20
}

TEST_CASE("z relations hold for other pairs") {
    for (auto [m, n] : {std::pair{5, 3}, {3, 2}, {2, 3}, {8, 5}, {9, 7}, {12, 11}})
        CHECK(verify_z_relations(make_coprime_pair(m, n)).pass());
}

TEST_CASE("difference sets") {
    const auto p = make_pattern(make_grid(1, 24), {12, 16, 20}, "x2", "M");
    const DifferenceSet self = self_differences(p);
    CHECK(self.kind == DiffKind::self);
    CHECK(std::count(self.entries.begin(), self.entries.end(), 0) ==
          static_cast<std::ptrdiff_t>(p.size()));
    CHECK(self.entries.size() == p.size() * p.size());
}

TEST_CASE("cross weights") {
    const auto pair = make_coprime_pair(4, 3);
    const SamplingPattern p1 = gen_extended_x1(pair).merged();

    SECTION("self case matches the symmetric weight function") {
        const WeightFunction w = weight_brute_force(p1, 23);
        const CrossWeightFunction c = cross_weight(p1, p1, 23);
        for (Tick l = -23; l <= 23; ++l)
            CHECK(c.at(l) == w.at(l));
    }

    SECTION("half-shifted cross lags are odd half-period multiples") {
        const BranchPair x2 = gen_tdm_two_sampler_x2(pair);
        const CrossWeightFunction c =
            cross_weight(x2.coarse, x2.fine, x2.coarse.grid.span_ticks - 1);
        std::int64_t seen = 0;
        for (Tick l = -c.lag_max; l <= c.lag_max; ++l)
            if (c.at(l) != 0) {
                CHECK(l % 2 != 0); // odd tick on the q=2 grid, i.e. odd multiple of d/2
                seen += c.at(l);
            }
        CHECK(seen == static_cast<std::int64_t>(x2.coarse.size() * x2.fine.size()));
    }

    SECTION("two singletons") {
        const auto a = make_pattern(make_grid(1, 8), {0}, "a", "A");
        const auto b = make_pattern(make_grid(1, 8), {5}, "b", "B");
        const CrossWeightFunction c = cross_weight(a, b, 7);
        for (Tick l = -7; l <= 7; ++l)
            CHECK(c.at(l) == (l == 5 ? 1 : 0));
    }

    SECTION("reversal identity") {
        std::mt19937_64 rng(17);
        for (int iter = 0; iter < 50; ++iter) {
            const Tick span = 4 + static_cast<Tick>(rng() % 40);
            auto gen = [&] {
                std::vector<Tick> v;
                for (Tick t = 0; t < span; ++t)
                    if (rng() % 3 == 0)
                        v.push_back(t);
                return make_pattern(make_grid(1, span), std::move(v), "x", "S");
            };
            const auto a = gen();
            const auto b = gen();
            const CrossWeightFunction ab = cross_weight(a, b, span - 1);
            const CrossWeightFunction ba = cross_weight(b, a, span - 1);
            for (Tick l = -(span - 1); l <= span - 1; ++l)
                CHECK(ab.at(l) == ba.at(-l));
        }
    }

    SECTION("grid mismatch is rejected") {
        const auto a = make_pattern(make_grid(1, 8), {0}, "a", "A");
        const auto b = make_pattern(make_grid(2, 8), {5}, "b", "B");
        CHECK_THROWS_AS(cross_weight(a, b, 7), Error);
    }
}

TEST_CASE("bias window") {
    const auto pair = make_coprime_pair(4, 3);
    const WeightFunction z2 = z_of(gen_extended_x2(pair));

    SECTION("DC bin equals the symmetric weight sum") {
        const std::vector<double> b = bias_window(z2, 64);
        CHECK(b[0] == Catch::Approx(100.0).epsilon(1e-12));
    }

    SECTION("single sample gives a flat window") {
        const auto p = make_pattern(make_grid(1, 4), {2}, "x", "S");
        for (double v : bias_window(weight_brute_force(p, 0), 16))
            CHECK(v == Catch::Approx(1.0).margin(1e-12));
    }

    SECTION("matches an independent complex DFT, imaginary part vanishes") {
        const WeightFunction z1 = z_of(gen_extended_x1(pair));
        const int nf = 128;
        const std::vector<double> b = bias_window(z1, nf);
        CHECK(b[0] == Catch::Approx(100.0).epsilon(1e-12));
        for (int k = 0; k < nf; ++k) {
            std::complex<double> acc = 0.0;
            for (Tick l = -z1.lag_max; l <= z1.lag_max; ++l) {
                const double omega = 2.0 * std::numbers::pi * k / nf;
                acc += static_cast<double>(z1.at(l)) *
                       std::exp(std::complex<double>(0.0, -omega * static_cast<double>(l)));
            }
            CHECK(std::abs(acc.imag()) < 1e-12);
            CHECK(b[static_cast<std::size_t>(k)] == Catch::Approx(acc.real()).margin(1e-9));
        }
        // even about omega = pi
        for (int k = 1; k < nf; ++k)
            CHECK(b[static_cast<std::size_t>(k)] ==
                  Catch::Approx(b[static_cast<std::size_t>(nf - k)]).margin(1e-9));
    }
}
