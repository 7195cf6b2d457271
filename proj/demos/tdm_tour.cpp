// A short tour of the library: generate the worked-example patterns,
// compare the two weight-function routes, inspect the ExSCA hazard, and run
// a small estimation experiment.

#include <iostream>

#include "coprime/coprime.hpp"

int main() {
    using namespace coprime;
    const CoprimePair pair = make_coprime_pair(4, 3);

    // The two multiplexed signals of the extended co-prime sampler share
    // the N-spaced sampler; the M-spaced sampler alternates between them.
    const SamplingPattern p1 = gen_extended_x1(pair).merged();
    const SamplingPattern p2 = gen_extended_x2(pair).merged();
    std::cout << "p1 instants:";
    for (Tick t : p1.instants)
        std::cout << " " << t;
    std::cout << "\np2 instants:";
    for (Tick t : p2.instants)
        std::cout << " " << t;
    std::cout << "\n\n";

    // Contributor counts per lag, brute force vs the closed form.
    const WeightFunction z2 = weight_brute_force(p2, 23);
    std::cout << "lag  z2  closed-form\n";
    for (Tick l = 0; l <= 6; ++l)
        std::cout << l << "    " << z2.at(l) << "   " << weight_closed_form_z2(pair, l) << "\n";
    std::cout << "sum over all lags: " << z2.sum_symmetric() << "\n\n";

    // An ExSCA parameter choice that makes the second signal's samplers coincide.
    const ExscaConfig cfg = make_exsca_config(pair, 2, 0, 1);
    const auto overlap = check_exsca_overlap(cfg, 48);
    std::cout << "ExSCA ex=2 s12=1: second-signal coincidences at";
    for (Tick t : overlap.ticks_for(2))
        std::cout << " " << t;
    const ShiftSearchResult better = search_shift(pair, 2, 48);
    std::cout << "\nbetter shift: s12=" << better.best_s12 << "\n\n";

    // Estimate an AR(1) autocorrelation through the multiplexed pattern.
    const auto est = estimate_autocorr(acquire(ar1_model(0.9, 1.0, 7), p2, 2000), 5);
    std::cout << "lag  estimate  analytic\n";
    for (const auto& e : est)
        std::cout << e.lag << "    " << e.estimate << "    "
                  << ar1_model(0.9, 1.0, 7).analytic_autocorr(e.lag) << "\n";
    return 0;
}
