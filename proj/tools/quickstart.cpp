// Smallest end-to-end use of the library: one 4x4 swirl reservoir at
// 10 Gbps, header 101, trained with ridge regression and with
// nonlinearity inversion.

#include <iostream>

#include "photorc/photorc.hpp"

int main() {
    photorc::ExperimentConfig cfg = photorc::ci_profile();
    cfg.n_reservoirs = 1;

    for (const char* trainer : {"ridge", "nlinv"}) {
        const auto r = photorc::run_single(cfg, 10.0, "101", trainer);
        std::cout << trainer << ": test BER " << photorc::report_ber(r.test_ber, r.floor) << ", " << r.presentations
                  << " presentations\n";
    }
}
