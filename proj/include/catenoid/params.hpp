#pragma once

#include <stdexcept>

namespace catenoid {

// Physical constants of the model.  Defaults are the reference setup
// hbar = m = 1, R = 1/2.
struct SystemParams {
    double hbar = 1.0;
    double mass = 1.0;
    double R = 0.5;

    void validate() const {
        if (!(hbar > 0.0)) throw std::invalid_argument("SystemParams: hbar must be > 0");
        if (!(mass > 0.0)) throw std::invalid_argument("SystemParams: mass must be > 0");
        if (!(R > 0.0)) throw std::invalid_argument("SystemParams: R must be > 0");
    }
};

} // namespace catenoid
