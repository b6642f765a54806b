// One certified inequality instance.
#pragma once

#include <string>

#include "lltkit/numeric.hpp"

namespace lltkit {

struct bound_report {
    std::string name;
    bool hypothesis_ok = true;
    std::string region;
    double measured = quiet_nan();
    double bound = quiet_nan();

    double margin() const { return bound - measured; }
    // pass requires both an applicable hypothesis and measured <= bound + 1e-12
    bool pass() const { return hypothesis_ok && margin() >= -kCheckTol; }

    static bound_report inapplicable(std::string name, std::string why) {
        bound_report r;
        r.name = std::move(name);
        r.hypothesis_ok = false;
        r.region = std::move(why);
        return r;
    }
};

}  // namespace lltkit
