#pragma once

#include <algorithm>
#include <vector>

#include "hpdet/errors.hpp"

namespace hpdet {

// Finite sorted multiset of nonzero reals on the punctured line R*.
struct PointConfiguration {
    std::vector<double> points;  // sorted ascending, no zeros

    static PointConfiguration from(std::vector<double> pts) {
        for (double x : pts) {
            if (x == 0.0) throw DomainError("PointConfiguration: zero point");
        }
        std::sort(pts.begin(), pts.end());
        return {std::move(pts)};
    }
};

}  // namespace hpdet
