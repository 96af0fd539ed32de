#pragma once

#include <doctest.h>

#include <cmath>
#include <functional>

#include "bvlab/errors.hpp"
#include "bvlab/grid.hpp"

namespace testing {

inline double rel_diff(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

inline bool throws_kind(bvlab::ErrorKind kind, const std::function<void()>& f) {
    try {
        f();
    } catch (const bvlab::Error& e) {
        return e.kind() == kind;
    }
    return false;
}

/// value * indicator of the cell block [lo, hi) at `level`.
inline bvlab::GridFunction block(int dim, int level, bvlab::CellIndex lo, bvlab::CellIndex hi, double value) {
    const auto box = bvlab::CellBox::make(dim, level, lo, hi);
    return bvlab::GridFunction(box, std::vector<double>(box.count(), value));
}

}  // namespace testing
