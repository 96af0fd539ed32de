#pragma once

#include <span>
#include <vector>

#include "bvlab/grid.hpp"

namespace bvlab {

/// Finite sum of grid functions living at different dyadic levels.
///
/// Deeply multiscale objects (a bump at level 6 plus a copy concentrated at
/// level 14) cannot be flattened onto one grid under the memory guard. A
/// DyadicSum keeps the terms separate and only flattens clusters of terms
/// whose boxes (grown by one cell) touch. Distinct clusters have disjoint
/// supports with no shared forward-difference stencil, so norms and total
/// variation add over clusters.
class DyadicSum {
public:
    explicit DyadicSum(int dim);
    explicit DyadicSum(GridFunction term);
    DyadicSum(int dim, std::vector<GridFunction> terms);

    int dim() const { return dim_; }
    std::span<const GridFunction> terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }
    int finest_level() const;

    DyadicSum plus(GridFunction term) const;
    DyadicSum plus(const DyadicSum& other, double coefficient = 1.0) const;

    double operator()(const Point& x) const;

    /// Flattened clusters with pairwise separated supports.
    std::vector<GridFunction> clusters(const Limits& limits = {}) const;
    /// The whole sum on one grid at the finest level.
    GridFunction flatten(const Limits& limits = {}) const;
    /// Exact restriction to `box`, flattened at the finest level among intersecting terms (at least box.level).
    GridFunction crop(const CellBox& box, const Limits& limits = {}) const;

    double l1_norm(const Limits& limits = {}) const;

private:
    int dim_;
    std::vector<GridFunction> terms_;
};

}  // namespace bvlab
