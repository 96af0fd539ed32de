#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "bvlab/errors.hpp"

namespace bvlab {

inline constexpr int kMaxDim = 3;

using CellIndex = std::array<std::int64_t, kMaxDim>;
using Point = std::array<double, kMaxDim>;

/// Memory guard for every operation that flattens data onto a single grid.
struct Limits {
    std::size_t max_cells = std::size_t{1} << 27;
};

void check_dim(int dim);

/// Half-open block of cells [lo, hi) at a dyadic level. Axes >= dim are unused (lo = 0, hi = 1).
struct CellBox {
    int dim = 1;
    int level = 0;
    CellIndex lo{0, 0, 0};
    CellIndex hi{1, 1, 1};

    static CellBox make(int dim, int level, const CellIndex& lo, const CellIndex& hi);

    std::int64_t extent(int axis) const { return hi[axis] - lo[axis]; }
    bool empty() const;
    std::size_t count() const;
    bool contains(const CellIndex& cell) const;

    /// Same region expressed at another level. Coarsening rounds outward, so the result covers this box.
    CellBox at_level(int to_level) const;

    double lower(int axis) const;
    double upper(int axis) const;

    friend bool operator==(const CellBox&, const CellBox&) = default;
};

CellBox intersect(const CellBox& a, const CellBox& b);
CellBox hull(const CellBox& a, const CellBox& b);

/// Piecewise-constant function on a dyadic grid, zero outside its box.
///
/// Cell c at level L covers [c*h, (c+1)*h) with h = 2^-L; values are stored
/// row-major with the last used axis fastest. Immutable after construction.
class GridFunction {
public:
    GridFunction(int dim, int level, const CellIndex& origin, const CellIndex& extents,
                 std::vector<double> values);
    GridFunction(const CellBox& box, std::vector<double> values);

    static GridFunction zero(int dim, int level = 0);

    int dim() const { return dim_; }
    int level() const { return level_; }
    double cell_width() const;
    double cell_measure() const;
    const CellIndex& origin() const { return origin_; }
    const CellIndex& extents() const { return extents_; }
    CellBox box() const;
    std::span<const double> values() const { return values_; }
    std::size_t cell_count() const { return values_.size(); }

    std::size_t offset(const CellIndex& cell) const;
    CellIndex cell_at(std::size_t offset) const;
    Point cell_center(const CellIndex& cell) const;

    /// Value of the cell with the given global index; zero outside the box.
    double at(const CellIndex& cell) const;
    /// Point evaluation.
    double operator()(const Point& x) const;

    double l1_norm() const;
    double support_measure() const;
    bool is_zero() const;

    template <class F>
    void for_each_cell(F&& f) const {
        CellIndex cell = origin_;
        for (std::size_t i = 0; i < values_.size(); ++i) {
            f(cell, values_[i]);
            for (int axis = dim_ - 1; axis >= 0; --axis) {
                if (++cell[axis] < origin_[axis] + extents_[axis]) break;
                cell[axis] = origin_[axis];
            }
        }
    }

    friend bool operator==(const GridFunction&, const GridFunction&) = default;

private:
    int dim_;
    int level_;
    CellIndex origin_;
    CellIndex extents_;
    std::vector<double> values_;
};

using Sampler = std::function<double(const Point&)>;

/// Samples at cell centres over every cell of `box`.
GridFunction from_sampler(const CellBox& box, const Sampler& sampler, const Limits& limits = {});

/// Samples over the cells covering the real box [lo, hi); cells whose centre falls outside are zero.
GridFunction from_sampler(int dim, int level, const Point& lo, const Point& hi,
                          const Sampler& sampler, const Limits& limits = {});

GridFunction refine(const GridFunction& u, int to_level, const Limits& limits = {});
GridFunction translate_cells(const GridFunction& u, const CellIndex& shift);
GridFunction linear_combine(std::span<const double> coefficients, std::span<const GridFunction> terms,
                            const Limits& limits = {});
GridFunction scaled(const GridFunction& u, double factor);
GridFunction map_values(const GridFunction& u, const std::function<double(double)>& f);

/// Exact restriction to the cells of `box`. Refines `u` (after cropping) when the box is finer.
GridFunction crop(const GridFunction& u, const CellBox& box, const Limits& limits = {});

/// Shrinks the box to the bounding box of the nonzero cells.
GridFunction trimmed(const GridFunction& u);

}  // namespace bvlab
