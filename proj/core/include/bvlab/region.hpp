#pragma once

#include <cstdint>
#include <vector>

#include "bvlab/grid.hpp"

namespace bvlab {

/// A set of grid cells: everything, a box of cells, or a cell mask over a box.
///
/// Membership is defined at the region's level; a cell at any level belongs
/// to the region when its base (lower) corner does.
class Region {
public:
    enum class Kind { All, Box, Mask };

    static Region all(int dim);
    static Region empty(int dim, int level = 0);
    static Region box(const CellBox& box);
    /// Unit-cell cube with `side` cells per axis starting at `corner`.
    static Region cube(int dim, int level, const CellIndex& corner, std::int64_t side);
    /// Cells whose centre satisfies r_in < |x| <= r_out.
    static Region annulus(int dim, int level, double r_in, double r_out, const Limits& limits = {});
    static Region mask(const CellBox& box, std::vector<std::uint8_t> mask);

    Kind kind() const { return kind_; }
    int dim() const { return dim_; }
    int level() const { return box_.level; }
    const CellBox& bounds() const { return box_; }

    bool contains(int level, const CellIndex& cell) const;
    std::size_t count() const;
    /// Lebesgue measure; infinite for `all`.
    double measure() const;
    bool is_empty() const;

private:
    Region(Kind kind, int dim, CellBox box, std::vector<std::uint8_t> mask);

    Kind kind_;
    int dim_;
    CellBox box_;
    std::vector<std::uint8_t> mask_;
};

/// Equals `u` on the region, zero elsewhere. Refines `u` when the region is finer.
GridFunction restrict(const GridFunction& u, const Region& region, const Limits& limits = {});

}  // namespace bvlab
