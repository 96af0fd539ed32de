#include "bvlab/region.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bvlab {

Region::Region(Kind kind, int dim, CellBox box, std::vector<std::uint8_t> mask)
    : kind_(kind), dim_(dim), box_(box), mask_(std::move(mask)) {
    check_dim(dim);
}

Region Region::all(int dim) {
    CellBox b;
    b.dim = dim;
    return Region(Kind::All, dim, b, {});
}

Region Region::empty(int dim, int level) {
    CellBox b;
    b.dim = dim;
    b.level = level;
    for (int a = 0; a < dim; ++a) b.hi[a] = 0;
    return Region(Kind::Box, dim, b, {});
}

Region Region::box(const CellBox& box) { return Region(Kind::Box, box.dim, box, {}); }

Region Region::cube(int dim, int level, const CellIndex& corner, std::int64_t side) {
    if (side < 0) fail(ErrorKind::Domain, "cube side must be nonnegative");
    CellIndex hi = corner;
    for (int a = 0; a < dim; ++a) hi[a] += side;
    return box(CellBox::make(dim, level, corner, hi));
}

Region Region::annulus(int dim, int level, double r_in, double r_out, const Limits& limits) {
    check_dim(dim);
    if (!(r_out >= r_in) || r_in < 0.0) fail(ErrorKind::Domain, "annulus needs 0 <= r_in <= r_out");
    const auto reach = static_cast<std::int64_t>(std::ceil(std::ldexp(r_out, level))) + 1;
    CellIndex lo{0, 0, 0};
    CellIndex hi{1, 1, 1};
    for (int a = 0; a < dim; ++a) {
        lo[a] = -reach;
        hi[a] = reach;
    }
    const CellBox b = CellBox::make(dim, level, lo, hi);
    if (b.count() > limits.max_cells) fail(ErrorKind::Resource, "annulus mask above the memory guard");
    GridFunction shape(b, std::vector<double>(b.count(), 0.0));
    std::vector<std::uint8_t> mask(b.count(), 0);
    std::size_t i = 0;
    shape.for_each_cell([&](const CellIndex& cell, double) {
        const Point x = shape.cell_center(cell);
        double r2 = 0.0;
        for (int a = 0; a < dim; ++a) r2 += x[a] * x[a];
        const double r = std::sqrt(r2);
        mask[i++] = (r > r_in && r <= r_out) ? 1 : 0;
    });
    return Region(Kind::Mask, dim, b, std::move(mask));
}

Region Region::mask(const CellBox& box, std::vector<std::uint8_t> mask) {
    if (mask.size() != box.count()) fail(ErrorKind::Domain, "mask size does not match its box");
    return Region(Kind::Mask, box.dim, box, std::move(mask));
}

bool Region::contains(int level, const CellIndex& cell) const {
    if (kind_ == Kind::All) return true;
    CellIndex at = cell;
    if (level >= box_.level) {
        const int s = level - box_.level;
        for (int a = 0; a < dim_; ++a) at[a] = cell[a] >> s;
    } else {
        // A coarse cell is judged by its base (lower) corner.
        const int s = box_.level - level;
        for (int a = 0; a < dim_; ++a) at[a] = cell[a] << s;
    }
    if (!box_.contains(at)) return false;
    if (kind_ == Kind::Box) return true;
    std::size_t off = 0;
    for (int a = 0; a < dim_; ++a) {
        off = off * static_cast<std::size_t>(box_.extent(a)) + static_cast<std::size_t>(at[a] - box_.lo[a]);
    }
    return mask_[off] != 0;
}

std::size_t Region::count() const {
    if (kind_ == Kind::All) return std::numeric_limits<std::size_t>::max();
    if (kind_ == Kind::Box) return box_.count();
    std::size_t n = 0;
    for (auto m : mask_) n += (m != 0);
    return n;
}

double Region::measure() const {
    if (kind_ == Kind::All) return std::numeric_limits<double>::infinity();
    return static_cast<double>(count()) * std::ldexp(1.0, -box_.level * dim_);
}

bool Region::is_empty() const { return kind_ != Kind::All && count() == 0; }

GridFunction restrict(const GridFunction& u, const Region& region, const Limits& limits) {
    if (region.dim() != u.dim()) fail(ErrorKind::DimensionMismatch, "restrict: region dimension differs");
    if (region.kind() == Region::Kind::All) return u;
    if (region.is_empty()) return GridFunction::zero(u.dim(), std::max(u.level(), region.level()));
    GridFunction base = crop(u, region.bounds().at_level(std::max(u.level(), region.level())), limits);
    if (base.level() < region.level()) base = refine(base, region.level(), limits);
    std::vector<double> values(base.values().begin(), base.values().end());
    std::size_t i = 0;
    base.for_each_cell([&](const CellIndex& cell, double) {
        if (!region.contains(base.level(), cell)) values[i] = 0.0;
        ++i;
    });
    return GridFunction(base.box(), std::move(values));
}

}  // namespace bvlab
