#include "bvlab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace bvlab {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::UnsupportedDimension: return "unsupported-dimension";
        case ErrorKind::RefinementDirection: return "refinement-direction";
        case ErrorKind::DimensionMismatch: return "dimension-mismatch";
        case ErrorKind::Resource: return "resource";
        case ErrorKind::Domain: return "domain";
        case ErrorKind::Index: return "index";
        case ErrorKind::SupportViolation: return "support-violation";
        case ErrorKind::Representability: return "representability";
        case ErrorKind::Usage: return "usage";
        case ErrorKind::NonConvergentSubsequence: return "non-convergent-subsequence";
        case ErrorKind::Config: return "config";
        case ErrorKind::Io: return "io";
    }
    return "unknown";
}

void check_dim(int dim) {
    if (dim < 1 || dim > kMaxDim) {
        fail(ErrorKind::UnsupportedDimension, "dimension " + std::to_string(dim) + " not in {1,2,3}");
    }
}

namespace {

// Levels beyond this lose exactness of h^N in double precision for N = 3.
constexpr int kMaxAbsLevel = 300;

void check_level(int level) {
    if (level < -kMaxAbsLevel || level > kMaxAbsLevel) {
        fail(ErrorKind::Resource, "grid level " + std::to_string(level) + " out of range");
    }
}

void check_cells(std::size_t cells, const Limits& limits, const char* what) {
    if (cells > limits.max_cells) {
        fail(ErrorKind::Resource, std::string(what) + " needs " + std::to_string(cells) +
                                      " cells, above the memory guard of " +
                                      std::to_string(limits.max_cells));
    }
}

std::size_t box_count_checked(const CellBox& box, const Limits& limits, const char* what) {
    if (box.empty()) return 0;
    long double total = 1;
    for (int a = 0; a < box.dim; ++a) total *= static_cast<long double>(box.extent(a));
    if (total > static_cast<long double>(limits.max_cells)) {
        fail(ErrorKind::Resource, std::string(what) + " needs " + std::to_string(static_cast<double>(total)) +
                                      " cells, above the memory guard of " +
                                      std::to_string(limits.max_cells));
    }
    return static_cast<std::size_t>(total);
}

std::int64_t floor_shift(std::int64_t v, int s) { return v >> s; }
std::int64_t ceil_shift(std::int64_t v, int s) { return -((-v) >> s); }

}  // namespace

// ---------------------------------------------------------------- CellBox

CellBox CellBox::make(int dim, int level, const CellIndex& lo, const CellIndex& hi) {
    check_dim(dim);
    CellBox box;
    box.dim = dim;
    box.level = level;
    for (int a = 0; a < dim; ++a) {
        box.lo[a] = lo[a];
        box.hi[a] = hi[a];
    }
    return box;
}

bool CellBox::empty() const {
    for (int a = 0; a < dim; ++a)
        if (hi[a] <= lo[a]) return true;
    return false;
}

std::size_t CellBox::count() const {
    if (empty()) return 0;
    std::size_t n = 1;
    for (int a = 0; a < dim; ++a) n *= static_cast<std::size_t>(extent(a));
    return n;
}

bool CellBox::contains(const CellIndex& cell) const {
    for (int a = 0; a < dim; ++a)
        if (cell[a] < lo[a] || cell[a] >= hi[a]) return false;
    return true;
}

CellBox CellBox::at_level(int to_level) const {
    CellBox out = *this;
    out.level = to_level;
    if (to_level >= level) {
        const int s = to_level - level;
        for (int a = 0; a < dim; ++a) {
            out.lo[a] = lo[a] << s;
            out.hi[a] = hi[a] << s;
        }
    } else {
        const int s = level - to_level;
        for (int a = 0; a < dim; ++a) {
            out.lo[a] = floor_shift(lo[a], s);
            out.hi[a] = ceil_shift(hi[a], s);
        }
    }
    return out;
}

double CellBox::lower(int axis) const { return std::ldexp(static_cast<double>(lo[axis]), -level); }
double CellBox::upper(int axis) const { return std::ldexp(static_cast<double>(hi[axis]), -level); }

CellBox intersect(const CellBox& a, const CellBox& b) {
    if (a.dim != b.dim) fail(ErrorKind::DimensionMismatch, "box dimensions differ");
    const int level = std::max(a.level, b.level);
    const CellBox x = a.at_level(level);
    const CellBox y = b.at_level(level);
    CellBox out = x;
    for (int k = 0; k < a.dim; ++k) {
        out.lo[k] = std::max(x.lo[k], y.lo[k]);
        out.hi[k] = std::min(x.hi[k], y.hi[k]);
        if (out.hi[k] < out.lo[k]) out.hi[k] = out.lo[k];
    }
    return out;
}

CellBox hull(const CellBox& a, const CellBox& b) {
    if (a.dim != b.dim) fail(ErrorKind::DimensionMismatch, "box dimensions differ");
    if (a.empty()) return b.at_level(std::max(a.level, b.level));
    if (b.empty()) return a.at_level(std::max(a.level, b.level));
    const int level = std::max(a.level, b.level);
    const CellBox x = a.at_level(level);
    const CellBox y = b.at_level(level);
    CellBox out = x;
    for (int k = 0; k < a.dim; ++k) {
        out.lo[k] = std::min(x.lo[k], y.lo[k]);
        out.hi[k] = std::max(x.hi[k], y.hi[k]);
    }
    return out;
}

// ----------------------------------------------------------- GridFunction

GridFunction::GridFunction(int dim, int level, const CellIndex& origin, const CellIndex& extents,
                           std::vector<double> values)
    : dim_(dim), level_(level), origin_{0, 0, 0}, extents_{1, 1, 1}, values_(std::move(values)) {
    check_dim(dim);
    check_level(level);
    std::size_t expected = 1;
    for (int a = 0; a < dim; ++a) {
        if (extents[a] < 1) fail(ErrorKind::Domain, "grid extents must be >= 1 on every axis");
        origin_[a] = origin[a];
        extents_[a] = extents[a];
        expected *= static_cast<std::size_t>(extents[a]);
    }
    if (values_.size() != expected) {
        fail(ErrorKind::Domain, "grid value count " + std::to_string(values_.size()) +
                                    " does not match extents product " + std::to_string(expected));
    }
}

GridFunction::GridFunction(const CellBox& box, std::vector<double> values)
    : GridFunction(box.dim, box.level, box.lo,
                   CellIndex{box.hi[0] - box.lo[0], box.hi[1] - box.lo[1], box.hi[2] - box.lo[2]},
                   std::move(values)) {}

GridFunction GridFunction::zero(int dim, int level) {
    return GridFunction(dim, level, CellIndex{0, 0, 0}, CellIndex{1, 1, 1}, std::vector<double>(1, 0.0));
}

double GridFunction::cell_width() const { return std::ldexp(1.0, -level_); }
double GridFunction::cell_measure() const { return std::ldexp(1.0, -level_ * dim_); }

CellBox GridFunction::box() const {
    CellBox b;
    b.dim = dim_;
    b.level = level_;
    for (int a = 0; a < dim_; ++a) {
        b.lo[a] = origin_[a];
        b.hi[a] = origin_[a] + extents_[a];
    }
    return b;
}

std::size_t GridFunction::offset(const CellIndex& cell) const {
    std::size_t off = 0;
    for (int a = 0; a < dim_; ++a) {
        off = off * static_cast<std::size_t>(extents_[a]) + static_cast<std::size_t>(cell[a] - origin_[a]);
    }
    return off;
}

CellIndex GridFunction::cell_at(std::size_t off) const {
    CellIndex cell{0, 0, 0};
    for (int a = dim_ - 1; a >= 0; --a) {
        const auto e = static_cast<std::size_t>(extents_[a]);
        cell[a] = origin_[a] + static_cast<std::int64_t>(off % e);
        off /= e;
    }
    return cell;
}

Point GridFunction::cell_center(const CellIndex& cell) const {
    Point x{0.0, 0.0, 0.0};
    for (int a = 0; a < dim_; ++a) x[a] = std::ldexp(static_cast<double>(cell[a]) + 0.5, -level_);
    return x;
}

double GridFunction::at(const CellIndex& cell) const {
    for (int a = 0; a < dim_; ++a) {
        if (cell[a] < origin_[a] || cell[a] >= origin_[a] + extents_[a]) return 0.0;
    }
    return values_[offset(cell)];
}

double GridFunction::operator()(const Point& x) const {
    CellIndex cell{0, 0, 0};
    for (int a = 0; a < dim_; ++a) {
        const double scaled = std::floor(std::ldexp(x[a], level_));
        if (scaled < static_cast<double>(origin_[a]) ||
            scaled >= static_cast<double>(origin_[a] + extents_[a])) {
            return 0.0;
        }
        cell[a] = static_cast<std::int64_t>(scaled);
    }
    return values_[offset(cell)];
}

double GridFunction::l1_norm() const {
    double sum = 0.0;
    for (double v : values_) sum += std::abs(v);
    return sum * cell_measure();
}

double GridFunction::support_measure() const {
    std::size_t nonzero = 0;
    for (double v : values_) nonzero += (v != 0.0);
    return static_cast<double>(nonzero) * cell_measure();
}

bool GridFunction::is_zero() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
}

// ------------------------------------------------------------ operations

GridFunction from_sampler(const CellBox& box, const Sampler& sampler, const Limits& limits) {
    check_dim(box.dim);
    if (box.empty()) fail(ErrorKind::Domain, "sampling box has nonpositive extents");
    const std::size_t n = box_count_checked(box, limits, "from_sampler");
    GridFunction shape(box, std::vector<double>(n, 0.0));
    std::vector<double> values(n);
    std::size_t i = 0;
    shape.for_each_cell([&](const CellIndex& cell, double) { values[i++] = sampler(shape.cell_center(cell)); });
    return GridFunction(box, std::move(values));
}

GridFunction from_sampler(int dim, int level, const Point& lo, const Point& hi, const Sampler& sampler,
                          const Limits& limits) {
    check_dim(dim);
    CellBox box;
    box.dim = dim;
    box.level = level;
    for (int a = 0; a < dim; ++a) {
        if (!(hi[a] > lo[a])) fail(ErrorKind::Domain, "sampling box has nonpositive volume");
        box.lo[a] = static_cast<std::int64_t>(std::floor(std::ldexp(lo[a], level)));
        box.hi[a] = static_cast<std::int64_t>(std::ceil(std::ldexp(hi[a], level)));
    }
    return from_sampler(
        box,
        [&](const Point& x) {
            for (int a = 0; a < dim; ++a)
                if (x[a] < lo[a] || x[a] >= hi[a]) return 0.0;
            return sampler(x);
        },
        limits);
}

GridFunction refine(const GridFunction& u, int to_level, const Limits& limits) {
    if (to_level < u.level()) {
        fail(ErrorKind::RefinementDirection, "cannot refine from level " + std::to_string(u.level()) +
                                                 " down to level " + std::to_string(to_level));
    }
    if (to_level == u.level()) return u;
    const int s = to_level - u.level();
    const CellBox fine = u.box().at_level(to_level);
    const std::size_t n = box_count_checked(fine, limits, "refine");
    std::vector<double> values(n);
    GridFunction shape(fine, std::vector<double>(n, 0.0));
    std::size_t i = 0;
    shape.for_each_cell([&](const CellIndex& cell, double) {
        CellIndex parent{0, 0, 0};
        for (int a = 0; a < u.dim(); ++a) parent[a] = cell[a] >> s;
        values[i++] = u.values()[u.offset(parent)];
    });
    return GridFunction(fine, std::move(values));
}

GridFunction translate_cells(const GridFunction& u, const CellIndex& shift) {
    CellIndex origin = u.origin();
    for (int a = 0; a < u.dim(); ++a) origin[a] += shift[a];
    return GridFunction(u.dim(), u.level(), origin, u.extents(),
                        std::vector<double>(u.values().begin(), u.values().end()));
}

GridFunction linear_combine(std::span<const double> coefficients, std::span<const GridFunction> terms,
                            const Limits& limits) {
    if (terms.empty()) fail(ErrorKind::Usage, "linear_combine needs at least one term");
    if (coefficients.size() != terms.size()) {
        fail(ErrorKind::Usage, "linear_combine: coefficient and term counts differ");
    }
    const int dim = terms.front().dim();
    int level = terms.front().level();
    for (const auto& t : terms) {
        if (t.dim() != dim) fail(ErrorKind::DimensionMismatch, "linear_combine: mixed dimensions");
        level = std::max(level, t.level());
    }
    CellBox box = terms.front().box().at_level(level);
    for (const auto& t : terms) box = hull(box, t.box().at_level(level));
    const std::size_t n = box_count_checked(box, limits, "linear_combine");
    std::vector<double> values(n, 0.0);
    GridFunction target(box, std::vector<double>(n, 0.0));
    for (std::size_t k = 0; k < terms.size(); ++k) {
        const double c = coefficients[k];
        if (c == 0.0) continue;
        const GridFunction& t = terms[k];
        const int s = level - t.level();
        const std::int64_t sub = std::int64_t{1} << s;
        t.for_each_cell([&](const CellIndex& cell, double v) {
            if (v == 0.0) return;
            const double cv = c * v;
            CellIndex base{0, 0, 0};
            for (int a = 0; a < dim; ++a) base[a] = cell[a] << s;
            CellIndex fine = base;
            const std::int64_t total = dim == 1 ? sub : (dim == 2 ? sub * sub : sub * sub * sub);
            for (std::int64_t i = 0; i < total; ++i) {
                std::int64_t rest = i;
                for (int a = dim - 1; a >= 0; --a) {
                    fine[a] = base[a] + rest % sub;
                    rest /= sub;
                }
                values[target.offset(fine)] += cv;
            }
        });
    }
    return GridFunction(box, std::move(values));
}

GridFunction scaled(const GridFunction& u, double factor) {
    std::vector<double> values(u.values().begin(), u.values().end());
    for (double& v : values) v *= factor;
    return GridFunction(u.box(), std::move(values));
}

GridFunction map_values(const GridFunction& u, const std::function<double(double)>& f) {
    std::vector<double> values(u.values().begin(), u.values().end());
    for (double& v : values) v = f(v);
    return GridFunction(u.box(), std::move(values));
}

GridFunction crop(const GridFunction& u, const CellBox& box, const Limits& limits) {
    if (box.dim != u.dim()) fail(ErrorKind::DimensionMismatch, "crop: box dimension differs");
    if (box.level > u.level()) {
        // Coarse data, fine box: crop to the covering coarse cells first so the refinement stays small.
        const CellBox cover = intersect(u.box(), box.at_level(u.level()));
        if (cover.empty()) return GridFunction::zero(u.dim(), box.level);
        return crop(refine(crop(u, cover, limits), box.level, limits), box, limits);
    }
    const CellBox target = intersect(u.box(), box.at_level(u.level()));
    if (target.empty()) return GridFunction::zero(u.dim(), u.level());
    const std::size_t n = target.count();
    check_cells(n, limits, "crop");
    std::vector<double> values(n);
    GridFunction shape(target, std::vector<double>(n, 0.0));
    std::size_t i = 0;
    shape.for_each_cell([&](const CellIndex& cell, double) { values[i++] = u.values()[u.offset(cell)]; });
    return GridFunction(target, std::move(values));
}

GridFunction trimmed(const GridFunction& u) {
    CellBox bound;
    bound.dim = u.dim();
    bound.level = u.level();
    bool any = false;
    u.for_each_cell([&](const CellIndex& cell, double v) {
        if (v == 0.0) return;
        for (int a = 0; a < u.dim(); ++a) {
            if (!any) {
                bound.lo[a] = cell[a];
                bound.hi[a] = cell[a] + 1;
            } else {
                bound.lo[a] = std::min(bound.lo[a], cell[a]);
                bound.hi[a] = std::max(bound.hi[a], cell[a] + 1);
            }
        }
        any = true;
    });
    if (!any) return GridFunction::zero(u.dim(), u.level());
    return crop(u, bound);
}

}  // namespace bvlab
