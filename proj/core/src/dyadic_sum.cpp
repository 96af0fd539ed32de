#include "bvlab/dyadic_sum.hpp"

#include <algorithm>
#include <numeric>

namespace bvlab {

namespace {

struct RealBox {
    Point lo{0, 0, 0};
    Point hi{0, 0, 0};
};

// Box of the term grown by one of its own cells on every side: the stencil reach of forward differences.
RealBox halo_box(const GridFunction& g) {
    RealBox r;
    const CellBox b = g.box();
    const double h = g.cell_width();
    for (int a = 0; a < g.dim(); ++a) {
        r.lo[a] = b.lower(a) - h;
        r.hi[a] = b.upper(a) + h;
    }
    return r;
}

bool touches(const RealBox& x, const RealBox& y, int dim) {
    for (int a = 0; a < dim; ++a)
        if (x.hi[a] < y.lo[a] || y.hi[a] < x.lo[a]) return false;
    return true;
}

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t i) {
    while (parent[i] != i) {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    return i;
}

}  // namespace

DyadicSum::DyadicSum(int dim) : dim_(dim) { check_dim(dim); }

DyadicSum::DyadicSum(GridFunction term) : dim_(term.dim()) { terms_.push_back(std::move(term)); }

DyadicSum::DyadicSum(int dim, std::vector<GridFunction> terms) : dim_(dim), terms_(std::move(terms)) {
    check_dim(dim);
    for (const auto& t : terms_)
        if (t.dim() != dim) fail(ErrorKind::DimensionMismatch, "DyadicSum: term dimension differs");
}

int DyadicSum::finest_level() const {
    int level = terms_.empty() ? 0 : terms_.front().level();
    for (const auto& t : terms_) level = std::max(level, t.level());
    return level;
}

DyadicSum DyadicSum::plus(GridFunction term) const {
    if (term.dim() != dim_) fail(ErrorKind::DimensionMismatch, "DyadicSum: term dimension differs");
    DyadicSum out = *this;
    out.terms_.push_back(std::move(term));
    return out;
}

DyadicSum DyadicSum::plus(const DyadicSum& other, double coefficient) const {
    if (other.dim_ != dim_) fail(ErrorKind::DimensionMismatch, "DyadicSum: dimension differs");
    DyadicSum out = *this;
    for (const auto& t : other.terms_) out.terms_.push_back(coefficient == 1.0 ? t : scaled(t, coefficient));
    return out;
}

double DyadicSum::operator()(const Point& x) const {
    double sum = 0.0;
    for (const auto& t : terms_) sum += t(x);
    return sum;
}

std::vector<GridFunction> DyadicSum::clusters(const Limits& limits) const {
    const std::size_t n = terms_.size();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    std::vector<RealBox> boxes;
    boxes.reserve(n);
    for (const auto& t : terms_) boxes.push_back(halo_box(t));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (touches(boxes[i], boxes[j], dim_)) parent[find_root(parent, i)] = find_root(parent, j);
        }
    }
    std::vector<std::vector<std::size_t>> groups(n);
    for (std::size_t i = 0; i < n; ++i) groups[find_root(parent, i)].push_back(i);

    std::vector<GridFunction> out;
    for (const auto& group : groups) {
        if (group.empty()) continue;
        if (group.size() == 1) {
            out.push_back(terms_[group.front()]);
            continue;
        }
        std::vector<GridFunction> members;
        for (auto i : group) members.push_back(terms_[i]);
        const std::vector<double> ones(members.size(), 1.0);
        out.push_back(linear_combine(ones, members, limits));
    }
    return out;
}

GridFunction DyadicSum::flatten(const Limits& limits) const {
    if (terms_.empty()) return GridFunction::zero(dim_);
    const std::vector<double> ones(terms_.size(), 1.0);
    return linear_combine(ones, terms_, limits);
}

GridFunction DyadicSum::crop(const CellBox& box, const Limits& limits) const {
    if (box.dim != dim_) fail(ErrorKind::DimensionMismatch, "DyadicSum::crop: box dimension differs");
    std::vector<GridFunction> pieces;
    int level = box.level;
    for (const auto& t : terms_) {
        const CellBox cover = intersect(t.box(), box.at_level(t.level()));
        if (cover.empty()) continue;
        GridFunction piece = bvlab::crop(t, box.at_level(std::max(t.level(), box.level)), limits);
        if (piece.is_zero()) continue;
        level = std::max(level, piece.level());
        pieces.push_back(std::move(piece));
    }
    if (pieces.empty()) return GridFunction::zero(dim_, box.level);
    const std::vector<double> ones(pieces.size(), 1.0);
    return linear_combine(ones, pieces, limits);
}

double DyadicSum::l1_norm(const Limits& limits) const {
    double sum = 0.0;
    for (const auto& c : clusters(limits)) sum += c.l1_norm();
    return sum;
}

}  // namespace bvlab
