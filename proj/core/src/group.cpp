#include "bvlab/group.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>

#include "bvlab/bv.hpp"

namespace bvlab {

namespace {

std::int64_t shifted_left(std::int64_t v, int s) {
    if (s < 0) fail(ErrorKind::Representability, "negative shift in dyadic arithmetic");
    if (v == 0) return 0;
    if (s >= 62 || std::abs(v) > (std::numeric_limits<std::int64_t>::max() >> s)) {
        fail(ErrorKind::Representability, "dyadic translation overflows 64-bit numerators");
    }
    return v * (std::int64_t{1} << s);
}

}  // namespace

GroupElement::GroupElement(int dim, int scale, const CellIndex& y_numerators, int y_level)
    : dim_(dim), scale_(scale), numerators_{0, 0, 0}, y_level_(y_level) {
    check_dim(dim);
    for (int a = 0; a < dim; ++a) numerators_[a] = y_numerators[a];
    if (y_level_ < 0) {
        for (int a = 0; a < dim; ++a) numerators_[a] = shifted_left(numerators_[a], -y_level_);
        y_level_ = 0;
    }
    while (y_level_ > 0) {
        bool all_even = true;
        for (int a = 0; a < dim; ++a) all_even = all_even && (numerators_[a] % 2 == 0);
        if (!all_even) break;
        for (int a = 0; a < dim; ++a) numerators_[a] /= 2;
        --y_level_;
    }
}

GroupElement GroupElement::identity(int dim) { return GroupElement(dim, 0, CellIndex{0, 0, 0}, 0); }

GroupElement GroupElement::lattice(int dim, int scale, const CellIndex& y) { return GroupElement(dim, scale, y, 0); }

GroupElement GroupElement::from_point(int dim, int scale, const Point& y) {
    check_dim(dim);
    int level = 0;
    for (int a = 0; a < dim; ++a) {
        if (!std::isfinite(y[a])) fail(ErrorKind::Representability, "translation is not finite");
        int l = 0;
        while (std::ldexp(y[a], l) != std::floor(std::ldexp(y[a], l))) {
            if (++l > 62) fail(ErrorKind::Representability, "translation is not a dyadic rational");
        }
        level = std::max(level, l);
    }
    CellIndex n{0, 0, 0};
    for (int a = 0; a < dim; ++a) {
        const double scaled = std::ldexp(y[a], level);
        if (std::abs(scaled) > 4.0e18) fail(ErrorKind::Representability, "translation numerator overflows");
        n[a] = static_cast<std::int64_t>(scaled);
    }
    return GroupElement(dim, scale, n, level);
}

Point GroupElement::translation() const {
    Point y{0.0, 0.0, 0.0};
    for (int a = 0; a < dim_; ++a) y[a] = std::ldexp(static_cast<double>(numerators_[a]), -y_level_);
    return y;
}

bool GroupElement::is_identity() const {
    if (scale_ != 0) return false;
    for (int a = 0; a < dim_; ++a)
        if (numerators_[a] != 0) return false;
    return true;
}

Point GroupElement::preimage(const Point& x) const {
    const Point y = translation();
    Point out{0.0, 0.0, 0.0};
    for (int a = 0; a < dim_; ++a) out[a] = std::ldexp(x[a] - y[a], scale_);
    return out;
}

double GroupElement::amplitude() const { return std::ldexp(1.0, (dim_ - 1) * scale_); }

GroupElement compose(const GroupElement& g2, const GroupElement& g1) {
    if (g1.dim() != g2.dim()) fail(ErrorKind::DimensionMismatch, "compose: dimensions differ");
    const int dim = g1.dim();
    // y = y2 + 2^{-j2} y1 = n2 2^{-l2} + n1 2^{-(l1 + j2)}
    const int l1 = g1.y_level() + g2.scale();
    const int l2 = g2.y_level();
    const int common = std::max({l1, l2, 0});
    CellIndex n{0, 0, 0};
    for (int a = 0; a < dim; ++a) {
        n[a] = shifted_left(g2.y_numerators()[a], common - l2) + shifted_left(g1.y_numerators()[a], common - l1);
    }
    return GroupElement(dim, g1.scale() + g2.scale(), n, common);
}

GroupElement inverse(const GroupElement& g) {
    // (-j, -2^j y)
    CellIndex n{0, 0, 0};
    for (int a = 0; a < g.dim(); ++a) n[a] = -g.y_numerators()[a];
    return GroupElement(g.dim(), -g.scale(), n, g.y_level() - g.scale());
}

double separation(const GroupElement& a, const GroupElement& b) {
    if (a.dim() != b.dim()) fail(ErrorKind::DimensionMismatch, "separation: dimensions differ");
    const Point ya = a.translation();
    const Point yb = b.translation();
    double sq = 0.0;
    for (int k = 0; k < a.dim(); ++k) sq += (ya[k] - yb[k]) * (ya[k] - yb[k]);
    return std::abs(a.scale() - b.scale()) + std::sqrt(sq);
}

GridFunction act(const GroupElement& g, const GridFunction& u, const GroupLimits& limits) {
    if (g.dim() != u.dim()) fail(ErrorKind::DimensionMismatch, "act: dimensions differ");
    if (std::abs(g.scale()) > limits.max_scale) {
        fail(ErrorKind::Representability,
             "scale exponent " + std::to_string(g.scale()) + " exceeds the configured bound " +
                 std::to_string(limits.max_scale));
    }
    // y must be an integer multiple of the output cell width 2^{-(L + j)}.
    const int needed = g.y_level() - g.scale();
    const GridFunction base = u.level() < needed ? refine(u, needed, limits.grid) : u;
    const int target = base.level() + g.scale();
    CellIndex origin = base.origin();
    for (int a = 0; a < u.dim(); ++a) {
        origin[a] += shifted_left(g.y_numerators()[a], target - g.y_level());
    }
    std::vector<double> values(base.values().begin(), base.values().end());
    const int exponent = (u.dim() - 1) * g.scale();
    for (double& v : values) v = std::ldexp(v, exponent);
    return GridFunction(u.dim(), target, origin, base.extents(), std::move(values));
}

DyadicSum act(const GroupElement& g, const DyadicSum& u, const GroupLimits& limits) {
    std::vector<GridFunction> terms;
    terms.reserve(u.terms().size());
    for (const auto& t : u.terms()) terms.push_back(act(g, t, limits));
    return DyadicSum(u.dim(), std::move(terms));
}

NormSpec NormSpec::parse(const std::string& text, int dim) {
    auto number = [&](const std::string& s) -> double {
        if (s == "inf") return kInfinity;
        if (s == "1*") return critical_exponent(dim);
        char* end = nullptr;
        const double v = std::strtod(s.c_str(), &end);
        if (end == s.c_str() || *end != '\0') fail(ErrorKind::Usage, "unknown norm id '" + text + "'");
        return v;
    };
    if (text == "bv") return NormSpec{Kind::BV, 1.0, 1.0};
    if (text.rfind("lorentz:", 0) == 0) {
        const std::string rest = text.substr(8);
        const auto comma = rest.find(',');
        if (comma == std::string::npos) fail(ErrorKind::Usage, "unknown norm id '" + text + "'");
        const double p = number(rest.substr(0, comma));
        const double q = number(rest.substr(comma + 1));
        LorentzIndex::make(p, q);
        return NormSpec{Kind::Lorentz, p, q};
    }
    if (text.rfind("lp:", 0) == 0) {
        const double p = number(text.substr(3));
        if (!(p >= 1.0)) fail(ErrorKind::Index, "Lebesgue norm needs p >= 1");
        return NormSpec{Kind::Lebesgue, p, p};
    }
    fail(ErrorKind::Usage, "unknown norm id '" + text + "'");
}

std::string NormSpec::name() const {
    switch (kind) {
        case Kind::BV: return "bv";
        case Kind::Lorentz: return "lorentz:" + std::to_string(p) + "," + (std::isinf(q) ? "inf" : std::to_string(q));
        case Kind::Lebesgue: return "lp:" + std::to_string(p);
    }
    return "?";
}

double norm_of(const NormSpec& norm, const GridFunction& u) {
    switch (norm.kind) {
        case NormSpec::Kind::BV: return total_variation(u);
        case NormSpec::Kind::Lorentz: return lorentz_norm(u, LorentzIndex::make(norm.p, norm.q));
        case NormSpec::Kind::Lebesgue: return lebesgue_norm(u, norm.p);
    }
    return 0.0;
}

double isometry_defect(const GroupElement& g, const GridFunction& u, const NormSpec& norm,
                       const GroupLimits& limits) {
    const double before = norm_of(norm, u);
    if (before == 0.0) return 0.0;
    const double after = norm_of(norm, act(g, u, limits));
    return std::abs(after - before) / before;
}

}  // namespace bvlab
