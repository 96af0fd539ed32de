#pragma once

#include <string>

#include "bvlab/dyadic_sum.hpp"
#include "bvlab/grid.hpp"
#include "bvlab/rearrange.hpp"

namespace bvlab {

/// g[j, y] u = 2^{(N-1)j} u(2^j (. - y)), with y a dyadic rational vector.
///
/// The translation is stored as integer numerators over 2^{y_level}, in
/// canonical form (y_level >= 0 and minimal), so equality is exact.
class GroupElement {
public:
    GroupElement(int dim, int scale, const CellIndex& y_numerators, int y_level);

    static GroupElement identity(int dim);
    /// Integer translation with the given scale.
    static GroupElement lattice(int dim, int scale, const CellIndex& y);
    /// Fails unless every coordinate of y is a dyadic rational with denominator at most 2^62.
    static GroupElement from_point(int dim, int scale, const Point& y);

    int dim() const { return dim_; }
    int scale() const { return scale_; }
    const CellIndex& y_numerators() const { return numerators_; }
    int y_level() const { return y_level_; }
    Point translation() const;
    bool is_identity() const;

    /// 2^j (x - y): the point whose value g u takes at x, before the amplitude factor.
    Point preimage(const Point& x) const;
    /// 2^{(N-1)j}.
    double amplitude() const;

    friend bool operator==(const GroupElement&, const GroupElement&) = default;

private:
    int dim_;
    int scale_;
    CellIndex numerators_;
    int y_level_;
};

/// Group law: act(compose(g2, g1), u) = act(g2, act(g1, u)).
GroupElement compose(const GroupElement& g2, const GroupElement& g1);
GroupElement inverse(const GroupElement& g);

/// |j1 - j2| + |y1 - y2| (Euclidean norm on the translation part).
double separation(const GroupElement& a, const GroupElement& b);

struct GroupLimits {
    int max_scale = 20;
    Limits grid{};
};

/// Exact action on a grid: relabel cells to level L + j, shift, multiply by 2^{(N-1)j}.
/// Refines `u` first when y is not representable at level L + j.
GridFunction act(const GroupElement& g, const GridFunction& u, const GroupLimits& limits = {});
DyadicSum act(const GroupElement& g, const DyadicSum& u, const GroupLimits& limits = {});

/// Norms the isometry audit knows about.
struct NormSpec {
    enum class Kind { BV, Lorentz, Lebesgue };
    Kind kind = Kind::BV;
    double p = 1.0;
    double q = 1.0;

    /// "bv", "lorentz:P,Q" ("inf" allowed for Q, "1*" for the critical exponent), "lp:P".
    static NormSpec parse(const std::string& text, int dim);
    std::string name() const;
};

double norm_of(const NormSpec& norm, const GridFunction& u);

/// | ||g u|| - ||u|| | / ||u||, zero for u = 0.
double isometry_defect(const GroupElement& g, const GridFunction& u, const NormSpec& norm,
                       const GroupLimits& limits = {});

}  // namespace bvlab
