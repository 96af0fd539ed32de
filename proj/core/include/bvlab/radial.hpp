#pragma once

#include <span>
#include <vector>

#include "bvlab/grid.hpp"
#include "bvlab/rearrange.hpp"

namespace bvlab {

/// Radial piecewise-constant function: value v_m on r_{m-1} < |x| <= r_m, zero beyond r_M.
///
/// radii() holds r_0 = 0 < r_1 < ... < r_M and values() holds v_1..v_M.
/// Adjacent annuli with equal values are merged and trailing zeros trimmed,
/// so every stored breakpoint is a genuine jump.
class RadialStep {
public:
    RadialStep(int dim, std::vector<double> radii, std::vector<double> values);

    static RadialStep zero(int dim);

    int dim() const { return dim_; }
    std::span<const double> radii() const { return radii_; }
    std::span<const double> values() const { return values_; }
    std::size_t annuli() const { return values_.size(); }
    double outer_radius() const { return radii_.back(); }

    /// |B_1| (r_m^N - r_{m-1}^N) for annulus m in 1..M.
    double annulus_measure(std::size_t m) const;
    double at_radius(double r) const;
    double operator()(const Point& x) const;

    friend bool operator==(const RadialStep&, const RadialStep&) = default;

private:
    int dim_;
    std::vector<double> radii_;
    std::vector<double> values_;
};

/// phi = indicator of 1 < |x| <= 2.
RadialStep annulus_indicator(int dim);
/// 2^{i(N-1)} u(2^i x): radii divided by 2^i, values multiplied by 2^{i(N-1)}.
RadialStep rescale_dyadic(const RadialStep& u, int i);
/// Exact pointwise linear combination on the merged breakpoints.
RadialStep linear_combine(std::span<const double> coefficients, std::span<const RadialStep> terms);
/// u_n = (1/n) sum_{i=1}^n 2^{i(N-1)} phi(2^i x).
RadialStep staircase(int dim, int n);

/// Co-area total variation: sum over spheres of perimeter times jump.
double radial_tv(const RadialStep& u);
/// Sum over annuli of |v_m| times the perimeter of both bounding spheres: the TV each annulus would have alone.
double piecewise_tv(const RadialStep& u);

std::vector<Chunk> value_measure_pairs(const RadialStep& u);
StepFunction to_stepfunction(const RadialStep& u);

/// f0(u) = int u(x) / |x| dx, exact.
double dual_pairing_f0(const RadialStep& u);

/// Cell-centre sampling over `box`.
GridFunction to_grid(const RadialStep& u, const CellBox& box, const Limits& limits = {});
/// Cell-centre sampling over the cube [-R, R)^N covering the support.
GridFunction to_grid(const RadialStep& u, int level, const Limits& limits = {});

}  // namespace bvlab
