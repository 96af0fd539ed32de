#pragma once

#include <string>
#include <vector>

#include "bvlab/bv.hpp"
#include "bvlab/grid.hpp"
#include "bvlab/radial.hpp"
#include "bvlab/region.hpp"

namespace bvlab {

/// C^1 truncation profile chi with support [a, b], identity on [1, c]:
///
///     a = 2^{-(N-1)},  c = 2^{N-1},  b = 4^{N-1}.
///
/// Both ramps are cubic Hermite segments matching value and slope at the
/// plateau ends and vanishing with zero slope (rising ramp) or zero value
/// (falling ramp, whose slope at b is zero as well).
struct TruncationProfile {
    int dim = 2;
    double a = 0.5;
    double plateau_lo = 1.0;
    double plateau_hi = 2.0;
    double b = 4.0;
    /// sup |chi'|, closed form for the constructed ramps.
    double derivative_bound = 1.0;
    std::string name = "chi";

    double operator()(double t) const;
    double derivative(double t) const;
    /// chi(|t|) as a scalar map carrying `derivative_bound`.
    ScalarMap as_scalar_map() const;
};

TruncationProfile build_chi(int dim);
/// Same ramps, but advertises a derivative bound of 0.25. Negative-control fixture only.
TruncationProfile broken_chi(int dim);

/// chi_j(t) = 2^{(N-1)j} chi(2^{-(N-1)j} |t|).
double chi_j(const TruncationProfile& chi, int j, double t);
GridFunction chi_j(const TruncationProfile& chi, int j, const GridFunction& u);
RadialStep chi_j(const TruncationProfile& chi, int j, const RadialStep& u);

/// 2^{(N-1)j} <= |u| < 2^{(N-1)(j+1)}.
Region level_set_A(const GridFunction& u, int j);
/// 2^{(N-1)(j-1)} <= |u| < 2^{(N-1)(j+2)}.
Region level_set_B(const GridFunction& u, int j);

/// 1 + (j mod 4), so J_1 = {..., -4, 0, 4, ...}.
int color_class(int j);

/// True when chi_j(u) and chi_{j'}(u) have disjoint supports. Requires the same color and j != j'.
bool support_disjointness_check(const TruncationProfile& chi, const GridFunction& u, int j, int j_prime);

/// Scales j whose B-band can meet the value range of |u|, widened by 2 each way. Empty for u = 0.
std::vector<int> active_scales(int dim, const std::vector<double>& magnitudes);

struct LayerRow {
    int j = 0;
    int color = 1;
    double tv_b = 0.0;        // TV restricted to B_j
    double layer_norm = 0.0;  // ||chi_j(u)||_{L^{1*,q}(A_j)}
};

struct LayerAudit {
    int dim = 2;
    double q = 2.0;
    double lorentz_q_pow = 0.0;  // ||u||_{1*,q}^q
    double tv = 0.0;
    double sup_layer_term = 0.0;  // sup_j ||chi_j(u)||_{L^{1*,q}(A_j)}^{q-1}
    int sup_j = 0;
    double sum_tv_b = 0.0;
    double overlap_bound = 0.0;  // 4 TV
    bool overlap_holds = true;   // sum_tv_b <= 4 TV (1 + 1e-6)
    double empirical_constant = 0.0;
    std::vector<LayerRow> rows;
};

LayerAudit layer_energy_audit(const TruncationProfile& chi, const GridFunction& u, double q);
/// Radial version with exact per-layer norms; TV is the co-area value and the B-band rows are left at zero.
LayerAudit layer_energy_audit(const TruncationProfile& chi, const RadialStep& u, double q);

}  // namespace bvlab
