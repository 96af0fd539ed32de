#include "bvlab/layers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bvlab/rearrange.hpp"

namespace bvlab {

namespace {

// Rising ramp on s = (t - a)/(1 - a): h = s^2 (2 + a - (1 + a) s), h(1) = 1, h'(1) = 1 - a.
double rise(double a, double s) { return s * s * (2.0 + a - (1.0 + a) * s); }
double rise_slope(double a, double s) { return s * (2.0 * (2.0 + a) - 3.0 * (1.0 + a) * s); }

// Falling ramp on s = (t - c)/d: h = (s - 1)^2 ((2c + d) s + c), h(0) = c, h'(0) = d, h(1) = h'(1) = 0.
double fall(double c, double d, double s) { return (s - 1.0) * (s - 1.0) * ((2.0 * c + d) * s + c); }
double fall_slope(double c, double d, double s) { return (s - 1.0) * (3.0 * (2.0 * c + d) * s - d); }

TruncationProfile make_profile(int dim) {
    if (dim < 2) fail(ErrorKind::UnsupportedDimension, "the truncation profile needs N >= 2");
    check_dim(dim);
    TruncationProfile p;
    p.dim = dim;
    p.a = std::ldexp(1.0, -(dim - 1));
    p.plateau_lo = 1.0;
    p.plateau_hi = std::ldexp(1.0, dim - 1);
    p.b = std::ldexp(1.0, 2 * (dim - 1));
    const double a = p.a;
    const double c = p.plateau_hi;
    const double d = p.b - c;
    const double up = (2.0 + a) * (2.0 + a) / (3.0 * (1.0 + a) * (1.0 - a));
    const double down = std::max(d, (3.0 * c + d) * (3.0 * c + d) / (3.0 * (2.0 * c + d))) / d;
    p.derivative_bound = std::max({1.0, up, down});
    return p;
}

int floor_div(int a, int b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }

// floor(log2 v) for v > 0, exact.
int floor_log2(double v) {
    int e = 0;
    std::frexp(v, &e);
    return e - 1;
}

Region band(const GridFunction& u, int lo_exp, int hi_exp) {
    const double lo = std::ldexp(1.0, lo_exp);
    const double hi = std::ldexp(1.0, hi_exp);
    std::vector<std::uint8_t> mask(u.values().size(), 0);
    for (std::size_t i = 0; i < mask.size(); ++i) {
        const double m = std::abs(u.values()[i]);
        mask[i] = (m >= lo && m < hi) ? 1 : 0;
    }
    return Region::mask(u.box(), std::move(mask));
}

void check_q(int dim, double q) {
    if (!(q > 1.0 && q <= critical_exponent(dim) * (1.0 + 1e-15))) {
        fail(ErrorKind::Index, "layer audit needs 1 < q <= 1*");
    }
}

void finish(LayerAudit& audit) {
    audit.sup_layer_term = 0.0;
    for (const auto& row : audit.rows) {
        const double term = std::pow(row.layer_norm, audit.q - 1.0);
        if (term > audit.sup_layer_term) {
            audit.sup_layer_term = term;
            audit.sup_j = row.j;
        }
        audit.sum_tv_b += row.tv_b;
    }
    audit.overlap_bound = 4.0 * audit.tv;
    audit.overlap_holds = audit.sum_tv_b <= audit.overlap_bound * (1.0 + 1e-6);
    const double denom = audit.tv * audit.sup_layer_term;
    audit.empirical_constant = denom > 0.0 ? audit.lorentz_q_pow / denom : 0.0;
}

}  // namespace

double TruncationProfile::operator()(double t) const {
    if (t <= a || t >= b) return 0.0;
    if (t < plateau_lo) return rise(a, (t - a) / (1.0 - a));
    if (t <= plateau_hi) return t;
    return fall(plateau_hi, b - plateau_hi, (t - plateau_hi) / (b - plateau_hi));
}

double TruncationProfile::derivative(double t) const {
    if (t <= a || t >= b) return 0.0;
    if (t < plateau_lo) return rise_slope(a, (t - a) / (1.0 - a)) / (1.0 - a);
    if (t <= plateau_hi) return 1.0;
    const double d = b - plateau_hi;
    return fall_slope(plateau_hi, d, (t - plateau_hi) / d) / d;
}

ScalarMap TruncationProfile::as_scalar_map() const {
    const TruncationProfile self = *this;
    return {name, [self](double t) { return self(std::abs(t)); }, derivative_bound};
}

TruncationProfile build_chi(int dim) { return make_profile(dim); }

TruncationProfile broken_chi(int dim) {
    TruncationProfile p = make_profile(dim);
    p.derivative_bound = 0.25;
    p.name = "chi_broken";
    return p;
}

double chi_j(const TruncationProfile& chi, int j, double t) {
    const int e = (chi.dim - 1) * j;
    return std::ldexp(chi(std::ldexp(std::abs(t), -e)), e);
}

GridFunction chi_j(const TruncationProfile& chi, int j, const GridFunction& u) {
    if (u.dim() != chi.dim) fail(ErrorKind::DimensionMismatch, "chi_j: profile built for another dimension");
    return map_values(u, [&](double t) { return chi_j(chi, j, t); });
}

RadialStep chi_j(const TruncationProfile& chi, int j, const RadialStep& u) {
    if (u.dim() != chi.dim) fail(ErrorKind::DimensionMismatch, "chi_j: profile built for another dimension");
    std::vector<double> values(u.values().begin(), u.values().end());
    for (double& v : values) v = chi_j(chi, j, v);
    return RadialStep(u.dim(), std::vector<double>(u.radii().begin(), u.radii().end()), std::move(values));
}

Region level_set_A(const GridFunction& u, int j) {
    if (u.dim() < 2) fail(ErrorKind::UnsupportedDimension, "level sets need N >= 2");
    const int s = u.dim() - 1;
    return band(u, s * j, s * (j + 1));
}

Region level_set_B(const GridFunction& u, int j) {
    if (u.dim() < 2) fail(ErrorKind::UnsupportedDimension, "level sets need N >= 2");
    const int s = u.dim() - 1;
    return band(u, s * (j - 1), s * (j + 2));
}

int color_class(int j) { return ((j % 4) + 4) % 4 + 1; }

bool support_disjointness_check(const TruncationProfile& chi, const GridFunction& u, int j, int j_prime) {
    if (j == j_prime || color_class(j) != color_class(j_prime)) {
        fail(ErrorKind::Usage, "support disjointness is only claimed for distinct scales of one color class");
    }
    for (double v : u.values()) {
        if (chi_j(chi, j, v) != 0.0 && chi_j(chi, j_prime, v) != 0.0) return false;
    }
    return true;
}

std::vector<int> active_scales(int dim, const std::vector<double>& magnitudes) {
    int lo = std::numeric_limits<int>::max();
    int hi = std::numeric_limits<int>::min();
    for (double m : magnitudes) {
        if (m == 0.0) continue;
        const int k = floor_div(floor_log2(std::abs(m)), dim - 1);
        lo = std::min(lo, k);
        hi = std::max(hi, k);
    }
    std::vector<int> out;
    if (lo > hi) return out;
    for (int j = lo - 2; j <= hi + 2; ++j) out.push_back(j);
    return out;
}

LayerAudit layer_energy_audit(const TruncationProfile& chi, const GridFunction& u, double q) {
    if (u.dim() != chi.dim) fail(ErrorKind::DimensionMismatch, "layer audit: profile built for another dimension");
    check_q(u.dim(), q);
    const LorentzIndex idx = LorentzIndex::make(critical_exponent(u.dim()), q);
    LayerAudit audit;
    audit.dim = u.dim();
    audit.q = q;
    audit.lorentz_q_pow = std::pow(lorentz_norm(u, idx), q);
    audit.tv = total_variation(u);
    const std::vector<double> mags(u.values().begin(), u.values().end());
    for (int j : active_scales(u.dim(), mags)) {
        LayerRow row;
        row.j = j;
        row.color = color_class(j);
        row.tv_b = total_variation_on(u, level_set_B(u, j));
        row.layer_norm = lorentz_norm(restrict(chi_j(chi, j, u), level_set_A(u, j)), idx);
        audit.rows.push_back(row);
    }
    finish(audit);
    return audit;
}

LayerAudit layer_energy_audit(const TruncationProfile& chi, const RadialStep& u, double q) {
    if (u.dim() != chi.dim) fail(ErrorKind::DimensionMismatch, "layer audit: profile built for another dimension");
    check_q(u.dim(), q);
    const LorentzIndex idx = LorentzIndex::make(critical_exponent(u.dim()), q);
    LayerAudit audit;
    audit.dim = u.dim();
    audit.q = q;
    audit.lorentz_q_pow = std::pow(lorentz_norm(u, idx), q);
    audit.tv = radial_tv(u);
    const std::vector<double> mags(u.values().begin(), u.values().end());
    const int s = u.dim() - 1;
    for (int j : active_scales(u.dim(), mags)) {
        const double lo = std::ldexp(1.0, s * j);
        const double hi = std::ldexp(1.0, s * (j + 1));
        std::vector<double> values(u.values().begin(), u.values().end());
        for (double& v : values) {
            const double m = std::abs(v);
            v = (m >= lo && m < hi) ? chi_j(chi, j, v) : 0.0;
        }
        const RadialStep layer(u.dim(), std::vector<double>(u.radii().begin(), u.radii().end()), std::move(values));
        audit.rows.push_back({j, color_class(j), 0.0, lorentz_norm(layer, idx)});
    }
    finish(audit);
    return audit;
}

}  // namespace bvlab
