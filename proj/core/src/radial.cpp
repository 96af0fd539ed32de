#include "bvlab/radial.hpp"

#include <algorithm>
#include <cmath>

namespace bvlab {

RadialStep::RadialStep(int dim, std::vector<double> radii, std::vector<double> values) : dim_(dim) {
    check_dim(dim);
    if (radii.empty() || radii.front() != 0.0) fail(ErrorKind::Domain, "radial breakpoints must start at r_0 = 0");
    if (radii.size() != values.size() + 1) {
        fail(ErrorKind::Domain, "radial step needs one more breakpoint than values");
    }
    for (std::size_t m = 1; m < radii.size(); ++m) {
        if (!(radii[m] > radii[m - 1]) || !std::isfinite(radii[m])) {
            fail(ErrorKind::Domain, "radial breakpoints must be finite and strictly increasing");
        }
    }
    for (double v : values)
        if (!std::isfinite(v)) fail(ErrorKind::Domain, "radial values must be finite");

    radii_.push_back(0.0);
    for (std::size_t m = 0; m < values.size(); ++m) {
        if (!values_.empty() && values_.back() == values[m]) {
            radii_.back() = radii[m + 1];
        } else {
            values_.push_back(values[m]);
            radii_.push_back(radii[m + 1]);
        }
    }
    while (!values_.empty() && values_.back() == 0.0) {
        values_.pop_back();
        radii_.pop_back();
    }
}

RadialStep RadialStep::zero(int dim) { return RadialStep(dim, {0.0}, {}); }

double RadialStep::annulus_measure(std::size_t m) const {
    if (m < 1 || m > values_.size()) fail(ErrorKind::Domain, "annulus index out of range");
    return unit_ball_volume(dim_) * (std::pow(radii_[m], dim_) - std::pow(radii_[m - 1], dim_));
}

double RadialStep::at_radius(double r) const {
    if (values_.empty() || r > radii_.back()) return 0.0;
    if (r <= 0.0) return values_.front();
    // first breakpoint >= r closes the annulus containing r
    const auto it = std::lower_bound(radii_.begin() + 1, radii_.end(), r);
    return values_[static_cast<std::size_t>(it - radii_.begin()) - 1];
}

double RadialStep::operator()(const Point& x) const {
    double sq = 0.0;
    for (int a = 0; a < dim_; ++a) sq += x[a] * x[a];
    return at_radius(std::sqrt(sq));
}

RadialStep annulus_indicator(int dim) {
    check_dim(dim);
    if (dim < 2) fail(ErrorKind::UnsupportedDimension, "annulus indicator is defined for N >= 2");
    return RadialStep(dim, {0.0, 1.0, 2.0}, {0.0, 1.0});
}

RadialStep rescale_dyadic(const RadialStep& u, int i) {
    std::vector<double> radii(u.radii().begin(), u.radii().end());
    std::vector<double> values(u.values().begin(), u.values().end());
    for (double& r : radii) r = std::ldexp(r, -i);
    for (double& v : values) v = std::ldexp(v, i * (u.dim() - 1));
    return RadialStep(u.dim(), std::move(radii), std::move(values));
}

RadialStep linear_combine(std::span<const double> coefficients, std::span<const RadialStep> terms) {
    if (terms.empty()) fail(ErrorKind::Usage, "radial linear_combine needs at least one term");
    if (coefficients.size() != terms.size()) fail(ErrorKind::Usage, "coefficient and term counts differ");
    const int dim = terms.front().dim();
    std::vector<double> radii;
    for (const auto& t : terms) {
        if (t.dim() != dim) fail(ErrorKind::DimensionMismatch, "radial terms of mixed dimension");
        radii.insert(radii.end(), t.radii().begin(), t.radii().end());
    }
    std::sort(radii.begin(), radii.end());
    radii.erase(std::unique(radii.begin(), radii.end()), radii.end());
    std::vector<double> values(radii.size() - 1, 0.0);
    for (std::size_t m = 1; m < radii.size(); ++m) {
        // Every merged annulus lies inside one annulus of each term; evaluate at its outer radius.
        for (std::size_t k = 0; k < terms.size(); ++k) values[m - 1] += coefficients[k] * terms[k].at_radius(radii[m]);
    }
    return RadialStep(dim, std::move(radii), std::move(values));
}

RadialStep staircase(int dim, int n) {
    if (n < 1) fail(ErrorKind::Domain, "staircase needs n >= 1");
    const RadialStep phi = annulus_indicator(dim);
    std::vector<RadialStep> terms;
    terms.reserve(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) terms.push_back(rescale_dyadic(phi, i));
    const std::vector<double> weights(static_cast<std::size_t>(n), 1.0 / n);
    return linear_combine(weights, terms);
}

double radial_tv(const RadialStep& u) {
    const double sphere = u.dim() * unit_ball_volume(u.dim());
    double tv = 0.0;
    const auto values = u.values();
    for (std::size_t m = 1; m < u.radii().size(); ++m) {
        const double outside = m < values.size() ? values[m] : 0.0;
        tv += sphere * std::pow(u.radii()[m], u.dim() - 1) * std::abs(outside - values[m - 1]);
    }
    return tv;
}

double piecewise_tv(const RadialStep& u) {
    const double sphere = u.dim() * unit_ball_volume(u.dim());
    double tv = 0.0;
    for (std::size_t m = 1; m < u.radii().size(); ++m) {
        const double inner = u.radii()[m - 1] > 0.0 ? std::pow(u.radii()[m - 1], u.dim() - 1) : 0.0;
        tv += std::abs(u.values()[m - 1]) * sphere * (inner + std::pow(u.radii()[m], u.dim() - 1));
    }
    return tv;
}

std::vector<Chunk> value_measure_pairs(const RadialStep& u) {
    std::vector<Chunk> out;
    for (std::size_t m = 1; m <= u.annuli(); ++m) {
        if (u.values()[m - 1] != 0.0) out.push_back({u.values()[m - 1], u.annulus_measure(m)});
    }
    return out;
}

StepFunction to_stepfunction(const RadialStep& u) { return StepFunction::from_pairs(value_measure_pairs(u)); }

double dual_pairing_f0(const RadialStep& u) {
    const int n = u.dim();
    if (n < 2) fail(ErrorKind::UnsupportedDimension, "f0 pairing needs N >= 2");
    const double factor = n * unit_ball_volume(n) / (n - 1);
    double sum = 0.0;
    for (std::size_t m = 1; m <= u.annuli(); ++m) {
        sum += u.values()[m - 1] * (std::pow(u.radii()[m], n - 1) - std::pow(u.radii()[m - 1], n - 1));
    }
    return factor * sum;
}

GridFunction to_grid(const RadialStep& u, const CellBox& box, const Limits& limits) {
    if (box.dim != u.dim()) fail(ErrorKind::DimensionMismatch, "to_grid: box dimension differs");
    return from_sampler(box, [&](const Point& x) { return u(x); }, limits);
}

GridFunction to_grid(const RadialStep& u, int level, const Limits& limits) {
    if (u.annuli() == 0) return GridFunction::zero(u.dim(), level);
    const auto reach = static_cast<std::int64_t>(std::ceil(std::ldexp(u.outer_radius(), level)));
    CellIndex lo{0, 0, 0};
    CellIndex hi{1, 1, 1};
    for (int a = 0; a < u.dim(); ++a) {
        lo[a] = -reach;
        hi[a] = reach;
    }
    return to_grid(u, CellBox::make(u.dim(), level, lo, hi), limits);
}

}  // namespace bvlab
