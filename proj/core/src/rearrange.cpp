#include "bvlab/rearrange.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace bvlab {

namespace {

void check_index(double p, double q) {
    if (!(p > 0.0) || !(q > 0.0) || std::isnan(p) || std::isnan(q) || std::isinf(p)) {
        fail(ErrorKind::Index, "Lorentz index needs 0 < p < inf and 0 < q <= inf (got p=" + std::to_string(p) +
                                   ", q=" + std::to_string(q) + ")");
    }
}

// Radii of the balls with the cumulative measures of u*.
std::vector<double> schwarz_radii(const StepFunction& u, int dim) {
    const double ball = unit_ball_volume(dim);
    std::vector<double> radii;
    radii.reserve(u.chunks().size());
    for (double t : u.cumulative()) radii.push_back(std::pow(t / ball, 1.0 / dim));
    return radii;
}

}  // namespace

// ------------------------------------------------------------ StepFunction

StepFunction StepFunction::from_pairs(std::vector<Chunk> pieces) {
    std::vector<Chunk> kept;
    kept.reserve(pieces.size());
    for (auto c : pieces) {
        if (c.measure < 0.0 || std::isnan(c.measure) || std::isnan(c.value)) {
            fail(ErrorKind::Domain, "rearrangement piece has negative or NaN measure/value");
        }
        c.value = std::abs(c.value);
        if (c.value == 0.0 || c.measure == 0.0) continue;
        kept.push_back(c);
    }
    std::sort(kept.begin(), kept.end(), [](const Chunk& a, const Chunk& b) { return a.value > b.value; });
    std::vector<Chunk> merged;
    for (const auto& c : kept) {
        if (!merged.empty() && merged.back().value == c.value) {
            merged.back().measure += c.measure;
        } else {
            merged.push_back(c);
        }
    }
    return StepFunction(std::move(merged));
}

StepFunction StepFunction::from_chunks(std::vector<Chunk> chunks) {
    for (std::size_t i = 0; i < chunks.size(); ++i) {
        if (!(chunks[i].value > 0.0) || !(chunks[i].measure > 0.0) || std::isinf(chunks[i].measure)) {
            fail(ErrorKind::Domain, "step function chunks need positive values and finite positive measures");
        }
        if (i > 0 && !(chunks[i].value < chunks[i - 1].value)) {
            fail(ErrorKind::Domain, "step function chunk values must be strictly decreasing");
        }
    }
    return StepFunction(std::move(chunks));
}

double StepFunction::total_measure() const {
    double t = 0.0;
    for (const auto& c : chunks_) t += c.measure;
    return t;
}

std::vector<double> StepFunction::cumulative() const {
    std::vector<double> out;
    out.reserve(chunks_.size());
    double t = 0.0;
    for (const auto& c : chunks_) {
        t += c.measure;
        out.push_back(t);
    }
    return out;
}

double StepFunction::operator()(double t) const {
    if (t < 0.0) fail(ErrorKind::Domain, "u*(t) needs t >= 0");
    double end = 0.0;
    for (const auto& c : chunks_) {
        end += c.measure;
        if (t < end) return c.value;
    }
    return 0.0;
}

StepFunction StepFunction::rescaled(double value_factor, double measure_factor) const {
    if (!(value_factor > 0.0) || !(measure_factor > 0.0)) {
        fail(ErrorKind::Domain, "rescaling factors must be positive");
    }
    std::vector<Chunk> out(chunks_);
    for (auto& c : out) {
        c.value *= value_factor;
        c.measure *= measure_factor;
    }
    return StepFunction(std::move(out));
}

LorentzIndex LorentzIndex::make(double p, double q) {
    check_index(p, q);
    return LorentzIndex{p, q};
}

double unit_ball_volume(int dim) {
    switch (dim) {
        case 1: return 2.0;
        case 2: return std::numbers::pi;
        case 3: return 4.0 * std::numbers::pi / 3.0;
        default: fail(ErrorKind::UnsupportedDimension, "unit ball volume tabulated for N <= 3 only");
    }
}

double critical_exponent(int dim) {
    check_dim(dim);
    if (dim < 2) fail(ErrorKind::UnsupportedDimension, "critical exponent N/(N-1) needs N >= 2");
    return static_cast<double>(dim) / static_cast<double>(dim - 1);
}

std::vector<Chunk> value_measure_pairs(const GridFunction& u) {
    std::vector<Chunk> out;
    const double m = u.cell_measure();
    for (double v : u.values())
        if (v != 0.0) out.push_back({v, m});
    return out;
}

std::vector<Chunk> value_measure_pairs(const DyadicSum& u) {
    std::vector<Chunk> out;
    for (const auto& c : u.clusters()) {
        auto part = value_measure_pairs(c);
        out.insert(out.end(), part.begin(), part.end());
    }
    return out;
}

std::vector<Chunk> value_measure_pairs(const StepFunction& u) {
    return std::vector<Chunk>(u.chunks().begin(), u.chunks().end());
}

// ------------------------------------------------------------------ norms

double distribution_function(const StepFunction& u, double lambda) {
    if (lambda < 0.0 || std::isnan(lambda)) fail(ErrorKind::Domain, "distribution function needs lambda >= 0");
    double mu = 0.0;
    for (const auto& c : u.chunks()) {
        if (c.value > lambda) mu += c.measure;
    }
    return mu;
}

// All norms factor out max value and total measure so that dyadic rescalings
// change only the leading factor; the remaining sum is scale invariant.
double lorentz_norm(const StepFunction& u, const LorentzIndex& idx) {
    check_index(idx.p, idx.q);
    if (idx.weak()) return lorentz_norm_weak(u, idx.p);
    if (u.empty()) return 0.0;
    const double vmax = u.max_value();
    const double total = u.total_measure();
    const double a = idx.q / idx.p;
    double sum = 0.0;
    double before = 0.0;  // cumulative measure T_{i-1}
    for (const auto& c : u.chunks()) {
        double increment;
        if (before == 0.0) {
            increment = std::pow(c.measure / total, a);
        } else {
            // T_i^a - T_{i-1}^a without cancellation.
            increment = std::pow(before / total, a) * std::expm1(a * std::log1p(c.measure / before));
        }
        sum += std::pow(c.value / vmax, idx.q) * increment;
        before += c.measure;
    }
    sum *= idx.p / idx.q;
    return vmax * std::pow(total, 1.0 / idx.p) * std::pow(sum, 1.0 / idx.q);
}

double lorentz_norm_weak(const StepFunction& u, double p) {
    check_index(p, kInfinity);
    if (u.empty()) return 0.0;
    const double vmax = u.max_value();
    const double total = u.total_measure();
    double best = 0.0;
    double t = 0.0;
    for (const auto& c : u.chunks()) {
        t += c.measure;
        best = std::max(best, (c.value / vmax) * std::pow(t / total, 1.0 / p));
    }
    return vmax * std::pow(total, 1.0 / p) * best;
}

double lebesgue_norm(const StepFunction& u, double p) {
    if (!(p >= 1.0)) fail(ErrorKind::Index, "Lebesgue norm needs p >= 1");
    if (u.empty()) return 0.0;
    const double vmax = u.max_value();
    if (std::isinf(p)) return vmax;
    const double total = u.total_measure();
    double sum = 0.0;
    for (const auto& c : u.chunks()) sum += (c.measure / total) * std::pow(c.value / vmax, p);
    return vmax * std::pow(total, 1.0 / p) * std::pow(sum, 1.0 / p);
}

StepFunction schwarz_profile(const StepFunction& u_star, int dim) {
    const auto radii = schwarz_radii(u_star, dim);
    std::vector<Chunk> out;
    double previous = 0.0;
    for (std::size_t i = 0; i < radii.size(); ++i) {
        const double width = radii[i] - previous;
        if (width > 0.0) out.push_back({u_star.chunks()[i].value, width});
        previous = radii[i];
    }
    return StepFunction::from_chunks(std::move(out));
}

double lorentz_norm_symmetrization(const StepFunction& u_star, const LorentzIndex& idx, int dim) {
    check_index(idx.p, idx.q);
    if (u_star.empty()) return 0.0;
    const double ball = unit_ball_volume(dim);
    const auto radii = schwarz_radii(u_star, dim);
    const double outer = radii.back();
    const double vmax = u_star.max_value();
    const double n = static_cast<double>(dim);

    if (idx.weak()) {
        // sup_r |B_1|^{1/p} r^{N/p} u#(r), attained at the outer radius of each level.
        double best = 0.0;
        for (std::size_t i = 0; i < radii.size(); ++i) {
            best = std::max(best, (u_star.chunks()[i].value / vmax) * std::pow(radii[i] / outer, n / idx.p));
        }
        return std::pow(ball, 1.0 / idx.p) * vmax * std::pow(outer, n / idx.p) * best;
    }

    // |B_1|^{(q-p)/(pq)} ( N |B_1| int_0^inf r^{Nq/p - 1} u#(r)^q dr )^{1/q}
    const double b = n * idx.q / idx.p;
    double sum = 0.0;
    double inner = 0.0;
    for (std::size_t i = 0; i < radii.size(); ++i) {
        const double rho = radii[i] / outer;
        sum += std::pow(u_star.chunks()[i].value / vmax, idx.q) * (std::pow(rho, b) - std::pow(inner, b));
        inner = rho;
    }
    const double integral = n * ball / b * sum;
    return std::pow(ball, (idx.q - idx.p) / (idx.p * idx.q)) * vmax * std::pow(outer, n / idx.p) *
           std::pow(integral, 1.0 / idx.q);
}

NestedAudit embedding_audit_nested(const StepFunction& u, const LorentzIndex& low, const LorentzIndex& high,
                                   double region_measure) {
    check_index(low.p, low.q);
    check_index(high.p, high.q);
    if (!(low.p < high.p)) fail(ErrorKind::Index, "nested inclusion needs p1 < p2");
    if (!(region_measure > 0.0) || std::isinf(region_measure)) {
        fail(ErrorKind::Domain, "nested inclusion needs a region of finite positive measure");
    }
    const double support = u.total_measure();
    if (support > region_measure * (1.0 + 1e-12)) {
        fail(ErrorKind::Domain, "function support exceeds the stated region measure");
    }
    NestedAudit audit;
    audit.low = low;
    audit.high = high;
    audit.region_measure = region_measure;
    audit.norm_low = lorentz_norm(u, low);
    audit.norm_high = lorentz_norm(u, high);
    audit.ratio = audit.norm_high == 0.0 ? 0.0 : audit.norm_low / audit.norm_high;
    return audit;
}

}  // namespace bvlab
