#pragma once

#include <concepts>
#include <limits>
#include <span>
#include <vector>

#include "bvlab/dyadic_sum.hpp"
#include "bvlab/grid.hpp"

namespace bvlab {

/// A level of a non-increasing step function: `value` held over a set of measure `measure`.
struct Chunk {
    double value = 0.0;
    double measure = 0.0;

    friend bool operator==(const Chunk&, const Chunk&) = default;
};

/// Non-increasing, right-continuous step function on (0, total measure), zero afterwards.
///
/// Chunk values are strictly decreasing and positive; measures are positive.
/// This is the exact decreasing rearrangement u* of a piecewise-constant function.
class StepFunction {
public:
    StepFunction() = default;

    /// Builds u* from unordered (value, measure) pieces: absolute values, zero pieces dropped, equal values merged.
    static StepFunction from_pairs(std::vector<Chunk> pieces);
    /// Validates an already ordered chunk list.
    static StepFunction from_chunks(std::vector<Chunk> chunks);

    std::span<const Chunk> chunks() const { return chunks_; }
    bool empty() const { return chunks_.empty(); }
    double total_measure() const;
    double max_value() const { return chunks_.empty() ? 0.0 : chunks_.front().value; }
    /// Cumulative measures T_1 < T_2 < ... at the chunk right endpoints.
    std::vector<double> cumulative() const;

    /// u*(t) for t >= 0.
    double operator()(double t) const;

    /// Exact multiplication of values and measures (used for dyadic scalings).
    StepFunction rescaled(double value_factor, double measure_factor) const;

    friend bool operator==(const StepFunction&, const StepFunction&) = default;

private:
    explicit StepFunction(std::vector<Chunk> chunks) : chunks_(std::move(chunks)) {}
    std::vector<Chunk> chunks_;
};

/// Lorentz exponents (p, q), q may be infinite.
struct LorentzIndex {
    double p = 2.0;
    double q = 2.0;

    static LorentzIndex make(double p, double q);
    bool weak() const { return q == std::numeric_limits<double>::infinity(); }
};

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// |B_1| for N <= 3: 2, pi, 4pi/3.
double unit_ball_volume(int dim);
/// The critical exponent 1* = N/(N-1), N >= 2.
double critical_exponent(int dim);

std::vector<Chunk> value_measure_pairs(const GridFunction& u);
std::vector<Chunk> value_measure_pairs(const DyadicSum& u);
std::vector<Chunk> value_measure_pairs(const StepFunction& u);

/// Anything whose values can be listed as (value, measure) pieces.
template <class F>
concept Rearrangeable = requires(const F& u) {
    { value_measure_pairs(u) } -> std::convertible_to<std::vector<Chunk>>;
};

double distribution_function(const StepFunction& u, double lambda);
double lorentz_norm(const StepFunction& u, const LorentzIndex& idx);
double lorentz_norm_weak(const StepFunction& u, double p);
double lebesgue_norm(const StepFunction& u, double p);

/// u# as a function of the radius: chunk measures are radial widths, so cumulative measure is the radius.
StepFunction schwarz_profile(const StepFunction& u_star, int dim);
/// Lorentz norm through the Schwarz symmetrization, evaluated in radius coordinates.
double lorentz_norm_symmetrization(const StepFunction& u_star, const LorentzIndex& idx, int dim);

template <Rearrangeable F>
StepFunction decreasing_rearrangement(const F& u) {
    return StepFunction::from_pairs(value_measure_pairs(u));
}

template <Rearrangeable F>
double distribution_function(const F& u, double lambda) {
    return distribution_function(decreasing_rearrangement(u), lambda);
}

template <Rearrangeable F>
double lorentz_norm(const F& u, const LorentzIndex& idx) {
    return lorentz_norm(decreasing_rearrangement(u), idx);
}

template <Rearrangeable F>
double lorentz_norm_weak(const F& u, double p) {
    return lorentz_norm_weak(decreasing_rearrangement(u), p);
}

template <Rearrangeable F>
double lebesgue_norm(const F& u, double p) {
    return lebesgue_norm(decreasing_rearrangement(u), p);
}

template <Rearrangeable F>
StepFunction schwarz_profile(const F& u) {
    return schwarz_profile(decreasing_rearrangement(u), u.dim());
}

template <Rearrangeable F>
double lorentz_norm_symmetrization(const F& u, const LorentzIndex& idx) {
    return lorentz_norm_symmetrization(decreasing_rearrangement(u), idx, u.dim());
}

/// Both sides of a nested Lorentz inclusion on a set of finite measure.
struct NestedAudit {
    LorentzIndex low;   // (p1, q1), the larger space
    LorentzIndex high;  // (p2, q2)
    double norm_low = 0.0;
    double norm_high = 0.0;
    double ratio = 0.0;  // norm_low / norm_high, 0 when both vanish
    double region_measure = 0.0;
};

NestedAudit embedding_audit_nested(const StepFunction& u, const LorentzIndex& low, const LorentzIndex& high,
                                   double region_measure);

template <Rearrangeable F>
NestedAudit embedding_audit_nested(const F& u, const LorentzIndex& low, const LorentzIndex& high,
                                   double region_measure) {
    return embedding_audit_nested(decreasing_rearrangement(u), low, high, region_measure);
}

}  // namespace bvlab
