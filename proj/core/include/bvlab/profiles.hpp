#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "bvlab/dyadic_sum.hpp"
#include "bvlab/group.hpp"

namespace bvlab {

/// Finite window u_0, ..., u_{K-1} of a sequence bounded in BV.
struct SequenceSpec {
    int dim = 2;
    std::vector<DyadicSum> elements;
    double bv_bound = 0.0;

    static SequenceSpec from_generator(int dim, std::size_t count, const std::function<DyadicSum(std::size_t)>& make,
                                       double bv_bound);
    /// Fails with a Domain error when some element has TV above bv_bound (1 + 1e-6).
    void validate(const Limits& limits = {}) const;
};

struct ExtractOptions {
    double eps = 1e-3;      // profiles with TV below this stop the loop
    int max_profiles = 8;
    double q = 2.0;         // remainder norms are ||.||_{1*,q}
    int scale_min = -10;    // cube side 2^j searched for j in [scale_min, scale_max]
    int scale_max = 10;
    int window_margin = 2;  // aligned window [-R, 1+R)^N
    double cauchy_tol = 0.05;
    double vanish_ratio = 0.5;
    int tail = 3;
    int stride = 1;         // use every stride-th element
    int threads = 1;
    GroupLimits group{};
};

struct Profile {
    GridFunction w = GridFunction::zero(2, 0);
    /// a_k with act(a_k, u_k) converging to w near the unit cube.
    std::vector<GroupElement> alignment;
    /// inverse(a_k): the g_k in u_k = sum_n g_k w + r_k.
    std::vector<GroupElement> placement;
    double tv = 0.0;
};

struct ProfileDecomposition {
    int dim = 2;
    double q = 2.0;
    std::vector<std::size_t> indices;  // positions in the input sequence
    std::vector<Profile> profiles;
    std::vector<DyadicSum> remainders;
    std::vector<double> initial_norms;    // ||u_k||_{1*,q}
    std::vector<double> remainder_norms;  // ||r_k||_{1*,q}
    /// Largest aligned unit-cube mass over k before each step and after the last one.
    std::vector<double> max_mass_history;
    bool remainder_monotone = true;
    double reconstruction_defect = 0.0;  // sup |u_k - sum g w - r_k|
    std::string stop_reason;
};

/// Greedy extraction: per element pick the dyadic cube with the largest scaled mass, align it to
/// the unit cube, take the aligned tail as weak-limit proxy, subtract its placed copies, repeat.
/// Step 0 tries the identity alignment, so the first profile (if any) has the identity sequence.
/// Throws NonConvergentSubsequence when the aligned tail is neither vanishing nor Cauchy.
ProfileDecomposition extract_profiles(const SequenceSpec& seq, const ExtractOptions& options = {});

struct SeparationPair {
    std::size_t n = 0;
    std::size_t m = 0;
    std::vector<double> distances;  // |j_n - j_m| + |y_n - y_m| per k
    double tail_min = 0.0;          // over the second half of k
    bool increasing = true;
    bool pass = true;
};

struct SeparationReport {
    double floor = 4.0;
    std::vector<SeparationPair> pairs;
    bool pass = true;
};

SeparationReport separation_check(const ProfileDecomposition& d, double floor = 4.0);

struct EnergyReport {
    double delta = 0.1;
    double sum_profile_tv = 0.0;
    double tv_u = 0.0;  // last element
    double tv_r = 0.0;  // last remainder
    double slack = 0.0; // tv_u - sum_profile_tv - tv_r
    bool upper_holds = true;  // sum_profile_tv <= tv_u (1 + delta)
    bool lower_holds = true;  // tv_u <= sum_profile_tv + tv_r + delta tv_u
    std::vector<double> tv_u_samples;
    std::vector<double> tv_r_samples;

    bool pass() const { return upper_holds && lower_holds; }
};

EnergyReport energy_audit(const ProfileDecomposition& d, const SequenceSpec& seq, double delta = 0.1,
                          const Limits& limits = {});

/// Two smooth bumps on [0,1)^2 at `level`: w1 = (sin pi x sin pi y)^2, w2 = 16 x(1-x) y(1-y).
GridFunction fixture_bump(int which, int level);
/// u_k = w1 + g[k, k e1] w2 for k = 1..count, N = 2.
SequenceSpec two_profile_fixture(int level = 6, int count = 8);

}  // namespace bvlab
