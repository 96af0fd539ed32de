#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "bvlab/dyadic_sum.hpp"
#include "bvlab/group.hpp"
#include "bvlab/radial.hpp"

namespace bvlab {

struct CounterexampleRow {
    int n = 1;
    double tv_coarea = 0.0;
    double tv_piecewise = 0.0;
    double l1star = 0.0;               // ||u_n||_{L^{1*}}
    std::map<double, double> lorentz;  // q -> ||u_n||_{1*,q}
    double f0 = 0.0;
};

struct InvariantCheck {
    std::string name;
    bool pass = true;
    std::string detail;
};

struct CounterexampleOptions {
    double nonvanishing_floor = 0.5;
    double exponent_tolerance = 0.1;
    int threads = 1;
};

struct CounterexampleResult {
    int dim = 2;
    int n_max = 1;
    std::vector<double> q_list;
    CounterexampleOptions options;
    std::vector<CounterexampleRow> rows;
    double annulus_measure = 0.0;
    double f0_floor = 0.0;                    // half the annulus measure
    std::map<double, double> fitted_exponents;  // q > 1 -> log-log slope of lorentz[q](n)
    std::vector<InvariantCheck> checks;

    bool pass() const;
};

/// Exact radial rows for n = 1..n_max, plus the invariant checks.
CounterexampleResult run_counterexample(int dim, int n_max, const std::vector<double>& q_list,
                                        const CounterexampleOptions& options = {});

/// Least-squares slope of log y against log x. Needs two distinct x and positive data.
double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

struct ProbeReport {
    std::vector<GroupElement> elements;
    std::vector<double> masses;  // L1 mass of act(g, u) on (0,1)^N
    double max_mass = 0.0;
    std::size_t argmax = 0;
};

struct ProbeOptions {
    /// Midpoint quadrature level on the unit cube; 0 picks about 2^14 nodes.
    int quadrature_level = 0;
    int threads = 1;
    GroupLimits group{};
};

/// Scales j in [-n-3, 3] with integer shifts in {-2, ..., 1}^N, plus `random_shifts`
/// extra integer shifts in [-4, 4)^N per scale drawn from `seed`.
std::vector<GroupElement> probe_elements(int dim, int n, int random_shifts = 0, std::uint64_t seed = 0);

/// Radial input: midpoint quadrature of |act(g, u)| on the unit cube.
ProbeReport dvanishing_probe(const RadialStep& u, const std::vector<GroupElement>& elements,
                             const ProbeOptions& options = {});
/// Staircase u_n of dimension N.
ProbeReport dvanishing_probe(int dim, int n, const std::vector<GroupElement>& elements,
                             const ProbeOptions& options = {});
/// Grid input: exact cell masses.
ProbeReport dvanishing_probe(const GridFunction& u, const std::vector<GroupElement>& elements,
                             const ProbeOptions& options = {});
ProbeReport dvanishing_probe(const DyadicSum& u, const std::vector<GroupElement>& elements,
                             const ProbeOptions& options = {});

/// L1 norm on (0,1)^N.
double unit_cube_mass(const GridFunction& u, const Limits& limits = {});

struct CocompactnessRow {
    int n = 1;
    double probe_max = 0.0;
    std::map<double, double> lorentz;
};

struct CocompactnessTable {
    int dim = 2;
    std::vector<CocompactnessRow> rows;
    double probe_exponent = 0.0;  // fitted on the second half of the n range
    int fit_from = 1;
    std::map<double, double> lorentz_exponents;  // fitted on the full range
};

/// Probe maxima next to the Lorentz columns of the staircase sequence.
CocompactnessTable cocompactness_table(int dim, int n_max, const std::vector<double>& q_list,
                                       const ProbeOptions& options = {});

}  // namespace bvlab
