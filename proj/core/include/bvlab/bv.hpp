#pragma once

#include <functional>
#include <map>
#include <string>
#include <utility>

#include "bvlab/dyadic_sum.hpp"
#include "bvlab/grid.hpp"
#include "bvlab/region.hpp"

namespace bvlab {

// Discrete total variation: forward differences with zero extension, isotropic
// per cell,
//
//     TV(u) = sum_cells h^N * sqrt( sum_k ((u(x + h e_k) - u(x)) / h)^2 ).
//
// Every cell whose stencil can see a nonzero value is visited, which includes
// the layer of cells just below the box on each axis.

double total_variation(const GridFunction& u);
/// Sum over flattened clusters; clusters never share a stencil.
double total_variation(const DyadicSum& u, const Limits& limits = {});
/// Restricted to cells whose base point lies in `region` (stencils may read one cell outside it).
double total_variation_on(const GridFunction& u, const Region& region);
/// W^{1,1} seminorm; coincides with the total variation for grid functions.
double grad_l1_norm(const GridFunction& u);
/// Total variation on the region plus the L1 norm on the region.
double bv_norm(const GridFunction& u, const Region& region);

/// Scalar map with a derivative bound supplied by its constructor.
struct ScalarMap {
    std::string name;
    std::function<double(double)> apply;
    double derivative_bound = 0.0;

    static ScalarMap identity();
    static ScalarMap half();
    /// 3t^2 - 2t^3 on [0,1], constant outside; |phi'| <= 3/2.
    static ScalarMap smoothstep();
};

struct ChainReport {
    std::string map_name;
    double tv_composed = 0.0;
    double tv_input = 0.0;
    double derivative_bound = 0.0;
    double bound = 0.0;  // derivative_bound * tv_input
    double ratio = 0.0;  // tv_composed / tv_input, 0 for constant input
    bool holds = true;   // tv_composed <= bound (1 + 1e-9)
};

/// phi(u) together with the chain-rule comparison TV(phi(u)) <= ||phi'||_inf TV(u).
std::pair<GridFunction, ChainReport> compose_scalar(const ScalarMap& phi, const GridFunction& u);

/// Total variation split over the unit-cube lattice (0,1)^N + y, y in Z^N.
struct TVReport {
    int dim = 1;
    double total = 0.0;
    std::map<CellIndex, double> per_cube;
    double splitting_bound = 0.0;  // 3^N * total
    double sum_per_cube = 0.0;

    bool holds() const { return sum_per_cube <= splitting_bound + 1e-9 * splitting_bound; }
};

TVReport lattice_tv_sum(const GridFunction& u);

struct BVEmbeddingAudit {
    double q = 1.0;
    double lorentz_q = 0.0;  // ||u||_{1*,q} on the region
    double lorentz_1 = 0.0;  // ||u||_{1*,1} on the region
    double bv_norm = 0.0;
    double ratio_q_over_1 = 0.0;
    double ratio_1_over_bv = 0.0;
    bool first_inequality_holds = true;
};

/// ||u||_{1*,q}(R) <= ||u||_{1*,1}(R) <= C ||u||_{BV(R)}: checks the first, records the second ratio.
BVEmbeddingAudit embedding_audit_bv(const GridFunction& u, const Region& region, double q,
                                    const Limits& limits = {});

}  // namespace bvlab
