#include "bvlab/bv.hpp"

#include <cmath>

#include "bvlab/rearrange.hpp"

namespace bvlab {

namespace {

// Visits every cell that can carry a nonzero forward difference, passing its TV contribution.
template <class F>
void for_each_tv_cell(const GridFunction& u, F&& f) {
    const int dim = u.dim();
    const double face = std::ldexp(1.0, -u.level() * (dim - 1));
    CellIndex lo = u.origin();
    CellIndex hi = u.origin();
    for (int a = 0; a < dim; ++a) {
        lo[a] -= 1;
        hi[a] += u.extents()[a];
    }
    CellIndex cell = lo;
    while (true) {
        const double v = u.at(cell);
        double sq = 0.0;
        for (int k = 0; k < dim; ++k) {
            CellIndex next = cell;
            next[k] += 1;
            const double d = u.at(next) - v;
            sq += d * d;
        }
        if (sq > 0.0) f(cell, face * std::sqrt(sq));

        int axis = dim - 1;
        for (; axis >= 0; --axis) {
            if (++cell[axis] < hi[axis]) break;
            cell[axis] = lo[axis];
        }
        if (axis < 0) break;
    }
}

}  // namespace

double total_variation(const GridFunction& u) {
    double tv = 0.0;
    for_each_tv_cell(u, [&](const CellIndex&, double c) { tv += c; });
    return tv;
}

double total_variation(const DyadicSum& u, const Limits& limits) {
    double tv = 0.0;
    for (const auto& c : u.clusters(limits)) tv += total_variation(c);
    return tv;
}

double total_variation_on(const GridFunction& u, const Region& region) {
    if (region.dim() != u.dim()) fail(ErrorKind::DimensionMismatch, "total_variation_on: region dimension differs");
    double tv = 0.0;
    for_each_tv_cell(u, [&](const CellIndex& cell, double c) {
        if (region.contains(u.level(), cell)) tv += c;
    });
    return tv;
}

double grad_l1_norm(const GridFunction& u) { return total_variation(u); }

double bv_norm(const GridFunction& u, const Region& region) {
    return total_variation_on(u, region) + restrict(u, region).l1_norm();
}

ScalarMap ScalarMap::identity() { return {"identity", [](double t) { return t; }, 1.0}; }

ScalarMap ScalarMap::half() { return {"half", [](double t) { return 0.5 * t; }, 0.5}; }

ScalarMap ScalarMap::smoothstep() {
    return {"smoothstep",
            [](double t) {
                if (t <= 0.0) return 0.0;
                if (t >= 1.0) return 1.0;
                return t * t * (3.0 - 2.0 * t);
            },
            1.5};
}

std::pair<GridFunction, ChainReport> compose_scalar(const ScalarMap& phi, const GridFunction& u) {
    if (phi.apply(0.0) != 0.0) {
        fail(ErrorKind::SupportViolation, "scalar map '" + phi.name + "' has phi(0) != 0");
    }
    GridFunction composed = map_values(u, phi.apply);
    ChainReport report;
    report.map_name = phi.name;
    report.tv_composed = total_variation(composed);
    report.tv_input = total_variation(u);
    report.derivative_bound = phi.derivative_bound;
    report.bound = phi.derivative_bound * report.tv_input;
    report.ratio = report.tv_input > 0.0 ? report.tv_composed / report.tv_input : 0.0;
    report.holds = report.tv_composed <= report.bound * (1.0 + 1e-9);
    return {std::move(composed), report};
}

TVReport lattice_tv_sum(const GridFunction& u) {
    TVReport report;
    report.dim = u.dim();
    const int level = u.level();
    for_each_tv_cell(u, [&](const CellIndex& cell, double c) {
        CellIndex cube{0, 0, 0};
        for (int a = 0; a < u.dim(); ++a) cube[a] = level >= 0 ? (cell[a] >> level) : (cell[a] << -level);
        report.per_cube[cube] += c;
        report.total += c;
    });
    for (const auto& [cube, value] : report.per_cube) report.sum_per_cube += value;
    report.splitting_bound = std::pow(3.0, u.dim()) * report.total;
    return report;
}

BVEmbeddingAudit embedding_audit_bv(const GridFunction& u, const Region& region, double q, const Limits& limits) {
    if (!(q >= 1.0)) fail(ErrorKind::Index, "BV embedding audit needs 1 <= q <= inf");
    const double p = critical_exponent(u.dim());
    const GridFunction local = restrict(u, region, limits);
    BVEmbeddingAudit audit;
    audit.q = q;
    audit.lorentz_q = lorentz_norm(local, LorentzIndex::make(p, q));
    audit.lorentz_1 = lorentz_norm(local, LorentzIndex::make(p, 1.0));
    audit.bv_norm = total_variation_on(u, region) + local.l1_norm();
    audit.ratio_q_over_1 = audit.lorentz_1 > 0.0 ? audit.lorentz_q / audit.lorentz_1 : 0.0;
    audit.ratio_1_over_bv = audit.bv_norm > 0.0 ? audit.lorentz_1 / audit.bv_norm : 0.0;
    audit.first_inequality_holds = audit.lorentz_q <= audit.lorentz_1 * (1.0 + 1e-12);
    return audit;
}

}  // namespace bvlab
