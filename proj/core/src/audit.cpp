#include "bvlab/audit.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bvlab/bv.hpp"
#include "bvlab/corpus.hpp"
#include "bvlab/group.hpp"
#include "bvlab/layers.hpp"
#include "bvlab/parallel.hpp"
#include "bvlab/rearrange.hpp"

namespace bvlab {

namespace {

double rel(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

// Suite accumulator: per-sample verdicts collected by index, reduced in order.
struct Tally {
    std::vector<char> ok;
    std::vector<double> metric;
    explicit Tally(std::size_t n) : ok(n, 1), metric(n, 0.0) {}

    SuiteResult finish(std::string name, std::string detail) const {
        SuiteResult s;
        s.name = std::move(name);
        s.samples = ok.size();
        for (std::size_t i = 0; i < ok.size(); ++i) {
            if (!ok[i]) ++s.violations;
            s.worst = std::max(s.worst, metric[i]);
        }
        s.detail = std::move(detail);
        return s;
    }
};

std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t stream) { return seed * 0x9e3779b97f4a7c15ull + stream; }

std::vector<GridFunction> corpus_for(const AuditConfig& c, int dim, std::uint64_t stream) {
    return grid_corpus(sub_seed(c.seed, stream + static_cast<std::uint64_t>(dim)), c.corpus_size, dim);
}

SuiteResult lorentz_equality(const AuditConfig& c) {
    const auto steps = stepfunction_corpus(sub_seed(c.seed, 1), c.corpus_size);
    const double ps[] = {1.5, 2.0, 3.0};
    const double qs[] = {1.0, 1.5, 2.0, 4.0, kInfinity};
    Tally t(steps.size());
    parallel_for(steps.size(), c.threads, [&](std::size_t i) {
        for (int dim : {2, 3})
            for (double p : ps)
                for (double q : qs) {
                    const LorentzIndex idx = LorentzIndex::make(p, q);
                    const double e = rel(lorentz_norm(steps[i], idx), lorentz_norm_symmetrization(steps[i], idx, dim));
                    t.metric[i] = std::max(t.metric[i], e);
                    if (e > 1e-10) t.ok[i] = 0;
                }
    });
    return t.finish("lorentz_equality", "rearrangement vs symmetrization forms, relative tolerance 1e-10");
}

SuiteResult lorentz_lp(const AuditConfig& c) {
    const auto steps = stepfunction_corpus(sub_seed(c.seed, 1), c.corpus_size);
    Tally t(steps.size());
    parallel_for(steps.size(), c.threads, [&](std::size_t i) {
        for (double p : {1.0, 1.5, 2.0, 3.0}) {
            const double e = rel(lorentz_norm(steps[i], LorentzIndex::make(p, p)), lebesgue_norm(steps[i], p));
            t.metric[i] = std::max(t.metric[i], e);
            if (e > 1e-10) t.ok[i] = 0;
        }
    });
    return t.finish("lorentz_lp", "L^{p,p} against L^p, relative tolerance 1e-10");
}

SuiteResult embedding(const AuditConfig& c) {
    std::vector<GridFunction> samples;
    for (int dim : c.dims)
        if (dim >= 2)
            for (auto& u : corpus_for(c, dim, 10)) samples.push_back(std::move(u));
    Tally t(samples.size());
    parallel_for(samples.size(), c.threads, [&](std::size_t i) {
        const GridFunction& u = samples[i];
        for (double q : {1.2, 2.0, kInfinity}) {
            const BVEmbeddingAudit a = embedding_audit_bv(u, Region::all(u.dim()), q);
            if (!a.first_inequality_holds || !std::isfinite(a.ratio_1_over_bv)) t.ok[i] = 0;
            t.metric[i] = std::max(t.metric[i], a.ratio_1_over_bv);
        }
        const double p = critical_exponent(u.dim());
        const NestedAudit n = embedding_audit_nested(u, LorentzIndex::make(p, 2.0), LorentzIndex::make(3.0, 3.0),
                                                     u.support_measure());
        if (!std::isfinite(n.ratio)) t.ok[i] = 0;
    });
    return t.finish("embedding", "||u||_{1*,q} <= ||u||_{1*,1}; worst = largest ||u||_{1*,1} / ||u||_BV");
}

SuiteResult group_isometry(const AuditConfig& c) {
    CorpusRng rng(sub_seed(c.seed, 20));
    std::vector<GridFunction> us;
    std::vector<GroupElement> gs;
    for (std::size_t i = 0; i < c.group_pairs; ++i) {
        const int dim = c.dims[i % c.dims.size()];
        us.push_back(random_grid_function(rng, dim));
        gs.push_back(random_group_element(rng, dim, us.back().level()));
    }
    Tally t(us.size());
    parallel_for(us.size(), c.threads, [&](std::size_t i) {
        const int dim = us[i].dim();
        std::vector<NormSpec> norms{NormSpec{NormSpec::Kind::BV, 1.0, 1.0}};
        if (dim >= 2) {
            const double p = critical_exponent(dim);
            for (double q : {1.0, 1.2, p, 2.0, kInfinity}) norms.push_back(NormSpec{NormSpec::Kind::Lorentz, p, q});
        }
        for (const auto& n : norms) {
            const double d = isometry_defect(gs[i], us[i], n);
            t.metric[i] = std::max(t.metric[i], d);
            if (d > 1e-12) t.ok[i] = 0;
        }
    });
    return t.finish("group_isometry", "relative norm defect of g u, tolerance 1e-12");
}

SuiteResult group_axioms(const AuditConfig& c) {
    CorpusRng rng(sub_seed(c.seed, 30));
    const std::size_t n = c.group_pairs;
    Tally t(n);
    for (std::size_t i = 0; i < n; ++i) {
        const int dim = c.dims[i % c.dims.size()];
        const GridFunction u = random_grid_function(rng, dim);
        const GroupElement g1 = random_group_element(rng, dim, u.level());
        const GroupElement g2 = random_group_element(rng, dim, u.level() + g1.scale());
        const GroupElement g3 = random_group_element(rng, dim, u.level());
        const GroupElement e = GroupElement::identity(dim);
        bool ok = compose(e, g1) == g1 && compose(g1, e) == g1;
        ok = ok && compose(g1, inverse(g1)) == e && compose(inverse(g1), g1) == e && inverse(inverse(g1)) == g1;
        ok = ok && compose(compose(g3, g2), g1) == compose(g3, compose(g2, g1));
        const GridFunction a = act(compose(g2, g1), u);
        const GridFunction b = act(g2, act(g1, u));
        const std::vector<double> coef{1.0, -1.0};
        const std::vector<GridFunction> terms{a, b};
        ok = ok && linear_combine(coef, terms).is_zero();
        ok = ok && act(inverse(g1), act(g1, u)) == u;
        t.ok[i] = ok ? 1 : 0;
    }
    return t.finish("group_axioms", "identity, inverse, associativity and action law, exact");
}

SuiteResult lattice_splitting(const AuditConfig& c) {
    std::vector<GridFunction> samples;
    for (int dim : c.dims)
        for (auto& u : corpus_for(c, dim, 40)) samples.push_back(std::move(u));
    Tally t(samples.size());
    parallel_for(samples.size(), c.threads, [&](std::size_t i) {
        const TVReport r = lattice_tv_sum(samples[i]);
        t.ok[i] = r.holds() ? 1 : 0;
        t.metric[i] = r.splitting_bound > 0.0 ? r.sum_per_cube / r.splitting_bound : 0.0;
    });
    return t.finish("lattice_splitting", "sum over unit cubes of TV <= 3^N TV; worst = largest ratio to the bound");
}

std::vector<int> layer_dims(const AuditConfig& c) {
    std::vector<int> out;
    for (int d : c.dims)
        if (d >= 2) out.push_back(d);
    return out;
}

SuiteResult chi_conditions(const AuditConfig& c) {
    std::vector<int> dims = layer_dims(c);
    if (dims.empty()) dims.push_back(2);
    Tally t(dims.size());
    std::ostringstream detail;
    for (std::size_t k = 0; k < dims.size(); ++k) {
        const TruncationProfile chi = build_chi(dims[k]);
        bool ok = chi(chi.a) == 0.0 && chi(chi.b) == 0.0 && chi(chi.plateau_lo) == chi.plateau_lo &&
                  chi(chi.plateau_hi) == chi.plateau_hi;
        double observed = 0.0;
        const int points = 1000;
        for (int i = 0; i <= points; ++i) {
            const double s = chi.b * 1.25 * i / points;
            const double v = chi(s);
            ok = ok && v >= 0.0 && v <= s + 1.0;
            if (s <= chi.a || s >= chi.b) ok = ok && v == 0.0;
            if (s >= chi.plateau_lo && s <= chi.plateau_hi) ok = ok && v == s;
            observed = std::max(observed, std::abs(chi.derivative(s)));
            // chi_j'(t) = chi'(2^{-(N-1)j} t): the same values on a rescaled grid.
            for (int j : {-3, 2}) {
                const double tj = std::ldexp(s, (dims[k] - 1) * j);
                const double h = std::ldexp(1e-7, (dims[k] - 1) * j);
                const double slope = (chi_j(chi, j, tj + h) - chi_j(chi, j, tj - h)) / (2.0 * h);
                const double expect = (chi(s + 1e-7) - chi(s - 1e-7)) / 2e-7;
                ok = ok && std::abs(slope - expect) <= 1e-6 * std::max(1.0, std::abs(expect));
            }
        }
        ok = ok && observed <= chi.derivative_bound * (1.0 + 1e-12);
        t.ok[k] = ok ? 1 : 0;
        t.metric[k] = observed / chi.derivative_bound;
        detail << "N=" << dims[k] << " bound " << chi.derivative_bound << " sampled " << observed << "; ";
    }
    return t.finish("chi_conditions", detail.str());
}

std::vector<GridFunction> layer_corpus(const AuditConfig& c) {
    std::vector<GridFunction> samples;
    for (int dim : layer_dims(c))
        for (auto& u : corpus_for(c, dim, 50)) samples.push_back(std::move(u));
    return samples;
}

SuiteResult layer_containment(const AuditConfig& c) {
    const auto samples = layer_corpus(c);
    Tally t(samples.size());
    parallel_for(samples.size(), c.threads, [&](std::size_t i) {
        const GridFunction& u = samples[i];
        const std::vector<double> mags(u.values().begin(), u.values().end());
        const auto scales = active_scales(u.dim(), mags);
        std::vector<int> hits(u.values().size(), 0);
        for (int j : scales) {
            const Region a = level_set_A(u, j);
            const Region b = level_set_B(u, j);
            u.for_each_cell([&](const CellIndex& cell, double) {
                if (a.contains(u.level(), cell)) {
                    ++hits[u.offset(cell)];
                    if (!b.contains(u.level(), cell)) t.ok[i] = 0;
                }
            });
        }
        // Bands partition the nonzero cells.
        for (std::size_t k = 0; k < hits.size(); ++k) {
            if (hits[k] != (u.values()[k] != 0.0 ? 1 : 0)) t.ok[i] = 0;
        }
    });
    return t.finish("layer_containment", "A_j inside B_j; A bands partition the support");
}

SuiteResult layer_disjointness(const AuditConfig& c) {
    const auto samples = layer_corpus(c);
    Tally t(samples.size());
    parallel_for(samples.size(), c.threads, [&](std::size_t i) {
        const GridFunction& u = samples[i];
        const TruncationProfile chi = build_chi(u.dim());
        const std::vector<double> mags(u.values().begin(), u.values().end());
        const auto scales = active_scales(u.dim(), mags);
        for (std::size_t x = 0; x < scales.size(); ++x)
            for (std::size_t y = x + 1; y < scales.size(); ++y)
                if (color_class(scales[x]) == color_class(scales[y]) &&
                    !support_disjointness_check(chi, u, scales[x], scales[y])) {
                    t.ok[i] = 0;
                }
    });
    return t.finish("layer_disjointness", "chi_j(u), chi_j'(u) disjoint for j != j' of one color class");
}

SuiteResult layer_overlap(const AuditConfig& c) {
    const auto samples = layer_corpus(c);
    Tally t(samples.size());
    parallel_for(samples.size(), c.threads, [&](std::size_t i) {
        const GridFunction& u = samples[i];
        const LayerAudit a = layer_energy_audit(build_chi(u.dim()), u, critical_exponent(u.dim()));
        t.ok[i] = a.overlap_holds ? 1 : 0;
        t.metric[i] = a.overlap_bound > 0.0 ? a.sum_tv_b / a.overlap_bound : 0.0;
    });
    return t.finish("layer_overlap", "sum_j TV on B_j <= 4 TV (1 + 1e-6); worst = largest ratio to 4 TV");
}

SuiteResult chain_rule(const AuditConfig& c) {
    std::vector<GridFunction> samples;
    for (int dim : c.dims)
        for (auto& u : corpus_for(c, dim, 60)) samples.push_back(std::move(u));
    const TruncationProfile chi = c.fixture == "broken_chi" ? broken_chi(2) : build_chi(2);
    const std::vector<ScalarMap> maps{chi.as_scalar_map(), ScalarMap::half(), ScalarMap::smoothstep()};
    Tally t(samples.size());
    parallel_for(samples.size(), c.threads, [&](std::size_t i) {
        for (const auto& phi : maps) {
            const ChainReport r = compose_scalar(phi, samples[i]).second;
            if (!r.holds) t.ok[i] = 0;
            if (r.bound > 0.0) t.metric[i] = std::max(t.metric[i], r.tv_composed / r.bound);
        }
    });
    return t.finish("chain_rule", "TV(phi(u)) <= sup|phi'| TV(u) (1 + 1e-9) for " + chi.name +
                                      ", half, smoothstep; worst = largest ratio to the bound");
}

}  // namespace

bool AuditReport::pass() const {
    for (const auto& s : suites)
        if (!s.pass()) return false;
    return true;
}

std::vector<std::string> AuditReport::failed() const {
    std::vector<std::string> out;
    for (const auto& s : suites)
        if (!s.pass()) out.push_back(s.name);
    return out;
}

AuditReport run_audit(const AuditConfig& config) {
    if (config.dims.empty()) fail(ErrorKind::Config, "audit needs at least one dimension");
    for (int d : config.dims) check_dim(d);
    if (config.fixture != "none" && config.fixture != "broken_chi") {
        fail(ErrorKind::Config, "unknown audit fixture '" + config.fixture + "'");
    }
    AuditReport report;
    report.config = config;
    if (config.corpus_size == 0) report.warnings.push_back("corpus size 0: corpus suites pass vacuously");
    report.suites.push_back(lorentz_equality(config));
    report.suites.push_back(lorentz_lp(config));
    report.suites.push_back(embedding(config));
    report.suites.push_back(group_isometry(config));
    report.suites.push_back(group_axioms(config));
    report.suites.push_back(lattice_splitting(config));
    report.suites.push_back(chi_conditions(config));
    report.suites.push_back(layer_containment(config));
    report.suites.push_back(layer_disjointness(config));
    report.suites.push_back(layer_overlap(config));
    report.suites.push_back(chain_rule(config));
    return report;
}

}  // namespace bvlab
