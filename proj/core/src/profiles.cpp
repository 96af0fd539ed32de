#include "bvlab/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>

#include "bvlab/bv.hpp"
#include "bvlab/counterexample.hpp"
#include "bvlab/parallel.hpp"
#include "bvlab/rearrange.hpp"

namespace bvlab {

namespace {

struct Candidate {
    double score = 0.0;
    int j = 0;
    CellIndex c{0, 0, 0};  // cube [c 2^j, (c + 1) 2^j)
    bool valid = false;
};

// Larger score wins; ties go to smaller |j|, then smaller j, then lexicographically smaller y = -c.
bool better(const Candidate& a, const Candidate& b, int dim) {
    if (!b.valid) return a.valid;
    if (!a.valid) return false;
    if (a.score != b.score) return a.score > b.score;
    if (std::abs(a.j) != std::abs(b.j)) return std::abs(a.j) < std::abs(b.j);
    if (a.j != b.j) return a.j < b.j;
    for (int k = 0; k < dim; ++k)
        if (a.c[k] != b.c[k]) return -a.c[k] < -b.c[k];
    return false;
}

Candidate best_cube(const std::vector<GridFunction>& clusters, int dim, const ExtractOptions& opt) {
    Candidate best;
    for (int j = opt.scale_min; j <= opt.scale_max; ++j) {
        std::map<CellIndex, double> bins;
        for (const auto& u : clusters) {
            const int s = u.level() + j;
            const double cell = u.cell_measure();
            const double sub_cube = std::ldexp(1.0, j * dim);
            u.for_each_cell([&](const CellIndex& idx, double v) {
                if (v == 0.0) return;
                CellIndex cube{0, 0, 0};
                if (s >= 0) {
                    for (int a = 0; a < dim; ++a) cube[a] = idx[a] >> s;
                    bins[cube] += std::abs(v) * cell;
                } else {
                    // Cube smaller than the cell: all sub-cubes tie, keep the one with smallest y = -c.
                    for (int a = 0; a < dim; ++a) cube[a] = ((idx[a] + 1) << -s) - 1;
                    bins[cube] = std::abs(v) * sub_cube;
                }
            });
        }
        for (const auto& [cube, mass] : bins) {
            Candidate c{std::ldexp(mass, -j), j, cube, true};
            if (better(c, best, dim)) best = c;
        }
    }
    return best;
}

std::vector<GridFunction> nonzero_clusters(const DyadicSum& r, const Limits& limits) {
    std::vector<GridFunction> out;
    for (auto& c : r.clusters(limits)) {
        GridFunction t = trimmed(c);
        if (!t.is_zero()) out.push_back(std::move(t));
    }
    return out;
}

GroupElement alignment_for(int dim, const Candidate& c) {
    CellIndex y{0, 0, 0};
    for (int a = 0; a < dim; ++a) y[a] = -c.c[a];
    return GroupElement::lattice(dim, c.j, y);
}

// act(a, r) on the window [-R, 1+R)^N, cropping r to the preimage first.
GridFunction aligned_window(const DyadicSum& r, const GroupElement& a, const ExtractOptions& opt) {
    const int dim = r.dim();
    const int R = opt.window_margin;
    CellIndex lo{0, 0, 0};
    CellIndex hi{1, 1, 1};
    for (int k = 0; k < dim; ++k) {
        // a = g[j, y] maps the cube at -y (side 2^j) onto (0,1)^N; y is an integer vector.
        const std::int64_t c = -a.y_numerators()[k];
        lo[k] = c - R;
        hi[k] = c + 1 + R;
    }
    const CellBox box = CellBox::make(dim, -a.scale(), lo, hi);
    return act(a, r.crop(box, opt.group.grid), opt.group);
}

double l1_distance(const GridFunction& a, const GridFunction& b, const Limits& limits) {
    const std::vector<double> coef{1.0, -1.0};
    const std::vector<GridFunction> terms{a, b};
    return linear_combine(coef, terms, limits).l1_norm();
}

// Weak-limit proxy from aligned elements. `cube_mass` is the unit-cube mass of each aligned element;
// the sequence counts as vanishing (nullopt) when its last value drops below vanish_ratio times the largest.
std::optional<GridFunction> weak_limit_proxy(const std::vector<GridFunction>& aligned,
                                             const std::vector<double>& cube_mass, const ExtractOptions& opt) {
    const double top = *std::max_element(cube_mass.begin(), cube_mass.end());
    if (top == 0.0 || cube_mass.back() <= opt.vanish_ratio * top) return std::nullopt;
    std::vector<double> mass;
    for (const auto& v : aligned) mass.push_back(v.l1_norm());

    const std::size_t t = std::min<std::size_t>(static_cast<std::size_t>(std::max(opt.tail, 1)), aligned.size());
    const std::size_t first = aligned.size() - t;
    double spread = 0.0;
    double scale = 0.0;
    for (std::size_t a = first; a < aligned.size(); ++a) {
        scale = std::max(scale, mass[a]);
        for (std::size_t b = a + 1; b < aligned.size(); ++b) {
            spread = std::max(spread, l1_distance(aligned[a], aligned[b], opt.group.grid));
        }
    }
    if (spread > opt.cauchy_tol * scale) {
        fail(ErrorKind::NonConvergentSubsequence,
             "aligned tail is not Cauchy in L1 near the unit cube (spread " + std::to_string(spread / scale) +
                 " > tolerance " + std::to_string(opt.cauchy_tol) + "); retry with a larger stride than " +
                 std::to_string(opt.stride));
    }
    return trimmed(aligned.back());
}

}  // namespace

SequenceSpec SequenceSpec::from_generator(int dim, std::size_t count, const std::function<DyadicSum(std::size_t)>& make,
                                          double bv_bound) {
    SequenceSpec seq;
    seq.dim = dim;
    seq.bv_bound = bv_bound;
    for (std::size_t k = 0; k < count; ++k) {
        DyadicSum u = make(k);
        if (u.dim() != dim) fail(ErrorKind::DimensionMismatch, "sequence element has the wrong dimension");
        seq.elements.push_back(std::move(u));
    }
    return seq;
}

void SequenceSpec::validate(const Limits& limits) const {
    for (std::size_t k = 0; k < elements.size(); ++k) {
        const double tv = total_variation(elements[k], limits);
        if (tv > bv_bound * (1.0 + 1e-6)) {
            fail(ErrorKind::Domain, "element " + std::to_string(k) + " has TV " + std::to_string(tv) +
                                        " above the declared bound " + std::to_string(bv_bound));
        }
    }
}

ProfileDecomposition extract_profiles(const SequenceSpec& seq, const ExtractOptions& opt) {
    if (!(opt.eps > 0.0)) fail(ErrorKind::Domain, "eps must be positive");
    if (!(opt.q > 1.0)) fail(ErrorKind::Index, "profile extraction reports L^{1*,q} remainders and needs q > 1");
    if (opt.stride < 1) fail(ErrorKind::Config, "stride must be at least 1");
    if (opt.scale_min > opt.scale_max) fail(ErrorKind::Config, "empty scale window");
    if (seq.elements.empty()) fail(ErrorKind::Domain, "empty sequence");
    const int dim = seq.dim;
    const LorentzIndex idx = LorentzIndex::make(critical_exponent(dim), opt.q);

    ProfileDecomposition d;
    d.dim = dim;
    d.q = opt.q;
    for (std::size_t k = 0; k < seq.elements.size(); k += static_cast<std::size_t>(opt.stride)) d.indices.push_back(k);
    const std::size_t K = d.indices.size();
    for (std::size_t k : d.indices) d.remainders.push_back(seq.elements[k]);
    d.initial_norms.resize(K);
    parallel_for(K, opt.threads, [&](std::size_t k) { d.initial_norms[k] = lorentz_norm(d.remainders[k], idx); });

    auto record = [&](const std::vector<GroupElement>& alignment, GridFunction w) {
        Profile p;
        p.tv = total_variation(w);
        p.w = std::move(w);
        p.alignment = alignment;
        for (const auto& a : alignment) p.placement.push_back(inverse(a));
        parallel_for(K, opt.threads, [&](std::size_t k) {
            const DyadicSum placed(act(p.placement[k], p.w, opt.group));
            d.remainders[k] = DyadicSum(dim, nonzero_clusters(d.remainders[k].plus(placed, -1.0), opt.group.grid));
        });
        d.profiles.push_back(std::move(p));
    };

    std::vector<double> scores(K, 0.0);
    auto search = [&](std::vector<GroupElement>& alignment) {
        std::vector<Candidate> best(K);
        parallel_for(K, opt.threads, [&](std::size_t k) {
            best[k] = best_cube(d.remainders[k].clusters(opt.group.grid), dim, opt);
        });
        double top = 0.0;
        alignment.clear();
        for (std::size_t k = 0; k < K; ++k) {
            const Candidate& c = best[k];
            scores[k] = c.valid ? c.score : 0.0;
            top = std::max(top, scores[k]);
            alignment.push_back(c.valid ? alignment_for(dim, c) : GroupElement::identity(dim));
        }
        d.max_mass_history.push_back(top);
    };

    auto aligned_elements = [&](const std::vector<GroupElement>& alignment) {
        std::vector<GridFunction> aligned(K, GridFunction::zero(dim, 0));
        parallel_for(K, opt.threads,
                     [&](std::size_t k) { aligned[k] = aligned_window(d.remainders[k], alignment[k], opt); });
        return aligned;
    };

    std::vector<GroupElement> alignment;
    search(alignment);

    // Step 0: identity alignment, so a nonzero first profile carries the identity sequence.
    {
        const std::vector<GroupElement> identity(K, GroupElement::identity(dim));
        const auto aligned = aligned_elements(identity);
        std::vector<double> cube_mass;
        for (const auto& v : aligned) cube_mass.push_back(unit_cube_mass(v, opt.group.grid));
        const auto w = weak_limit_proxy(aligned, cube_mass, opt);
        if (w && total_variation(*w) >= opt.eps) {
            record(identity, *w);
            search(alignment);
        }
    }

    d.stop_reason = "max_profiles";
    while (static_cast<int>(d.profiles.size()) < opt.max_profiles) {
        const auto w = weak_limit_proxy(aligned_elements(alignment), scores, opt);
        if (!w) {
            d.stop_reason = "vanishing";
            break;
        }
        if (total_variation(*w) < opt.eps) {
            d.stop_reason = "eps";
            break;
        }
        record(alignment, *w);
        search(alignment);
    }

    for (std::size_t s = 1; s < d.max_mass_history.size(); ++s) {
        const double prev = d.max_mass_history[s - 1];
        if (d.max_mass_history[s] > prev * (1.0 + 1e-12) + 1e-300) d.remainder_monotone = false;
    }

    d.remainder_norms.resize(K);
    std::vector<double> defect(K, 0.0);
    parallel_for(K, opt.threads, [&](std::size_t k) {
        d.remainder_norms[k] = lorentz_norm(d.remainders[k], idx);
        DyadicSum check = seq.elements[d.indices[k]];
        for (const auto& p : d.profiles) check = check.plus(DyadicSum(act(p.placement[k], p.w, opt.group)), -1.0);
        check = check.plus(d.remainders[k], -1.0);
        for (const auto& c : check.clusters(opt.group.grid))
            for (double v : c.values()) defect[k] = std::max(defect[k], std::abs(v));
    });
    d.reconstruction_defect = *std::max_element(defect.begin(), defect.end());
    return d;
}

SeparationReport separation_check(const ProfileDecomposition& d, double floor) {
    SeparationReport report;
    report.floor = floor;
    const std::size_t K = d.indices.size();
    for (std::size_t n = 0; n < d.profiles.size(); ++n) {
        for (std::size_t m = n + 1; m < d.profiles.size(); ++m) {
            SeparationPair pair;
            pair.n = n;
            pair.m = m;
            for (std::size_t k = 0; k < K; ++k) {
                pair.distances.push_back(separation(d.profiles[n].placement[k], d.profiles[m].placement[k]));
            }
            pair.tail_min = *std::min_element(pair.distances.begin() + static_cast<std::ptrdiff_t>(K / 2),
                                              pair.distances.end());
            for (std::size_t k = 1; k < K; ++k) pair.increasing = pair.increasing && pair.distances[k] > pair.distances[k - 1];
            pair.pass = pair.tail_min > floor;
            report.pass = report.pass && pair.pass;
            report.pairs.push_back(std::move(pair));
        }
    }
    return report;
}

EnergyReport energy_audit(const ProfileDecomposition& d, const SequenceSpec& seq, double delta, const Limits& limits) {
    EnergyReport report;
    report.delta = delta;
    for (const auto& p : d.profiles) report.sum_profile_tv += p.tv;
    for (std::size_t k = 0; k < d.indices.size(); ++k) {
        report.tv_u_samples.push_back(total_variation(seq.elements[d.indices[k]], limits));
        report.tv_r_samples.push_back(total_variation(d.remainders[k], limits));
    }
    if (report.tv_u_samples.empty()) return report;
    report.tv_u = report.tv_u_samples.back();
    report.tv_r = report.tv_r_samples.back();
    report.slack = report.tv_u - report.sum_profile_tv - report.tv_r;
    report.upper_holds = report.sum_profile_tv <= report.tv_u * (1.0 + delta) + 1e-300;
    report.lower_holds = report.tv_u <= report.sum_profile_tv + report.tv_r + delta * report.tv_u + 1e-300;
    return report;
}

GridFunction fixture_bump(int which, int level) {
    using std::numbers::pi;
    const std::int64_t side = std::int64_t{1} << level;
    const CellBox box = CellBox::make(2, level, CellIndex{0, 0, 0}, CellIndex{side, side, 1});
    if (which == 1) {
        return from_sampler(box, [](const Point& x) {
            const double s = std::sin(pi * x[0]) * std::sin(pi * x[1]);
            return 2.0 * s * s;
        });
    }
    if (which == 2) {
        return from_sampler(box, [](const Point& x) { return 16.0 * x[0] * (1.0 - x[0]) * x[1] * (1.0 - x[1]); });
    }
    fail(ErrorKind::Usage, "fixture bump index must be 1 or 2");
}

SequenceSpec two_profile_fixture(int level, int count) {
    const GridFunction w1 = fixture_bump(1, level);
    const GridFunction w2 = fixture_bump(2, level);
    // Early copies touch w1 and force it onto a finer grid, where the discrete TV is a few percent larger.
    const double bound = 1.25 * (total_variation(w1) + total_variation(w2));
    return SequenceSpec::from_generator(
        2, static_cast<std::size_t>(count),
        [&](std::size_t i) {
            const int k = static_cast<int>(i) + 1;
            const GroupElement g = GroupElement::lattice(2, k, CellIndex{k, 0, 0});
            return DyadicSum(2, {w1, act(g, w2)});
        },
        bound);
}

}  // namespace bvlab
