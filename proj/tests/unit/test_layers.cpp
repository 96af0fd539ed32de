#include "support.hpp"

#include <numbers>

#include "bvlab/bv.hpp"
#include "bvlab/corpus.hpp"
#include "bvlab/layers.hpp"
#include "bvlab/radial.hpp"
#include "bvlab/rearrange.hpp"

using namespace bvlab;
using testing::block;
using testing::rel_diff;
using testing::throws_kind;

TEST_CASE("truncation profile: support, plateau and bounds") {
    for (int dim : {2, 3}) {
        const auto chi = build_chi(dim);
        const double a = std::ldexp(1.0, -(dim - 1));
        const double c = std::ldexp(1.0, dim - 1);
        const double b = c * c;
        CHECK(chi.a == a);
        CHECK(chi.plateau_hi == c);
        CHECK(chi.b == b);
        double max_slope = 0.0;
        for (int k = 0; k <= 1000; ++k) {
            const double t = -0.5 + (b + 1.0) * k / 1000.0;
            const double v = chi(t);
            CHECK(v <= t + 1.0);
            CHECK(v >= 0.0);
            if (t <= a || t >= b) CHECK(v == 0.0);
            if (t >= 1.0 && t <= c) CHECK(v == t);
        }
        // slope by central differences, independent of derivative()
        const double h = 1e-6;
        for (int k = 1; k < 200000; ++k) {
            const double t = a + (b - a) * k / 200000.0;
            max_slope = std::max(max_slope, std::abs(chi(t + h) - chi(t - h)) / (2 * h));
        }
        CHECK(max_slope <= chi.derivative_bound * (1 + 1e-6));
        CHECK(max_slope >= chi.derivative_bound * (1 - 1e-4));
        // C^1 at the joints
        for (double t : {a, 1.0, c, b}) {
            CHECK(std::abs(chi.derivative(t - 1e-9) - chi.derivative(t + 1e-9)) < 1e-6);
        }
    }
    CHECK(build_chi(2).derivative_bound == doctest::Approx(25.0 / 9.0));
    CHECK(throws_kind(ErrorKind::UnsupportedDimension, [] { build_chi(1); }));
    CHECK(broken_chi(2).derivative_bound == 0.25);
    CHECK(broken_chi(2).name == "chi_broken");
}

TEST_CASE("rescaled profiles keep the plateau and the derivative bound") {
    const auto chi = build_chi(2);
    for (int j : {-3, 0, 4}) {
        const double s = std::ldexp(1.0, j);
        CHECK(chi_j(chi, j, 1.5 * s) == 1.5 * s);
        CHECK(chi_j(chi, j, -1.5 * s) == 1.5 * s);
        CHECK(chi_j(chi, j, 0.4 * s) == 0.0);
        // derivative of t -> 2^j chi(2^{-j} t) is chi'(2^{-j} t)
        const double t = 0.7 * s;
        const double h = 1e-7 * s;
        const double slope = (chi_j(chi, j, t + h) - chi_j(chi, j, t - h)) / (2 * h);
        CHECK(slope == doctest::Approx(chi.derivative(0.7)).epsilon(1e-5));
    }
}

TEST_CASE("level sets and color classes") {
    CHECK(color_class(0) == 1);
    CHECK(color_class(1) == 2);
    CHECK(color_class(3) == 4);
    CHECK(color_class(-1) == 4);
    CHECK(color_class(-4) == 1);
    CHECK(color_class(8) == 1);
    const std::vector<double> v{0.3, 1.0, 1.9, 2.0, 7.9, 8.0};
    const GridFunction u(CellBox::make(2, 0, {0, 0, 0}, {6, 1, 1}), v);
    const auto A0 = level_set_A(u, 0);
    CHECK(A0.count() == 2);
    CHECK(A0.contains(0, {1, 0, 0}));
    CHECK_FALSE(A0.contains(0, {3, 0, 0}));
    const auto B0 = level_set_B(u, 0);
    CHECK(B0.count() == 3);  // [0.5, 4)
    for (int j = -3; j < 4; ++j) {
        const auto A = level_set_A(u, j);
        const auto B = level_set_B(u, j);
        for (int i = 0; i < 6; ++i) {
            if (A.contains(0, {i, 0, 0})) CHECK(B.contains(0, {i, 0, 0}));
        }
    }
    CHECK(throws_kind(ErrorKind::UnsupportedDimension, [] { level_set_A(GridFunction::zero(1), 0); }));
}

TEST_CASE("same-color layers have disjoint supports") {
    const auto chi = build_chi(2);
    CorpusOptions opt;
    opt.weight_octaves = 8;
    for (const auto& u : grid_corpus(31, 20, 2, opt)) {
        for (int j = -8; j <= 8; ++j) {
            CHECK(support_disjointness_check(chi, u, j, j + 4));
            CHECK(support_disjointness_check(chi, u, j, j - 8));
        }
    }
    const auto u = block(2, 0, {0, 0, 0}, {1, 1, 1}, 1.0);
    CHECK(throws_kind(ErrorKind::Usage, [&] { support_disjointness_check(chi, u, 1, 1); }));
    CHECK(throws_kind(ErrorKind::Usage, [&] { support_disjointness_check(chi, u, 1, 2); }));
    // adjacent scales do overlap: the value 1.5 sits on the plateau of j = 0 and the falling ramp of j = -1
    CHECK(chi_j(chi, 0, 1.5) > 0.0);
    CHECK(chi_j(chi, -1, 1.5) > 0.0);
}

TEST_CASE("active scales cover every nonzero layer") {
    const auto chi = build_chi(2);
    const std::vector<double> mags{0.01, 3.0, 100.0};
    const auto js = active_scales(2, mags);
    REQUIRE_FALSE(js.empty());
    for (double m : mags) {
        for (int j = -20; j <= 20; ++j) {
            if (chi_j(chi, j, m) != 0.0) CHECK(std::find(js.begin(), js.end(), j) != js.end());
        }
    }
    CHECK(active_scales(2, {}).empty());
}

TEST_CASE("layer audit on the staircase has a closed form") {
    const auto chi = build_chi(2);
    for (double q : {1.5, 2.0}) {
        for (int n : {1, 3, 8}) {
            const auto u = staircase(2, n);
            const auto audit = layer_energy_audit(chi, u, q);
            // each annulus fills one band on the plateau, so every layer norm is the single-chunk value
            const double layer = (1.0 / n) * std::pow(2.0 / q, 1.0 / q) * std::sqrt(3.0 * std::numbers::pi);
            CHECK(rel_diff(audit.sup_layer_term, std::pow(layer, q - 1.0)) < 1e-12);
            CHECK(rel_diff(audit.tv, radial_tv(u)) < 1e-14);
            CHECK(rel_diff(audit.lorentz_q_pow, std::pow(lorentz_norm(to_stepfunction(u), LorentzIndex::make(2, q)), q)) <
                  1e-12);
        }
    }
    CHECK(throws_kind(ErrorKind::Index, [&] { layer_energy_audit(chi, staircase(2, 2), 1.0); }));
    CHECK(throws_kind(ErrorKind::Index, [&] { layer_energy_audit(chi, staircase(2, 2), 2.5); }));
}

TEST_CASE("layer audit on grids: overlap bound") {
    for (int dim : {2, 3}) {
        const auto chi = build_chi(dim);
        CorpusOptions opt;
        opt.max_level = dim == 3 ? 3 : 5;
        opt.nonnegative = false;
        for (const auto& u : grid_corpus(37, 15, dim, opt)) {
            const auto audit = layer_energy_audit(chi, u, critical_exponent(dim));
            CHECK(audit.overlap_holds);
            CHECK(audit.sum_tv_b <= 4.0 * total_variation(u) * (1 + 1e-6));
            CHECK(audit.empirical_constant > 0.0);
        }
        const auto zero = layer_energy_audit(chi, GridFunction::zero(dim), critical_exponent(dim));
        CHECK(zero.rows.empty());
        CHECK(zero.empirical_constant == 0.0);
    }
}
