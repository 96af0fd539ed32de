#include "support.hpp"

#include <numbers>

#include "bvlab/counterexample.hpp"
#include "bvlab/radial.hpp"

using namespace bvlab;
using testing::rel_diff;
using testing::throws_kind;

constexpr double pi = std::numbers::pi;

namespace {

const InvariantCheck* find_check(const CounterexampleResult& r, const std::string& name) {
    for (const auto& c : r.checks) {
        if (c.name == name) return &c;
    }
    return nullptr;
}

}  // namespace

TEST_CASE("planar staircase table against closed forms") {
    const auto r = run_counterexample(2, 12, {1.0, 1.5, 2.0, kInfinity});
    REQUIRE(r.rows.size() == 12);
    CHECK(r.pass());
    CHECK(rel_diff(r.annulus_measure, 3.0 * pi) < 1e-15);
    for (const auto& row : r.rows) {
        const double n = row.n;
        CHECK(rel_diff(row.l1star, std::sqrt(3.0 * pi / n)) < 1e-12);
        CHECK(rel_diff(row.f0, 2.0 * pi) < 1e-13);
        CHECK(rel_diff(row.tv_coarea, 2.0 * pi + 4.0 * pi / n) < 1e-13);
        // L^{2,2} is L^2
        CHECK(rel_diff(row.lorentz.at(2.0), row.l1star) < 1e-12);
    }
    // the q = 1 column stays bounded below while q > 1 columns decay like n^{1/q - 1}
    const double first = r.rows.front().lorentz.at(1.0);
    for (const auto& row : r.rows) CHECK(row.lorentz.at(1.0) >= 0.5 * first);
    CHECK(std::abs(r.fitted_exponents.at(1.5) + 1.0 / 3.0) < 0.1);
    CHECK(std::abs(r.fitted_exponents.at(2.0) + 0.5) < 0.1);
    for (const char* name : {"f0_floor", "f0_constant", "l1star_closed_form", "q1_nonvanishing"}) {
        const auto* c = find_check(r, name);
        REQUIRE(c != nullptr);
        CHECK(c->pass);
    }
}

TEST_CASE("three-dimensional staircase") {
    const auto r = run_counterexample(3, 10, {1.0, 1.25, 1.5});
    CHECK(r.pass());
    for (const auto& row : r.rows) CHECK(rel_diff(row.f0, r.rows.front().f0) < 1e-12);
    CHECK(std::abs(r.fitted_exponents.at(1.5) - (1.0 / 1.5 - 1.0)) < 0.1);
}

TEST_CASE("counterexample argument validation and small runs") {
    CHECK(throws_kind(ErrorKind::Index, [] { run_counterexample(2, 4, {0.5}); }));
    CHECK(throws_kind(ErrorKind::UnsupportedDimension, [] { run_counterexample(1, 4, {1.0}); }));
    const auto one = run_counterexample(2, 1, {1.0, 2.0});
    CHECK(one.pass());
    CHECK(one.rows.size() == 1);
    CHECK(one.fitted_exponents.empty());
}

TEST_CASE("threaded run matches the serial one") {
    CounterexampleOptions opt;
    opt.threads = 4;
    const auto a = run_counterexample(2, 8, {1.0, 2.0});
    const auto b = run_counterexample(2, 8, {1.0, 2.0}, opt);
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        CHECK(a.rows[i].lorentz == b.rows[i].lorentz);
        CHECK(a.rows[i].l1star == b.rows[i].l1star);
    }
}

TEST_CASE("log-log slope fit") {
    std::vector<double> x;
    std::vector<double> y;
    for (int k = 1; k <= 10; ++k) {
        x.push_back(k);
        y.push_back(3.0 * std::pow(k, -0.75));
    }
    CHECK(fit_loglog_slope(x, y) == doctest::Approx(-0.75).epsilon(1e-12));
    CHECK(throws_kind(ErrorKind::Usage, [] { fit_loglog_slope({1.0, 1.0}, {1.0, 2.0}); }));
    CHECK(throws_kind(ErrorKind::Domain, [] { fit_loglog_slope({1.0, 2.0}, {1.0, 0.0}); }));
}

TEST_CASE("D-vanishing probe") {
    const auto elements = probe_elements(2, 4);
    CHECK(elements.size() == 11 * 16);
    CHECK(probe_elements(2, 4, 3, 1).size() == 11 * 19);
    // the identity probe of a unit-cube indicator sees mass one
    const auto u = testing::block(2, 3, {0, 0, 0}, {8, 8, 1}, 1.0);
    const auto rep = dvanishing_probe(u, {GroupElement::identity(2)});
    CHECK(rep.max_mass == doctest::Approx(1.0));
    CHECK(unit_cube_mass(u) == doctest::Approx(1.0));
    CHECK(dvanishing_probe(GridFunction::zero(2), elements).max_mass == 0.0);
    // the staircase probe decays with n; the gridded and radial quadratures agree roughly
    const double p1 = dvanishing_probe(2, 1, probe_elements(2, 1)).max_mass;
    const double p8 = dvanishing_probe(2, 8, probe_elements(2, 8)).max_mass;
    CHECK(p8 < 0.3 * p1);
    const auto grid_rep = dvanishing_probe(to_grid(annulus_indicator(2), 6), probe_elements(2, 1));
    const auto radial_rep = dvanishing_probe(annulus_indicator(2), probe_elements(2, 1));
    CHECK(rel_diff(grid_rep.max_mass, radial_rep.max_mass) < 0.05);
}

TEST_CASE("cocompactness table") {
    const auto t = cocompactness_table(2, 8, {1.0, 2.0});
    REQUIRE(t.rows.size() == 8);
    CHECK(t.fit_from == 4);
    CHECK(t.probe_exponent < -0.5);
    CHECK(t.lorentz_exponents.at(2.0) == doctest::Approx(-0.5).epsilon(0.1));
    CHECK(std::abs(t.lorentz_exponents.at(1.0)) < 0.3);
}
