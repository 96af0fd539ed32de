#include "support.hpp"

#include <numbers>

#include "bvlab/corpus.hpp"
#include "bvlab/rearrange.hpp"

using namespace bvlab;
using testing::rel_diff;
using testing::throws_kind;

namespace {

// Closed form per chunk: int_{T_{i-1}}^{T_i} t^{q/p - 1} dt = (p/q)(T_i^{q/p} - T_{i-1}^{q/p}).
double oracle_sum(const StepFunction& u, double p, double q) {
    double sum = 0.0;
    double prev = 0.0;
    for (const auto& c : u.chunks()) {
        const double next = prev + c.measure;
        sum += std::pow(c.value, q) * (p / q) * (std::pow(next, q / p) - std::pow(prev, q / p));
        prev = next;
    }
    return std::pow(sum, 1.0 / q);
}

// Composite Simpson rule in s = log t on each chunk, independent of any closed form.
double oracle_quadrature(const StepFunction& u, double p, double q) {
    double sum = 0.0;
    double prev = 0.0;
    const int intervals = 4000;
    for (const auto& c : u.chunks()) {
        const double next = prev + c.measure;
        const double lo = prev > 0.0 ? std::log(prev) : std::log(next) - 60.0;
        const double hi = std::log(next);
        const double h = (hi - lo) / intervals;
        auto f = [&](double s) { return std::pow(std::exp(s / p) * c.value, q); };
        double acc = f(lo) + f(hi);
        for (int k = 1; k < intervals; ++k) acc += (k % 2 == 1 ? 4.0 : 2.0) * f(lo + k * h);
        sum += acc * h / 3.0;
        prev = next;
    }
    return std::pow(sum, 1.0 / q);
}

}  // namespace

TEST_CASE("rearrangement from unordered pieces") {
    const auto u = StepFunction::from_pairs({{1.0, 2.0}, {-3.0, 0.5}, {0.0, 9.0}, {1.0, 1.0}, {2.0, 0.25}});
    REQUIRE(u.chunks().size() == 3);
    CHECK(u.chunks()[0] == Chunk{3.0, 0.5});
    CHECK(u.chunks()[1] == Chunk{2.0, 0.25});
    CHECK(u.chunks()[2] == Chunk{1.0, 3.0});
    CHECK(u.total_measure() == 3.75);
    CHECK(u(0.0) == 3.0);
    CHECK(u(0.5) == 2.0);
    CHECK(u(3.75) == 0.0);
    CHECK(distribution_function(u, 2.5) == 0.5);
    CHECK(distribution_function(u, 1.0) == 0.75);
    CHECK(distribution_function(u, 0.0) == 3.75);
    CHECK(throws_kind(ErrorKind::Domain, [] { StepFunction::from_chunks({{1.0, 1.0}, {2.0, 1.0}}); }));
    CHECK(throws_kind(ErrorKind::Domain, [] { StepFunction::from_pairs({{1.0, -1.0}}); }));
}

TEST_CASE("single chunk closed form") {
    const auto u = StepFunction::from_chunks({{3.0, 5.0}});
    for (double p : {1.5, 2.0, 3.0}) {
        for (double q : {0.5, 1.0, 2.0, 7.0}) {
            const double expect = 3.0 * std::pow(p / q, 1.0 / q) * std::pow(5.0, 1.0 / p);
            CHECK(rel_diff(lorentz_norm(u, LorentzIndex::make(p, q)), expect) < 1e-14);
        }
        CHECK(rel_diff(lorentz_norm(u, LorentzIndex::make(p, kInfinity)), 3.0 * std::pow(5.0, 1.0 / p)) < 1e-15);
    }
}

TEST_CASE("Lorentz norm against independent oracles on a random corpus") {
    const auto corpus = stepfunction_corpus(7, 50);
    for (const auto& u : corpus) {
        for (double p : {1.2, 2.0, 3.0}) {
            for (double q : {1.0, 1.5, 2.0, 4.0}) {
                const double got = lorentz_norm(u, LorentzIndex::make(p, q));
                CHECK(rel_diff(got, oracle_sum(u, p, q)) < 1e-12);
                CHECK(rel_diff(got, oracle_quadrature(u, p, q)) < 1e-8);
                CHECK(rel_diff(got, lorentz_norm_symmetrization(u, LorentzIndex::make(p, q), 2)) < 1e-10);
                // q-nesting with the constant p^{1/q - 1} against q = 1
                CHECK(got <= std::pow(p, 1.0 / q - 1.0) * lorentz_norm(u, LorentzIndex::make(p, 1.0)) * (1 + 1e-12));
            }
            // weak norm: sup over chunk right endpoints
            double weak = 0.0;
            double t = 0.0;
            for (const auto& c : u.chunks()) {
                t += c.measure;
                weak = std::max(weak, c.value * std::pow(t, 1.0 / p));
            }
            CHECK(rel_diff(lorentz_norm_weak(u, p), weak) < 1e-14);
            // L^{p,p} = L^p
            double lp = 0.0;
            for (const auto& c : u.chunks()) lp += std::pow(c.value, p) * c.measure;
            CHECK(rel_diff(lebesgue_norm(u, p), std::pow(lp, 1.0 / p)) < 1e-13);
            CHECK(rel_diff(lorentz_norm(u, LorentzIndex::make(p, p)), std::pow(lp, 1.0 / p)) < 1e-10);
        }
    }
}

TEST_CASE("dyadic rescaling is an isometry of the critical Lorentz norm") {
    const auto corpus = stepfunction_corpus(11, 10);
    for (int dim : {2, 3}) {
        const double p = critical_exponent(dim);
        for (const auto& u : corpus) {
            for (int j : {-3, 2, 5}) {
                const auto v = u.rescaled(std::ldexp(1.0, (dim - 1) * j), std::ldexp(1.0, -dim * j));
                for (double q : {1.0, 1.5, kInfinity}) {
                    const auto idx = LorentzIndex::make(p, q);
                    CHECK(rel_diff(lorentz_norm(v, idx), lorentz_norm(u, idx)) < 1e-14);
                }
            }
        }
    }
}

TEST_CASE("Schwarz profile radii") {
    const auto u = StepFunction::from_chunks({{2.0, std::numbers::pi}, {1.0, 3.0 * std::numbers::pi}});
    const auto s = schwarz_profile(u, 2);
    REQUIRE(s.chunks().size() == 2);
    CHECK(s.chunks()[0].measure == doctest::Approx(1.0));
    CHECK(s.chunks()[1].measure == doctest::Approx(1.0));
    CHECK(unit_ball_volume(3) == doctest::Approx(4.0 * std::numbers::pi / 3.0));
    CHECK(critical_exponent(2) == 2.0);
    CHECK(critical_exponent(3) == 1.5);
}

TEST_CASE("nested inclusion audit") {
    // single chunk filling the region: both norms follow the closed form
    const auto u = StepFunction::from_chunks({{1.0, 4.0}});
    const auto a = embedding_audit_nested(u, LorentzIndex::make(1.5, 1.0), LorentzIndex::make(2.0, 2.0), 4.0);
    const double low = 1.5 * std::pow(4.0, 1.0 / 1.5);
    const double high = 2.0;
    CHECK(rel_diff(a.ratio, low / high) < 1e-14);
    CHECK(throws_kind(ErrorKind::Index,
                      [&] { embedding_audit_nested(u, LorentzIndex::make(2, 1), LorentzIndex::make(1.5, 1), 4.0); }));
    CHECK(throws_kind(ErrorKind::Domain,
                      [&] { embedding_audit_nested(u, LorentzIndex::make(1, 1), LorentzIndex::make(2, 1), 1.0); }));
}

TEST_CASE("index validation") {
    CHECK(throws_kind(ErrorKind::Index, [] { LorentzIndex::make(0.0, 1.0); }));
    CHECK(throws_kind(ErrorKind::Index, [] { LorentzIndex::make(2.0, 0.0); }));
    CHECK(throws_kind(ErrorKind::Index, [] { LorentzIndex::make(kInfinity, 1.0); }));
    CHECK(lorentz_norm(StepFunction{}, LorentzIndex::make(2.0, 1.0)) == 0.0);
}
