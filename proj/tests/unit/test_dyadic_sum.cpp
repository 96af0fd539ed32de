#include "support.hpp"

#include "bvlab/bv.hpp"
#include "bvlab/dyadic_sum.hpp"
#include "bvlab/rearrange.hpp"

using namespace bvlab;
using testing::block;
using testing::throws_kind;

TEST_CASE("separated terms stay separate clusters") {
    const auto a = block(2, 2, {0, 0, 0}, {4, 4, 1}, 1.0);
    const auto b = block(2, 14, {1 << 20, 0, 0}, {(1 << 20) + 4, 4, 1}, 3.0);
    const DyadicSum s(2, {a, b});
    CHECK(s.finest_level() == 14);
    CHECK(s.clusters().size() == 2);
    CHECK(s.l1_norm() == doctest::Approx(1.0 + 3.0 * 16.0 * std::ldexp(1.0, -28)));
    CHECK(s({0.5, 0.5, 0}) == 1.0);
    CHECK(s({64.0001, 0.0001, 0}) == 3.0);
    // flattening the whole sum at level 14 would need about 2^40 cells
    CHECK(throws_kind(ErrorKind::Resource, [&] { s.flatten(); }));
    // TV adds over clusters: each is an isolated square
    const double tv = total_variation(s);
    CHECK(testing::rel_diff(tv, total_variation(a) + total_variation(b)) < 1e-14);
}

TEST_CASE("touching terms merge and add pointwise") {
    const auto a = block(1, 0, {0, 0, 0}, {2, 1, 1}, 1.0);
    const auto b = block(1, 1, {4, 0, 0}, {6, 1, 1}, 2.0);
    const DyadicSum s(1, {a, b});
    const auto cl = s.clusters();
    REQUIRE(cl.size() == 1);
    CHECK(cl[0] == s.flatten());
    CHECK(cl[0]({1.5, 0, 0}) == 1.0);
    CHECK(cl[0]({2.5, 0, 0}) == 2.0);
    CHECK(s.plus(s, -1.0).l1_norm() == 0.0);
}

TEST_CASE("crop of a dyadic sum and rearrangement pieces") {
    const auto a = block(1, 0, {0, 0, 0}, {2, 1, 1}, 1.0);
    const auto b = block(1, 3, {0, 0, 0}, {4, 1, 1}, 1.0);
    const DyadicSum s(1, {a, b});
    const auto c = s.crop(CellBox::make(1, 0, {0, 0, 0}, {1, 1, 1}));
    CHECK(c.level() == 3);
    CHECK(c.l1_norm() == doctest::Approx(1.5));
    const auto u = decreasing_rearrangement(s);
    REQUIRE(u.chunks().size() == 2);
    CHECK(u.chunks()[0] == Chunk{2.0, 0.5});
    CHECK(u.chunks()[1] == Chunk{1.0, 1.5});
    CHECK(throws_kind(ErrorKind::DimensionMismatch, [&] { s.plus(GridFunction::zero(2)); }));
}
