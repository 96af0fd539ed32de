#include "support.hpp"

#include <numbers>

#include "bvlab/region.hpp"

using namespace bvlab;
using testing::block;
using testing::throws_kind;

TEST_CASE("box and cube regions") {
    const auto r = Region::cube(2, 1, {0, 0, 0}, 2);
    CHECK(r.count() == 4);
    CHECK(r.measure() == 1.0);
    CHECK(r.contains(1, {1, 1, 0}));
    CHECK_FALSE(r.contains(1, {2, 0, 0}));
    // membership by base corner at other levels
    CHECK(r.contains(3, {7, 7, 0}));
    CHECK_FALSE(r.contains(3, {8, 0, 0}));
    CHECK(r.contains(0, {0, 0, 0}));
    CHECK(throws_kind(ErrorKind::Domain, [] { Region::cube(1, 0, {}, -1); }));
}

TEST_CASE("all and empty regions") {
    CHECK(std::isinf(Region::all(2).measure()));
    CHECK(Region::all(3).contains(-5, {100, -7, 3}));
    CHECK(Region::empty(2).is_empty());
    CHECK(Region::empty(2).measure() == 0.0);
}

TEST_CASE("annulus mask approaches the annulus measure") {
    const auto r = Region::annulus(2, 7, 1.0, 2.0);
    CHECK(testing::rel_diff(r.measure(), 3.0 * std::numbers::pi) < 5e-3);
    CHECK(r.contains(7, {128, 0, 0}));   // centre just outside radius 1
    CHECK_FALSE(r.contains(7, {0, 0, 0}));
    CHECK(throws_kind(ErrorKind::Domain, [] { Region::annulus(2, 3, 2.0, 1.0); }));
    CHECK(throws_kind(ErrorKind::Resource, [] { Region::annulus(2, 10, 0.0, 2.0, Limits{1000}); }));
}

TEST_CASE("restriction to masks and finer regions") {
    const auto u = block(1, 0, {0, 0, 0}, {4, 1, 1}, 2.0);
    const auto m = Region::mask(CellBox::make(1, 0, {0, 0, 0}, {4, 1, 1}), {1, 0, 1, 0});
    CHECK(restrict(u, m).l1_norm() == 4.0);
    const auto fine = Region::box(CellBox::make(1, 2, {2, 0, 0}, {5, 1, 1}));
    const auto r = restrict(u, fine);
    CHECK(r.level() == 2);
    CHECK(r.l1_norm() == doctest::Approx(1.5));
    CHECK(throws_kind(ErrorKind::Domain, [] { Region::mask(CellBox::make(1, 0, {}, {3, 1, 1}), {1}); }));
    CHECK(throws_kind(ErrorKind::DimensionMismatch, [&] { restrict(u, Region::all(2)); }));
}
