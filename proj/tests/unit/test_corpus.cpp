#include "support.hpp"

#include "bvlab/corpus.hpp"

using namespace bvlab;

TEST_CASE("corpus streams are reproducible") {
    CHECK(grid_corpus(5, 10, 2) == grid_corpus(5, 10, 2));
    CHECK(stepfunction_corpus(5, 10) == stepfunction_corpus(5, 10));
    CHECK_FALSE(grid_corpus(5, 10, 2) == grid_corpus(6, 10, 2));
    // first draws of mt19937_64 with the default seed
    CorpusRng rng(5489);
    CHECK(rng.uniform() == static_cast<double>(14514284786278117030ULL >> 11) * 0x1.0p-53);
}

TEST_CASE("uniform integers stay in range and hit both ends") {
    CorpusRng rng(1);
    bool lo = false;
    bool hi = false;
    for (int i = 0; i < 2000; ++i) {
        const auto v = rng.integer(-3, 4);
        CHECK(v >= -3);
        CHECK(v <= 4);
        lo = lo || v == -3;
        hi = hi || v == 4;
    }
    CHECK(lo);
    CHECK(hi);
    CHECK(rng.integer(7, 7) == 7);
}

TEST_CASE("grid samples respect the options") {
    CorpusOptions opt;
    opt.min_level = 2;
    opt.max_level = 3;
    for (const auto& u : grid_corpus(9, 40, 3, opt)) {
        CHECK(u.level() >= 2);
        CHECK(u.level() <= 3);
        CHECK(u.dim() == 3);
        for (double v : u.values()) CHECK(v >= 0.0);
    }
    for (const auto& s : stepfunction_corpus(9, 40)) {
        CHECK(s.chunks().size() >= 1);
        CHECK(s.chunks().size() <= 12);
        CHECK(s.max_value() < 8.0);
    }
}

TEST_CASE("random group elements need no refinement") {
    CorpusRng rng(3);
    for (int i = 0; i < 300; ++i) {
        const int level = static_cast<int>(rng.integer(0, 5));
        const auto g = random_group_element(rng, 2, level);
        CHECK(std::abs(g.scale()) <= 4);
        CHECK(g.scale() >= -level);
        CHECK(g.y_level() <= level + g.scale());
    }
}
