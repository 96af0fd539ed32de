#include "bvlab/corpus.hpp"

#include <algorithm>
#include <cmath>

namespace bvlab {

std::int64_t CorpusRng::integer(std::int64_t lo, std::int64_t hi) {
    if (hi < lo) fail(ErrorKind::Usage, "empty integer range");
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(engine_() % span);
}

GridFunction random_grid_function(CorpusRng& rng, int dim, const CorpusOptions& options) {
    check_dim(dim);
    const int level = static_cast<int>(rng.integer(options.min_level, options.max_level));
    const std::int64_t side = std::int64_t{1} << level;
    CellIndex lo{0, 0, 0};
    CellIndex hi{1, 1, 1};
    for (int a = 0; a < dim; ++a) {
        lo[a] = rng.integer(-side, side - 1);
        hi[a] = lo[a] + rng.integer(2, side);
    }
    const CellBox box = CellBox::make(dim, level, lo, hi);
    std::vector<double> values(box.count(), 0.0);
    GridFunction shape(box, std::vector<double>(values.size(), 0.0));

    const int boxes = static_cast<int>(rng.integer(1, options.max_boxes));
    for (int b = 0; b < boxes; ++b) {
        CellIndex blo{0, 0, 0};
        CellIndex bhi{1, 1, 1};
        for (int a = 0; a < dim; ++a) {
            blo[a] = rng.integer(lo[a], hi[a] - 1);
            bhi[a] = rng.integer(blo[a] + 1, hi[a]);
        }
        const double octave = std::round(rng.uniform(-options.weight_octaves, options.weight_octaves));
        double weight = std::ldexp(rng.uniform(1.0, 2.0), static_cast<int>(octave));
        if (!options.nonnegative && rng.uniform() < 0.5) weight = -weight;
        const CellBox sub = CellBox::make(dim, level, blo, bhi);
        shape.for_each_cell([&](const CellIndex& cell, double) {
            if (sub.contains(cell)) values[shape.offset(cell)] += weight;
        });
    }
    return GridFunction(box, std::move(values));
}

std::vector<GridFunction> grid_corpus(std::uint64_t seed, std::size_t count, int dim, const CorpusOptions& options) {
    CorpusRng rng(seed);
    std::vector<GridFunction> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(random_grid_function(rng, dim, options));
    return out;
}

StepFunction random_stepfunction(CorpusRng& rng) {
    const auto n = rng.integer(1, 12);
    std::vector<Chunk> pieces;
    for (std::int64_t i = 0; i < n; ++i) pieces.push_back({rng.uniform(0.01, 8.0), rng.uniform(0.01, 4.0)});
    return StepFunction::from_pairs(std::move(pieces));
}

std::vector<StepFunction> stepfunction_corpus(std::uint64_t seed, std::size_t count) {
    CorpusRng rng(seed);
    std::vector<StepFunction> out;
    for (std::size_t i = 0; i < count; ++i) out.push_back(random_stepfunction(rng));
    return out;
}

GroupElement random_group_element(CorpusRng& rng, int dim, int level, int max_scale) {
    const int j = static_cast<int>(rng.integer(std::min(max_scale, std::max(-max_scale, -level)), max_scale));
    const int y_level = static_cast<int>(rng.integer(0, std::max(0, level + j)));
    CellIndex n{0, 0, 0};
    const std::int64_t reach = std::int64_t{4} << y_level;
    for (int a = 0; a < dim; ++a) n[a] = rng.integer(-reach, reach);
    return GroupElement(dim, j, n, y_level);
}

}  // namespace bvlab
