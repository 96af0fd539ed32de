#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "bvlab/grid.hpp"
#include "bvlab/group.hpp"
#include "bvlab/rearrange.hpp"

namespace bvlab {

/// mt19937_64 with distributions computed from raw bits, so streams are identical across standard libraries.
class CorpusRng {
public:
    explicit CorpusRng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Uniform integer in [lo, hi].
    std::int64_t integer(std::int64_t lo, std::int64_t hi);

private:
    std::mt19937_64 engine_;
};

struct CorpusOptions {
    int min_level = 3;
    int max_level = 5;
    int max_boxes = 4;
    /// Box weights are 2^e with e uniform in [-weight_octaves, weight_octaves], times a factor in [1, 2).
    double weight_octaves = 4.0;
    bool nonnegative = true;
};

/// Sum of a few random box indicators on a random dyadic grid.
GridFunction random_grid_function(CorpusRng& rng, int dim, const CorpusOptions& options = {});
std::vector<GridFunction> grid_corpus(std::uint64_t seed, std::size_t count, int dim, const CorpusOptions& options = {});

/// 1 to 12 chunks with values in (0, 8) and measures in (0, 4).
StepFunction random_stepfunction(CorpusRng& rng);
std::vector<StepFunction> stepfunction_corpus(std::uint64_t seed, std::size_t count);

/// j in [max(-max_scale, -level), max_scale]; y dyadic with y_level <= level + j, so act needs no refinement.
GroupElement random_group_element(CorpusRng& rng, int dim, int level, int max_scale = 4);

}  // namespace bvlab
