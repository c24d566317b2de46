#ifndef NARLAB_PARALLEL_HPP
#define NARLAB_PARALLEL_HPP

#include <cstdint>
#include <functional>

namespace narlab {

// Worker cap: min(OpenMP max threads, NARLAB_THREADS if set).
int worker_count();

// Runs f(i) for i in [0, n). OpenMP-parallel when workers > 1; serial_for is
// the reference implementation kept for the comparison tests and benchmark.
void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& f);
void serial_for(std::int64_t n, const std::function<void(std::int64_t)>& f);

struct MeanVar {
    double mean = 0.0;
    double var_of_mean = 0.0;
    std::int64_t count = 0;
};

// Chunked mean/variance accumulator. Each chunk [i0, i1) is reduced
// independently and the chunk partials are summed in index order, so the
// result is bitwise identical for any worker count.
using ChunkEval = std::function<void(std::int64_t i0, std::int64_t i1, double& sum, double& sumsq)>;
MeanVar chunked_mean(std::int64_t total, std::int64_t chunk_size, const ChunkEval& eval, bool parallel);

}  // namespace narlab

#endif
