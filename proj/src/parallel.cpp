#include "narlab/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <vector>

#ifdef NARLAB_HAVE_OPENMP
#include <omp.h>
#endif

namespace narlab {

int worker_count() {
    int n = 1;
#ifdef NARLAB_HAVE_OPENMP
    n = omp_get_max_threads();
#endif
    if (const char* env = std::getenv("NARLAB_THREADS")) {
        int cap = std::atoi(env);
        if (cap >= 1) n = std::min(n, cap);
    }
    return n;
}

void serial_for(std::int64_t n, const std::function<void(std::int64_t)>& f) {
    for (std::int64_t i = 0; i < n; ++i) f(i);
}

void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& f) {
    int workers = worker_count();
    if (workers <= 1 || n < 2) {
        serial_for(n, f);
        return;
    }
#ifdef NARLAB_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(workers)
    for (std::int64_t i = 0; i < n; ++i) f(i);
#else
    serial_for(n, f);
#endif
}

MeanVar chunked_mean(std::int64_t total, std::int64_t chunk_size, const ChunkEval& eval, bool parallel) {
    if (total <= 0) return {};
    chunk_size = std::max<std::int64_t>(1, chunk_size);
    std::int64_t nchunks = (total + chunk_size - 1) / chunk_size;
    std::vector<double> sums(nchunks, 0.0), sqs(nchunks, 0.0);
    auto body = [&](std::int64_t c) {
        std::int64_t i0 = c * chunk_size;
        std::int64_t i1 = std::min(total, i0 + chunk_size);
        eval(i0, i1, sums[c], sqs[c]);
    };
    if (parallel)
        parallel_for(nchunks, body);
    else
        serial_for(nchunks, body);
    double sum = 0.0, sq = 0.0;
    for (std::int64_t c = 0; c < nchunks; ++c) {
        sum += sums[c];
        sq += sqs[c];
    }
    MeanVar mv;
    mv.count = total;
    mv.mean = sum / static_cast<double>(total);
    double n = static_cast<double>(total);
    double var = std::max(0.0, sq / n - mv.mean * mv.mean);
    mv.var_of_mean = var / n;
    return mv;
}

}  // namespace narlab
