#include "fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <vector>

namespace fraclps::detail {
namespace {

// The FFTW planner is not re-entrant; plan execution is. Plans are built
// alignment-independent so that repeated runs are bit-identical.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

void run(std::span<std::complex<double>> data, int rank, const int* shape, int howmany,
         Direction dir) {
    if (data.empty()) return;
    // Interleaved components are moved to contiguous blocks first; strided
    // batched transforms are several times slower for wide fields.
    std::vector<std::complex<double>> blocks;
    const std::size_t points = data.size() / static_cast<std::size_t>(howmany);
    if (howmany > 1) {
        blocks.resize(data.size());
        for (std::size_t k = 0; k < points; ++k)
            for (int c = 0; c < howmany; ++c) blocks[c * points + k] = data[k * howmany + c];
    }
    auto* buf = reinterpret_cast<fftw_complex*>(howmany > 1 ? blocks.data() : data.data());
    const int sign = dir == Direction::Forward ? FFTW_FORWARD : FFTW_BACKWARD;
    fftw_plan plan;
    {
        std::lock_guard lock(planner_mutex());
        plan = fftw_plan_many_dft(rank, shape, howmany, buf, nullptr, 1, static_cast<int>(points), buf,
                                  nullptr, 1, static_cast<int>(points), sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    }
    fftw_execute(plan);
    {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
    if (howmany > 1) {
        for (std::size_t k = 0; k < points; ++k)
            for (int c = 0; c < howmany; ++c) data[k * howmany + c] = blocks[c * points + k];
    }
}

}  // namespace

void dft(std::span<std::complex<double>> data, int dim, int n, int howmany, Direction dir) {
    const int shape[2] = {n, n};
    run(data, dim, shape, howmany, dir);
}

void dft_1d(std::span<std::complex<double>> data, Direction dir) {
    const int shape[1] = {static_cast<int>(data.size())};
    run(data, 1, shape, 1, dir);
}

}  // namespace fraclps::detail
