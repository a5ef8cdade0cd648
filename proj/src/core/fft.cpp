#include "kasar/core/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <utility>

namespace kasar::fft {
namespace {

struct FftwBuffer {
    explicit FftwBuffer(std::size_t n)
        : ptr(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n))) {}
    ~FftwBuffer() { fftw_free(ptr); }
    FftwBuffer(const FftwBuffer&) = delete;
    FftwBuffer& operator=(const FftwBuffer&) = delete;
    cplx* get() { return reinterpret_cast<cplx*>(ptr); }
    fftw_complex* ptr;
};

/// One in-place plan + aligned scratch per (length, direction). FFTW_ESTIMATE keeps
/// plan selection, and therefore the output bits, independent of timing.
class Plan {
public:
    Plan(std::size_t n, Direction dir) : n_(n), buf_(n) {
        plan_ = fftw_plan_dft_1d(static_cast<int>(n), buf_.ptr, buf_.ptr,
                                 dir == Direction::forward ? FFTW_FORWARD : FFTW_BACKWARD,
                                 FFTW_ESTIMATE);
    }
    ~Plan() { fftw_destroy_plan(plan_); }
    Plan(const Plan&) = delete;
    Plan& operator=(const Plan&) = delete;

    cplx* buffer() { return buf_.get(); }
    void execute() { fftw_execute(plan_); }
    std::size_t size() const { return n_; }

private:
    std::size_t n_;
    FftwBuffer buf_;
    fftw_plan plan_;
};

std::mutex g_plan_mutex;

Plan& plan_for(std::size_t n, Direction dir) {
    static std::map<std::pair<std::size_t, int>, std::unique_ptr<Plan>> cache;
    std::lock_guard lock(g_plan_mutex);
    auto key = std::make_pair(n, static_cast<int>(dir));
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, std::make_unique<Plan>(n, dir)).first;
    return *it->second;
}

template <typename Load, typename Store>
void run(std::size_t n, Direction dir, bool shift, Load&& load, Store&& store) {
    Plan& p = plan_for(n, dir);
    cplx* buf = p.buffer();
    const std::size_t half = n / 2;
    // ifftshift on the way in: buf[i] = in[(i + N/2) % N]
    for (std::size_t i = 0; i < n; ++i) buf[i] = load(shift ? (i + half) % n : i);
    p.execute();
    const double scale = dir == Direction::inverse ? 1.0 / static_cast<double>(n) : 1.0;
    // fftshift on the way out: out[i] = buf[(i + N - N/2) % N]
    for (std::size_t i = 0; i < n; ++i) store(i, buf[shift ? (i + n - half) % n : i] * scale);
}

}  // namespace

void centered(std::span<cplx> data, Direction dir) {
    if (data.empty()) return;
    std::vector<cplx> in(data.begin(), data.end());
    run(
        data.size(), dir, true, [&](std::size_t i) { return in[i]; },
        [&](std::size_t i, cplx v) { data[i] = v; });
}

void plain(std::span<cplx> data, Direction dir) {
    if (data.empty()) return;
    std::vector<cplx> in(data.begin(), data.end());
    run(
        data.size(), dir, false, [&](std::size_t i) { return in[i]; },
        [&](std::size_t i, cplx v) { data[i] = v; });
}

void centered_rows(ComplexMatrix& m, Direction dir) {
    const std::size_t n = m.cols();
    if (n == 0) return;
    std::vector<cplx> in(n);
    for (std::size_t r = 0; r < m.rows(); ++r) {
        auto row = m.row(r);
        std::copy(row.begin(), row.end(), in.begin());
        run(
            n, dir, true, [&](std::size_t i) { return in[i]; },
            [&](std::size_t i, cplx v) { row[i] = v; });
    }
}

void centered_cols(ComplexMatrix& m, Direction dir) {
    const std::size_t n = m.rows();
    if (n == 0) return;
    std::vector<cplx> in(n);
    for (std::size_t c = 0; c < m.cols(); ++c) {
        for (std::size_t i = 0; i < n; ++i) in[i] = m(i, c);
        run(
            n, dir, true, [&](std::size_t i) { return in[i]; },
            [&](std::size_t i, cplx v) { m(i, c) = v; });
    }
}

}  // namespace kasar::fft
