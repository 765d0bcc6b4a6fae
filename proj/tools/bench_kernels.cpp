// Compares the OpenMP tensor kernels against the serial reference
// implementations on growing sizes and reports throughput plus the maximum
// elementwise deviation.

#include <chrono>
#include <cstdio>
#include <vector>

#include "locc/matrix.hpp"
#include "locc/rng.hpp"

using namespace locc;

namespace {

ComplexMatrix random_matrix(std::size_t n, Rng& rng) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) m.at(i, j) = Cx{rng.gaussian(), rng.gaussian()};
    }
    return m;
}

template <typename F>
double time_seconds(F&& f, int reps) {
    const auto t0 = std::chrono::steady_clock::now();
    for (int r = 0; r < reps; ++r) f();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0).count() / reps;
}

}  // namespace

int main() {
    Rng rng(42);
    std::printf("%-14s %6s %12s %12s %8s %12s\n", "kernel", "size", "parallel_s", "serial_s",
                "speedup", "max_dev");
    for (std::size_t n : {16, 32, 64, 128}) {
        ComplexMatrix a = random_matrix(n, rng);
        ComplexMatrix b = random_matrix(n, rng);

        // the kron product (and the partial trace taken of it) is (n*n) x (n*n),
        // so keep those kernels within the dimension cap
        const bool kron_fits = n * n <= kMaxDim;
        if (kron_fits) {
            ComplexMatrix kp = kron(a, b);
            ComplexMatrix ks = ref::kron(a, b);
            const double t_kp = time_seconds([&] { kp = kron(a, b); }, 3);
            const double t_ks = time_seconds([&] { ks = ref::kron(a, b); }, 3);
            std::printf("%-14s %6zu %12.6f %12.6f %8.2f %12.3e\n", "kron", n, t_kp, t_ks,
                        t_ks / t_kp, kp.minus(ks).max_abs());
        }

        ComplexMatrix mp = matmul(a, b);
        ComplexMatrix ms = ref::matmul(a, b);
        const double t_mp = time_seconds([&] { mp = matmul(a, b); }, 5);
        const double t_ms = time_seconds([&] { ms = ref::matmul(a, b); }, 5);
        std::printf("%-14s %6zu %12.6f %12.6f %8.2f %12.3e\n", "matmul", n, t_mp, t_ms,
                    t_ms / t_mp, mp.minus(ms).max_abs());

        if (!kron_fits) continue;
        ComplexMatrix big = kron(a, b);  // (n*n) x (n*n)
        ComplexMatrix tp = partial_trace(big, n, n, Side::B);
        ComplexMatrix ts = ref::partial_trace(big, n, n, Side::B);
        const double t_tp = time_seconds([&] { tp = partial_trace(big, n, n, Side::B); }, 5);
        const double t_ts = time_seconds([&] { ts = ref::partial_trace(big, n, n, Side::B); }, 5);
        std::printf("%-14s %6zu %12.6f %12.6f %8.2f %12.3e\n", "partial_trace", n * n, t_tp,
                    t_ts, t_ts / t_tp, tp.minus(ts).max_abs());
    }
    return 0;
}
