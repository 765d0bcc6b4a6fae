#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace locc {

using Cx = std::complex<double>;

// Hard cap on total Hilbert-space dimension for dense matrices.
inline constexpr std::size_t kMaxDim = 4096;

// Which side of a bipartite system to keep in a partial trace.
enum class Side { A, B };

// Dense complex matrix, row-major. The workhorse container for density
// matrices, measurement operators and unitaries.
class ComplexMatrix {
  public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols);
    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Cx> entries);

    static ComplexMatrix identity(std::size_t n);
    static ComplexMatrix diagonal(const std::vector<Cx>& d);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Cx& at(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
    const Cx& at(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

    const std::vector<Cx>& entries() const { return entries_; }
    std::vector<Cx>& entries() { return entries_; }

    Cx trace() const;
    ComplexMatrix dagger() const;
    ComplexMatrix scaled(Cx factor) const;
    ComplexMatrix plus(const ComplexMatrix& other) const;
    ComplexMatrix minus(const ComplexMatrix& other) const;

    double max_abs() const;
    // max_ij |(M - M†)_ij|
    double hermiticity_defect() const;
    bool all_finite() const;

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Cx> entries_;
};

struct HermitianSpectrum {
    std::vector<double> eigenvalues;  // descending
    ComplexMatrix eigenvectors;       // orthonormal columns, same order
};

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);

// Reduced operator of a (dimA*dimB)x(dimA*dimB) matrix on the kept side.
ComplexMatrix partial_trace(const ComplexMatrix& m, std::size_t dim_a, std::size_t dim_b,
                            Side keep);

// Partial trace over an arbitrary factor structure: `dims` are the factor
// dimensions (product == matrix dim), `keep[i]` marks retained factors.
ComplexMatrix partial_trace_factors(const ComplexMatrix& m, const std::vector<std::size_t>& dims,
                                    const std::vector<bool>& keep);

// Eigendecomposition of a Hermitian matrix (asymmetry tolerance 1e-9).
HermitianSpectrum eigh(const ComplexMatrix& h);

bool is_density_matrix(const ComplexMatrix& m, double tol);

// Serial reference kernels, kept alongside the parallel ones for testing
// and benchmarking.
namespace ref {
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix partial_trace(const ComplexMatrix& m, std::size_t dim_a, std::size_t dim_b,
                            Side keep);
}  // namespace ref

}  // namespace locc
