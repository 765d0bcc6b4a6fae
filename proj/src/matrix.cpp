#include "locc/matrix.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "locc/errors.hpp"

namespace locc {

namespace {

void check_cap(std::size_t rows, std::size_t cols) {
    if (rows > kMaxDim || cols > kMaxDim) {
        throw CapacityError("matrix dimension " + std::to_string(std::max(rows, cols)) +
                            " exceeds cap " + std::to_string(kMaxDim));
    }
}

using EMatrix = Eigen::Matrix<Cx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Map<const EMatrix> as_eigen(const ComplexMatrix& m) {
    return Eigen::Map<const EMatrix>(m.entries().data(), static_cast<Eigen::Index>(m.rows()),
                                     static_cast<Eigen::Index>(m.cols()));
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols, Cx{0.0, 0.0}) {
    check_cap(rows, cols);
}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Cx> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    check_cap(rows, cols);
    if (entries_.size() != rows_ * cols_) {
        throw ShapeError("entry count does not match rows*cols");
    }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(const std::vector<Cx>& d) {
    ComplexMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m.at(i, i) = d[i];
    return m;
}

Cx ComplexMatrix::trace() const {
    if (rows_ != cols_) throw ShapeError("trace of non-square matrix");
    Cx t = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) t += at(i, i);
    return t;
}

ComplexMatrix ComplexMatrix::dagger() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) out.at(c, r) = std::conj(at(r, c));
    return out;
}

ComplexMatrix ComplexMatrix::scaled(Cx factor) const {
    ComplexMatrix out = *this;
    for (auto& e : out.entries_) e *= factor;
    return out;
}

ComplexMatrix ComplexMatrix::plus(const ComplexMatrix& other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_) throw ShapeError("matrix sum shape mismatch");
    ComplexMatrix out = *this;
    for (std::size_t i = 0; i < entries_.size(); ++i) out.entries_[i] += other.entries_[i];
    return out;
}

ComplexMatrix ComplexMatrix::minus(const ComplexMatrix& other) const {
    return plus(other.scaled(-1.0));
}

double ComplexMatrix::max_abs() const {
    double m = 0.0;
    for (const auto& e : entries_) m = std::max(m, std::abs(e));
    return m;
}

double ComplexMatrix::hermiticity_defect() const {
    if (rows_ != cols_) throw ShapeError("hermiticity of non-square matrix");
    double d = 0.0;
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = r; c < cols_; ++c)
            d = std::max(d, std::abs(at(r, c) - std::conj(at(c, r))));
    return d;
}

bool ComplexMatrix::all_finite() const {
    for (const auto& e : entries_) {
        if (!std::isfinite(e.real()) || !std::isfinite(e.imag())) return false;
    }
    return true;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    const std::size_t rows = a.rows() * b.rows();
    const std::size_t cols = a.cols() * b.cols();
    check_cap(rows, cols);
    ComplexMatrix out(rows, cols);
    const std::size_t br = b.rows(), bc = b.cols();
#pragma omp parallel for collapse(2) if (rows * cols > 4096)
    for (std::size_t ar = 0; ar < a.rows(); ++ar) {
        for (std::size_t ac = 0; ac < a.cols(); ++ac) {
            const Cx f = a.at(ar, ac);
            for (std::size_t r = 0; r < br; ++r)
                for (std::size_t c = 0; c < bc; ++c)
                    out.at(ar * br + r, ac * bc + c) = f * b.at(r, c);
        }
    }
    return out;
}

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows()) throw ShapeError("matmul inner dimension mismatch");
    ComplexMatrix out(a.rows(), b.cols());
    const std::size_t n = a.rows(), k = a.cols(), m = b.cols();
#pragma omp parallel for if (n * m * k > 32768)
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t i = 0; i < k; ++i) {
            const Cx f = a.at(r, i);
            if (f == Cx{0.0, 0.0}) continue;
            for (std::size_t c = 0; c < m; ++c) out.at(r, c) += f * b.at(i, c);
        }
    }
    return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, std::size_t dim_a, std::size_t dim_b,
                            Side keep) {
    const std::size_t dim = dim_a * dim_b;
    if (m.rows() != dim || m.cols() != dim) {
        throw ShapeError("partial_trace: matrix is not (dimA*dimB) square");
    }
    const std::size_t kept = (keep == Side::A) ? dim_a : dim_b;
    const std::size_t traced = (keep == Side::A) ? dim_b : dim_a;
    ComplexMatrix out(kept, kept);
#pragma omp parallel for collapse(2) if (kept * kept * traced > 32768)
    for (std::size_t r = 0; r < kept; ++r) {
        for (std::size_t c = 0; c < kept; ++c) {
            Cx sum = 0.0;
            for (std::size_t t = 0; t < traced; ++t) {
                const std::size_t row = (keep == Side::A) ? r * dim_b + t : t * dim_b + r;
                const std::size_t col = (keep == Side::A) ? c * dim_b + t : t * dim_b + c;
                sum += m.at(row, col);
            }
            out.at(r, c) = sum;
        }
    }
    return out;
}

ComplexMatrix partial_trace_factors(const ComplexMatrix& m, const std::vector<std::size_t>& dims,
                                    const std::vector<bool>& keep) {
    if (dims.size() != keep.size()) throw ShapeError("partial_trace_factors: dims/keep mismatch");
    std::size_t total = 1;
    for (auto d : dims) total *= d;
    if (m.rows() != total || m.cols() != total) {
        throw ShapeError("partial_trace_factors: matrix dim does not match factors");
    }
    std::size_t kept_dim = 1, traced_dim = 1;
    for (std::size_t i = 0; i < dims.size(); ++i) (keep[i] ? kept_dim : traced_dim) *= dims[i];

    // strides of each factor in the full index
    std::vector<std::size_t> stride(dims.size(), 1);
    for (std::size_t i = dims.size(); i-- > 1;) stride[i - 1] = stride[i] * dims[i];

    auto compose = [&](std::size_t kept_idx, std::size_t traced_idx) {
        std::size_t full = 0;
        for (std::size_t i = dims.size(); i-- > 0;) {
            std::size_t digit;
            if (keep[i]) {
                digit = kept_idx % dims[i];
                kept_idx /= dims[i];
            } else {
                digit = traced_idx % dims[i];
                traced_idx /= dims[i];
            }
            full += digit * stride[i];
        }
        return full;
    };

    ComplexMatrix out(kept_dim, kept_dim);
    for (std::size_t r = 0; r < kept_dim; ++r) {
        for (std::size_t c = 0; c < kept_dim; ++c) {
            Cx sum = 0.0;
            for (std::size_t t = 0; t < traced_dim; ++t) {
                sum += m.at(compose(r, t), compose(c, t));
            }
            out.at(r, c) = sum;
        }
    }
    return out;
}

HermitianSpectrum eigh(const ComplexMatrix& h) {
    if (h.rows() != h.cols()) throw ShapeError("eigh: non-square input");
    if (!h.all_finite()) throw ContractError("eigh: non-finite entries");
    if (h.hermiticity_defect() > 1e-9) throw ContractError("eigh: input not Hermitian within 1e-9");

    Eigen::SelfAdjointEigenSolver<EMatrix> solver(as_eigen(h));
    if (solver.info() != Eigen::Success) throw NumericError("eigh: eigensolver failed to converge");

    const std::size_t n = h.rows();
    HermitianSpectrum out;
    out.eigenvalues.resize(n);
    out.eigenvectors = ComplexMatrix(n, n);
    // Eigen returns ascending order; flip to descending.
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t src = n - 1 - i;
        out.eigenvalues[i] = solver.eigenvalues()(static_cast<Eigen::Index>(src));
        for (std::size_t r = 0; r < n; ++r) {
            out.eigenvectors.at(r, i) = solver.eigenvectors()(static_cast<Eigen::Index>(r),
                                                              static_cast<Eigen::Index>(src));
        }
    }
    return out;
}

bool is_density_matrix(const ComplexMatrix& m, double tol) {
    if (m.rows() != m.cols()) throw ShapeError("is_density_matrix: non-square input");
    if (!m.all_finite()) return false;
    if (m.hermiticity_defect() > tol) return false;
    if (std::abs(m.trace() - Cx{1.0, 0.0}) > tol) return false;
    // symmetrize before the spectral check so the tolerance applies to eigenvalues only
    ComplexMatrix sym = m.plus(m.dagger()).scaled(0.5);
    auto spec = eigh(sym);
    for (double lambda : spec.eigenvalues) {
        if (lambda < -tol) return false;
    }
    return true;
}

namespace ref {

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t ar = 0; ar < a.rows(); ++ar)
        for (std::size_t ac = 0; ac < a.cols(); ++ac)
            for (std::size_t r = 0; r < b.rows(); ++r)
                for (std::size_t c = 0; c < b.cols(); ++c)
                    out.at(ar * b.rows() + r, ac * b.cols() + c) = a.at(ar, ac) * b.at(r, c);
    return out;
}

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows()) throw ShapeError("matmul inner dimension mismatch");
    ComplexMatrix out(a.rows(), b.cols());
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < b.cols(); ++c) {
            Cx sum = 0.0;
            for (std::size_t i = 0; i < a.cols(); ++i) sum += a.at(r, i) * b.at(i, c);
            out.at(r, c) = sum;
        }
    return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, std::size_t dim_a, std::size_t dim_b,
                            Side keep) {
    const std::size_t dim = dim_a * dim_b;
    if (m.rows() != dim || m.cols() != dim) {
        throw ShapeError("partial_trace: matrix is not (dimA*dimB) square");
    }
    const std::size_t kept = (keep == Side::A) ? dim_a : dim_b;
    const std::size_t traced = (keep == Side::A) ? dim_b : dim_a;
    ComplexMatrix out(kept, kept);
    for (std::size_t r = 0; r < kept; ++r)
        for (std::size_t c = 0; c < kept; ++c) {
            Cx sum = 0.0;
            for (std::size_t t = 0; t < traced; ++t) {
                const std::size_t row = (keep == Side::A) ? r * dim_b + t : t * dim_b + r;
                const std::size_t col = (keep == Side::A) ? c * dim_b + t : t * dim_b + c;
                sum += m.at(row, col);
            }
            out.at(r, c) = sum;
        }
    return out;
}

}  // namespace ref

}  // namespace locc
