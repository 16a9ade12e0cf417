#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace sws {

using cplx = std::complex<double>;

/// Invalid user input (bad sizes, parity, ranges). CLI maps this to exit 2.
struct validation_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A numerical contract was violated (unitarity, residual, convergence).
/// CLI maps this to exit 3.
struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Dense complex matrix, row-major.
class ComplexMatrix {
  public:
    ComplexMatrix() = default;
    ComplexMatrix(int rows, int cols) : rows_(rows), cols_(cols), a_(size_t(rows) * cols) {}

    static ComplexMatrix identity(int n) {
        ComplexMatrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    cplx& operator()(int i, int j) { return a_[size_t(i) * cols_ + j]; }
    const cplx& operator()(int i, int j) const { return a_[size_t(i) * cols_ + j]; }

    cplx* data() { return a_.data(); }
    const cplx* data() const { return a_.data(); }

    ComplexMatrix adjoint() const {
        ComplexMatrix m(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
        return m;
    }

    double frobenius_norm() const {
        double s = 0;
        for (const cplx& z : a_) s += std::norm(z);
        return std::sqrt(s);
    }

    bool all_finite() const {
        for (const cplx& z : a_)
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
        return true;
    }

  private:
    int rows_ = 0, cols_ = 0;
    std::vector<cplx> a_;
};

inline ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows()) throw validation_error("matrix product: inner dimensions differ");
    ComplexMatrix c(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i) {
        for (int k = 0; k < a.cols(); ++k) {
            cplx aik = a(i, k);
            if (aik == cplx(0.0)) continue;
            for (int j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    }
    return c;
}

inline std::vector<cplx> operator*(const ComplexMatrix& a, const std::vector<cplx>& x) {
    if (a.cols() != int(x.size())) throw validation_error("matrix-vector product: size mismatch");
    std::vector<cplx> y(a.rows());
    for (int i = 0; i < a.rows(); ++i) {
        cplx s = 0;
        for (int j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

/// ||A - B||_F
inline double frobenius_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw validation_error("frobenius_distance: shape mismatch");
    double s = 0;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) s += std::norm(a(i, j) - b(i, j));
    return std::sqrt(s);
}

/// ||M^dagger M - I||_F
inline double unitarity_defect(const ComplexMatrix& m) {
    if (m.rows() != m.cols()) throw validation_error("unitarity_defect: matrix not square");
    int n = m.rows();
    double s = 0;
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            cplx g = 0;
            for (int k = 0; k < n; ++k) g += std::conj(m(k, i)) * m(k, j);
            if (i == j) g -= 1.0;
            s += (i == j ? 1.0 : 2.0) * std::norm(g);
        }
    }
    return std::sqrt(s);
}

}  // namespace sws
