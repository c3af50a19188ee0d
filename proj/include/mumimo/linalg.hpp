#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace mumimo {

using cplx = std::complex<double>;

// Dense complex matrix, column-major.
class CMatrix {
public:
    CMatrix() = default;
    CMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    cplx& operator()(std::size_t r, std::size_t c) { return data_[c * rows_ + r]; }
    const cplx& operator()(std::size_t r, std::size_t c) const { return data_[c * rows_ + r]; }

    std::span<cplx> col(std::size_t c) { return {data_.data() + c * rows_, rows_}; }
    std::span<const cplx> col(std::size_t c) const { return {data_.data() + c * rows_, rows_}; }

    std::span<cplx> data() { return data_; }
    std::span<const cplx> data() const { return data_; }

    static CMatrix identity(std::size_t n);

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> data_;
};

// a^H b
cplx dot_h(std::span<const cplx> a, std::span<const cplx> b);
double norm_sq(std::span<const cplx> a);

// A^H B
CMatrix adjoint_times(const CMatrix& a, const CMatrix& b);
CMatrix multiply(const CMatrix& a, const CMatrix& b);

// Unit vector orthogonal to every column of `a` (n x k, k < n), taken as the
// last column of the full unitary factor of a Householder QR. Throws
// RankDeficiencyError if a diagonal entry of R falls below rel_tol times the
// largest column norm.
std::vector<cplx> orthogonal_complement_vector(const CMatrix& a, double rel_tol = 1e-12);

// Rotate v so its first component with magnitude above `threshold` is real positive.
void normalize_phase(std::span<cplx> v, double threshold = 1e-14);

// In-place lower Cholesky factor of a Hermitian positive definite matrix
// (upper triangle is zeroed). Throws NumericalError when not positive definite.
void cholesky_inplace(CMatrix& a);

// Solves (L L^H) X = B in place given the factor from cholesky_inplace.
void cholesky_solve(const CMatrix& factor, CMatrix& b);

// Diagonal of (L L^H)^{-1}.
std::vector<double> cholesky_inverse_diagonal(const CMatrix& factor);

} // namespace mumimo
