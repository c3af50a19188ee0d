#include "mumimo/linalg.hpp"

#include "mumimo/errors.hpp"

#include <algorithm>
#include <cmath>

namespace mumimo {

CMatrix CMatrix::identity(std::size_t n)
{
    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

cplx dot_h(std::span<const cplx> a, std::span<const cplx> b)
{
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        // conj(a) * b
        re += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
        im += a[i].real() * b[i].imag() - a[i].imag() * b[i].real();
    }
    return {re, im};
}

double norm_sq(std::span<const cplx> a)
{
    double s = 0.0;
    for (const cplx& z : a) s += std::norm(z);
    return s;
}

CMatrix adjoint_times(const CMatrix& a, const CMatrix& b)
{
    CMatrix out(a.cols(), b.cols());
    for (std::size_t j = 0; j < b.cols(); ++j)
        for (std::size_t i = 0; i < a.cols(); ++i) out(i, j) = dot_h(a.col(i), b.col(j));
    return out;
}

CMatrix multiply(const CMatrix& a, const CMatrix& b)
{
    CMatrix out(a.rows(), b.cols());
    for (std::size_t j = 0; j < b.cols(); ++j)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const cplx bkj = b(k, j);
            for (std::size_t i = 0; i < a.rows(); ++i) out(i, j) += a(i, k) * bkj;
        }
    return out;
}

std::vector<cplx> orthogonal_complement_vector(const CMatrix& a_in, double rel_tol)
{
    const std::size_t n = a_in.rows();
    const std::size_t k = a_in.cols();
    if (k >= n) throw DomainError("orthogonal_complement_vector: need fewer columns than rows");

    CMatrix a = a_in;
    std::vector<std::vector<cplx>> reflectors(k);
    double max_norm = 0.0;
    for (std::size_t j = 0; j < k; ++j) max_norm = std::max(max_norm, std::sqrt(norm_sq(a.col(j))));

    for (std::size_t j = 0; j < k; ++j) {
        std::vector<cplx>& v = reflectors[j];
        v.assign(a.col(j).begin() + j, a.col(j).end());
        const double xnorm = std::sqrt(norm_sq(v));
        if (!(xnorm > rel_tol * max_norm)) throw RankDeficiencyError("matrix is numerically rank deficient");
        const double x0abs = std::abs(v[0]);
        const cplx phase = x0abs > 0.0 ? v[0] / x0abs : cplx(1.0, 0.0);
        v[0] += phase * xnorm;
        const double vnorm = std::sqrt(norm_sq(v));
        for (cplx& z : v) z /= vnorm;
        for (std::size_t c = j; c < k; ++c) {
            std::span<cplx> tail = a.col(c).subspan(j);
            const cplx s = 2.0 * dot_h(v, tail);
            for (std::size_t i = 0; i < tail.size(); ++i) tail[i] -= s * v[i];
        }
    }

    std::vector<cplx> q(n, cplx(0.0, 0.0));
    q[n - 1] = 1.0;
    for (std::size_t jj = k; jj-- > 0;) {
        const std::vector<cplx>& v = reflectors[jj];
        std::span<cplx> tail = std::span<cplx>(q).subspan(jj);
        const cplx s = 2.0 * dot_h(v, tail);
        for (std::size_t i = 0; i < tail.size(); ++i) tail[i] -= s * v[i];
    }
    return q;
}

void normalize_phase(std::span<cplx> v, double threshold)
{
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double mag = std::abs(v[i]);
        if (mag > threshold) {
            const cplx rot = std::conj(v[i]) / mag;
            for (cplx& w : v) w *= rot;
            v[i] = cplx(mag, 0.0);
            return;
        }
    }
}

void cholesky_inplace(CMatrix& a)
{
    const std::size_t n = a.rows();
    for (std::size_t j = 0; j < n; ++j) {
        double d = a(j, j).real();
        for (std::size_t p = 0; p < j; ++p) d -= std::norm(a(j, p));
        if (!(d > 0.0)) throw NumericalError("cholesky: matrix is not positive definite");
        const double ljj = std::sqrt(d);
        a(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            cplx s = a(i, j);
            for (std::size_t p = 0; p < j; ++p) s -= a(i, p) * std::conj(a(j, p));
            a(i, j) = s / ljj;
        }
        for (std::size_t i = 0; i < j; ++i) a(i, j) = 0.0;
    }
}

void cholesky_solve(const CMatrix& l, CMatrix& b)
{
    const std::size_t n = l.rows();
    for (std::size_t c = 0; c < b.cols(); ++c) {
        std::span<cplx> x = b.col(c);
        for (std::size_t i = 0; i < n; ++i) {
            cplx s = x[i];
            for (std::size_t p = 0; p < i; ++p) s -= l(i, p) * x[p];
            x[i] = s / l(i, i).real();
        }
        for (std::size_t i = n; i-- > 0;) {
            cplx s = x[i];
            for (std::size_t p = i + 1; p < n; ++p) s -= std::conj(l(p, i)) * x[p];
            x[i] = s / l(i, i).real();
        }
    }
}

std::vector<double> cholesky_inverse_diagonal(const CMatrix& l)
{
    // (L L^H)^{-1} = L^{-H} L^{-1}; its k-th diagonal entry is the squared norm of column k of L^{-1}.
    const std::size_t n = l.rows();
    std::vector<double> diag(n, 0.0);
    std::vector<cplx> col(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::fill(col.begin(), col.end(), cplx(0.0, 0.0));
        col[k] = 1.0 / l(k, k).real();
        for (std::size_t i = k + 1; i < n; ++i) {
            cplx s = 0.0;
            for (std::size_t p = k; p < i; ++p) s -= l(i, p) * col[p];
            col[i] = s / l(i, i).real();
        }
        for (std::size_t i = k; i < n; ++i) diag[k] += std::norm(col[i]);
    }
    return diag;
}

} // namespace mumimo
