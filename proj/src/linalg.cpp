#include "pzw/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

// LAPACK Hermitian eigensolver.
extern "C" {
void zheev_(const char* jobz, const char* uplo, const int* n, pzw::cplx* a, const int* lda,
            double* w, pzw::cplx* work, const int* lwork, double* rwork, int* info);
}

namespace pzw {

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix multiply(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("multiply: shape mismatch");
    Matrix c(a.rows(), b.cols());
    for (std::size_t j = 0; j < b.cols(); ++j) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const cplx bkj = b(k, j);
            if (bkj == cplx(0.0)) continue;
            const cplx* acol = a.col(k);
            cplx* ccol = c.col(j);
            for (std::size_t i = 0; i < a.rows(); ++i) ccol[i] += acol[i] * bkj;
        }
    }
    return c;
}

Matrix adjoint(const Matrix& a) {
    Matrix t(a.cols(), a.rows());
    for (std::size_t j = 0; j < a.cols(); ++j)
        for (std::size_t i = 0; i < a.rows(); ++i) t(j, i) = std::conj(a(i, j));
    return t;
}

Matrix adjoint_multiply(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows()) throw std::invalid_argument("adjoint_multiply: shape mismatch");
    Matrix c(a.cols(), b.cols());
    for (std::size_t j = 0; j < b.cols(); ++j) {
        for (std::size_t i = 0; i < a.cols(); ++i) {
            const cplx* acol = a.col(i);
            const cplx* bcol = b.col(j);
            cplx s = 0.0;
            for (std::size_t k = 0; k < a.rows(); ++k) s += std::conj(acol[k]) * bcol[k];
            c(i, j) = s;
        }
    }
    return c;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("max_abs_diff: shape mismatch");
    double m = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j)
        for (std::size_t i = 0; i < a.rows(); ++i) m = std::max(m, std::abs(a(i, j) - b(i, j)));
    return m;
}

double hermiticity_defect(const Matrix& a) {
    double m = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j)
        for (std::size_t i = 0; i <= j; ++i) m = std::max(m, std::abs(a(i, j) - std::conj(a(j, i))));
    return m;
}

BandedMatrix::BandedMatrix(std::size_t dim, int half_bandwidth)
    : dim_(dim), hb_(half_bandwidth), diags_(std::size_t(2 * half_bandwidth + 1) * dim) {}

cplx BandedMatrix::at(std::size_t i, std::size_t j) const {
    const long d = long(j) - long(i);
    if (d < -hb_ || d > hb_) return 0.0;
    return diagonal(int(d))[i];
}

void BandedMatrix::set(std::size_t i, std::size_t j, cplx v) {
    const long d = long(j) - long(i);
    if (d < -hb_ || d > hb_) throw std::out_of_range("BandedMatrix::set outside band");
    diagonal(int(d))[i] = v;
}

void BandedMatrix::add(std::size_t i, std::size_t j, cplx v) {
    const long d = long(j) - long(i);
    if (d < -hb_ || d > hb_) throw std::out_of_range("BandedMatrix::add outside band");
    diagonal(int(d))[i] += v;
}

void BandedMatrix::apply(const cplx* x, cplx* y, std::size_t ncols, std::size_t ld) const {
    for (std::size_t c = 0; c < ncols; ++c) {
        const cplx* xc = x + c * ld;
        cplx* yc = y + c * ld;
        std::fill(yc, yc + dim_, cplx(0.0));
        for (int d = -hb_; d <= hb_; ++d) {
            const cplx* dg = diagonal(d);
            const std::size_t lo = std::size_t(std::max(0, -d));
            const std::size_t hi = dim_ - std::size_t(std::max(0, d));
            const cplx* xs = xc + d;
            for (std::size_t i = lo; i < hi; ++i) yc[i] += dg[i] * xs[i];
        }
    }
}

Matrix BandedMatrix::dense() const {
    Matrix m(dim_, dim_);
    for (int d = -hb_; d <= hb_; ++d) {
        const cplx* dg = diagonal(d);
        const std::size_t lo = std::size_t(std::max(0, -d));
        const std::size_t hi = dim_ - std::size_t(std::max(0, d));
        for (std::size_t i = lo; i < hi; ++i) m(i, i + d) = dg[i];
    }
    return m;
}

double BandedMatrix::hermiticity_defect() const {
    double m = 0.0;
    for (int d = 0; d <= hb_; ++d) {
        const cplx* up = diagonal(d);
        const cplx* lo = diagonal(-d);
        const std::size_t n = dim_ - std::size_t(d);
        for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::abs(up[i] - std::conj(lo[i + d])));
    }
    return m;
}

EigenSystem hermitian_eigen(const Matrix& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("hermitian_eigen: matrix not square");
    const int n = int(a.rows());
    EigenSystem es;
    es.values.assign(std::size_t(n), 0.0);
    es.vectors = a;
    if (n == 0) return es;

    int info = 0;
    int lwork = -1;
    cplx wkopt;
    std::vector<double> rwork(std::size_t(std::max(1, 3 * n - 2)));
    zheev_("V", "L", &n, es.vectors.data(), &n, es.values.data(), &wkopt, &lwork, rwork.data(), &info);
    lwork = int(wkopt.real());
    std::vector<cplx> work(std::size_t(std::max(lwork, 1)));
    zheev_("V", "L", &n, es.vectors.data(), &n, es.values.data(), work.data(), &lwork, rwork.data(), &info);
    if (info != 0) throw std::runtime_error("zheev failed with info=" + std::to_string(info));
    return es;
}

namespace {

// Index of the first component with magnitude above tol * max|v|.
std::size_t leading_component(const cplx* v, std::size_t n, double tol) {
    double vmax = 0.0;
    for (std::size_t i = 0; i < n; ++i) vmax = std::max(vmax, std::abs(v[i]));
    for (std::size_t i = 0; i < n; ++i)
        if (std::abs(v[i]) > tol * vmax) return i;
    return 0;
}

} // namespace

void canonicalize_eigenvectors(EigenSystem& es, double tie_tol) {
    const std::size_t n = es.vectors.rows();
    const std::size_t m = es.vectors.cols();
    for (std::size_t j = 0; j < m; ++j) {
        cplx* v = es.vectors.col(j);
        const std::size_t lead = leading_component(v, n, tie_tol);
        const double mag = std::abs(v[lead]);
        if (mag > 0.0) {
            const cplx phase = std::conj(v[lead]) / mag;
            for (std::size_t i = 0; i < n; ++i) v[i] *= phase;
            v[lead] = cplx(v[lead].real(), 0.0);  // clear rounding residue
        }
    }
    // Order exact ties by descending magnitude of the leading component.
    std::size_t j = 0;
    while (j + 1 < m) {
        std::size_t k = j + 1;
        while (k < m && es.values[k] == es.values[j]) ++k;
        if (k - j > 1) {
            std::vector<std::size_t> idx(k - j);
            std::iota(idx.begin(), idx.end(), j);
            std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
                const std::size_t la = leading_component(es.vectors.col(a), n, tie_tol);
                const std::size_t lb = leading_component(es.vectors.col(b), n, tie_tol);
                return std::abs(es.vectors.col(a)[la]) > std::abs(es.vectors.col(b)[lb]);
            });
            Matrix tmp(n, k - j);
            for (std::size_t c = 0; c < idx.size(); ++c)
                std::copy(es.vectors.col(idx[c]), es.vectors.col(idx[c]) + n, tmp.col(c));
            for (std::size_t c = 0; c < idx.size(); ++c)
                std::copy(tmp.col(c), tmp.col(c) + n, es.vectors.col(j + c));
        }
        j = k;
    }
}

} // namespace pzw
