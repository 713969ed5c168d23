#ifndef PZW_LINALG_HPP
#define PZW_LINALG_HPP

#include <array>
#include <complex>
#include <cstddef>
#include <vector>

namespace pzw {

using cplx = std::complex<double>;

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
};

// Dense complex matrix, column-major (LAPACK layout).
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    static Matrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    cplx& operator()(std::size_t i, std::size_t j) { return data_[i + j * rows_]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i + j * rows_]; }

    cplx* data() { return data_.data(); }
    const cplx* data() const { return data_.data(); }

    cplx* col(std::size_t j) { return data_.data() + j * rows_; }
    const cplx* col(std::size_t j) const { return data_.data() + j * rows_; }

    void fill(cplx v) { std::fill(data_.begin(), data_.end(), v); }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<cplx> data_;
};

Matrix multiply(const Matrix& a, const Matrix& b);          // a * b
Matrix adjoint(const Matrix& a);                            // a^dagger
Matrix adjoint_multiply(const Matrix& a, const Matrix& b);  // a^dagger * b

double max_abs_diff(const Matrix& a, const Matrix& b);
double hermiticity_defect(const Matrix& a);  // max |a - a^dagger|

// Hermitian banded matrix stored by diagonals: diag(d)[i] = A(i, i+d) for
// d in [-half_bandwidth, +half_bandwidth].  Only the structural band is
// stored; entries outside it are zero.
class BandedMatrix {
public:
    BandedMatrix() = default;
    BandedMatrix(std::size_t dim, int half_bandwidth);

    std::size_t dim() const { return dim_; }
    int half_bandwidth() const { return hb_; }

    cplx at(std::size_t i, std::size_t j) const;
    void set(std::size_t i, std::size_t j, cplx v);
    void add(std::size_t i, std::size_t j, cplx v);

    // y_col = A x_col for ncols column vectors with leading dimension ld.
    void apply(const cplx* x, cplx* y, std::size_t ncols, std::size_t ld) const;

    Matrix dense() const;
    double hermiticity_defect() const;

    // Pointer to diagonal d; valid row range is [max(0,-d), dim - max(0,d)).
    const cplx* diagonal(int d) const { return diags_.data() + std::size_t(d + hb_) * dim_; }
    cplx* diagonal(int d) { return diags_.data() + std::size_t(d + hb_) * dim_; }

private:
    std::size_t dim_ = 0;
    int hb_ = 0;
    std::vector<cplx> diags_;
};

struct EigenSystem {
    std::vector<double> values;  // ascending
    Matrix vectors;              // column j is the eigenvector of values[j]
};

// Full eigendecomposition of a Hermitian matrix (LAPACK zheev).
EigenSystem hermitian_eigen(const Matrix& a);

// Deterministic eigenvector convention: each column's first component with
// magnitude above tol * max|v| is rotated to be real positive; exact
// eigenvalue ties are ordered by descending magnitude of that component.
void canonicalize_eigenvectors(EigenSystem& es, double tie_tol = 1e-12);

} // namespace pzw

#endif
