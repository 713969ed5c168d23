#include <doctest.h>

#include <random>

#include "pzw/linalg.hpp"
#include "pzw/numerics.hpp"

using namespace pzw;

namespace {

Matrix random_hermitian(std::size_t n, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Matrix a(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        a(j, j) = u(rng);
        for (std::size_t i = 0; i < j; ++i) {
            const cplx v(u(rng), u(rng));
            a(i, j) = v;
            a(j, i) = std::conj(v);
        }
    }
    return a;
}

} // namespace

TEST_CASE("hermitian_eigen solves a 2x2 closed form") {
    // [[0, 0.3], [0.3, 1.248]]: eigenvalues (tr +- sqrt(tr^2 - 4 det)) / 2.
    Matrix a(2, 2);
    a(0, 0) = 0.0;
    a(0, 1) = 0.3;
    a(1, 0) = 0.3;
    a(1, 1) = 1.248;
    const auto es = hermitian_eigen(a);
    const double tr = 1.248, det = -0.09;
    const double disc = std::sqrt(tr * tr - 4.0 * det);
    CHECK(es.values[0] == doctest::Approx((tr - disc) / 2.0).epsilon(1e-12));
    CHECK(es.values[1] == doctest::Approx((tr + disc) / 2.0).epsilon(1e-12));
}

TEST_CASE("hermitian_eigen residuals and orthonormality on random matrices") {
    for (unsigned seed : {1u, 2u, 3u}) {
        const std::size_t n = 24;
        const Matrix a = random_hermitian(n, seed);
        auto es = hermitian_eigen(a);
        for (std::size_t j = 1; j < n; ++j) CHECK(es.values[j] >= es.values[j - 1]);

        // residual ||A v - lambda v||
        for (std::size_t j = 0; j < n; ++j) {
            const cplx* v = es.vectors.col(j);
            double resid = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                cplx s = 0.0;
                for (std::size_t k = 0; k < n; ++k) s += a(i, k) * v[k];
                resid = std::max(resid, std::abs(s - es.values[j] * v[i]));
            }
            CHECK(resid < 1e-12);
        }
        const Matrix g = adjoint_multiply(es.vectors, es.vectors);
        CHECK(max_abs_diff(g, Matrix::identity(n)) < 1e-12);
    }
}

TEST_CASE("canonicalize_eigenvectors fixes phases deterministically") {
    Matrix a = random_hermitian(8, 7);
    auto e1 = hermitian_eigen(a);
    auto e2 = e1;
    // Scramble phases of the second copy, canonicalize both.
    for (std::size_t j = 0; j < 8; ++j) {
        const cplx ph = std::polar(1.0, 0.37 * double(j + 1));
        for (std::size_t i = 0; i < 8; ++i) e2.vectors(i, j) *= ph;
    }
    canonicalize_eigenvectors(e1);
    canonicalize_eigenvectors(e2);
    CHECK(max_abs_diff(e1.vectors, e2.vectors) < 1e-12);
}

TEST_CASE("banded matrix matches dense apply") {
    const std::size_t n = 17;
    BandedMatrix b(n, 3);
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        b.set(i, i, u(rng));
        for (std::size_t j = i + 1; j < std::min(n, i + 4); ++j) {
            const cplx v(u(rng), u(rng));
            b.set(i, j, v);
            b.set(j, i, std::conj(v));
        }
    }
    CHECK(b.hermiticity_defect() < 1e-15);

    Matrix x(n, 2);
    for (std::size_t j = 0; j < 2; ++j)
        for (std::size_t i = 0; i < n; ++i) x(i, j) = cplx(u(rng), u(rng));
    Matrix y(n, 2);
    b.apply(x.data(), y.data(), 2, n);
    const Matrix yd = multiply(b.dense(), x);
    CHECK(max_abs_diff(y, yd) < 1e-13);
}

TEST_CASE("finite-difference weights reproduce standard stencils") {
    const auto d1 = fd_weights(1, 2, 1.0);
    CHECK(d1[0] == doctest::Approx(1.0 / 12).epsilon(1e-13));
    CHECK(d1[1] == doctest::Approx(-2.0 / 3).epsilon(1e-13));
    CHECK(d1[2] == doctest::Approx(0.0).epsilon(1e-13));
    CHECK(d1[3] == doctest::Approx(2.0 / 3).epsilon(1e-13));
    CHECK(d1[4] == doctest::Approx(-1.0 / 12).epsilon(1e-13));

    const auto d2 = fd_weights(2, 1, 0.5);
    CHECK(d2[0] == doctest::Approx(4.0).epsilon(1e-13));
    CHECK(d2[1] == doctest::Approx(-8.0).epsilon(1e-13));
    CHECK(d2[2] == doctest::Approx(4.0).epsilon(1e-13));
}

TEST_CASE("finite-difference weights differentiate a gaussian accurately") {
    const double s = 2.0;
    auto f = [&](double x) { return std::exp(-x * x / (s * s)); };
    const double h = 0.02;
    for (int d = 0; d <= 4; ++d) {
        const auto w = fd_weights(d, 3, h);
        double acc = 0.0;
        for (int i = -3; i <= 3; ++i) acc += w[std::size_t(i + 3)] * f(0.7 + double(i) * h);
        // analytic derivatives of exp(-x^2/s^2) at x = 0.7 via Hermite recursion
        const double x = 0.7, a = 1.0 / (s * s);
        std::vector<double> deriv(5);
        // p_0 = 1; p_{k+1} = p_k' - 2 a x p_k  (f^(k) = p_k f)
        std::vector<std::vector<double>> poly{{1.0}};
        for (int k = 0; k < 4; ++k) {
            const auto& p = poly.back();
            std::vector<double> q(p.size() + 1, 0.0);
            for (std::size_t c = 1; c < p.size(); ++c) q[c - 1] += double(c) * p[c];
            for (std::size_t c = 0; c < p.size(); ++c) q[c + 1] -= 2.0 * a * p[c];
            poly.push_back(q);
        }
        double pv = 0.0, xc = 1.0;
        for (double c : poly[std::size_t(d)]) {
            pv += c * xc;
            xc *= x;
        }
        const double exact = pv * f(x);
        CHECK(acc == doctest::Approx(exact).epsilon(d <= 2 ? 1e-8 : 1e-6));
    }
}

TEST_CASE("natural spline is exact at knots and for linear data") {
    const std::size_t n = 9;
    const double h = 0.5, x0 = -1.0;
    std::vector<double> y(n), y2(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = 3.0 * (x0 + h * double(i)) - 2.0;
    natural_spline_coeffs(y.data(), n, 1, h, y2.data());
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(y2[i]) < 1e-12);
    // Exact for degree <= 1 everywhere, knots included.
    for (double xq : {-1.0, -0.75, 0.2, 1.9, 3.0})
        CHECK(spline_eval(y, y2, x0, h, xq) == doctest::Approx(3.0 * xq - 2.0).epsilon(1e-13));
}
