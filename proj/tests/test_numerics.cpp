#include "mumimo/errors.hpp"
#include "mumimo/kernels/inner_product.hpp"
#include "mumimo/linalg.hpp"
#include "mumimo/quadrature.hpp"
#include "mumimo/rng.hpp"
#include "mumimo/stats.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace mumimo;

TEST_CASE("Gauss-Legendre integrates polynomials exactly")
{
    quad::GaussLegendre gl(10);
    CHECK(gl.integrate([](double x) { return std::pow(x, 19); }, 0.0, 1.0) == doctest::Approx(1.0 / 20.0).epsilon(1e-14));
    CHECK(gl.integrate([](double x) { return std::cos(x); }, 0.0, std::numbers::pi / 2, 4) ==
          doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("refined and adaptive quadrature")
{
    auto f = [](double x) { return std::log1p(x) * std::exp(-x); };
    const double ref = quad::integrate_refined(f, 0.0, 5.0, 1e-13).value;
    const double ad = quad::integrate_adaptive(f, 0.0, 5.0, 1e-13).value;
    CHECK(ref == doctest::Approx(ad).epsilon(1e-11));
    // log singularity at the end point
    CHECK(quad::integrate_adaptive([](double x) { return std::log(x); }, 0.0, 1.0, 1e-10).value ==
          doctest::Approx(-1.0).epsilon(1e-8));
    std::vector<double> x{0, 1, 2}, y{0, 1, 4};
    CHECK(quad::trapezoid(x, y) == doctest::Approx(3.0));
}

TEST_CASE("orthogonal complement is unit norm and orthogonal")
{
    for (std::uint64_t t = 0; t < 200; ++t) {
        Rng rng(7, t, Stream::Channel);
        CMatrix a(5, 4);
        for (auto& z : a.data()) z = rng.complex_normal();
        auto v = orthogonal_complement_vector(a);
        CHECK(norm_sq(v) == doctest::Approx(1.0).epsilon(1e-13));
        for (std::size_t c = 0; c < 4; ++c) CHECK(std::abs(dot_h(a.col(c), v)) < 1e-12);
    }
    CMatrix collinear(3, 2);
    collinear(0, 0) = 1.0;
    collinear(0, 1) = 1.0;
    CHECK_THROWS_AS(orthogonal_complement_vector(collinear), RankDeficiencyError);
}

TEST_CASE("Cholesky solve and inverse diagonal")
{
    Rng rng(3, 0, Stream::Auxiliary);
    CMatrix b(6, 3);
    for (auto& z : b.data()) z = rng.complex_normal();
    CMatrix g = adjoint_times(b, b);
    for (std::size_t i = 0; i < 3; ++i) g(i, i) += 1.0;
    CMatrix f = g;
    cholesky_inplace(f);
    CMatrix x = CMatrix::identity(3);
    cholesky_solve(f, x);
    CMatrix prod = multiply(g, x);
    for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t c = 0; c < 3; ++c) CHECK(std::abs(prod(r, c) - (r == c ? 1.0 : 0.0)) < 1e-12);
    auto d = cholesky_inverse_diagonal(f);
    for (std::size_t i = 0; i < 3; ++i) CHECK(d[i] == doctest::Approx(x(i, i).real()).epsilon(1e-12));
    CMatrix neg = CMatrix::identity(2);
    neg(1, 1) = -1.0;
    CHECK_THROWS_AS(cholesky_inplace(neg), NumericalError);
}

TEST_CASE("phase normalization")
{
    std::vector<cplx> v{{0.0, 0.0}, {0.0, 2.0}, {1.0, 1.0}};
    normalize_phase(v);
    CHECK(v[1].real() == doctest::Approx(2.0));
    CHECK(v[1].imag() == doctest::Approx(0.0));
    CHECK(std::abs(v[2]) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("random streams are reproducible and independent")
{
    Rng a(1, 5, Stream::Channel), b(1, 5, Stream::Channel), c(1, 5, Stream::Codebook), d(1, 6, Stream::Channel);
    const auto x = a();
    CHECK(x == b());
    CHECK(x != c());
    CHECK(x != d());
    RunningStats re, im, pw;
    Rng g(11, 0, Stream::Auxiliary);
    for (int i = 0; i < 200000; ++i) {
        const cplx z = g.complex_normal();
        re.add(z.real());
        im.add(z.imag());
        pw.add(std::norm(z));
        const double u = g.uniform();
        REQUIRE(u > 0.0);
        REQUIRE(u < 1.0);
    }
    CHECK(std::abs(re.mean()) < 4 * re.std_error());
    CHECK(re.variance() == doctest::Approx(0.5).epsilon(0.02));
    CHECK(pw.mean() == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("running statistics merge equals sequential accumulation")
{
    RunningStats all, left, right;
    for (int i = 0; i < 1000; ++i) {
        const double v = std::sin(i * 0.37) * i;
        all.add(v);
        (i < 400 ? left : right).add(v);
    }
    left.merge(right);
    CHECK(left.count() == all.count());
    CHECK(left.mean() == doctest::Approx(all.mean()).epsilon(1e-12));
    CHECK(left.variance() == doctest::Approx(all.variance()).epsilon(1e-10));
}

TEST_CASE("scalar and AVX2 kernels agree bit for bit")
{
    for (std::size_t dim : {1u, 2u, 4u, 7u}) {
        for (std::size_t count : {1u, 3u, 4u, 5u, 64u, 1023u}) {
            Rng rng(dim, count, Stream::Codebook);
            kernels::SoaVectors block(dim, count);
            std::vector<cplx> v(dim);
            for (std::size_t n = 0; n < count; ++n) {
                for (auto& z : v) z = rng.complex_normal();
                block.set(n, v);
            }
            std::vector<cplx> x(dim);
            for (auto& z : x) z = rng.complex_normal();

            std::vector<double> ref(count), out(count);
            kernels::scalar::abs2_inner_products(x, block, ref);
            for (std::size_t n = 0; n < count; ++n) {
                cplx s{};
                for (std::size_t i = 0; i < dim; ++i) s += std::conj(x[i]) * block.get(n, i);
                CHECK(ref[n] == doctest::Approx(std::norm(s)).epsilon(1e-12));
            }
            const auto best = kernels::scalar::best_match(x, block);
            CHECK(best.value == ref[best.index]);
            for (double r : ref) CHECK(r <= best.value);

            if (kernels::avx2::available()) {
                kernels::avx2::abs2_inner_products(x, block, out);
                for (std::size_t n = 0; n < count; ++n) CHECK(out[n] == ref[n]);
                const auto wide = kernels::avx2::best_match(x, block);
                CHECK(wide.index == best.index);
                CHECK(wide.value == best.value);
            }
            kernels::abs2_inner_products(x, block, out);
            CHECK(out == ref);
        }
    }
}

TEST_CASE("best match ties resolve to the lowest index")
{
    kernels::SoaVectors block(2, 9);
    std::vector<cplx> e0{1.0, 0.0}, e1{0.0, 1.0};
    for (std::size_t n = 0; n < 9; ++n) block.set(n, n == 2 || n == 6 ? e0 : e1);
    std::vector<cplx> x{1.0, 0.0};
    CHECK(kernels::scalar::best_match(x, block).index == 2);
    if (kernels::avx2::available()) CHECK(kernels::avx2::best_match(x, block).index == 2);
    CHECK(kernels::best_match(x, block).index == 2);
}
