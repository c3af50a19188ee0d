#include "mumimo/kernels/inner_product.hpp"

#include "mumimo/errors.hpp"

namespace mumimo::kernels {

SoaVectors::SoaVectors(std::size_t dim, std::size_t count) { resize(dim, count); }

void SoaVectors::resize(std::size_t dim, std::size_t count)
{
    dim_ = dim;
    count_ = count;
    stride_ = (count + 3) / 4 * 4;
    re_.assign(dim_ * stride_, 0.0);
    im_.assign(dim_ * stride_, 0.0);
}

void SoaVectors::set(std::size_t n, std::span<const std::complex<double>> v)
{
    for (std::size_t i = 0; i < dim_; ++i) {
        re_[i * stride_ + n] = v[i].real();
        im_[i * stride_ + n] = v[i].imag();
    }
}

namespace scalar {

namespace {

// Operation order is mirrored exactly by the wide kernels so results agree bit for bit.
inline double abs2_one(std::span<const std::complex<double>> x, const SoaVectors& b, std::size_t n)
{
    const std::size_t s = b.stride();
    double acc_re = 0.0, acc_im = 0.0;
    for (std::size_t i = 0; i < b.dim(); ++i) {
        const double xr = x[i].real(), xi = x[i].imag();
        const double yr = b.re()[i * s + n], yi = b.im()[i * s + n];
        acc_re = acc_re + (xr * yr + xi * yi);
        acc_im = acc_im + (xr * yi - xi * yr);
    }
    return acc_re * acc_re + acc_im * acc_im;
}

} // namespace

void abs2_inner_products(std::span<const std::complex<double>> x, const SoaVectors& block, std::span<double> out)
{
    for (std::size_t n = 0; n < block.count(); ++n) out[n] = abs2_one(x, block, n);
}

BestMatch best_match(std::span<const std::complex<double>> x, const SoaVectors& block)
{
    BestMatch best{0, -1.0};
    for (std::size_t n = 0; n < block.count(); ++n) {
        const double v = abs2_one(x, block, n);
        if (v > best.value) best = {n, v};
    }
    return best;
}

} // namespace scalar

namespace {

void check_shapes(std::span<const std::complex<double>> x, const SoaVectors& block)
{
    if (x.size() != block.dim()) throw DomainError("inner product kernel: dimension mismatch");
}

} // namespace

Isa active_isa()
{
    static const Isa isa = avx2::available() ? Isa::Avx2 : Isa::Scalar;
    return isa;
}

const char* isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

void abs2_inner_products(std::span<const std::complex<double>> x, const SoaVectors& block, std::span<double> out)
{
    check_shapes(x, block);
    if (out.size() < block.count()) throw DomainError("inner product kernel: output too small");
    if (active_isa() == Isa::Avx2) return avx2::abs2_inner_products(x, block, out);
    scalar::abs2_inner_products(x, block, out);
}

BestMatch best_match(std::span<const std::complex<double>> x, const SoaVectors& block)
{
    check_shapes(x, block);
    if (block.count() == 0) throw DomainError("best_match: empty block");
    if (active_isa() == Isa::Avx2) return avx2::best_match(x, block);
    return scalar::best_match(x, block);
}

} // namespace mumimo::kernels
