#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace mumimo::kernels {

// N complex vectors of dimension `dim` stored as separate real/imaginary planes:
// component i of vector n lives at re[i * stride + n]. The stride is padded to a
// multiple of four so wide kernels never read past a row.
class SoaVectors {
public:
    SoaVectors() = default;
    SoaVectors(std::size_t dim, std::size_t count);

    void resize(std::size_t dim, std::size_t count);
    void set(std::size_t n, std::span<const std::complex<double>> v);
    std::complex<double> get(std::size_t n, std::size_t i) const { return {re_[i * stride_ + n], im_[i * stride_ + n]}; }

    std::size_t dim() const { return dim_; }
    std::size_t count() const { return count_; }
    std::size_t stride() const { return stride_; }
    const double* re() const { return re_.data(); }
    const double* im() const { return im_.data(); }
    double* re() { return re_.data(); }
    double* im() { return im_.data(); }

private:
    std::size_t dim_ = 0;
    std::size_t count_ = 0;
    std::size_t stride_ = 0;
    std::vector<double> re_;
    std::vector<double> im_;
};

struct BestMatch {
    std::size_t index = 0;
    double value = 0.0;
};

enum class Isa { Scalar, Avx2 };

// out[n] = |x^H y_n|^2 for every vector in the block.
void abs2_inner_products(std::span<const std::complex<double>> x, const SoaVectors& block, std::span<double> out);

// Index maximizing |x^H y_n|^2; ties resolve to the lowest index.
BestMatch best_match(std::span<const std::complex<double>> x, const SoaVectors& block);

Isa active_isa();
const char* isa_name(Isa isa);

namespace scalar {
void abs2_inner_products(std::span<const std::complex<double>> x, const SoaVectors& block, std::span<double> out);
BestMatch best_match(std::span<const std::complex<double>> x, const SoaVectors& block);
} // namespace scalar

namespace avx2 {
bool available();
void abs2_inner_products(std::span<const std::complex<double>> x, const SoaVectors& block, std::span<double> out);
BestMatch best_match(std::span<const std::complex<double>> x, const SoaVectors& block);
} // namespace avx2

} // namespace mumimo::kernels
