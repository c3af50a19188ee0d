#include "mumimo/channel.hpp"

#include "mumimo/errors.hpp"

#include <algorithm>
#include <cmath>

namespace mumimo {

CMatrix sample_channel(int m, int k, Rng& rng)
{
    if (m < 1 || k < 1) throw DomainError("sample_channel: dimensions must be positive");
    CMatrix h(m, k);
    for (cplx& z : h.data()) z = rng.complex_normal();
    return h;
}

std::vector<cplx> random_unit_vector(int m, Rng& rng)
{
    std::vector<cplx> v(m);
    double n2 = 0.0;
    do {
        for (cplx& z : v) z = rng.complex_normal();
        n2 = norm_sq(v);
    } while (!(n2 > 0.0));
    const double inv = 1.0 / std::sqrt(n2);
    for (cplx& z : v) z *= inv;
    return v;
}

std::vector<cplx> random_orthogonal_unit_vector(std::span<const cplx> u, Rng& rng)
{
    const std::size_t m = u.size();
    if (m < 2) throw DomainError("random_orthogonal_unit_vector: need M >= 2");
    std::vector<cplx> w(m);
    for (;;) {
        for (cplx& z : w) z = rng.complex_normal();
        const cplx proj = dot_h(u, w);
        for (std::size_t i = 0; i < m; ++i) w[i] -= proj * u[i];
        const double n2 = norm_sq(w);
        if (n2 > 1e-20) {
            const double inv = 1.0 / std::sqrt(n2);
            for (cplx& z : w) z *= inv;
            return w;
        }
    }
}

TrainingOutcome common_training(std::span<const cplx> h, double beta1, double snr, Rng& rng)
{
    if (!(beta1 >= 1.0)) throw DomainError("common_training: beta1 must be >= 1");
    if (!(snr > 0.0)) throw DomainError("common_training: snr must be positive");
    TrainingOutcome out;
    if (std::isinf(beta1)) {
        out.estimate.assign(h.begin(), h.end());
        out.raw_observation = out.estimate;
        out.error_variance = 0.0;
        out.noiseless = true;
        return out;
    }
    const double g = beta1 * snr;
    const double amp = std::sqrt(g);
    const double scale = amp / (1.0 + g);
    out.raw_observation.resize(h.size());
    out.estimate.resize(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) {
        out.raw_observation[i] = amp * h[i] + rng.complex_normal();
        out.estimate[i] = scale * out.raw_observation[i];
    }
    out.error_variance = 1.0 / (1.0 + g);
    return out;
}

TrainingOutcome dedicated_training(cplx a_kk, double beta2, double snr, Rng& rng)
{
    if (!(beta2 > 0.0)) throw DomainError("dedicated_training: beta2 must be positive");
    if (!(snr > 0.0)) throw DomainError("dedicated_training: snr must be positive");
    TrainingOutcome out;
    if (std::isinf(beta2)) {
        out.estimate = {a_kk};
        out.raw_observation = {a_kk};
        out.noiseless = true;
        return out;
    }
    const double g = beta2 * snr;
    const double amp = std::sqrt(g);
    const cplx r = amp * a_kk + rng.complex_normal();
    out.raw_observation = {r};
    out.estimate = {amp / (1.0 + g) * r};
    out.error_variance = 1.0 / (1.0 + g);
    return out;
}

CMatrix zf_beamformers(const CMatrix& h_hat)
{
    const std::size_t m = h_hat.rows();
    const std::size_t k = h_hat.cols();
    if (k != m) throw DomainError("zf_beamformers: expected a square M x M channel estimate");
    CMatrix v(m, m);
    if (m == 1) {
        if (!(std::abs(h_hat(0, 0)) > 0.0)) throw RankDeficiencyError("zf_beamformers: zero channel");
        v(0, 0) = 1.0;
        return v;
    }
    double max_norm = 0.0;
    for (std::size_t j = 0; j < m; ++j) max_norm = std::max(max_norm, norm_sq(h_hat.col(j)));
    for (std::size_t j = 0; j < m; ++j)
        if (!(norm_sq(h_hat.col(j)) > 1e-24 * max_norm))
            throw RankDeficiencyError("zf_beamformers: channel estimate has a vanishing column");
    CMatrix others(m, m - 1);
    for (std::size_t target = 0; target < m; ++target) {
        for (std::size_t j = 0, c = 0; j < m; ++j) {
            if (j == target) continue;
            std::copy(h_hat.col(j).begin(), h_hat.col(j).end(), others.col(c).begin());
            ++c;
        }
        std::vector<cplx> q = orthogonal_complement_vector(others);
        normalize_phase(q);
        std::copy(q.begin(), q.end(), v.col(target).begin());
    }
    return v;
}

CMatrix coupling_coefficients(const CMatrix& h, const CMatrix& v)
{
    if (h.rows() != v.rows()) throw DomainError("coupling_coefficients: dimension mismatch");
    return adjoint_times(h, v);
}

} // namespace mumimo
