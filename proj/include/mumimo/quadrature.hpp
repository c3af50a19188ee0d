#pragma once

#include <functional>
#include <span>
#include <vector>

namespace mumimo::quad {

struct QuadResult {
    double value = 0.0;
    double abs_error = 0.0;
};

class GaussLegendre {
public:
    explicit GaussLegendre(int order);

    int order() const { return static_cast<int>(nodes_.size()); }

    // Composite rule over `panels` equal subintervals of [a, b].
    double integrate(const std::function<double(double)>& f, double a, double b, int panels = 1) const;

private:
    std::vector<double> nodes_;
    std::vector<double> weights_;
};

// Composite Gauss-Legendre with panel doubling until two successive levels agree.
// Throws NumericalError when the tolerance is not met within `max_panels`.
QuadResult integrate_refined(const std::function<double(double)>& f, double a, double b,
                             double tol, int order = 20, int max_panels = 4096);

// Adaptive Gauss-Kronrod (7/15) with bisection.
QuadResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                              double abs_tol, double rel_tol = 1e-12, int max_intervals = 20000);

double trapezoid(std::span<const double> x, std::span<const double> y);

} // namespace mumimo::quad
