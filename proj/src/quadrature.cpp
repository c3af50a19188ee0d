#include "mumimo/quadrature.hpp"

#include "mumimo/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>

namespace mumimo::quad {

GaussLegendre::GaussLegendre(int order)
{
    if (order < 1) throw DomainError("GaussLegendre: order must be >= 1");
    nodes_.resize(order);
    weights_.resize(order);
    const int n = order;
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 1; j <= n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
            }
            dp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        // Recompute the derivative at the converged node.
        double p0 = 1.0, p1 = 0.0;
        for (int j = 1; j <= n; ++j) {
            const double p2 = p1;
            p1 = p0;
            p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
        }
        dp = n * (z * p0 - p1) / (z * z - 1.0);
        const double w = 2.0 / ((1.0 - z * z) * dp * dp);
        nodes_[i] = -z;
        nodes_[n - 1 - i] = z;
        weights_[i] = w;
        weights_[n - 1 - i] = w;
    }
}

double GaussLegendre::integrate(const std::function<double(double)>& f, double a, double b, int panels) const
{
    const double h = (b - a) / panels;
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * h;
        const double mid = lo + 0.5 * h;
        double s = 0.0;
        for (std::size_t i = 0; i < nodes_.size(); ++i) s += weights_[i] * f(mid + 0.5 * h * nodes_[i]);
        total += 0.5 * h * s;
    }
    return total;
}

QuadResult integrate_refined(const std::function<double(double)>& f, double a, double b,
                             double tol, int order, int max_panels)
{
    const GaussLegendre rule(order);
    double prev = rule.integrate(f, a, b, 1);
    for (int panels = 2; panels <= max_panels; panels *= 2) {
        const double cur = rule.integrate(f, a, b, panels);
        const double err = std::abs(cur - prev);
        if (err <= tol * std::max(1.0, std::abs(cur))) return {cur, err};
        prev = cur;
    }
    throw NumericalError("quadrature did not reach the requested tolerance");
}

namespace {

constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a, b, value, error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

Segment kronrod(const std::function<double(double)>& f, double a, double b)
{
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double gauss = fc * kWg[3];
    double kron = fc * kWgk[7];
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kXgk[j];
        const double fsum = f(c - dx) + f(c + dx);
        kron += kWgk[j] * fsum;
        if (j % 2 == 1) gauss += kWg[j / 2] * fsum;
    }
    return {a, b, kron * h, std::abs((kron - gauss) * h)};
}

} // namespace

QuadResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                              double abs_tol, double rel_tol, int max_intervals)
{
    std::priority_queue<Segment> heap;
    Segment first = kronrod(f, a, b);
    double value = first.value;
    double error = first.error;
    heap.push(first);
    int count = 1;
    while (error > std::max(abs_tol, rel_tol * std::abs(value))) {
        if (count >= max_intervals) throw NumericalError("adaptive quadrature exceeded its interval budget");
        Segment worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        Segment left = kronrod(f, worst.a, mid);
        Segment right = kronrod(f, mid, worst.b);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++count;
    }
    // Re-sum to shed accumulated rounding from the incremental updates.
    double total = 0.0, total_err = 0.0;
    while (!heap.empty()) {
        total += heap.top().value;
        total_err += heap.top().error;
        heap.pop();
    }
    return {total, total_err};
}

double trapezoid(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size() || x.size() < 2) throw DomainError("trapezoid: need matching grids with >= 2 points");
    double s = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) s += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
    return s;
}

} // namespace mumimo::quad
