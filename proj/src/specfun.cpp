#include "mumimo/specfun.hpp"

#include "mumimo/errors.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace mumimo::specfun {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxIter = 10000;

// Both branches return exp(x) * E_n(x); the caller removes the scaling when needed.
// Continued fraction (modified Lentz) above the crossover, power series below.
constexpr double kSeriesCrossover = 1.0;

SpecFunResult scaled_exp_int(int n, double x)
{
    if (n < 1) throw DomainError("exp_int: order must be >= 1");
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("exp_int: argument must be positive and finite");

    const int nm1 = n - 1;
    if (x > kSeriesCrossover) {
        const double tiny = std::numeric_limits<double>::min() / kEps;
        double b = x + n;
        double c = 1.0 / tiny;
        double d = 1.0 / b;
        double h = d;
        for (int i = 1; i <= kMaxIter; ++i) {
            const double a = -static_cast<double>(i) * (nm1 + i);
            b += 2.0;
            d = 1.0 / (a * d + b);
            c = b + a / c;
            const double del = c * d;
            h *= del;
            if (std::abs(del - 1.0) <= kEps) return {h, 4.0 * kEps * h * std::sqrt(static_cast<double>(i))};
        }
        throw NumericalError("exp_int: continued fraction did not converge");
    }

    double ans = nm1 != 0 ? 1.0 / nm1 : -std::log(x) - kEulerGamma;
    double abs_sum = std::abs(ans);
    double fact = 1.0;
    for (int i = 1; i <= kMaxIter; ++i) {
        fact *= -x / i;
        double del;
        if (i != nm1) {
            del = -fact / (i - nm1);
        } else {
            double psi = -kEulerGamma;
            for (int ii = 1; ii <= nm1; ++ii) psi += 1.0 / ii;
            del = fact * (-std::log(x) + psi);
        }
        ans += del;
        abs_sum += std::abs(del);
        if (std::abs(del) < std::abs(ans) * kEps) {
            const double scale = std::exp(x);
            return {ans * scale, (std::abs(del) + 2.0 * kEps * abs_sum) * scale};
        }
    }
    throw NumericalError("exp_int: series did not converge");
}

double stirling_tail(double x)
{
    const double r = 1.0 / x;
    const double r2 = r * r;
    return r * (1.0 / 12.0 + r2 * (-1.0 / 360.0 + r2 * (1.0 / 1260.0 + r2 * (-1.0 / 1680.0
           + r2 * (1.0 / 1188.0 + r2 * (-691.0 / 360360.0 + r2 * (1.0 / 156.0)))))));
}

constexpr double kAsymptoticStart = 10.0;

// log Gamma(a) - log Gamma(a + b) for a >= kAsymptoticStart, without cancellation.
double log_gamma_ratio(double a, double b)
{
    return -b * std::log(a) - (a + b - 0.5) * std::log1p(b / a) + b
           + stirling_tail(a) - stirling_tail(a + b);
}

} // namespace

SpecFunResult exp_int_detailed(int n, double x)
{
    SpecFunResult r = scaled_exp_int(n, x);
    const double scale = std::exp(-x);
    return {r.value * scale, r.abs_error_estimate * scale};
}

double exp_int(int n, double x) { return exp_int_detailed(n, x).value; }

double exp_int_scaled(int n, double x) { return scaled_exp_int(n, x).value; }

double log_gamma(double x)
{
    if (!(x > 0.0)) throw DomainError("log_gamma: argument must be positive");
    if (std::isinf(x)) return x;
    double shift = 0.0;
    if (x < kAsymptoticStart) {
        double prod = 1.0;
        while (x < kAsymptoticStart) {
            prod *= x;
            x += 1.0;
        }
        shift = std::log(prod);
    }
    return (x - 0.5) * std::log(x) - x + 0.5 * std::log(2.0 * std::numbers::pi) + stirling_tail(x) - shift;
}

double log_beta(double a, double b)
{
    if (!(a > 0.0) || !(b > 0.0)) throw DomainError("log_beta: arguments must be positive");
    const double big = std::max(a, b);
    const double small = std::min(a, b);
    if (big >= kAsymptoticStart) return log_gamma(small) + log_gamma_ratio(big, small);
    return log_gamma(a) + log_gamma(b) - log_gamma(a + b);
}

double beta_complete(double a, double b) { return std::exp(log_beta(a, b)); }

double digamma(double x)
{
    if (!(x > 0.0)) throw DomainError("digamma: argument must be positive");
    double acc = 0.0;
    while (x < kAsymptoticStart) {
        acc -= 1.0 / x;
        x += 1.0;
    }
    const double r2 = 1.0 / (x * x);
    const double series = r2 * (1.0 / 12.0 - r2 * (1.0 / 120.0 - r2 * (1.0 / 252.0
                          - r2 * (1.0 / 240.0 - r2 * (1.0 / 132.0 - r2 * (691.0 / 32760.0))))));
    return acc + std::log(x) - 0.5 / x - series;
}

double q_tail(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double bessel_j0(double x) { return std::cyl_bessel_j(0.0, std::abs(x)); }

SpecFunResult evaluate(const std::string& name, const std::vector<double>& args)
{
    auto need = [&](std::size_t k) {
        if (args.size() != k)
            throw DomainError(name + ": expected " + std::to_string(k) + " argument(s)");
    };
    auto rel = [](double v) { return SpecFunResult{v, 8.0 * kEps * std::abs(v)}; };

    if (name == "expint" || name == "expint_scaled") {
        need(2);
        const double order = args[0];
        if (order != std::floor(order)) throw DomainError(name + ": order must be an integer");
        if (name == "expint") return exp_int_detailed(static_cast<int>(order), args[1]);
        return scaled_exp_int(static_cast<int>(order), args[1]);
    }
    if (name == "beta") { need(2); return rel(beta_complete(args[0], args[1])); }
    if (name == "lnbeta") { need(2); return rel(log_beta(args[0], args[1])); }
    if (name == "lngamma") { need(1); return rel(log_gamma(args[0])); }
    if (name == "digamma") { need(1); return rel(digamma(args[0])); }
    if (name == "qtail") { need(1); return rel(q_tail(args[0])); }
    if (name == "j0") { need(1); return {bessel_j0(args[0]), 1e-15}; }
    throw DomainError("unknown special function: " + name);
}

} // namespace mumimo::specfun
