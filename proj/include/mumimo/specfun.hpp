#pragma once

#include <string>
#include <vector>

namespace mumimo::specfun {

struct SpecFunResult {
    double value = 0.0;
    double abs_error_estimate = 0.0;
};

inline constexpr double kEulerGamma = 0.57721566490153286061;

// Generalized exponential integral E_n(x) = int_1^inf exp(-x t) / t^n dt, n >= 1, x > 0.
double exp_int(int n, double x);
SpecFunResult exp_int_detailed(int n, double x);

// exp(x) * E_n(x), finite for arbitrarily large x.
double exp_int_scaled(int n, double x);

double log_gamma(double x);   // x > 0, no global state
double log_beta(double a, double b);
double beta_complete(double a, double b);
double digamma(double x);     // x > 0

// Gaussian tail probability Q(x) = P(N(0,1) > x).
double q_tail(double x);

double bessel_j0(double x);

// Named dispatch used by the command line tool.
SpecFunResult evaluate(const std::string& name, const std::vector<double>& args);

} // namespace mumimo::specfun
