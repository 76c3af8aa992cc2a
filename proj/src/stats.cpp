#include "streamsketch/stats.hpp"

#include <cmath>
#include <limits>

#include "streamsketch/errors.hpp"

namespace streamsketch {

double mean(const std::vector<double>& values) {
    if (values.empty()) throw ParameterError("mean of an empty sample");
    double acc = 0.0;
    for (double v : values) acc += v;
    return acc / static_cast<double>(values.size());
}

double sample_stddev(const std::vector<double>& values) {
    if (values.size() < 2) {
        throw ParameterError("sample stddev needs at least two values");
    }
    double m = mean(values);
    double acc = 0.0;
    for (double v : values) acc += (v - m) * (v - m);
    return std::sqrt(acc / static_cast<double>(values.size() - 1));
}

namespace {

// Series expansion of P(a, x); converges quickly for x < a + 1.
double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double term = sum;
    for (int i = 0; i < 10000; ++i) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * 1e-15) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Lentz continued fraction for Q(a, x); converges for x >= a + 1.
double gamma_q_cf(double a, double x) {
    const double tiny = std::numeric_limits<double>::min() / 1e-30;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10000; ++i) {
        double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < 1e-15) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double regularized_gamma_p(double a, double x) {
    if (!(a > 0.0) || !(x >= 0.0)) {
        throw DomainError("regularized gamma needs a > 0 and x >= 0");
    }
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return gamma_p_series(a, x);
    return 1.0 - gamma_q_cf(a, x);
}

double regularized_gamma_q(double a, double x) {
    if (!(a > 0.0) || !(x >= 0.0)) {
        throw DomainError("regularized gamma needs a > 0 and x >= 0");
    }
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_cf(a, x);
}

double chi_squared_pvalue(double stat, std::size_t dof) {
    if (dof == 0) throw ParameterError("chi-squared needs dof >= 1");
    if (!(stat >= 0.0)) throw DomainError("chi-squared statistic must be >= 0");
    return regularized_gamma_q(static_cast<double>(dof) / 2.0, stat / 2.0);
}

double poisson_pmf(std::uint64_t k, double mean) {
    if (!(mean >= 0.0)) throw DomainError("poisson mean must be >= 0");
    if (mean == 0.0) return k == 0 ? 1.0 : 0.0;
    double kd = static_cast<double>(k);
    return std::exp(kd * std::log(mean) - mean - std::lgamma(kd + 1.0));
}

double poisson_upper_tail(std::uint64_t m, double mean) {
    if (!(mean >= 0.0)) throw DomainError("poisson mean must be >= 0");
    if (m == 0) return 1.0;
    if (mean == 0.0) return 0.0;
    return regularized_gamma_p(static_cast<double>(m), mean);
}

}  // namespace streamsketch
