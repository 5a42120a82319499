#include "rgg1d/cluster_laws.hpp"

#include "rgg1d/series.hpp"

#include <cmath>

namespace rgg1d {

namespace {

// s e^{(λ+s)ε} + λ, scaled by e^{-(λ+s)ε} so large s does not overflow.
double scaled_denominator(const ModelParams& p, double s) {
    return s + p.lambda * std::exp(-(p.lambda + s) * p.epsilon);
}

void require_nonnegative(double s) {
    if (!(s >= 0.0)) throw DomainError("Laplace argument s must be >= 0, got " + std::to_string(s));
}

}  // namespace

double laplace_B(const ModelParams& params, double s) {
    params.validate();
    require_nonnegative(s);
    const double scale = std::exp(-(params.lambda + s) * params.epsilon);
    return (params.lambda + s) * scale / scaled_denominator(params, s);
}

double laplace_deltaA(const ModelParams& params, double s) {
    params.validate();
    require_nonnegative(s);
    const double scale = std::exp(-(params.lambda + s) * params.epsilon);
    return params.lambda * scale / scaled_denominator(params, s);
}

double laplace_U(const ModelParams& params, unsigned n, double s) {
    if (n == 0) return 1.0;
    return std::pow(laplace_deltaA(params, s), static_cast<double>(n));
}

MixedLaw law_B(const ModelParams& params) {
    params.validate();
    const double eps = params.epsilon;
    const double tail = std::exp(-params.lambda * eps);
    const double a = params.cluster_weight();

    MixedLaw law;
    law.atom_location = eps;
    law.atom_mass = tail;
    law.support_lower = eps;
    law.density = [params, eps, tail, a](double x) {
        if (!(x > eps)) return 0.0;
        const double y = x - eps;
        const double value =
            a * count_prob(params, y, 0).value + tail * count_prob_derivative(params, y, 0);
        return std::max(0.0, value);
    };
    // atom + ∫_ε^x f_B = e^{-λε} p_0(x-ε) + λe^{-λε} ∫_0^{x-ε} p_0, using p_0(0+) = 1.
    law.cdf = [params, eps, tail, a](double x) {
        if (x < eps) return 0.0;
        const double y = x - eps;
        return clamp_probability(tail * count_prob(params, y, 0).value +
                                 a * count_prob_integral(params, y, 0));
    };
    return law;
}

double density_U(const ModelParams& params, unsigned n, double x) {
    params.validate();
    if (n == 0) throw DomainError("density_U requires n >= 1 (U_0 = 0 is degenerate)");
    if (!(x > params.epsilon)) return 0.0;
    const double p = count_prob(params, x - params.epsilon, n - 1).value;
    return std::max(0.0, params.cluster_weight() * p);
}

double cdf_U(const ModelParams& params, unsigned n, double x) {
    params.validate();
    if (n == 0) return x >= 0.0 ? 1.0 : 0.0;
    if (!(x > params.epsilon)) return 0.0;
    return clamp_probability(params.cluster_weight() *
                             count_prob_integral(params, x - params.epsilon, n - 1));
}

double mean_B(const ModelParams& params) {
    params.validate();
    return std::expm1(params.lambda * params.epsilon) / params.lambda;
}

}  // namespace rgg1d
