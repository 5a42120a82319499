#include "rgg1d/laplace_check.hpp"

#include "rgg1d/quadrature.hpp"
#include "rgg1d/special_fn.hpp"

#include <cmath>
#include <string>

namespace rgg1d {

void QuadratureSpec::validate() const {
    if (!(abs_tol > 0.0)) throw DomainError("abs_tol must be > 0");
    if (!(upper_cut > 0.0)) throw DomainError("upper_cut must be > 0");
}

LaplaceEstimate numeric_laplace(const std::function<double(double)>& f, double s, const QuadratureSpec& spec) {
    spec.validate();
    if (!(s > 0.0)) throw DomainError("numeric_laplace needs s > 0, got " + std::to_string(s));
    auto integrand = [&](double x) { return std::exp(-s * x) * f(x); };
    const auto q = integrate(integrand, 0.0, spec.upper_cut, spec.abs_tol, spec.breakpoints,
                             spec.max_refinements);
    return {q.value, q.error + spec.f_bound * std::exp(-s * spec.upper_cut) / s};
}

QuadratureSpec lattice_spec(const ModelParams& params, unsigned n, double s) {
    params.validate();
    QuadratureSpec spec;
    spec.upper_cut = (n + 1.0) * params.epsilon + 40.0 / std::min(s, params.lambda);
    spec.breakpoints = lattice_breakpoints(0.0, spec.upper_cut, params.epsilon);
    return spec;
}

double laplace_pn_closed(const ModelParams& params, unsigned n, double s) {
    params.validate();
    if (!(s > 0.0)) throw DomainError("s must be > 0");
    // numerator and denominator scaled by e^{-(n+1)(λ+s)ε}
    const double lam = params.lambda;
    const double decay = std::exp(-(lam + s) * params.epsilon);
    const double base = lam * decay;
    return std::pow(base, static_cast<double>(n)) / std::pow(s + base, static_cast<double>(n + 1));
}

double laplace_pair_rhs(const ModelParams& params, unsigned n, double s) {
    params.validate();
    if (!(s > 0.0)) throw DomainError("s must be > 0");
    const double c = std::exp(params.epsilon * params.lambda) / params.lambda;
    const double grow = std::exp(params.epsilon * s);
    return c * grow / std::pow(c * s * grow + 1.0, static_cast<double>(n + 1));
}

double laplace_moment_closed(const ModelParams& params, unsigned m, double s) {
    params.validate();
    if (!(s > 0.0)) throw DomainError("s must be > 0");
    if (m == 0) throw DomainError("moment order must be >= 1");
    const double alpha = std::exp(params.epsilon * params.lambda) / params.lambda * s *
                         std::exp(params.epsilon * s);
    return alpha / (s * (alpha + 1.0)) * polylog_neg(m, 1.0 / (alpha + 1.0));
}

}  // namespace rgg1d
