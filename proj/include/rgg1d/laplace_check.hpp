#pragma once

// Forward Laplace transforms computed numerically, used to check the closed
// transforms of p_n and of the moment curves. No inversion happens anywhere.

#include "rgg1d/model.hpp"

#include <functional>
#include <vector>

namespace rgg1d {

struct QuadratureSpec {
    double abs_tol{1e-10};
    double upper_cut{50.0};         ///< integrate on [0, upper_cut]
    unsigned max_refinements{4000}; ///< panel budget
    double f_bound{1.0};            ///< sup |f| on [upper_cut, ∞), for the tail bound
    std::vector<double> breakpoints{};

    void validate() const;
};

struct LaplaceEstimate {
    double value{0.0};
    double error_bound{0.0};  ///< quadrature error + f_bound e^{-s cut}/s
};

/// ∫_0^{upper_cut} e^{-sx} f(x) dx. Throws NumericError when the panel budget runs out.
LaplaceEstimate numeric_laplace(const std::function<double(double)>& f, double s, const QuadratureSpec& spec);

/// Default spec for transforming p_n or a moment curve: upper_cut = (n+1)ε + 40/min(s, λ)
/// and breakpoints on every lattice point kε below it.
QuadratureSpec lattice_spec(const ModelParams& params, unsigned n, double s);

/// L{p_n}(s) = λ^n e^{(λ+s)ε} / (s e^{(λ+s)ε} + λ)^{n+1}.
double laplace_pn_closed(const ModelParams& params, unsigned n, double s);

/// Right side of the Laplace pair with c = e^{ελ}/λ:  c e^{εs} / (c s e^{εs} + 1)^{n+1}.
double laplace_pair_rhs(const ModelParams& params, unsigned n, double s);

/// L{E[β0(·)^m]}(s) = α/(s(α+1)) Li_{-m}(1/(α+1)),  α = e^{ελ} s e^{εs} / λ.
double laplace_moment_closed(const ModelParams& params, unsigned m, double s);

}  // namespace rgg1d
