#pragma once

// Laws of the cluster geometry: length B of a cluster, the cycle
// ΔA = B + D (cluster plus the exponential gap to the next one), and
// U_n = ΔA_1 + ... + ΔA_n, the distance from the first cluster start to the
// (n+1)-th.

#include "rgg1d/model.hpp"

#include <functional>

namespace rgg1d {

/// E[e^{-sB}] = (λ+s) / (λ + s e^{(λ+s)ε}).
double laplace_B(const ModelParams& params, double s);

/// E[e^{-sΔA}] = λ / (λ + s e^{(λ+s)ε}).
double laplace_deltaA(const ModelParams& params, double s);

/// E[e^{-sU_n}] = laplace_deltaA(s)^n; n = 0 gives 1 (empty sum).
double laplace_U(const ModelParams& params, unsigned n, double s);

/// A law with one point mass plus an absolutely continuous part.
struct MixedLaw {
    double atom_location{0.0};
    double atom_mass{0.0};
    double support_lower{0.0};
    std::function<double(double)> density;  ///< zero below support_lower
    std::function<double(double)> cdf;      ///< right-continuous, includes the atom

    /// Pr(X < x): cdf with the atom removed at its own location.
    [[nodiscard]] double cdf_left(double x) const {
        return x == atom_location ? cdf(x) - atom_mass : cdf(x);
    }
};

/// Law of B. A singleton cluster has length exactly ε, which happens with
/// probability e^{-λε}; the rest is the density
///   f_B(x) = λe^{-ελ} p_0(x-ε) + e^{-ελ} p_0'(x-ε),  x > ε.
MixedLaw law_B(const ModelParams& params);

/// f_{U_n}(x) = λe^{-ελ} p_{n-1}(x-ε) for x > ε, else 0.
double density_U(const ModelParams& params, unsigned n, double x);

/// Pr(U_n <= x) = λe^{-ελ} ∫_0^{x-ε} p_{n-1}.
double cdf_U(const ModelParams& params, unsigned n, double x);

/// E[B] = (e^{λε} - 1)/λ.
double mean_B(const ModelParams& params);

}  // namespace rgg1d
