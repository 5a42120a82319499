#pragma once

// Counting laws on [0, L]: complete clusters β0(L), incomplete clusters
// β0'(L), clusters on a circle of circumference L, and full coverage.

#include "rgg1d/model.hpp"
#include "rgg1d/series.hpp"

#include <vector>

namespace rgg1d {

/// Finite pmf over n = 0..support_max.
struct DistributionTable {
    unsigned support_max{0};
    std::vector<double> probs;        ///< clamped to [0, 1]
    double tail_mass{0.0};            ///< 1 - sum(probs)
    double max_cancellation{0.0};     ///< worst per-entry cancellation estimate

    [[nodiscard]] double operator[](unsigned n) const { return n < probs.size() ? probs[n] : 0.0; }
    [[nodiscard]] bool precision_warning() const { return max_cancellation > kCancellationTolerance; }
};

/// Pr(β0(L) = n), zero for n > ⌊L/ε⌋. Clamped to [0, 1]; the cancellation
/// estimate of the raw alternating sum is carried alongside.
SeriesValue pmf_beta0(const IntervalModel& model, unsigned n);

/// Pr(β0(L) = n) for n = 0..⌊L/ε⌋. Throws NormalizationError when
/// |1 - sum| > 1e-9, which signals the evaluation left its stable regime
/// (roughly λL e^{-λε} <= 30 and ⌊L/ε⌋ <= 60).
DistributionTable pmf_beta0_table(const IntervalModel& model);

/// E[β0(L)^m] = sum_{k=1}^{m} S(m,k) ((L - kε) λe^{-λε})^k 1{L > kε}, 1 <= m <= 64.
double moment_beta0(const IntervalModel& model, unsigned m);

/// (L - ε) λe^{-λε} 1{L > ε}.
double mean_beta0(const IntervalModel& model);

/// (L-ε)a + ε(3ε-2L)a² for L > 2ε (a = λe^{-λε}); second moment minus
/// squared mean otherwise.
double var_beta0(const IntervalModel& model);

struct MeanMaximum {
    double lambda_star{0.0};
    double value{0.0};
};

/// Intensity maximizing E[β0(L)] at fixed (ε, L): λ* = 1/ε, value (L/ε - 1)/e.
/// Throws DomainError when L <= ε (the mean is identically zero).
MeanMaximum mean_argmax(double epsilon, double length);

/// All λ > 0 where d/dλ Var(β0(L)) = 0, sorted. 1/ε is always one of them;
/// for L > 2ε two more solve λe^{-λε} = (L-ε) / (2ε(2L-3ε)) when that
/// level is below the peak 1/(eε).
std::vector<double> var_critical_points(double epsilon, double length);

/// Pr([0, L] covered) = ∫_0^ε λe^{-λx} Pr(B ≥ L - x) dx by adaptive quadrature.
/// This is the authoritative coverage value.
double coverage_prob(const IntervalModel& model);

struct CoverageCheck {
    double value{0.0};      ///< R-combination
    double reference{0.0};  ///< coverage_prob
    bool mismatch{false};   ///< |value - reference| > 1e-6
};

/// Experimental: evaluates R_{0,1}(L) - e^{-λε}R_{0,1}(L-ε) - e^{-λε}R_{1,0}(L)
/// + e^{-2λε}R_{1,0}(L-ε) term for term, with
///   R_{m,n}(x) = sum_{i=m}^{⌊x/ε⌋-1} e^{-λε(i+n)} sum_{j=0}^{i+n} (λ[(1-i)ε - x])^j / j!,
/// and flags disagreement with the quadrature value.
CoverageCheck coverage_prob_closed(const IntervalModel& model);

/// G(k) of the incomplete-cluster law, k >= -1:
///   G(-1) = e^{-λL},
///   G(k)  = (-1)^k (e^{-kλε} sum_{j<=k} [λ(kε-L)]^j/j! - e^{-λL}) 1{L > kε}.
/// Evaluated through the equivalent positive series
///   e^{-λL} z^{k+1}/(k+1)! sum_m (k+1)/(k+1+m) z^m/m!,  z = λ(L - kε),
/// which has no cancellation.
double incomplete_G(const IntervalModel& model, int k);

/// G(k) evaluated literally from the partial exponential sum (reference route).
double incomplete_G_direct(const IntervalModel& model, int k);

/// Pr(β0'(L) = n) = sum_{i=n}^{⌊L/ε⌋+1} (-1)^{i+n} C(i,n) (G(i-1) + G(i)).
SeriesValue pmf_incomplete(const IntervalModel& model, unsigned n);

/// n = 0..⌊L/ε⌋+1; same normalization contract as pmf_beta0_table.
DistributionTable pmf_incomplete_table(const IntervalModel& model);

/// Pr(χ(L) = n) on a circle of circumference L with N ~ Poisson(λL) uniform
/// points; χ is the number of circular gaps longer than ε. With
/// w_0 = 1 and w_j = (L a / j!) ((L - jε) a)^{j-1} for L > jε,
///   Pr(χ = n) = sum_{j>=n} (-1)^{j-n} C(j,n) w_j.
SeriesValue pmf_circle(const IntervalModel& model, unsigned n);

/// n = 0..⌊L/ε⌋.
DistributionTable pmf_circle_table(const IntervalModel& model);

/// Experimental: an alternative circle formula
///   e^{-λL} 1{n=0} + (1-e^{-λL}) (a/n!) sum_i (-1)^i/i! ([L-(n+i)ε]a)^{n+i-1} (L + (n+i)(1/λ - ε)).
/// It weights the Palm law of χ (a point pinned at the origin) by Pr(N > 0),
/// so it disagrees with pmf_circle. Kept for comparison reports.
SeriesValue pmf_circle_alternative(const IntervalModel& model, unsigned n);

}  // namespace rgg1d
