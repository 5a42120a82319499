#pragma once

// Globally adaptive Gauss-Kronrod (7/15) integration with caller-supplied
// breakpoints. Every integrand in this library is piecewise analytic with
// kinks or jumps on the lattice kε, so callers split there and each panel is
// smooth.

#include "rgg1d/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <span>
#include <string>
#include <vector>

namespace rgg1d {

struct QuadratureResult {
    double value{0.0};
    double error{0.0};  ///< sum of per-panel |K15 - G7|
    unsigned panels{0};
};

namespace detail {

struct Panel {
    double a, b, value, error;
    bool operator<(const Panel& other) const { return error < other.error; }
};

template <class F>
Panel gauss_kronrod_15(F& f, double a, double b) {
    static constexpr double xgk[8] = {
        0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
        0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
        0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
        0.207784955007898467600689403773245, 0.0};
    static constexpr double wgk[8] = {
        0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
        0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
        0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
        0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
    static constexpr double wg[4] = {
        0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
        0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double kronrod = fc * wgk[7];
    double gauss = fc * wg[3];
    for (int k = 0; k < 7; ++k) {
        const double dx = half * xgk[k];
        const double pair = f(center - dx) + f(center + dx);
        kronrod += wgk[k] * pair;
        if (k % 2 == 1) gauss += wg[k / 2] * pair;
    }
    kronrod *= half;
    gauss *= half;
    return {a, b, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace detail

/// ∫_a^b f, bisecting the worst panel until the summed error estimate is below
/// abs_tol. Breakpoints inside (a, b) start as panel boundaries. Throws
/// NumericError (carrying the last estimate) when max_panels is exhausted.
template <class F>
QuadratureResult integrate(F&& f, double a, double b, double abs_tol,
                           std::span<const double> breakpoints = {}, unsigned max_panels = 4000) {
    if (!(b > a)) return {};
    std::vector<double> cuts{a};
    for (double c : breakpoints)
        if (c > a && c < b) cuts.push_back(c);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::priority_queue<detail::Panel> panels;
    double total = 0.0;
    double error = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        auto p = detail::gauss_kronrod_15(f, cuts[k], cuts[k + 1]);
        total += p.value;
        error += p.error;
        panels.push(p);
    }

    // Panels narrower than this are accepted as is; refining them only chases roundoff.
    const double min_width = 64.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(a), std::abs(b));
    std::vector<detail::Panel> frozen;
    while (error > abs_tol && !panels.empty()) {
        if (panels.size() + frozen.size() >= max_panels)
            throw NumericError("quadrature did not reach tolerance " + std::to_string(abs_tol) +
                                   " within " + std::to_string(max_panels) +
                                   " panels (error estimate " + std::to_string(error) + ")",
                               total);
        detail::Panel worst = panels.top();
        panels.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (worst.b - worst.a < min_width) {
            frozen.push_back(worst);
            continue;
        }
        auto left = detail::gauss_kronrod_15(f, worst.a, mid);
        auto right = detail::gauss_kronrod_15(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        panels.push(left);
        panels.push(right);
    }

    // Re-sum to shed drift from the incremental updates.
    QuadratureResult out;
    out.panels = static_cast<unsigned>(panels.size() + frozen.size());
    for (const auto& p : frozen) {
        out.value += p.value;
        out.error += p.error;
    }
    while (!panels.empty()) {
        out.value += panels.top().value;
        out.error += panels.top().error;
        panels.pop();
    }
    return out;
}

/// Lattice points kε strictly inside (a, b), shifted by offset: offset + kε.
inline std::vector<double> lattice_breakpoints(double a, double b, double epsilon, double offset = 0.0) {
    std::vector<double> out;
    const double first = std::ceil((a - offset) / epsilon);
    for (double k = std::max(first, 0.0);; k += 1.0) {
        const double c = offset + k * epsilon;
        if (c >= b) break;
        if (c > a) out.push_back(c);
    }
    return out;
}

}  // namespace rgg1d
