#pragma once

// Three independent evaluation paths for the shift operator L1 and its
// iterates: frequency reindexing on a truncated series, the functional
// equation recursion, and the printed closed-form rational functions.

#include <cstdint>
#include <stdexcept>
#include <utility>

#include "cshift/collatz.hpp"
#include "cshift/series.hpp"

namespace cshift {

inline constexpr std::uint64_t default_depth_cap = 12;
inline constexpr double pi = 3.14159265358979323846;

/// Raised when a functional-equation recursion would exceed its depth
/// cap (each level quadruples the leaf count).
struct depth_cap_exceeded : std::runtime_error {
    explicit depth_cap_exceeded(const std::string& what) : std::runtime_error(what) {}
};

enum class ClosedFormId { F0, L1_CLOSED, L2_CLOSED };

/// L1 on the coefficient representation: coefficients stay, every
/// frequency is pushed through the Collatz map.
inline FrequencySeries apply_shift(FrequencySeries s) {
    for (auto& w : s.freqs) w = collatz_step(w);
    ++s.applied_steps;
    return s;
}

/// The geometric seed in closed form: 1 / (1 - c e^{it}).
inline cplx f0_closed(cplx c, double t) {
    require_unit_disk(c, "f0_closed");
    return 1.0 / (1.0 - c * std::polar(1.0, t));
}

/// One application of the functional equation:
///   (1/2) [ g(t/2) + g(t/2 + pi) + e^{it} (g(3t) - g(3t + pi)) ].
template <typename Fn>
cplx functional_step(Fn&& g, double t) {
    return 0.5 * (g(t / 2.0) + g(t / 2.0 + pi) +
                  std::polar(1.0, t) * (g(3.0 * t) - g(3.0 * t + pi)));
}

namespace detail {
inline cplx functional_recurse(cplx c, std::uint64_t depth, double t) {
    if (depth == 0) return f0_closed(c, t);
    return functional_step([&](double u) { return functional_recurse(c, depth - 1, u); }, t);
}
}  // namespace detail

/// L^n(f0) at t by expanding the functional equation down to closed-form
/// leaves (4^n of them); equals the untruncated series up to rounding.
inline cplx iterate_functional(cplx c, std::uint64_t n, double t,
                               std::uint64_t depth_cap = default_depth_cap) {
    require_unit_disk(c, "iterate_functional");
    if (n > depth_cap)
        throw depth_cap_exceeded("iterate_functional: n=" + std::to_string(n) +
                                 " exceeds depth cap " + std::to_string(depth_cap));
    return detail::functional_recurse(c, n, t);
}

/// The printed rational form for L1(f), evaluated literally. Note it
/// vanishes at c=0 while the series expansion starts at 1; tests
/// adjudicate the off-by-constant relationship rather than assume it.
inline cplx closed_form_L1(cplx c, double t) {
    require_unit_disk(c, "closed_form_L1");
    auto e = [&](double k) { return std::polar(1.0, k * t); };
    cplx num = c * e(1) * (-(c * c * c) * e(6) - c * c * e(4) + c + e(3));
    cplx den = c * c * c * c * e(7) - c * c * e(1) * (1.0 + e(5)) + 1.0;
    return num / den;
}

/// The printed rational form for L^2(f), evaluated literally.
inline cplx closed_form_L2(cplx c, double t) {
    require_unit_disk(c, "closed_form_L2");
    auto e = [&](double k) { return std::polar(1.0, k * t); };
    cplx c2 = c * c, c3 = c2 * c, c4 = c3 * c, c5 = c4 * c, c6 = c5 * c, c7 = c6 * c,
         c8 = c7 * c;
    cplx num = c * e(1) *
               (-c7 * e(6) - c6 * e(5) - c5 * e(4) - c4 * e(2) + c3 + c2 * e(4) + c * e(3) + e(1));
    cplx den = c8 * e(7) - c4 * e(1) * (1.0 + e(5)) + 1.0;
    return num / den;
}

inline cplx closed_form(ClosedFormId id, cplx c, double t) {
    switch (id) {
        case ClosedFormId::F0: return f0_closed(c, t);
        case ClosedFormId::L1_CLOSED: return closed_form_L1(c, t);
        case ClosedFormId::L2_CLOSED: return closed_form_L2(c, t);
    }
    throw std::logic_error("closed_form: bad id");
}

struct CrossCheckReport {
    double max_abs_diff = 0.0;
    std::uint64_t truncation = 0;
    double threshold = 0.0;
    bool pass = false;
};

/// Max over the grid of |coefficient path - functional path| for L^n,
/// with R chosen from the tail budget. PASS iff the max stays within
/// tail + rounding.
inline CrossCheckReport cross_check(cplx c, std::uint64_t n, const GridSpec& grid,
                                    const ToleranceBudget& budget,
                                    std::uint64_t depth_cap = default_depth_cap) {
    CrossCheckReport rep;
    rep.truncation = choose_truncation(c, budget.eps_tail);
    FrequencySeries s = seed_geometric({c, static_cast<std::size_t>(rep.truncation)});
    for (std::uint64_t i = 0; i < n; ++i) s = apply_shift(std::move(s));
    for (std::size_t k = 0; k < grid.points; ++k) {
        double th = grid.theta(k);
        double d = std::abs(evaluate(s, th) - iterate_functional(c, n, th, depth_cap));
        if (d > rep.max_abs_diff) rep.max_abs_diff = d;
    }
    rep.threshold = budget.eps_tail + budget.eps_round;
    rep.pass = rep.max_abs_diff <= rep.threshold;
    return rep;
}

}  // namespace cshift
