#pragma once

// Cesaro means M_n(theta), per-start running averages g_{n,m}(theta),
// the exact eventually-periodic averaging algorithm, the predicted
// limit function, and convergence measurement against it.

#include <cstdint>
#include <vector>

#include "cshift/collatz.hpp"
#include "cshift/series.hpp"

namespace cshift {

/// An eventually periodic complex sequence a_1, a_2, ...: the terms
/// before repetition starts (possibly none) followed by the cycle
/// repeated forever. With K = preamble length + 1, a_{n+P} = a_n for
/// all n >= K.
struct PeriodicSpec {
    std::vector<cplx> preamble;
    std::vector<cplx> cycle;  // non-empty
};

/// Limit of the running mean: the average of the cycle terms.
inline cplx periodic_mean_limit(const PeriodicSpec& spec) {
    cplx v = 0.0;
    for (const auto& a : spec.cycle) v += a;
    return v / static_cast<double>(spec.cycle.size());
}

/// (1/n) Sum_{i=1}^{n} a_i in O(K + P): preamble sum W, whole-cycle
/// count times cycle sum V, plus the partial-cycle remainder.
inline cplx periodic_running_mean(const PeriodicSpec& spec, std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("periodic_running_mean: n must be >= 1");
    const auto pre_len = static_cast<std::uint64_t>(spec.preamble.size());
    cplx total = 0.0;
    if (n <= pre_len) {
        for (std::uint64_t i = 0; i < n; ++i) total += spec.preamble[i];
        return total / static_cast<double>(n);
    }
    for (const auto& a : spec.preamble) total += a;
    cplx cycle_sum = 0.0;
    for (const auto& a : spec.cycle) cycle_sum += a;
    const auto period = static_cast<std::uint64_t>(spec.cycle.size());
    const std::uint64_t in_cycle = n - pre_len;
    total += static_cast<double>(in_cycle / period) * cycle_sum;
    for (std::uint64_t i = 0; i < in_cycle % period; ++i) total += spec.cycle[i];
    return total / static_cast<double>(n);
}

/// The sequence {e^{i C^j(m) theta}}_{j>=1} as a PeriodicSpec, read off
/// an orbit record.
inline PeriodicSpec orbit_phase_spec(const OrbitRecord& record, double theta) {
    PeriodicSpec spec;
    const std::uint64_t first_cyclic = record.preperiod_K > 0 ? record.preperiod_K : 1;
    spec.preamble.reserve(static_cast<std::size_t>(first_cyclic - 1));
    for (std::uint64_t j = 1; j < first_cyclic; ++j)
        spec.preamble.push_back(std::polar(1.0, static_cast<double>(record.iterate(j)) * theta));
    for (std::uint64_t j = first_cyclic; j < first_cyclic + 3; ++j)
        spec.cycle.push_back(std::polar(1.0, static_cast<double>(record.iterate(j)) * theta));
    return spec;
}

/// g_{n,m}(theta) = (1/n) Sum_{j=1}^{n} e^{i C^j(m) theta}, computed
/// through the periodic decomposition rather than an n-step loop.
inline cplx g_term(OrbitCache& cache, std::uint64_t m, std::uint64_t n, double theta) {
    if (m == 0 || n == 0) throw std::invalid_argument("g_term: m and n must be >= 1");
    return periodic_running_mean(orbit_phase_spec(cache.get(m), theta), n);
}

/// The predicted per-start limit: (e^{i theta} + e^{2 i theta} + e^{4 i theta}) / 3.
inline cplx g_limit(double theta) {
    return (std::polar(1.0, theta) + std::polar(1.0, 2.0 * theta) +
            std::polar(1.0, 4.0 * theta)) /
           3.0;
}

/// M_n(theta) truncated at order R: the m=0 term contributes exactly 1
/// (frequency 0 is fixed), m >= 1 terms are c^m g_{n,m}(theta).
inline cplx cesaro_mean(OrbitCache& cache, cplx c, std::uint64_t n, double theta,
                        std::uint64_t trunc_order) {
    require_unit_disk(c, "cesaro_mean");
    if (n == 0) throw std::invalid_argument("cesaro_mean: n must be >= 1");
    cplx acc = 1.0;
    cplx p = 1.0;
    for (std::uint64_t m = 1; m <= trunc_order; ++m) {
        p *= c;
        acc += p * g_term(cache, m, n, theta);
    }
    return acc;
}

/// The value M_n must approach if every orbit reaches 1:
///   1 + (e^{i theta} + e^{2 i theta} + e^{4 i theta}) / 3 * c / (1-c).
inline cplx target_limit(cplx c, double theta) {
    require_unit_disk(c, "target_limit");
    return 1.0 + g_limit(theta) * c / (1.0 - c);
}

struct CesaroReport {
    struct Row {
        std::uint64_t n;
        double sup_distance;
    };
    cplx c;
    std::size_t grid_points = 0;
    std::uint64_t truncation = 0;
    std::vector<Row> rows;
};

/// For each n in the schedule, sup over the grid of
/// |M_n(theta) - target_limit(theta)| with R fixed by the tail budget.
inline CesaroReport convergence_report(OrbitCache& cache, cplx c, const GridSpec& grid,
                                       const std::vector<std::uint64_t>& n_schedule,
                                       const ToleranceBudget& budget) {
    require_unit_disk(c, "convergence_report");
    CesaroReport rep;
    rep.c = c;
    rep.grid_points = grid.points;
    rep.truncation = choose_truncation(c, budget.eps_tail);
    for (std::uint64_t n : n_schedule) {
        double sup = 0.0;
        for (std::size_t k = 0; k < grid.points; ++k) {
            double th = grid.theta(k);
            double d = std::abs(cesaro_mean(cache, c, n, th, rep.truncation) -
                                target_limit(c, th));
            if (d > sup) sup = d;
        }
        rep.rows.push_back({n, sup});
    }
    return rep;
}

}  // namespace cshift
