#pragma once

// Truncated series Sum_r a_r e^{i w_r theta}: geometric seeding, pointwise
// evaluation, and the tail-bound / truncation-order machinery.

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace cshift {

using cplx = std::complex<double>;

/// Truncated series Sum_{r=0}^{R} coeffs[r] * e^{i freqs[r] theta}.
/// One term per coefficient index r, even when two indices share a
/// frequency; the shift operator acts on the index-to-frequency map,
/// and merging terms would destroy further iterability.
struct FrequencySeries {
    std::vector<cplx> coeffs;
    std::vector<std::uint64_t> freqs;
    std::uint64_t applied_steps = 0;  // how many shift applications produced this state
};

struct GeometricSeed {
    cplx c;
    std::size_t order;  // truncation order R >= 1
};

/// G equally spaced sample points theta_k = 2 pi k / G in [0, 2 pi).
struct GridSpec {
    std::size_t points = 64;

    [[nodiscard]] double theta(std::size_t k) const {
        return 2.0 * 3.14159265358979323846 * static_cast<double>(k) /
               static_cast<double>(points);
    }
};

/// How the total error budget is split between series tail, averaging
/// error, and rounding. Invariant: eps_tail + eps_round <= eps_total.
struct ToleranceBudget {
    double eps_total;
    double eps_tail;
    double eps_round;
};

inline void require_unit_disk(cplx c, const char* who) {
    if (!(std::abs(c) < 1.0))
        throw std::invalid_argument(std::string(who) + ": |c| must be < 1");
}

/// coeffs[r] = c^r, freqs[r] = r, for r = 0..R.
inline FrequencySeries seed_geometric(const GeometricSeed& seed) {
    require_unit_disk(seed.c, "seed_geometric");
    if (seed.order < 1) throw std::invalid_argument("seed_geometric: order must be >= 1");
    FrequencySeries s;
    s.coeffs.reserve(seed.order + 1);
    s.freqs.reserve(seed.order + 1);
    cplx p = 1.0;
    for (std::size_t r = 0; r <= seed.order; ++r) {
        s.coeffs.push_back(p);
        s.freqs.push_back(static_cast<std::uint64_t>(r));
        p *= seed.c;
    }
    return s;
}

/// Sum_r coeffs[r] e^{i freqs[r] theta}, summed in ascending r so runs
/// are bit-reproducible.
inline cplx evaluate(const FrequencySeries& s, double theta) {
    cplx acc = 0.0;
    for (std::size_t r = 0; r < s.coeffs.size(); ++r)
        acc += s.coeffs[r] * std::polar(1.0, static_cast<double>(s.freqs[r]) * theta);
    return acc;
}

/// |c|^{R+1} / (1-|c|): bounds the discarded mass Sum_{r>R} |c|^r for
/// any frequency assignment.
inline double tail_bound(cplx c, std::uint64_t trunc_order) {
    require_unit_disk(c, "tail_bound");
    double a = std::abs(c);
    if (a == 0.0) return 0.0;
    return std::pow(a, static_cast<double>(trunc_order) + 1.0) / (1.0 - a);
}

/// Smallest positive integer m0 with
///   m0 > [ln(eps/(2K)) + ln(1 - rho*z_abs)] / [ln rho + ln z_abs] - 1,
/// which guarantees K (rho z_abs)^{m0+1} / (1 - rho z_abs) < eps/2.
inline std::uint64_t truncation_order(double eps, double bound_K, double rho, double z_abs) {
    if (eps <= 0 || bound_K <= 0 || rho <= 0 || z_abs <= 0)
        throw std::invalid_argument("truncation_order: eps, K, rho, z_abs must be positive");
    if (rho * z_abs >= 1.0)
        throw std::invalid_argument("truncation_order: rho*z_abs must be < 1");
    double threshold = (std::log(eps / (2.0 * bound_K)) + std::log(1.0 - rho * z_abs)) /
                           (std::log(rho) + std::log(z_abs)) -
                       1.0;
    auto m0 = static_cast<std::int64_t>(std::floor(threshold)) + 1;
    if (m0 < 1) m0 = 1;  // the lemma asks for a positive integer
    return static_cast<std::uint64_t>(m0);
}

/// Smallest R >= 1 with tail_bound(c, R) <= eps_tail.
inline std::uint64_t choose_truncation(cplx c, double eps_tail) {
    require_unit_disk(c, "choose_truncation");
    if (eps_tail <= 0) throw std::invalid_argument("choose_truncation: eps_tail must be > 0");
    double a = std::abs(c);
    if (a == 0.0) return 1;
    double term = a * a / (1.0 - a);  // tail_bound at R=1
    std::uint64_t r = 1;
    while (term > eps_tail) {
        term *= a;
        ++r;
    }
    return r;
}

}  // namespace cshift
