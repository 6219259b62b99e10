#pragma once

// Exact integer Collatz dynamics: the map C, its iterates, orbit
// computation with cycle detection, and a thread-safe orbit cache.

#include <cstdint>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace cshift {

/// Raised when an orbit fails to reach {1,2,4} within its step budget.
/// This is exactly the event a Collatz counterexample (or an enormous
/// orbit) would trigger; it must never be swallowed.
struct budget_exhausted : std::runtime_error {
    explicit budget_exhausted(const std::string& what) : std::runtime_error(what) {}
};

inline constexpr std::uint64_t default_step_budget = 1'000'000;

/// C(n): n/2 for even n, 3n+1 for odd n. Extended to C(0)=0 so the
/// frequency-0 series term stays fixed under the shift operator.
/// Throws std::overflow_error if 3n+1 would exceed 64 bits.
inline std::uint64_t collatz_step(std::uint64_t n) {
    if (n % 2 == 0) return n / 2;
    if (n > (UINT64_MAX - 1) / 3)
        throw std::overflow_error("collatz_step: 3n+1 overflows 64 bits at n=" + std::to_string(n));
    return 3 * n + 1;
}

/// C^k(m) by repeated stepping; C^0(m) = m.
inline std::uint64_t collatz_iter(std::uint64_t m, std::uint64_t k,
                                  std::uint64_t budget = default_step_budget) {
    if (k > budget)
        throw budget_exhausted("collatz_iter: k=" + std::to_string(k) +
                               " exceeds step budget " + std::to_string(budget));
    std::uint64_t v = m;
    for (std::uint64_t i = 0; i < k; ++i) v = collatz_step(v);
    return v;
}

inline bool in_known_cycle(std::uint64_t n) { return n == 1 || n == 2 || n == 4; }

/// A Collatz trajectory from `start` to its first entry into the cycle
/// {1,4,2}, plus the cycle rotated to the entry point. After
/// construction, C^j(start) is an O(1) lookup for any j.
struct OrbitRecord {
    std::uint64_t start = 0;
    std::vector<std::uint64_t> prefix;  // C^0..C^K, prefix[K] in {1,2,4}
    std::uint64_t preperiod_K = 0;      // least j with C^j(start) in {1,2,4}
    std::vector<std::uint64_t> cycle;   // entry-point rotation of (1,4,2); [0] for start=0
    std::uint64_t max_excursion = 0;    // max over prefix
    std::uint64_t steps_computed = 0;

    /// C^j(start) via preperiod + phase arithmetic.
    [[nodiscard]] std::uint64_t iterate(std::uint64_t j) const {
        if (j < preperiod_K) return prefix[static_cast<std::size_t>(j)];
        return cycle[static_cast<std::size_t>((j - preperiod_K) % cycle.size())];
    }
};

/// Computes the orbit of m until it first hits {1,2,4}. Throws
/// budget_exhausted if that does not happen within `budget` steps.
inline OrbitRecord orbit_until_cycle(std::uint64_t m,
                                     std::uint64_t budget = default_step_budget) {
    OrbitRecord rec;
    rec.start = m;
    if (m == 0) {
        rec.prefix = {0};
        rec.cycle = {0};
        return rec;
    }
    std::uint64_t v = m;
    rec.prefix.push_back(v);
    rec.max_excursion = v;
    while (!in_known_cycle(v)) {
        if (rec.steps_computed >= budget)
            throw budget_exhausted("orbit_until_cycle: no cycle found within budget " +
                                   std::to_string(budget) + " for start " + std::to_string(m));
        v = collatz_step(v);
        ++rec.steps_computed;
        rec.prefix.push_back(v);
        if (v > rec.max_excursion) rec.max_excursion = v;
    }
    rec.preperiod_K = rec.prefix.size() - 1;
    rec.cycle = {v, collatz_step(v), collatz_step(collatz_step(v))};
    return rec;
}

/// Equals collatz_iter(record.start, j) for all j; O(1) past the preperiod.
inline std::uint64_t iterate_via_orbit(const OrbitRecord& record, std::uint64_t j) {
    return record.iterate(j);
}

/// Append-only orbit store keyed by start value. Get-or-compute is
/// atomic; safe to call from many threads.
class OrbitCache {
  public:
    explicit OrbitCache(std::uint64_t budget = default_step_budget) : budget_(budget) {}

    const OrbitRecord& get(std::uint64_t m) {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = map_.find(m);
        if (it != map_.end()) return it->second;
        auto [ins, ok] = map_.emplace(m, orbit_until_cycle(m, budget_));
        return ins->second;
    }

    [[nodiscard]] std::size_t size() const {
        std::lock_guard<std::mutex> lock(mu_);
        return map_.size();
    }

    // Persistence: one line per orbit, `start,preperiod_K,max_excursion,prefix...`.
    void save(const std::string& path) const {
        std::lock_guard<std::mutex> lock(mu_);
        std::ofstream out(path);
        if (!out) throw std::runtime_error("OrbitCache::save: cannot open " + path);
        for (const auto& [start, rec] : map_) {
            out << start << ',' << rec.preperiod_K << ',' << rec.max_excursion;
            for (auto v : rec.prefix) out << ',' << v;
            out << '\n';
        }
    }

    /// A missing file is a cold cache, not an error.
    void load(const std::string& path) {
        std::ifstream in(path);
        if (!in) return;
        std::lock_guard<std::mutex> lock(mu_);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            std::istringstream ss(line);
            std::vector<std::uint64_t> fields;
            std::string tok;
            while (std::getline(ss, tok, ',')) fields.push_back(std::stoull(tok));
            if (fields.size() < 4)
                throw std::runtime_error("OrbitCache::load: malformed line in " + path);
            OrbitRecord rec;
            rec.start = fields[0];
            rec.preperiod_K = fields[1];
            rec.max_excursion = fields[2];
            rec.prefix.assign(fields.begin() + 3, fields.end());
            rec.steps_computed = rec.prefix.size() - 1;
            std::uint64_t entry = rec.prefix.back();
            if (rec.start == 0)
                rec.cycle = {0};
            else
                rec.cycle = {entry, collatz_step(entry), collatz_step(collatz_step(entry))};
            map_.emplace(rec.start, std::move(rec));
        }
    }

  private:
    std::uint64_t budget_;
    mutable std::mutex mu_;
    std::unordered_map<std::uint64_t, OrbitRecord> map_;
};

}  // namespace cshift
