// Command-line surface: orbit queries, closed-form adjudication,
// convergence studies, and averaging-algorithm self-checks, with
// CSV/JSON emission for plotting.
//
// Exit codes: 0 success, 1 usage, 2 budget/overflow, 3 criteria failure.

#include <cinttypes>
#include <complex>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cshift/cesaro.hpp"
#include "cshift/collatz.hpp"
#include "cshift/series.hpp"
#include "cshift/shift_operator.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_usage = 1;
constexpr int exit_budget = 2;
constexpr int exit_criteria = 3;

double parse_real(const std::string& s) {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("trailing characters in number: " + s);
    return v;
}

// Single-token complex literals: "0.5", "0.5i", "-0.4+0.2i", "-i".
cshift::cplx parse_complex(const std::string& tok) {
    try {
        if (tok.empty()) throw std::invalid_argument("empty");
        if (tok.back() != 'i') return {parse_real(tok), 0.0};
        std::string body = tok.substr(0, tok.size() - 1);
        // split real part from the imaginary coefficient at the last
        // sign that is not a leading sign or part of an exponent
        std::size_t split = std::string::npos;
        for (std::size_t p = body.size(); p-- > 1;) {
            if ((body[p] == '+' || body[p] == '-') && body[p - 1] != 'e' && body[p - 1] != 'E') {
                split = p;
                break;
            }
        }
        std::string re_str, im_str;
        if (split == std::string::npos) {
            im_str = body;
        } else {
            re_str = body.substr(0, split);
            im_str = body.substr(split);
        }
        double re = re_str.empty() ? 0.0 : parse_real(re_str);
        double im = im_str.empty() || im_str == "+" ? 1.0
                    : im_str == "-"                 ? -1.0
                                                    : parse_real(im_str);
        return {re, im};
    } catch (const std::exception&) {
        throw std::invalid_argument("cannot parse complex number: " + tok);
    }
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_report(const cshift::CesaroReport& rep, const std::string& format,
                  std::ostream& out) {
    if (format == "csv") {
        out << "n,sup_distance,R,G,c_re,c_im\n";
        for (const auto& row : rep.rows)
            out << row.n << ',' << fmt_double(row.sup_distance) << ',' << rep.truncation << ','
                << rep.grid_points << ',' << fmt_double(rep.c.real()) << ','
                << fmt_double(rep.c.imag()) << '\n';
    } else {
        out << "{\n  \"config\": {\"c_re\": " << fmt_double(rep.c.real())
            << ", \"c_im\": " << fmt_double(rep.c.imag()) << ", \"G\": " << rep.grid_points
            << ", \"R\": " << rep.truncation << "},\n  \"rows\": [\n";
        for (std::size_t i = 0; i < rep.rows.size(); ++i)
            out << "    {\"n\": " << rep.rows[i].n
                << ", \"sup_distance\": " << fmt_double(rep.rows[i].sup_distance) << "}"
                << (i + 1 < rep.rows.size() ? ",\n" : "\n");
        out << "  ]\n}\n";
    }
}

int run_orbit(std::uint64_t m, std::uint64_t budget) {
    try {
        auto rec = cshift::orbit_until_cycle(m, budget);
        std::cout << "start: " << rec.start << "\nprefix: ";
        for (std::size_t i = 0; i < rec.prefix.size(); ++i)
            std::cout << (i ? "," : "") << rec.prefix[i];
        std::cout << "\ncycle: ";
        for (std::size_t i = 0; i < rec.cycle.size(); ++i)
            std::cout << (i ? "," : "") << rec.cycle[i];
        std::cout << "\npreperiod: " << rec.preperiod_K
                  << "\nmax_excursion: " << rec.max_excursion << "\n";
        return exit_ok;
    } catch (const cshift::budget_exhausted& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_budget;
    }
}

int run_verify_closed_forms(const std::vector<std::string>& c_tokens, std::size_t grid_points,
                            double max_dev_allowed) {
    std::vector<cshift::cplx> cs;
    for (const auto& tok : c_tokens) {
        cshift::cplx c = parse_complex(tok);
        if (std::abs(c) >= 1.0) {
            std::cerr << "usage error: |c| must be < 1, got " << tok << "\n";
            return exit_usage;
        }
        cs.push_back(c);
    }
    cshift::GridSpec grid{grid_points};
    bool all_pass = true;
    std::cout << "Adjudication: each printed rational form is compared against the\n"
                 "functional-equation value MINUS its constant term 1.\n";
    for (auto c : cs) {
        double dev1 = 0.0, dev2 = 0.0;
        for (std::size_t k = 0; k < grid.points; ++k) {
            double th = grid.theta(k);
            dev1 = std::max(dev1, std::abs(cshift::closed_form_L1(c, th) -
                                           (cshift::iterate_functional(c, 1, th) - 1.0)));
            dev2 = std::max(dev2, std::abs(cshift::closed_form_L2(c, th) -
                                           (cshift::iterate_functional(c, 2, th) - 1.0)));
        }
        bool ok = dev1 <= max_dev_allowed && dev2 <= max_dev_allowed;
        all_pass = all_pass && ok;
        std::cout << "c=" << fmt_double(c.real()) << (c.imag() < 0 ? "" : "+")
                  << fmt_double(c.imag()) << "i  max|L1_closed-(L1-1)|=" << fmt_double(dev1)
                  << "  max|L2_closed-(L2-1)|=" << fmt_double(dev2) << "  "
                  << (ok ? "PASS" : "FAIL") << "\n";
    }
    return all_pass ? exit_ok : exit_criteria;
}

int run_converge(const std::string& c_token, std::size_t grid_points,
                 std::vector<std::uint64_t> schedule, double eps_tail, double eps_round,
                 std::uint64_t budget, const std::string& cache_path,
                 const std::string& format, const std::string& out_path, double max_final) {
    cshift::cplx c = parse_complex(c_token);
    if (std::abs(c) >= 1.0) {
        std::cerr << "usage error: |c| must be < 1\n";
        return exit_usage;
    }
    cshift::OrbitCache cache(budget);
    if (!cache_path.empty()) cache.load(cache_path);
    cshift::CesaroReport rep;
    try {
        rep = cshift::convergence_report(cache, c, cshift::GridSpec{grid_points}, schedule,
                                         {eps_tail + eps_round, eps_tail, eps_round});
    } catch (const cshift::budget_exhausted& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_budget;
    } catch (const std::overflow_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_budget;
    }
    if (!cache_path.empty()) cache.save(cache_path);

    if (out_path.empty() || out_path == "-") {
        write_report(rep, format, std::cout);
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) {
            std::cerr << "usage error: cannot open " << out_path << "\n";
            return exit_usage;
        }
        write_report(rep, format, out);
    }

    // Pass criteria: distances do not grow along the schedule, the final
    // distance is below the threshold, and n*sup stays within a factor-2
    // band (the O(1/n) decay signature). All-zero columns pass trivially.
    bool ok = true;
    double band_lo = 0.0, band_hi = 0.0;
    bool band_set = false;
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        double d = rep.rows[i].sup_distance;
        if (i + 1 == rep.rows.size() && d >= max_final) ok = false;
        if (i > 0 && d > rep.rows[i - 1].sup_distance + eps_round) ok = false;
        double scaled = static_cast<double>(rep.rows[i].n) * d;
        if (scaled > eps_round) {
            if (!band_set) {
                band_lo = band_hi = scaled;
                band_set = true;
            } else {
                band_lo = std::min(band_lo, scaled);
                band_hi = std::max(band_hi, scaled);
            }
        }
    }
    if (band_set && band_hi > 2.0 * band_lo) ok = false;
    return ok ? exit_ok : exit_criteria;
}

int run_lemma_check(std::uint64_t count, std::uint64_t seed, double tol) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::uint64_t> len_pre(0, 19), len_cyc(1, 20);
    std::uniform_int_distribution<std::uint64_t> n_dist(1, 10'000);
    std::uniform_real_distribution<double> coord(-1.0, 1.0);
    for (std::uint64_t trial = 0; trial < count; ++trial) {
        cshift::PeriodicSpec spec;
        std::uint64_t np = len_pre(rng), nc = len_cyc(rng);
        for (std::uint64_t i = 0; i < np; ++i) spec.preamble.push_back({coord(rng), coord(rng)});
        for (std::uint64_t i = 0; i < nc; ++i) spec.cycle.push_back({coord(rng), coord(rng)});
        std::uint64_t n = n_dist(rng);
        cshift::cplx fast = cshift::periodic_running_mean(spec, n);
        cshift::cplx brute = 0.0;
        for (std::uint64_t i = 1; i <= n; ++i) {
            brute += i <= np ? spec.preamble[static_cast<std::size_t>(i - 1)]
                             : spec.cycle[static_cast<std::size_t>((i - 1 - np) % nc)];
        }
        brute /= static_cast<double>(n);
        if (std::abs(fast - brute) > tol) {
            std::cerr << "MISMATCH at trial " << trial << ": K=" << np + 1 << " P=" << nc
                      << " n=" << n << " |fast-brute|=" << fmt_double(std::abs(fast - brute))
                      << "\n";
            return exit_criteria;
        }
    }
    std::cout << "lemma-check: " << count << " specs, all within " << fmt_double(tol)
              << " of brute force. PASS\n";
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Shift-operator Cesaro mean verification for Collatz orbits"};
    app.require_subcommand(1);

    std::uint64_t orbit_m = 1;
    std::uint64_t budget = cshift::default_step_budget;
    auto* orbit = app.add_subcommand("orbit", "Compute one Collatz orbit to the cycle");
    orbit->add_option("m", orbit_m, "start value (>= 1)")->required()->check(CLI::PositiveNumber);
    orbit->add_option("--budget", budget, "max steps before giving up");

    std::vector<std::string> c_tokens{"0.3", "0.5i", "-0.4+0.2i"};
    std::size_t grid_points = 64;
    double max_dev = 1e-9;
    auto* verify = app.add_subcommand("verify-closed-forms",
                                      "Check the printed rational forms against the "
                                      "functional-equation path");
    verify->add_option("--c", c_tokens, "complex parameters, e.g. -0.4+0.2i");
    verify->add_option("--grid", grid_points, "theta grid size");
    verify->add_option("--max-dev", max_dev, "allowed max deviation");

    std::string conv_c = "0.5";
    std::vector<std::uint64_t> schedule{100, 1000, 10000};
    double eps_tail = 1e-10, eps_round = 1e-12, max_final = 0.01;
    std::string cache_path, format = "csv", out_path;
    auto* conv = app.add_subcommand("converge", "Measure Cesaro-mean convergence to the target");
    conv->add_option("--c", conv_c, "complex parameter");
    conv->add_option("--grid", grid_points, "theta grid size");
    conv->add_option("--schedule", schedule, "ascending n values")->delimiter(',');
    conv->add_option("--eps-tail", eps_tail, "series tail budget");
    conv->add_option("--eps-round", eps_round, "rounding budget");
    conv->add_option("--budget", budget, "orbit step budget");
    conv->add_option("--cache", cache_path, "orbit cache file (loaded if present, saved after)");
    conv->add_option("--format", format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    conv->add_option("--out", out_path, "output file ('-' or empty for stdout)");
    conv->add_option("--max-final", max_final, "final sup-distance threshold");

    std::uint64_t lemma_count = 1000, rng_seed = 20231011;
    double lemma_tol = 1e-12;
    auto* lemma = app.add_subcommand("lemma-check",
                                     "Averaging algorithm vs. brute force on random specs");
    lemma->add_option("--count", lemma_count, "number of random specs")
        ->check(CLI::PositiveNumber);
    lemma->add_option("--rng-seed", rng_seed, "generator seed");
    lemma->add_option("--tol", lemma_tol, "allowed deviation");

    CLI11_PARSE(app, argc, argv);

    try {
        if (orbit->parsed()) return run_orbit(orbit_m, budget);
        if (verify->parsed()) return run_verify_closed_forms(c_tokens, grid_points, max_dev);
        if (conv->parsed())
            return run_converge(conv_c, grid_points, schedule, eps_tail, eps_round, budget,
                                cache_path, format, out_path, max_final);
        if (lemma->parsed()) return run_lemma_check(lemma_count, rng_seed, lemma_tol);
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::overflow_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_budget;
    } catch (const cshift::budget_exhausted& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_budget;
    }
    return exit_usage;
}
