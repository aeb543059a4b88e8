// Shipping gate. Each criterion prints exactly one PASS/FAIL line with its
// measured evidence; the exit code is the number of failures. Tolerances and
// time budgets are pinned here, not configurable.

#include "symdyn/coding.hpp"
#include "symdyn/diagram.hpp"
#include "symdyn/ldp.hpp"
#include "symdyn/maps.hpp"
#include "symdyn/spectral.hpp"

#include "oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace symdyn;

namespace {

PiecewiseMonotoneMap full_shift() { return make_mod1(Rational(0), Rational(2)); }

PiecewiseMonotoneMap golden_map() {
    AlgebraicSpec phi;
    phi.minpoly = {Rational(-1), Rational(-1), Rational(1)};
    phi.bracket_lo = Rational(3, 2);
    phi.bracket_hi = Rational(17, 10);
    return make_beta(ParamValue(phi));
}

PiecewiseMonotoneMap m52() { return make_mod1(Rational(1, 10), Rational(5, 2)); }

PiecewiseMonotoneMap cubic_neg_beta() {
    AlgebraicSpec spec;
    spec.minpoly = {Rational(-1), Rational(1), Rational(-2), Rational(1)};
    spec.bracket_lo = Rational(17, 10);
    spec.bracket_hi = Rational(9, 5);
    return make_neg_beta(ParamValue(spec));
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

// ---- criterion bodies ------------------------------------------------------

bool c1_full_shift_exact(std::string& detail) {
    const PiecewiseMonotoneMap m = full_shift();
    const EntropyEstimate e = entropy_estimate(m, 3);
    if (std::abs(e.h - std::log(2.0)) > 1e-12) {
        detail = "entropy " + fmt(e.h) + " off log 2";
        return false;
    }
    const MMEModel model = mme_on_truncation(build_truncation(m, 3));
    long checked = 0;
    for (int n = 1; n <= 12; ++n) {
        const double want = std::ldexp(1.0, -n);
        for (const Word& u : enumerate_words(m, n)) {
            if (project_cylinder_mass(model, u) != want) {
                detail = "cylinder " + word_to_string(u) + " mass not exactly 2^-" +
                         std::to_string(n);
                return false;
            }
            ++checked;
        }
    }
    detail = "h=" + fmt(e.h) + ", " + std::to_string(checked) + " cylinder masses exact";
    return true;
}

bool c2_golden_diagram(std::string& detail) {
    const PiecewiseMonotoneMap m = golden_map();
    const Diagram d = build_truncation(m, 8);
    if (!d.stabilized || d.vertices.size() != 2) {
        detail = "expected a stabilized 2-vertex diagram, got " +
                 std::to_string(d.vertices.size());
        return false;
    }
    const Matrix a = adjacency_matrix(d, {0, 1});
    if (a(0, 0) != 1.0 || a(0, 1) != 1.0 || a(1, 0) != 1.0 || a(1, 1) != 0.0) {
        detail = "adjacency is not [[1,1],[1,0]]";
        return false;
    }
    const double want = std::log(oracle::poly_root({-1, -1, 1}, 1.5, 1.7));
    const EntropyEstimate e = entropy_estimate(m, 8);
    if (std::abs(e.h - want) > 1e-9) {
        detail = "entropy " + fmt(e.h) + " vs root oracle " + fmt(want);
        return false;
    }
    detail = "2 vertices, adjacency [[1,1],[1,0]], h=" + fmt(e.h);
    return true;
}

bool c3_entropy_convergence(std::string& detail) {
    const PiecewiseMonotoneMap m = m52();
    double prev = -1.0, h20 = 0.0;
    for (int depth = 1; depth <= 20; ++depth) {
        const EntropyEstimate e = entropy_estimate(m, depth);
        if (e.h < prev - 1e-13) {
            detail = "h dropped between depths " + std::to_string(depth - 1) + " and " +
                     std::to_string(depth);
            return false;
        }
        prev = e.h;
        if (depth == 20) h20 = e.h;
    }
    const double target = std::log(2.5);
    if (std::abs(h20 - target) > 0.01) {
        detail = "h_20=" + fmt(h20) + " not within 0.01 of log 2.5";
        return false;
    }
    // independent lap-count oracle: admissible word growth by direct DP
    const oracle::Mod1Oracle ref{Rational(1, 10), Rational(5, 2)};
    const unsigned long long w18 = ref.count_words(18);
    const double growth = std::log(double(w18)) / 18.0;
    if (std::abs(growth - target) > 0.05) {
        detail = "oracle growth " + fmt(growth) + " not within 0.05 of log 2.5";
        return false;
    }
    const Diagram d = build_truncation(m, 20);
    if (count_words(d, 18) != w18) {
        detail = "diagram word count disagrees with the direct DP oracle at n=18";
        return false;
    }
    detail = "h_20=" + fmt(h20) + ", oracle growth(18)=" + fmt(growth) + ", counts agree (" +
             std::to_string(w18) + ")";
    return true;
}

bool c4_two_sided_bounds(std::string& detail) {
    const char* names[] = {"full", "golden", "cubic"};
    std::ostringstream all;
    for (int i = 0; i < 3; ++i) {
        const PiecewiseMonotoneMap m =
            i == 0 ? full_shift() : i == 1 ? golden_map() : cubic_neg_beta();
        const MMEModel model = mme_on_truncation(build_truncation(m, 10));
        const GibbsReport rep = gibbs_check(model, model.scc, 12);
        if (!rep.violations.empty()) {
            detail = std::string(names[i]) + ": " + std::to_string(rep.violations.size()) +
                     " bound violations";
            return false;
        }
        // recompute the constant: max{2, sum L * sup R, 1/min(L(C)R(D))}
        double sum_l = 0.0, sup_r = 0.0, min_l = 1e300, min_r = 1e300;
        for (int id : rep.F) {
            const std::size_t pos = std::size_t(model.scc_pos[std::size_t(id)]);
            sum_l += model.L[pos];
            sup_r = std::max(sup_r, model.R[pos]);
            min_l = std::min(min_l, model.L[pos]);
            min_r = std::min(min_r, model.R[pos]);
        }
        const double k_formula =
            std::max(2.0, std::max(sum_l * sup_r, 1.0 / (min_l * min_r)));
        if (std::abs(rep.K - k_formula) > 1e-12 * k_formula) {
            detail = std::string(names[i]) + ": K=" + fmt(rep.K) + " vs formula " +
                     fmt(k_formula);
            return false;
        }
        all << (i ? ", " : "") << names[i] << " K=" << fmt(rep.K) << " ("
            << rep.upper_words << " words)";
    }
    detail = "zero violations: " + all.str();
    return true;
}

bool c5_product_formula(std::string& detail) {
    long paths_checked = 0;
    double worst = 0.0;
    for (int i = 0; i < 4; ++i) {
        const PiecewiseMonotoneMap m = i == 0   ? full_shift()
                                       : i == 1 ? golden_map()
                                       : i == 2 ? m52()
                                                : cubic_neg_beta();
        const MMEModel model = mme_on_truncation(build_truncation(m, 12));
        const std::size_t k = model.scc.size();
        // chain probability of the path so far, extended depth-first
        std::function<void(std::size_t, std::size_t, double, int)> extend =
            [&](std::size_t first, std::size_t last, double chain, int len) {
                const double product =
                    model.L[first] * model.R[last] * std::exp(-double(len) * model.h);
                worst = std::max(worst, std::abs(chain - product));
                ++paths_checked;
                if (len == 8) return;
                for (std::size_t nx = 0; nx < k; ++nx)
                    if (model.P(last, nx) > 0.0)
                        extend(first, nx, chain * model.P(last, nx), len + 1);
            };
        for (std::size_t s = 0; s < k; ++s) extend(s, s, model.pi[s], 1);
    }
    detail = std::to_string(paths_checked) + " paths, max |chain - product| = " + fmt(worst);
    return worst <= 1e-10;
}

bool c6_rate_match(std::string& detail) {
    const MMEModel model = mme_on_truncation(build_truncation(full_shift(), 4));
    const std::vector<double> f = {1.0, 0.0};
    const double s = 0.7;
    const RatePoint analytic = rate_level1(model, f, s);
    if (std::abs(analytic.I - 0.082283) > 1e-6) {
        detail = "analytic rate " + fmt(analytic.I) + " off the closed form 0.082283";
        return false;
    }
    const std::vector<int> grid = {20, 30, 40, 50, 60};
    DeviationOptions opts;
    opts.jobs = 4;
    const DeviationEstimate est =
        deviation_probability(model, f, s, 1.0, grid, 1'000'000, 20240801, opts);
    for (const DeviationCell& cell : est.cells) {
        const double exact = oracle::binary_tail(cell.n, s, 1.0);
        if (std::abs(cell.p - exact) > 3.0 * std::max(cell.se, 1e-12)) {
            detail = "n=" + std::to_string(cell.n) + ": p=" + fmt(cell.p) + " vs exact " +
                     fmt(exact) + " beyond 3 standard errors";
            return false;
        }
    }
    // the Monte Carlo fit must land near the same regression on exact tails
    const double oracle_fit = oracle::exact_tail_fit(grid, s, 1.0);
    const double rel = std::abs(est.fitted_rate - oracle_fit) / oracle_fit;
    if (rel > 0.15) {
        detail = "fitted " + fmt(est.fitted_rate) + " vs exact-tail fit " + fmt(oracle_fit) +
                 " (rel " + fmt(rel) + ")";
        return false;
    }
    detail = "analytic=" + fmt(analytic.I) + ", mc fit=" + fmt(est.fitted_rate) +
             ", exact-tail fit=" + fmt(oracle_fit) + ", rel=" + fmt(rel) +
             ", all cells within 3 SE";
    return true;
}

bool c7_rate_properties(std::string& detail) {
    const MMEModel golden = mme_on_truncation(build_truncation(golden_map(), 8));
    const std::vector<double> g = {0.0, 1.0};
    const double s_star = pressure_derivative(golden, g, 0.0);
    const double at_star = rate_level1(golden, g, s_star).I;
    if (std::abs(at_star) > 1e-8) {
        detail = "I(s*)=" + fmt(at_star) + " at s*=" + fmt(s_star);
        return false;
    }
    const MMEModel full = mme_on_truncation(build_truncation(full_shift(), 4));
    const std::vector<double> f = {1.0, 0.0};
    std::vector<double> vals;
    for (int i = 0; i <= 10; ++i) {
        const double si = 0.25 + 0.05 * i;
        const RatePoint p = rate_level1(full, f, si);
        if (std::abs(p.I - oracle::binary_rate(si)) > 1e-6) {
            detail = "I(" + fmt(si) + ")=" + fmt(p.I) + " vs closed form " +
                     fmt(oracle::binary_rate(si));
            return false;
        }
        vals.push_back(p.I);
    }
    for (std::size_t i = 1; i + 1 < vals.size(); ++i)
        if (vals[i] > 0.5 * (vals[i - 1] + vals[i + 1]) + 1e-9) {
            detail = "convexity fails at grid point " + std::to_string(i);
            return false;
        }
    detail = "I(s*)=" + fmt(at_star) + ", closed form matched on 11 points, convex";
    return true;
}

bool c8_constrained_counts(std::string& detail) {
    const Diagram full = build_truncation(full_shift(), 4);
    const MMEModel full_model = mme_on_truncation(full);
    const std::vector<double> f = {1.0, 0.0};
    const unsigned long long got = count_words_constrained(full, full_model.scc, 10, f, 0.4, 0.6);
    const unsigned long long want = oracle::binary_sum_count(10, 0.4, 0.6);
    if (got != want || got != 672) {
        detail = "count " + std::to_string(got) + " vs oracle " + std::to_string(want) +
                 " (expected 672)";
        return false;
    }
    const MMEModel golden = mme_on_truncation(build_truncation(golden_map(), 8));
    const std::vector<double> g = {0.0, 1.0};
    const double lo = 0.2, hi = 0.4;
    const unsigned long long count =
        count_words_constrained(*golden.diagram, golden.scc, 20, g, lo, hi);
    const double growth = std::log(double(count)) / 20.0;
    double min_rate = 1e300;
    for (int i = 0; i <= 10; ++i) {
        const RatePoint p = rate_level1(golden, g, lo + (hi - lo) * i / 10.0);
        if (!p.infinite) min_rate = std::min(min_rate, p.I);
    }
    const double h_constrained = golden.h - min_rate;
    if (growth < h_constrained - 0.05) {
        detail = "growth " + fmt(growth) + " below h_constrained - 0.05 = " +
                 fmt(h_constrained - 0.05);
        return false;
    }
    detail = "full-shift count 672 exact; golden growth " + fmt(growth) +
             " >= " + fmt(h_constrained) + " - 0.05";
    return true;
}

bool c9_certificates(std::string& detail) {
    std::mt19937 rng(20240816u);
    int done = 0;
    for (int pair = 0; pair < 10; ++pair) {
        const Rational alpha(long(rng() % 950), 1000);
        const Rational beta(long(2050 + rng() % 1950), 1000);
        const PiecewiseMonotoneMap m = make_mod1(alpha, beta);
        for (int trial = 0; trial < 10; ++trial) {
            const Rational lo(long(rng() % 9400), 10000);
            const Rational width(long(50 + rng() % 450), 10000);
            const Interval seed{Scalar(lo), Scalar(lo + width)};
            const IrreducibilityCertificate cert = check_irreducibility(m, seed, 64);
            if (!cert.found) {
                detail = "no certificate for alpha=" + rational_to_string(alpha) +
                         " beta=" + rational_to_string(beta) + " interval #" +
                         std::to_string(trial);
                return false;
            }
            if (!verify_certificate(m, cert)) {
                detail = "certificate failed forward re-verification (alpha=" +
                         rational_to_string(alpha) + " beta=" + rational_to_string(beta) + ")";
                return false;
            }
            ++done;
        }
    }
    detail = std::to_string(done) + " certificates found and re-verified forward";
    return true;
}

bool c10_periodic_points(std::string& detail) {
    long points = 0;
    double worst_approx = 0.0;
    for (int i = 0; i < 4; ++i) {
        const PiecewiseMonotoneMap m = i == 0   ? full_shift()
                                       : i == 1 ? golden_map()
                                       : i == 2 ? m52()
                                                : cubic_neg_beta();
        const bool exact = m.policy.is_exact();
        const Diagram d = build_truncation(m, 12);
        for (const std::vector<int>& cycle : simple_cycles(d, 8)) {
            const PeriodicPoint p = periodic_points(d, cycle);
            if (!p.ok) {
                detail = "cycle through vertex " + std::to_string(cycle.front()) +
                         " produced no valid orbit (" + p.note + ")";
                return false;
            }
            if (exact && p.residual != 0.0) {
                detail = "exact-mode residual " + fmt(p.residual) + " is nonzero";
                return false;
            }
            if (!exact && p.residual >= 1e-12) {
                detail = "approx-mode residual " + fmt(p.residual) + " too large";
                return false;
            }
            if (!exact) worst_approx = std::max(worst_approx, p.residual);
            ++points;
        }
    }
    detail = std::to_string(points) + " cycles solved; exact residuals all zero, worst " +
             "approx residual " + fmt(worst_approx);
    return true;
}

} // namespace

int main() {
    struct Criterion {
        const char* name;
        std::function<bool(std::string&)> body;
        double budget_s;
    };
    const std::vector<Criterion> criteria = {
        {"full-shift entropy and exact cylinder masses", c1_full_shift_exact, 1.0},
        {"golden-mean two-vertex diagram and entropy", c2_golden_diagram, 1.0},
        {"entropy convergence vs direct word-count oracle", c3_entropy_convergence, 30.0},
        {"two-sided cylinder bounds with the pinned constant", c4_two_sided_bounds, 60.0},
        {"eigenvector product formula on all short paths", c5_product_formula, 10.0},
        {"Monte Carlo deviation rate vs exact binomial tails", c6_rate_match, 300.0},
        {"rate function zero, convexity, and closed form", c7_rate_properties, 60.0},
        {"constrained word counts and growth lower bound", c8_constrained_counts, 60.0},
        {"irreducibility certificates re-verified forward", c9_certificates, 60.0},
        {"periodic points from all short cycles", c10_periodic_points, 60.0},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        std::string detail;
        bool ok = false;
        try {
            ok = criteria[i].body(detail);
        } catch (const std::exception& e) {
            ok = false;
            detail = std::string("exception: ") + e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (ok && secs > criteria[i].budget_s) {
            ok = false;
            detail += " [over time budget " + fmt(criteria[i].budget_s) + "s]";
        }
        std::printf("%s %2zu: %s - %s (%.2fs)\n", ok ? "PASS" : "FAIL", i + 1,
                    criteria[i].name, detail.c_str(), secs);
        std::fflush(stdout);
        if (!ok) ++failures;
    }
    return failures;
}
