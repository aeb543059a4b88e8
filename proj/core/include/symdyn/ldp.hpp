#pragma once

#include "symdyn/coding.hpp"
#include "symdyn/spectral.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace symdyn {

// locally constant observable: one value per symbol 1..k
struct Observable {
    std::string name;
    std::vector<double> values;
};

Observable make_indicator(int k, int sym); // named "sym=<sym>"

struct EmpiricalStats {
    int n = 0;
    std::vector<double> freq;     // symbol frequencies over 1..k
    std::vector<double> averages; // one per observable, in input order
};

EmpiricalStats empirical_stats(const Word& word, int k,
                               const std::vector<Observable>& observables);

struct SamplePath {
    std::vector<int> vertex_path; // diagram vertex ids
    Word word;
    Scalar x;                     // midpoint of the sampled word's cylinder
    double cylinder_width = 0.0;
};

// one stationary-chain sample of length n, reproducible from the seed
SamplePath sample_mme(const MMEModel& model, int n, std::uint64_t seed);

struct RatePoint {
    double s = 0.0;
    double q_star = 0.0;
    double I = 0.0;
    bool infinite = false;     // s unreachable: rate is +infinity
    bool boundary_hit = false; // optimizer stopped at the widened q range
};

// Legendre transform I(s) = sup_q [ q s - P(q f) + h_top ]
RatePoint rate_level1(const MMEModel& model, const std::vector<double>& f, double s);

struct DeviationOptions {
    int jobs = 1;
    std::uint32_t stream_base = 0; // offset for per-n RNG streams
};

struct DeviationCell {
    int n = 0;
    std::uint64_t hits = 0;
    std::uint64_t trials = 0;
    double p = 0.0;    // hits/trials
    double se = 0.0;   // binomial standard error of p
    double rate = 0.0; // -(1/n) log p; a lower bound when censored
    bool censored = false;
};

struct DeviationEstimate {
    double lo = 0.0, hi = 0.0; // target interval for the empirical average
    std::vector<DeviationCell> cells;
    double fitted_rate = 0.0; // intercept of rate against 1/n
    double fitted_se = 0.0;   // standard error of the intercept
    double slope = 0.0;
    int used = 0; // cells entering the fit
};

// Monte Carlo estimate of m(S_n f / n in [lo,hi]) on a grid of n;
// identical (seed, stream_base) reproduce identical results for any jobs
DeviationEstimate deviation_probability(const MMEModel& model, const std::vector<double>& f,
                                        double lo, double hi, const std::vector<int>& n_grid,
                                        std::uint64_t trials, std::uint64_t seed,
                                        const DeviationOptions& opts = {});

// exact number of distinct length-n words spelled by paths inside F whose
// empirical f-average lies in [lo,hi]; determinized subset DP, n <= 24
unsigned long long count_words_constrained(const Diagram& d, const std::vector<int>& F, int n,
                                           const std::vector<double>& f, double lo, double hi);

struct LdpRow {
    double s = 0.0;
    RatePoint analytic;
    double tail_lo = 0.0, tail_hi = 0.0; // deviation set handed to the MC run
    DeviationEstimate mc;
    double rel_err = 0.0; // |mc rate - analytic I| / max(I, 1e-6)
    // lower-bound counting check: word growth in a window around s
    double ps_lo = 0.0, ps_hi = 0.0;
    int ps_n = 0;
    unsigned long long ps_count = 0;
    double ps_growth = 0.0; // (1/n) log count
    double ps_h = 0.0;      // h_top - min I over the window
    bool ps_ok = false;
};

struct LdpReport {
    std::string observable;
    std::vector<double> f;
    double h_top = 0.0;
    double s_star = 0.0; // MME mean of f
    std::vector<int> n_grid;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    std::vector<LdpRow> rows;
};

LdpReport ldp_report(const MMEModel& model, const Observable& obs,
                     const std::vector<double>& levels, const std::vector<int>& n_grid,
                     std::uint64_t trials, std::uint64_t seed,
                     const DeviationOptions& opts = {});

std::string ldp_report_to_json(const LdpReport& r);

} // namespace symdyn
