#pragma once

#include "symdyn/diagram.hpp"

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

namespace symdyn {

// Dense nonnegative square matrix, row major.
struct Matrix {
    std::size_t n = 0;
    std::vector<double> a;

    Matrix() = default;
    explicit Matrix(std::size_t size) : n(size), a(size * size, 0.0) {}

    double& operator()(std::size_t i, std::size_t j) { return a[i * n + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a[i * n + j]; }
};

struct PerronResult {
    double lambda = 0.0;
    // strictly positive; sum(r) = 1 and sum(l*r) = 1
    std::vector<double> l, r;
};

// Perron root with left/right eigenvectors of an irreducible nonnegative
// matrix, by power iteration on M+I (primitive whenever M is irreducible).
// Throws std::invalid_argument when the zero pattern is not strongly
// connected.
PerronResult spectral_radius(const Matrix& M, double tol = 1e-12);

// gcd of cycle lengths of a strongly connected zero pattern
int pattern_period(const Matrix& M);

// 0/1 arrow matrix of the diagram restricted to subset (sorted vertex ids)
Matrix adjacency_matrix(const Diagram& d, const std::vector<int>& subset);

struct EntropyEstimate {
    double h = 0.0;
    double lambda = 0.0;
    std::vector<int> scc; // vertex ids of the dominant component
    int scc_size = 0;
    int depth = 0;
};

// log Perron root of the dominant complete component of the depth-N
// truncation; throws std::domain_error when no component has positive
// spectral radius (depth too small).
EntropyEstimate entropy_estimate(const PiecewiseMonotoneMap& map, int N);

// Markov measure of maximal entropy on the dominant component of a
// truncation. The mass of a vertex path C_1..C_n is exactly
// L(C_1) * R(C_n) * exp(-n h).
struct MMEModel {
    std::shared_ptr<const Diagram> diagram;
    std::vector<int> scc;     // sorted vertex ids of the analyzed component
    std::vector<int> scc_pos; // vertex id -> position in scc, or -1
    Matrix M;                 // adjacency on scc
    Matrix P;                 // stochastic kernel, rows sum to 1
    std::vector<double> pi;   // stationary law, pi = l*r
    std::vector<double> L;    // lambda * l
    std::vector<double> R;    // r
    double lambda = 0.0;
    double h = 0.0;
    int period = 1;

    int symbol_at(std::size_t pos) const {
        return diagram->vertices[std::size_t(scc[pos])].symbol;
    }
};

MMEModel mme_on_truncation(const Diagram& d);

// measure of the symbol cylinder [u]: transfer pass over paths whose
// symbols spell u, each path weighted L(first) R(last) exp(-n h)
double project_cylinder_mass(const MMEModel& model, const Word& u);

struct GibbsViolation {
    Word word;
    double mass = 0.0;
    double bound = 0.0;
    bool upper = false; // true: mass above K e^{-nh}, false: below 1/K e^{-nh}
};

struct GibbsReport {
    std::vector<int> F; // analyzed vertex subset (sorted ids)
    double K = 0.0;
    int n_max = 0;
    int depth = 0;              // truncation level the L/R data came from
    long upper_words = 0;       // admissible words checked against K e^{-nh}
    long lower_words = 0;       // F-internal words checked against e^{-nh}/K
    double max_ratio = 0.0;     // max over words of mass * exp(n h)
    double min_ratio = 0.0;     // min over F-internal words of mass * exp(n h)
    std::vector<GibbsViolation> violations;
};

// checks mass([u]) <= K exp(-n h) over all admissible words and
// mass([u]) >= exp(-n h)/K over words realized by paths inside F,
// for every n <= n_max, with K from the L/R data of the truncation
GibbsReport gibbs_check(const MMEModel& model, const std::vector<int>& F, int n_max);

// log spectral radius of M tilted by exp(q f(symbol of target vertex)),
// rescaled internally so matrix entries never overflow; f has one value
// per symbol 1..k
double pressure(const MMEModel& model, const std::vector<double>& f, double q);

// derivative of pressure in q: mean of f under the tilted stationary law
double pressure_derivative(const MMEModel& model, const std::vector<double>& f, double q);

std::string mme_to_json(const MMEModel& m);
std::string gibbs_report_to_json(const GibbsReport& g, const MMEModel& m);

} // namespace symdyn
