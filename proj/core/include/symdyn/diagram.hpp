#pragma once

#include "symdyn/coding.hpp"

#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace symdyn {

// One follower-set vertex: the interval a word's branch-chain image carves
// out of its last symbol's domain.
struct Vertex {
    int id = -1;
    int symbol = 0;        // 1..k
    Interval interval;     // subinterval of the symbol's branch domain
    int level = 0;         // first truncation depth containing it
    bool complete = false; // successors fully explored
    Word witness;          // shortest word realizing this vertex
};

struct BuildOptions {
    long vertex_budget = 2'000'000;
    int jobs = 1; // successor fan-out threads; results identical for any value
};

struct Diagram {
    std::shared_ptr<const PiecewiseMonotoneMap> map;
    NumberPolicy policy;
    int k = 0;
    std::vector<Vertex> vertices;            // index == id
    std::vector<std::pair<int, int>> arrows; // sorted (from, to)
    std::vector<std::vector<int>> out;       // out[id] = targets, ascending
    std::vector<int> roots;                  // the k level-0 vertex ids
    int truncation_level = 0;
    bool stabilized = false; // some expansion added no vertices
    int stabilized_at = -1;  // first such level
};

// Successor vertices of v: the branch image of v.interval split by the
// partition. Ids, levels, and witnesses are left for the caller to assign.
std::vector<Vertex> successors(const PiecewiseMonotoneMap& map, const Vertex& v);

// Breadth-first expansion of the level-0 branch-domain vertices, depth times,
// with vertex deduplication by (symbol, interval). Deterministic for any
// jobs count. Throws resource_error past the vertex budget.
Diagram build_truncation(const PiecewiseMonotoneMap& map, int depth,
                         const BuildOptions& opts = {});

// Number of admissible words of length n, counted as diagram paths from the
// roots. Requires the truncation deep enough that every such path stays in
// explored territory (stabilized, or truncation_level >= n-1).
unsigned long long count_words(const Diagram& d, int n);

struct Scc {
    std::vector<int> vertex_ids; // ascending
    double rho = 0.0;            // Perron root of the component's adjacency
    bool maximal = false;        // attains the largest rho in the diagram
};

// Strongly connected components ordered by least vertex id. Vertices with
// unexplored successors always land in trivial components, so nontrivial
// components use correct out-degrees.
std::vector<Scc> scc_decompose(const Diagram& d);

struct IrreducibilityCertificate {
    bool found = false;
    Interval input; // the interval searched
    Interval L;     // subinterval mapped monotonically onto (0,1)
    int tau = 0;
    Word chain;          // branch symbols visited by L, T(L), ...
    double max_width = 0.0; // widest image reached; diagnostic on failure
};

// Breadth-first search for a subinterval of I whose tau-th monotone image is
// all of (0,1); tau is minimal. Failure is inconclusive, not a disproof.
IrreducibilityCertificate check_irreducibility(const PiecewiseMonotoneMap& map,
                                               const Interval& I, int tau_max,
                                               long queue_cap = 1'000'000);

// Re-derives the certificate by forward iteration, independently of the search.
bool verify_certificate(const PiecewiseMonotoneMap& map,
                        const IrreducibilityCertificate& cert);

// All simple cycles (no repeated vertex) of length <= p_max among completely
// explored vertices. Each cycle starts at its least vertex id.
std::vector<std::vector<int>> simple_cycles(const Diagram& d, int p_max,
                                            long cycle_cap = 1'000'000);

struct PeriodicPoint {
    bool ok = false; // orbit stays in the cycle's domain-interval closures
    std::vector<int> cycle;
    Word word;
    Scalar x;                  // fixed point of the composed branch chain
    std::vector<Scalar> orbit; // the p orbit points from x
    bool boundary_touch = false; // some orbit point sits on a partition point
    double residual = 0.0;       // |T^p(x) - x| recomputed along the chain
    std::string note;
};

// Solves the composed affine fixed-point equation of a diagram cycle and
// verifies the orbit against the cycle's intervals.
PeriodicPoint periodic_points(const Diagram& d, const std::vector<int>& cycle);

// {"vertices":[{id,symbol,lo,hi,level,complete}],"arrows":[[from,to]],...}
// with exact endpoint strings and the map spec and policy embedded, so the
// output is self-contained.
std::string diagram_to_json(const Diagram& d);
Diagram diagram_from_json(const std::string& text);

} // namespace symdyn
