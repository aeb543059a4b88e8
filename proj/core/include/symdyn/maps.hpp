#pragma once

#include "symdyn/numeric.hpp"

#include <optional>
#include <string>
#include <vector>

namespace symdyn {

enum class MapFamily { mod1, beta, negbeta };

std::string family_name(MapFamily f);

// One affine branch x -> slope*x + intercept on an open domain interval.
struct Branch {
    Interval domain;
    Scalar slope;     // nonzero; negative slopes flip orientation
    Scalar intercept;

    Scalar apply(const Scalar& x) const { return slope * x + intercept; }
    Scalar invert(const Scalar& y) const { return (y - intercept) / slope; }
    int orientation() const { return slope < Scalar(0) ? -1 : 1; }
    Interval image() const { return image_of(domain); }
    Interval image_of(const Interval& iv) const;
    // Preimage of iv under the branch map, clipped to the branch domain.
    Interval pull_back(const Interval& iv) const;
};

struct EvalResult {
    Scalar value;
    bool boundary = false; // x coincides with a partition point a_0..a_k
    int branch = 0;        // branch applied (right branch at interior partition points)
};

struct OrbitResult {
    std::vector<Scalar> points;      // x, T(x), ..., T^n(x)
    std::vector<bool> on_breakpoint; // one flag per point
    bool boundary_hit = false;
    long first_boundary_step = -1;
};

// Piecewise affine map of [0,1] with partition 0 = a_0 < ... < a_k = 1 and
// one monotone branch per partition cell. Immutable after construction.
struct PiecewiseMonotoneMap {
    MapFamily family = MapFamily::mod1;
    NumberPolicy policy;
    int k = 0;                       // branch count, >= 2
    std::vector<Scalar> breakpoints; // a_0..a_k, strictly increasing
    std::vector<Branch> branches;    // branch j lives on (a_j, a_{j+1})
    ParamValue alpha_param;          // as supplied; 0 for the beta families
    ParamValue beta_param;
    std::string spec_text;           // canonical JSON of the construction

    bool on_breakpoint(const Scalar& x) const;
    // Branch used to evaluate at x: right branch at interior partition
    // points, branch 0 at x=0, branch k-1 at x=1 (left limit).
    int branch_index(const Scalar& x) const;
    EvalResult eval(const Scalar& x) const;
    OrbitResult orbit(const Scalar& x, long n) const;
};

// x -> beta*x + alpha reduced into [0,1); 0 <= alpha < 1, beta > 1.
// Without an explicit policy, rational parameters select exact arithmetic
// and algebraic ones select 128-bit floats.
PiecewiseMonotoneMap make_mod1(const ParamValue& alpha, const ParamValue& beta,
                               std::optional<NumberPolicy> policy = {});
// alpha = 0 specialization; beta > 1.
PiecewiseMonotoneMap make_beta(const ParamValue& beta,
                               std::optional<NumberPolicy> policy = {});
// Two decreasing branches -beta*x + 1 on (0, 1/beta) and -beta*x + 2 on
// (1/beta, 1); requires (1+sqrt(5))/2 < beta < 2.
PiecewiseMonotoneMap make_neg_beta(const ParamValue& beta,
                                   std::optional<NumberPolicy> policy = {});

// Map-spec JSON, e.g. {"type":"mod1","alpha":"1/10","beta":"5/2"}. Parameters
// may be "p/q" strings, decimal strings, JSON numbers (read exactly), or
// {"minpoly":[c0,...],"bracket":[lo,hi]} for algebraic values.
PiecewiseMonotoneMap map_from_json(const std::string& text,
                                   std::optional<NumberPolicy> policy = {});
// Canonical spec text (sorted keys, exact "p/q" parameter strings); equal
// inputs produce byte-identical output regardless of source formatting.
std::string map_to_json(const PiecewiseMonotoneMap& map);

// Plain-double mirror for hot sampling loops; no boundary bookkeeping.
struct DoubleMap {
    int k = 0;
    std::vector<double> breakpoints; // size k+1
    std::vector<double> slopes;      // size k
    std::vector<double> intercepts;  // size k

    static DoubleMap from(const PiecewiseMonotoneMap& map);
    int branch_index(double x) const;
    double eval(double x) const;
};

} // namespace symdyn
