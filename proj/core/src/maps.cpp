#include "symdyn/maps.hpp"

#include <json.hpp>

#include <algorithm>
#include <stdexcept>

namespace symdyn {

using nlohmann::json;

std::string family_name(MapFamily f) {
    switch (f) {
        case MapFamily::mod1: return "mod1";
        case MapFamily::beta: return "beta";
        case MapFamily::negbeta: return "negbeta";
    }
    return "?";
}

Interval Branch::image_of(const Interval& iv) const {
    if (orientation() > 0) return {apply(iv.lo), apply(iv.hi)};
    return {apply(iv.hi), apply(iv.lo)};
}

Interval Branch::pull_back(const Interval& iv) const {
    Interval pre;
    if (orientation() > 0)
        pre = {invert(iv.lo), invert(iv.hi)};
    else
        pre = {invert(iv.hi), invert(iv.lo)};
    return iv_intersect(domain, pre);
}

bool PiecewiseMonotoneMap::on_breakpoint(const Scalar& x) const {
    if (policy.is_exact()) {
        for (const Scalar& a : breakpoints)
            if (x == a) return true;
        return false;
    }
    const Scalar tol(BigFloat(policy.tolerance));
    for (const Scalar& a : breakpoints)
        if (abs(x - a) <= tol) return true;
    return false;
}

int PiecewiseMonotoneMap::branch_index(const Scalar& x) const {
    const bool exact = policy.is_exact();
    if (exact) {
        if (x < Scalar(0) || x > Scalar(1))
            throw std::domain_error("point outside [0,1]");
    } else {
        const Scalar tol(BigFloat(policy.tolerance));
        if (x < Scalar(0) - tol || x > Scalar(1) + tol)
            throw std::domain_error("point outside [0,1]");
    }
    int j = 0;
    for (int i = 1; i <= k; ++i) {
        if (!exact) {
            const Scalar tol(BigFloat(policy.tolerance));
            if (abs(x - breakpoints[i]) <= tol) {
                j = i;
                break;
            }
        }
        if (x >= breakpoints[i])
            j = i;
        else
            break;
    }
    return std::min(j, k - 1);
}

EvalResult PiecewiseMonotoneMap::eval(const Scalar& x) const {
    EvalResult out;
    out.branch = branch_index(x);
    out.boundary = on_breakpoint(x);
    out.value = branches[out.branch].apply(x);
    if (!policy.is_exact()) {
        // pull rounding spill back into [0,1]
        if (out.value < Scalar(0)) out.value = Scalar(BigFloat(0));
        else if (out.value > Scalar(1)) out.value = Scalar(BigFloat(1));
    }
    return out;
}

OrbitResult PiecewiseMonotoneMap::orbit(const Scalar& x0, long n) const {
    if (n < 0) throw std::domain_error("orbit length must be nonnegative");
    ScopedPrecision prec(policy.precision_bits);
    OrbitResult out;
    out.points.reserve(std::size_t(n) + 1);
    Scalar x = x0;
    for (long i = 0; i <= n; ++i) {
        out.points.push_back(x);
        const bool hit = on_breakpoint(x);
        out.on_breakpoint.push_back(hit);
        if (hit && out.first_boundary_step < 0) {
            out.boundary_hit = true;
            out.first_boundary_step = i;
        }
        if (i < n) x = eval(x).value;
    }
    return out;
}

namespace {

Scalar typed(long v, const NumberPolicy& policy) {
    if (policy.is_exact()) return Scalar(Rational(v));
    return Scalar(BigFloat(v));
}

NumberPolicy infer_policy(std::initializer_list<const ParamValue*> params,
                          const std::optional<NumberPolicy>& given) {
    if (given) return *given;
    for (const ParamValue* p : params)
        if (!p->is_rational()) return NumberPolicy::approx();
    return NumberPolicy::exact();
}

void validate_partition(const PiecewiseMonotoneMap& m) {
    for (int i = 0; i + 1 <= m.k; ++i)
        if (!(m.breakpoints[i] < m.breakpoints[i + 1]))
            throw std::domain_error("degenerate partition cell");
}

json param_to_json(const ParamValue& p) {
    if (p.is_rational()) return json(rational_to_string(p.rat()));
    json a = json::object();
    json poly = json::array();
    for (const Rational& c : p.alg().minpoly) poly.push_back(rational_to_string(c));
    a["minpoly"] = poly;
    a["bracket"] = {rational_to_string(p.alg().bracket_lo),
                    rational_to_string(p.alg().bracket_hi)};
    return a;
}

std::string build_spec_text(MapFamily family, const ParamValue& alpha,
                            const ParamValue& beta) {
    json j = json::object();
    if (family == MapFamily::mod1) j["alpha"] = param_to_json(alpha);
    j["beta"] = param_to_json(beta);
    j["type"] = family_name(family);
    return j.dump();
}

PiecewiseMonotoneMap make_mod1_family(MapFamily family, const ParamValue& alpha,
                                      const ParamValue& beta,
                                      const std::optional<NumberPolicy>& given) {
    PiecewiseMonotoneMap m;
    m.family = family;
    m.policy = infer_policy({&alpha, &beta}, given);
    ScopedPrecision prec(m.policy.precision_bits);

    const Scalar a = alpha.realize(m.policy);
    const Scalar b = beta.realize(m.policy);
    if (a < typed(0, m.policy) || a >= typed(1, m.policy))
        throw std::domain_error("alpha must lie in [0,1)");
    if (b <= typed(1, m.policy)) throw std::domain_error("beta must exceed 1");

    const long k = ceil_to_long(a + b);
    if (k < 2) throw std::domain_error("map needs at least two branches");
    m.k = int(k);
    m.breakpoints.push_back(typed(0, m.policy));
    for (long i = 1; i < k; ++i) m.breakpoints.push_back((Scalar(i) - a) / b);
    m.breakpoints.push_back(typed(1, m.policy));
    for (long i = 0; i < k; ++i) {
        Branch br;
        br.domain = {m.breakpoints[i], m.breakpoints[i + 1]};
        br.slope = b;
        br.intercept = a - Scalar(i);
        m.branches.push_back(std::move(br));
    }
    m.alpha_param = alpha;
    m.beta_param = beta;
    m.spec_text = build_spec_text(family, alpha, beta);
    validate_partition(m);
    return m;
}

} // namespace

PiecewiseMonotoneMap make_mod1(const ParamValue& alpha, const ParamValue& beta,
                               std::optional<NumberPolicy> policy) {
    return make_mod1_family(MapFamily::mod1, alpha, beta, policy);
}

PiecewiseMonotoneMap make_beta(const ParamValue& beta,
                               std::optional<NumberPolicy> policy) {
    return make_mod1_family(MapFamily::beta, ParamValue(Rational(0)), beta, policy);
}

PiecewiseMonotoneMap make_neg_beta(const ParamValue& beta,
                                   std::optional<NumberPolicy> policy) {
    PiecewiseMonotoneMap m;
    m.family = MapFamily::negbeta;
    m.policy = infer_policy({&beta}, policy);
    ScopedPrecision prec(m.policy.precision_bits);

    const Scalar b = beta.realize(m.policy);
    // golden mean < beta < 2, via (2b-1)^2 > 5 to stay exact for rationals
    const Scalar two_b_minus_1 = Scalar(2) * b - Scalar(1);
    const bool above_golden =
        two_b_minus_1 > typed(0, m.policy) &&
        two_b_minus_1 * two_b_minus_1 > typed(5, m.policy);
    if (!above_golden || b >= typed(2, m.policy))
        throw std::domain_error("beta must lie strictly between (1+sqrt(5))/2 and 2");

    m.k = 2;
    const Scalar inv_b = typed(1, m.policy) / b;
    m.breakpoints = {typed(0, m.policy), inv_b, typed(1, m.policy)};
    Branch b0;
    b0.domain = {m.breakpoints[0], m.breakpoints[1]};
    b0.slope = -b;
    b0.intercept = typed(1, m.policy);
    Branch b1;
    b1.domain = {m.breakpoints[1], m.breakpoints[2]};
    b1.slope = -b;
    b1.intercept = typed(2, m.policy);
    m.branches = {std::move(b0), std::move(b1)};
    m.alpha_param = ParamValue(Rational(0));
    m.beta_param = beta;
    m.spec_text = build_spec_text(MapFamily::negbeta, m.alpha_param, beta);
    validate_partition(m);
    return m;
}

namespace {

Rational rational_from_node(const json& v, const char* what) {
    try {
        if (v.is_string()) return parse_rational(v.get<std::string>());
        if (v.is_number()) return parse_rational(v.dump());
    } catch (const std::exception& e) {
        throw std::domain_error(std::string("map spec: bad ") + what + ": " + e.what());
    }
    throw std::domain_error(std::string("map spec: bad ") + what);
}

ParamValue param_from_node(const json& v, const char* what) {
    if (v.is_object()) {
        if (!v.contains("minpoly") || !v.contains("bracket"))
            throw std::domain_error(std::string("map spec: ") + what +
                                    " needs minpoly and bracket");
        AlgebraicSpec a;
        for (const json& c : v.at("minpoly")) a.minpoly.push_back(rational_from_node(c, what));
        const json& br = v.at("bracket");
        if (!br.is_array() || br.size() != 2)
            throw std::domain_error(std::string("map spec: ") + what +
                                    " bracket must be [lo,hi]");
        a.bracket_lo = rational_from_node(br[0], what);
        a.bracket_hi = rational_from_node(br[1], what);
        return ParamValue(std::move(a));
    }
    return ParamValue(rational_from_node(v, what));
}

} // namespace

PiecewiseMonotoneMap map_from_json(const std::string& text,
                                   std::optional<NumberPolicy> policy) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw std::domain_error(std::string("map spec: ") + e.what());
    }
    if (!j.is_object() || !j.contains("type"))
        throw std::domain_error("map spec: missing type");
    const std::string type = j.at("type").get<std::string>();
    if (type == "mod1") {
        if (!j.contains("alpha") || !j.contains("beta"))
            throw std::domain_error("map spec: mod1 needs alpha and beta");
        return make_mod1(param_from_node(j.at("alpha"), "alpha"),
                         param_from_node(j.at("beta"), "beta"), policy);
    }
    if (type == "beta" || type == "negbeta") {
        if (!j.contains("beta")) throw std::domain_error("map spec: missing beta");
        ParamValue b = param_from_node(j.at("beta"), "beta");
        return type == "beta" ? make_beta(std::move(b), policy)
                              : make_neg_beta(std::move(b), policy);
    }
    throw std::domain_error("map spec: unknown type '" + type + "'");
}

std::string map_to_json(const PiecewiseMonotoneMap& map) { return map.spec_text; }

DoubleMap DoubleMap::from(const PiecewiseMonotoneMap& map) {
    DoubleMap d;
    d.k = map.k;
    for (const Scalar& a : map.breakpoints) d.breakpoints.push_back(a.to_double());
    for (const Branch& b : map.branches) {
        d.slopes.push_back(b.slope.to_double());
        d.intercepts.push_back(b.intercept.to_double());
    }
    return d;
}

int DoubleMap::branch_index(double x) const {
    int j = 0;
    for (int i = 1; i <= k; ++i) {
        if (x >= breakpoints[i]) j = i;
        else break;
    }
    return std::min(j, k - 1);
}

double DoubleMap::eval(double x) const {
    const int j = branch_index(x);
    const double y = slopes[j] * x + intercepts[j];
    return std::min(1.0, std::max(0.0, y));
}

} // namespace symdyn
