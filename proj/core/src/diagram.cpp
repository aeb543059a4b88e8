#include "symdyn/diagram.hpp"

#include "symdyn/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <set>
#include <stdexcept>
#include <thread>
#include <tuple>

namespace symdyn {

using nlohmann::json;

std::vector<Vertex> successors(const PiecewiseMonotoneMap& map, const Vertex& v) {
    ScopedPrecision prec(map.policy.precision_bits);
    const Branch& br = map.branches[v.symbol - 1];
    const Interval image = br.image_of(v.interval);
    std::vector<Vertex> out;
    for (int l = 1; l <= map.k; ++l) {
        Interval w = iv_intersect(image, map.branches[l - 1].domain);
        if (iv_empty(w, map.policy)) continue;
        Vertex s;
        s.symbol = l;
        s.interval = std::move(w);
        out.push_back(std::move(s));
    }
    return out;
}

namespace {

// Vertex lookup keyed by (symbol, interval): exact map in exact mode,
// tolerance scan per symbol otherwise.
struct VertexIndex {
    const NumberPolicy& policy;
    const std::vector<Vertex>& vertices;
    std::map<std::tuple<int, Rational, Rational>, int> exact;
    std::vector<std::vector<int>> by_symbol; // symbol-1 -> ids

    VertexIndex(const NumberPolicy& p, const std::vector<Vertex>& vs, int k)
        : policy(p), vertices(vs), by_symbol(std::size_t(k)) {}

    int find(int symbol, const Interval& iv) const {
        if (policy.is_exact()) {
            auto it = exact.find({symbol, iv.lo.rat(), iv.hi.rat()});
            return it == exact.end() ? -1 : it->second;
        }
        for (int id : by_symbol[std::size_t(symbol - 1)])
            if (iv_same(vertices[std::size_t(id)].interval, iv, policy)) return id;
        return -1;
    }

    void add(int symbol, const Interval& iv, int id) {
        if (policy.is_exact())
            exact.emplace(std::make_tuple(symbol, iv.lo.rat(), iv.hi.rat()), id);
        else
            by_symbol[std::size_t(symbol - 1)].push_back(id);
    }
};

} // namespace

Diagram build_truncation(const PiecewiseMonotoneMap& map, int depth,
                         const BuildOptions& opts) {
    if (depth < 0) throw std::domain_error("truncation depth must be nonnegative");
    ScopedPrecision prec(map.policy.precision_bits);

    Diagram d;
    d.map = std::make_shared<PiecewiseMonotoneMap>(map);
    d.policy = map.policy;
    d.k = map.k;
    d.truncation_level = depth;

    VertexIndex index(d.policy, d.vertices, d.k);
    for (int j = 1; j <= d.k; ++j) {
        Vertex v;
        v.id = int(d.vertices.size());
        v.symbol = j;
        v.interval = map.branches[j - 1].domain;
        v.level = 0;
        v.witness = {j};
        index.add(j, v.interval, v.id);
        d.roots.push_back(v.id);
        d.vertices.push_back(std::move(v));
    }

    std::vector<int> frontier = d.roots;
    for (int level = 1; level <= depth && !frontier.empty(); ++level) {
        std::vector<std::vector<Vertex>> fanout(frontier.size());
        const int jobs = std::max(1, opts.jobs);
        if (jobs == 1 || frontier.size() < 2) {
            for (std::size_t i = 0; i < frontier.size(); ++i)
                fanout[i] = successors(map, d.vertices[std::size_t(frontier[i])]);
        } else {
            std::vector<std::thread> pool;
            std::vector<std::exception_ptr> errs;
            errs.resize(std::size_t(jobs));
            for (int t = 0; t < jobs; ++t) {
                pool.emplace_back([&, t] {
                    try {
                        ScopedPrecision worker_prec(map.policy.precision_bits);
                        for (std::size_t i = std::size_t(t); i < frontier.size();
                             i += std::size_t(jobs))
                            fanout[i] = successors(map, d.vertices[std::size_t(frontier[i])]);
                    } catch (...) {
                        errs[std::size_t(t)] = std::current_exception();
                    }
                });
            }
            for (auto& th : pool) th.join();
            for (auto& e : errs)
                if (e) std::rethrow_exception(e);
        }

        std::vector<int> next;
        for (std::size_t i = 0; i < frontier.size(); ++i) {
            const int from = frontier[i];
            for (Vertex& s : fanout[i]) {
                int did = index.find(s.symbol, s.interval);
                if (did < 0) {
                    if (long(d.vertices.size()) >= opts.vertex_budget)
                        throw resource_error("diagram vertex budget " +
                                             std::to_string(opts.vertex_budget) +
                                             " exceeded");
                    did = int(d.vertices.size());
                    s.id = did;
                    s.level = level;
                    s.witness = d.vertices[std::size_t(from)].witness;
                    s.witness.push_back(s.symbol);
                    index.add(s.symbol, s.interval, did);
                    d.vertices.push_back(std::move(s));
                    next.push_back(did);
                }
                d.arrows.emplace_back(from, did);
            }
            d.vertices[std::size_t(from)].complete = true;
        }
        if (next.empty() && !d.stabilized) {
            d.stabilized = true;
            d.stabilized_at = level;
        }
        frontier = std::move(next);
    }

    std::sort(d.arrows.begin(), d.arrows.end());
    d.out.assign(d.vertices.size(), {});
    for (const auto& [from, to] : d.arrows) d.out[std::size_t(from)].push_back(to);
    return d;
}

unsigned long long count_words(const Diagram& d, int n) {
    if (n < 1) throw std::domain_error("word length must be positive");
    if (!d.stabilized && d.truncation_level < n - 1)
        throw std::domain_error("truncation too shallow to count length-" +
                                std::to_string(n) + " words");
    auto add_checked = [](unsigned long long& acc, unsigned long long v) {
        if (__builtin_add_overflow(acc, v, &acc))
            throw resource_error("word count overflows 64 bits");
    };
    std::vector<unsigned long long> c(d.vertices.size(), 0);
    for (int r : d.roots) c[std::size_t(r)] = 1;
    for (int step = 1; step < n; ++step) {
        std::vector<unsigned long long> nx(d.vertices.size(), 0);
        for (std::size_t v = 0; v < d.vertices.size(); ++v) {
            if (!c[v]) continue;
            for (int t : d.out[v]) add_checked(nx[std::size_t(t)], c[v]);
        }
        c.swap(nx);
    }
    unsigned long long total = 0;
    for (unsigned long long v : c) add_checked(total, v);
    return total;
}

namespace {

// closed-interval membership; approx mode widens by the policy tolerance
bool contains_closed(const Interval& iv, const Scalar& x, const NumberPolicy& p) {
    if (p.is_exact()) return !(x < iv.lo) && !(iv.hi < x);
    const Scalar slack{BigFloat(p.tolerance)};
    return !(x < iv.lo - slack) && !(iv.hi + slack < x);
}

bool within(const Interval& inner, const Interval& outer, const NumberPolicy& p) {
    return contains_closed(outer, inner.lo, p) && contains_closed(outer, inner.hi, p);
}

std::vector<std::vector<int>> tarjan_components(const std::vector<std::vector<int>>& out) {
    const int n = int(out.size());
    std::vector<int> index(std::size_t(n), -1), low(std::size_t(n), 0), stk;
    std::vector<char> onstk(std::size_t(n), 0);
    std::vector<std::vector<int>> comps;
    int counter = 0;
    struct Frame {
        int v;
        std::size_t child;
    };
    for (int s = 0; s < n; ++s) {
        if (index[std::size_t(s)] >= 0) continue;
        std::vector<Frame> call{{s, 0}};
        index[std::size_t(s)] = low[std::size_t(s)] = counter++;
        stk.push_back(s);
        onstk[std::size_t(s)] = 1;
        while (!call.empty()) {
            Frame& f = call.back();
            if (f.child < out[std::size_t(f.v)].size()) {
                const int w = out[std::size_t(f.v)][f.child++];
                if (index[std::size_t(w)] < 0) {
                    index[std::size_t(w)] = low[std::size_t(w)] = counter++;
                    stk.push_back(w);
                    onstk[std::size_t(w)] = 1;
                    call.push_back({w, 0});
                } else if (onstk[std::size_t(w)]) {
                    low[std::size_t(f.v)] =
                        std::min(low[std::size_t(f.v)], index[std::size_t(w)]);
                }
            } else {
                const int v = f.v;
                call.pop_back();
                if (!call.empty())
                    low[std::size_t(call.back().v)] =
                        std::min(low[std::size_t(call.back().v)], low[std::size_t(v)]);
                if (low[std::size_t(v)] == index[std::size_t(v)]) {
                    std::vector<int> comp;
                    while (true) {
                        const int w = stk.back();
                        stk.pop_back();
                        onstk[std::size_t(w)] = 0;
                        comp.push_back(w);
                        if (w == v) break;
                    }
                    std::sort(comp.begin(), comp.end());
                    comps.push_back(std::move(comp));
                }
            }
        }
    }
    std::sort(comps.begin(), comps.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return comps;
}

// Perron root of one component's adjacency, by power iteration on A+I
// (primitive for irreducible A, so the iteration always converges).
double component_rho(const std::vector<std::vector<int>>& out, const std::vector<int>& ids) {
    if (ids.size() == 1) {
        const int v = ids[0];
        if (!std::binary_search(out[std::size_t(v)].begin(), out[std::size_t(v)].end(), v))
            return 0.0;
    }
    const std::size_t m = ids.size();
    std::map<int, std::size_t> pos;
    for (std::size_t i = 0; i < m; ++i) pos[ids[i]] = i;
    std::vector<std::vector<std::size_t>> adj(m);
    for (std::size_t i = 0; i < m; ++i)
        for (int t : out[std::size_t(ids[i])]) {
            auto it = pos.find(t);
            if (it != pos.end()) adj[i].push_back(it->second);
        }
    std::vector<double> x(m, 1.0), y(m, 0.0);
    double lam = 1.0;
    for (int iter = 0; iter < 200000; ++iter) {
        for (std::size_t i = 0; i < m; ++i) {
            double acc = x[i];
            for (std::size_t j : adj[i]) acc += x[j];
            y[i] = acc;
        }
        double num = 0.0, den = 0.0, norm = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            num += x[i] * y[i];
            den += x[i] * x[i];
            norm = std::max(norm, y[i]);
        }
        lam = num / den;
        double resid = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            resid = std::max(resid, std::abs(y[i] - lam * x[i]));
            x[i] = y[i] / norm;
        }
        if (resid <= 1e-13 * lam) break;
    }
    return lam - 1.0;
}

} // namespace

std::vector<Scc> scc_decompose(const Diagram& d) {
    std::vector<Scc> out;
    double max_rho = 0.0;
    for (auto& ids : tarjan_components(d.out)) {
        Scc s;
        s.rho = component_rho(d.out, ids);
        s.vertex_ids = std::move(ids);
        max_rho = std::max(max_rho, s.rho);
        out.push_back(std::move(s));
    }
    for (Scc& s : out) s.maximal = max_rho > 0.0 && s.rho >= max_rho - 1e-12;
    return out;
}

IrreducibilityCertificate check_irreducibility(const PiecewiseMonotoneMap& map,
                                               const Interval& I, int tau_max,
                                               long queue_cap) {
    ScopedPrecision prec(map.policy.precision_bits);
    IrreducibilityCertificate cert;
    cert.input = I;
    if (tau_max < 1) throw std::domain_error("tau_max must be positive");
    if (iv_empty(I, map.policy)) throw std::domain_error("seed interval is empty");
    const Scalar zero = map.policy.is_exact() ? Scalar(Rational(0)) : Scalar(BigFloat(0));
    const Scalar one = map.policy.is_exact() ? Scalar(Rational(1)) : Scalar(BigFloat(1));
    if (I.lo < zero || I.hi > one) throw std::domain_error("seed interval outside [0,1]");
    const Interval full{zero, one};

    struct State {
        Interval iv;
        Word chain;
    };
    const Scalar min_width(BigFloat(map.policy.is_exact() ? 0.0 : 100.0 * map.policy.tolerance));
    std::deque<State> queue{{I, {}}};
    std::set<std::pair<Rational, Rational>> seen_this_level;
    int level = 0;
    while (!queue.empty()) {
        const State st = std::move(queue.front());
        queue.pop_front();
        if (int(st.chain.size()) >= tau_max) continue;
        if (int(st.chain.size()) > level) {
            level = int(st.chain.size());
            seen_this_level.clear();
        }
        for (int l = 1; l <= map.k; ++l) {
            Interval w = iv_intersect(st.iv, map.branches[l - 1].domain);
            if (iv_empty(w, map.policy)) continue;
            if (!map.policy.is_exact() && iv_width(w) <= min_width) continue;
            Interval child = map.branches[l - 1].image_of(w);
            cert.max_width = std::max(cert.max_width, iv_width(child).to_double());
            Word chain = st.chain;
            chain.push_back(l);
            if (iv_same(child, full, map.policy)) {
                cert.found = true;
                cert.tau = int(chain.size());
                cert.chain = std::move(chain);
                // recover L by pulling (0,1) back through the chain
                Interval L = full;
                for (std::size_t j = cert.chain.size(); j-- > 0;)
                    L = map.branches[std::size_t(cert.chain[j]) - 1].pull_back(L);
                cert.L = iv_intersect(L, I);
                return cert;
            }
            if (map.policy.is_exact()) {
                auto key = std::make_pair(child.lo.rat(), child.hi.rat());
                if (!seen_this_level.insert(key).second) continue;
            }
            if (long(queue.size()) >= queue_cap)
                throw resource_error("irreducibility search queue exceeds " +
                                     std::to_string(queue_cap));
            queue.push_back({std::move(child), std::move(chain)});
        }
    }
    return cert;
}

bool verify_certificate(const PiecewiseMonotoneMap& map,
                        const IrreducibilityCertificate& cert) {
    if (!cert.found || cert.chain.empty() || int(cert.chain.size()) != cert.tau)
        return false;
    ScopedPrecision prec(map.policy.precision_bits);
    Interval j = cert.L;
    if (iv_empty(j, map.policy)) return false;
    if (!within(j, cert.input, map.policy)) return false;
    for (int l : cert.chain) {
        if (l < 1 || l > map.k) return false;
        const Branch& br = map.branches[std::size_t(l) - 1];
        if (!within(j, br.domain, map.policy)) return false;
        j = br.image_of(j);
    }
    const Scalar zero = map.policy.is_exact() ? Scalar(Rational(0)) : Scalar(BigFloat(0));
    const Scalar one = map.policy.is_exact() ? Scalar(Rational(1)) : Scalar(BigFloat(1));
    return iv_same(j, {zero, one}, map.policy);
}

std::vector<std::vector<int>> simple_cycles(const Diagram& d, int p_max, long cycle_cap) {
    if (p_max < 1) throw std::domain_error("cycle length bound must be positive");
    std::vector<std::vector<int>> cycles;
    const int n = int(d.vertices.size());
    std::vector<char> onpath(std::size_t(n), 0);
    std::vector<int> path;
    auto dfs = [&](auto&& self, int start, int v) -> void {
        path.push_back(v);
        onpath[std::size_t(v)] = 1;
        for (int t : d.out[std::size_t(v)]) {
            if (t == start) {
                if (long(cycles.size()) >= cycle_cap)
                    throw resource_error("cycle count exceeds " + std::to_string(cycle_cap));
                cycles.push_back(path);
            } else if (t > start && !onpath[std::size_t(t)] && int(path.size()) < p_max) {
                self(self, start, t);
            }
        }
        onpath[std::size_t(v)] = 0;
        path.pop_back();
    };
    for (int start = 0; start < n; ++start) dfs(dfs, start, start);
    return cycles;
}

PeriodicPoint periodic_points(const Diagram& d, const std::vector<int>& cycle) {
    if (cycle.empty()) throw std::domain_error("empty cycle");
    const int n = int(d.vertices.size());
    for (std::size_t i = 0; i < cycle.size(); ++i) {
        const int from = cycle[i], to = cycle[(i + 1) % cycle.size()];
        if (from < 0 || from >= n || to < 0 || to >= n)
            throw std::domain_error("cycle vertex out of range");
        const auto& targets = d.out[std::size_t(from)];
        if (!std::binary_search(targets.begin(), targets.end(), to))
            throw std::domain_error("cycle arrows do not close");
    }
    const PiecewiseMonotoneMap& map = *d.map;
    ScopedPrecision prec(map.policy.precision_bits);

    PeriodicPoint out;
    out.cycle = cycle;
    for (int id : cycle) out.word.push_back(d.vertices[std::size_t(id)].symbol);

    // compose the branch chain into one affine map A x + B
    Scalar A = map.policy.is_exact() ? Scalar(Rational(1)) : Scalar(BigFloat(1));
    Scalar B = map.policy.is_exact() ? Scalar(Rational(0)) : Scalar(BigFloat(0));
    for (int s : out.word) {
        const Branch& br = map.branches[std::size_t(s) - 1];
        A = br.slope * A;
        B = br.slope * B + br.intercept;
    }
    const Scalar one = map.policy.is_exact() ? Scalar(Rational(1)) : Scalar(BigFloat(1));
    out.x = B / (one - A);

    out.ok = true;
    Scalar x = out.x;
    for (std::size_t i = 0; i < cycle.size(); ++i) {
        out.orbit.push_back(x);
        const Interval& iv = d.vertices[std::size_t(cycle[i])].interval;
        if (!contains_closed(iv, x, map.policy)) {
            out.ok = false;
            out.note = "orbit point " + std::to_string(i) + " leaves its vertex interval";
        }
        if (map.on_breakpoint(x)) out.boundary_touch = true;
        x = map.branches[std::size_t(out.word[i]) - 1].apply(x);
    }
    out.residual = abs(x - out.x).to_double();
    return out;
}

namespace {

json policy_to_json(const NumberPolicy& p) {
    json j = json::object();
    j["mode"] = p.is_exact() ? "exact" : "approx";
    j["precision_bits"] = p.precision_bits;
    j["tolerance"] = p.tolerance;
    return j;
}

NumberPolicy policy_from_json(const json& j) {
    NumberPolicy p;
    const std::string mode = j.at("mode").get<std::string>();
    if (mode == "exact")
        p = NumberPolicy::exact();
    else if (mode == "approx")
        p = NumberPolicy::approx();
    else
        throw std::domain_error("bad number mode '" + mode + "'");
    p.precision_bits = j.at("precision_bits").get<unsigned>();
    p.tolerance = j.at("tolerance").get<double>();
    return p;
}

} // namespace

std::string diagram_to_json(const Diagram& d) {
    json j = json::object();
    j["k"] = d.k;
    j["map"] = json::parse(d.map->spec_text);
    j["policy"] = policy_to_json(d.policy);
    j["roots"] = d.roots;
    j["truncation_level"] = d.truncation_level;
    j["stabilized"] = d.stabilized;
    j["stabilized_at"] = d.stabilized_at;
    json vs = json::array();
    for (const Vertex& v : d.vertices) {
        json e = json::object();
        e["id"] = v.id;
        e["symbol"] = v.symbol;
        e["lo"] = scalar_to_string(v.interval.lo);
        e["hi"] = scalar_to_string(v.interval.hi);
        e["level"] = v.level;
        e["complete"] = v.complete;
        vs.push_back(std::move(e));
    }
    j["vertices"] = std::move(vs);
    json as = json::array();
    for (const auto& [from, to] : d.arrows) as.push_back(json::array({from, to}));
    j["arrows"] = std::move(as);
    return j.dump();
}

Diagram diagram_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw std::domain_error(std::string("diagram: ") + e.what());
    }
    try {
        Diagram d;
        d.policy = policy_from_json(j.at("policy"));
        d.map = std::make_shared<PiecewiseMonotoneMap>(
            map_from_json(j.at("map").dump(), d.policy));
        ScopedPrecision prec(d.policy.precision_bits);
        d.k = j.at("k").get<int>();
        d.truncation_level = j.at("truncation_level").get<int>();
        d.stabilized = j.at("stabilized").get<bool>();
        d.stabilized_at = j.at("stabilized_at").get<int>();
        d.roots = j.at("roots").get<std::vector<int>>();
        for (const json& e : j.at("vertices")) {
            Vertex v;
            v.id = e.at("id").get<int>();
            v.symbol = e.at("symbol").get<int>();
            v.interval.lo = scalar_from_string(e.at("lo").get<std::string>(), d.policy);
            v.interval.hi = scalar_from_string(e.at("hi").get<std::string>(), d.policy);
            v.level = e.at("level").get<int>();
            v.complete = e.at("complete").get<bool>();
            if (v.id != int(d.vertices.size()))
                throw std::domain_error("diagram: vertex ids must be 0..n-1 in order");
            d.vertices.push_back(std::move(v));
        }
        for (const json& e : j.at("arrows")) {
            if (!e.is_array() || e.size() != 2)
                throw std::domain_error("diagram: arrows must be [from,to] pairs");
            d.arrows.emplace_back(e[0].get<int>(), e[1].get<int>());
        }
        std::sort(d.arrows.begin(), d.arrows.end());
        d.out.assign(d.vertices.size(), {});
        for (const auto& [from, to] : d.arrows) {
            if (from < 0 || to < 0 || from >= int(d.vertices.size()) ||
                to >= int(d.vertices.size()))
                throw std::domain_error("diagram: arrow endpoint out of range");
            d.out[std::size_t(from)].push_back(to);
        }
        return d;
    } catch (const json::exception& e) {
        throw std::domain_error(std::string("diagram: ") + e.what());
    }
}

} // namespace symdyn
