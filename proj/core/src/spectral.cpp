#include "symdyn/spectral.hpp"

#include "symdyn/coding.hpp"

#include <json.hpp>

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>

namespace symdyn {

using nlohmann::json;

namespace {

// forward and backward reachability from node 0 must each cover the graph
bool strongly_connected(const Matrix& M) {
    const std::size_t n = M.n;
    auto covers = [&](bool transpose) {
        std::vector<char> seen(n, 0);
        std::deque<std::size_t> queue{0};
        seen[0] = 1;
        std::size_t count = 1;
        while (!queue.empty()) {
            const std::size_t v = queue.front();
            queue.pop_front();
            for (std::size_t w = 0; w < n; ++w) {
                const double entry = transpose ? M(w, v) : M(v, w);
                if (entry != 0.0 && !seen[w]) {
                    seen[w] = 1;
                    ++count;
                    queue.push_back(w);
                }
            }
        }
        return count == n;
    };
    return covers(false) && covers(true);
}

} // namespace

PerronResult spectral_radius(const Matrix& M, double tol) {
    const std::size_t n = M.n;
    if (n == 0) throw std::invalid_argument("empty matrix");
    if (n == 1) {
        if (M(0, 0) <= 0.0) throw std::invalid_argument("1x1 matrix without a loop is reducible");
        return {M(0, 0), {1.0}, {1.0}};
    }
    if (!strongly_connected(M))
        throw std::invalid_argument("matrix pattern is not irreducible");

    std::vector<double> r(n, 1.0 / double(n)), l(n, 1.0 / double(n)), yr(n), yl(n);
    const double step_tol = std::min(tol, 1e-13);
    for (long iter = 0; iter < 1000000; ++iter) {
        // one step of M+I on both sides, renormalized to unit sum
        for (std::size_t i = 0; i < n; ++i) {
            double acc = r[i];
            for (std::size_t j = 0; j < n; ++j) acc += M(i, j) * r[j];
            yr[i] = acc;
        }
        for (std::size_t j = 0; j < n; ++j) {
            double acc = l[j];
            for (std::size_t i = 0; i < n; ++i) acc += M(i, j) * l[i];
            yl[j] = acc;
        }
        const double sr = std::accumulate(yr.begin(), yr.end(), 0.0);
        const double sl = std::accumulate(yl.begin(), yl.end(), 0.0);
        double delta = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            yr[i] /= sr;
            yl[i] /= sl;
            delta = std::max(delta, std::abs(yr[i] - r[i]));
            delta = std::max(delta, std::abs(yl[i] - l[i]));
        }
        r.swap(yr);
        l.swap(yl);
        if (delta <= step_tol) break;
    }

    // two-sided Rayleigh quotient: error is quadratic in the vector error
    double lyr = 0.0, lr = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) acc += M(i, j) * r[j];
        lyr += l[i] * acc;
        lr += l[i] * r[i];
    }
    PerronResult out;
    out.lambda = lyr / lr;
    const double rsum = std::accumulate(r.begin(), r.end(), 0.0);
    for (double& x : r) x /= rsum;
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += l[i] * r[i];
    for (double& x : l) x /= s;
    for (std::size_t i = 0; i < n; ++i)
        if (!(r[i] > 0.0) || !(l[i] > 0.0) || !std::isfinite(out.lambda))
            throw std::invalid_argument("Perron vectors degenerate; matrix not irreducible");
    out.r = std::move(r);
    out.l = std::move(l);
    return out;
}

int pattern_period(const Matrix& M) {
    const std::size_t n = M.n;
    if (n == 0) return 1;
    std::vector<long> level(n, -1);
    std::deque<std::size_t> queue{0};
    level[0] = 0;
    while (!queue.empty()) {
        const std::size_t v = queue.front();
        queue.pop_front();
        for (std::size_t w = 0; w < n; ++w)
            if (M(v, w) != 0.0 && level[w] < 0) {
                level[w] = level[v] + 1;
                queue.push_back(w);
            }
    }
    long g = 0;
    for (std::size_t v = 0; v < n; ++v)
        for (std::size_t w = 0; w < n; ++w)
            if (M(v, w) != 0.0) g = std::gcd(g, std::abs(level[v] + 1 - level[w]));
    return g == 0 ? 1 : int(g);
}

Matrix adjacency_matrix(const Diagram& d, const std::vector<int>& subset) {
    Matrix M(subset.size());
    std::vector<int> pos(d.vertices.size(), -1);
    for (std::size_t i = 0; i < subset.size(); ++i) pos[std::size_t(subset[i])] = int(i);
    for (const auto& [from, to] : d.arrows) {
        const int pf = pos[std::size_t(from)], pt = pos[std::size_t(to)];
        if (pf >= 0 && pt >= 0) M(std::size_t(pf), std::size_t(pt)) = 1.0;
    }
    return M;
}

namespace {

// first maximal component; components come ordered by least vertex id
const Scc* pick_dominant(const std::vector<Scc>& sccs) {
    for (const Scc& s : sccs)
        if (s.maximal && s.rho > 0.0) return &s;
    return nullptr;
}

} // namespace

EntropyEstimate entropy_estimate(const PiecewiseMonotoneMap& map, int N) {
    const Diagram d = build_truncation(map, N);
    const auto sccs = scc_decompose(d);
    const Scc* best = pick_dominant(sccs);
    if (!best)
        throw std::domain_error("no component with positive spectral radius at depth " +
                                std::to_string(N));
    EntropyEstimate e;
    e.scc = best->vertex_ids;
    e.scc_size = int(e.scc.size());
    e.depth = N;
    e.lambda = spectral_radius(adjacency_matrix(d, e.scc)).lambda;
    e.h = std::log(e.lambda);
    return e;
}

MMEModel mme_on_truncation(const Diagram& d) {
    const auto sccs = scc_decompose(d);
    const Scc* best = pick_dominant(sccs);
    if (!best)
        throw std::domain_error("no component with positive spectral radius; deepen the truncation");

    MMEModel m;
    m.diagram = std::make_shared<Diagram>(d);
    m.scc = best->vertex_ids;
    m.scc_pos.assign(d.vertices.size(), -1);
    for (std::size_t i = 0; i < m.scc.size(); ++i)
        m.scc_pos[std::size_t(m.scc[i])] = int(i);
    m.M = adjacency_matrix(d, m.scc);
    const PerronResult perron = spectral_radius(m.M);
    m.lambda = perron.lambda;
    m.h = std::log(m.lambda);
    m.period = pattern_period(m.M);

    const std::size_t n = m.scc.size();
    m.P = Matrix(n);
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            m.P(i, j) = m.M(i, j) * perron.r[j] / (m.lambda * perron.r[i]);
            row += m.P(i, j);
        }
        for (std::size_t j = 0; j < n; ++j) m.P(i, j) /= row;
    }
    m.pi.resize(n);
    double psum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        m.pi[i] = perron.l[i] * perron.r[i];
        psum += m.pi[i];
    }
    for (double& p : m.pi) p /= psum;
    m.L.resize(n);
    m.R = perron.r;
    for (std::size_t i = 0; i < n; ++i) m.L[i] = m.lambda * perron.l[i];
    return m;
}

double project_cylinder_mass(const MMEModel& model, const Word& u) {
    if (u.empty()) return 1.0;
    const std::size_t n = model.scc.size();
    // carry one factor 1/lambda per letter so long words cannot overflow
    std::vector<double> v(n, 0.0), w(n);
    for (std::size_t i = 0; i < n; ++i)
        if (model.symbol_at(i) == u[0]) v[i] = model.L[i] / model.lambda;
    for (std::size_t step = 1; step < u.size(); ++step) {
        for (std::size_t j = 0; j < n; ++j) {
            w[j] = 0.0;
            if (model.symbol_at(j) != u[step]) continue;
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) acc += v[i] * model.M(i, j);
            w[j] = acc / model.lambda;
        }
        v.swap(w);
    }
    double mass = 0.0;
    for (std::size_t i = 0; i < n; ++i) mass += v[i] * model.R[i];
    return mass;
}

GibbsReport gibbs_check(const MMEModel& model, const std::vector<int>& F, int n_max) {
    if (n_max < 1) throw std::domain_error("n_max must be positive");
    if (F.empty()) throw std::domain_error("F must be nonempty");
    GibbsReport g;
    g.F = F;
    std::sort(g.F.begin(), g.F.end());
    for (int id : g.F)
        if (!std::binary_search(model.scc.begin(), model.scc.end(), id))
            throw std::domain_error("F must be a subset of the analyzed component");
    g.n_max = n_max;
    g.depth = model.diagram->truncation_level;

    const double Lsum = std::accumulate(model.L.begin(), model.L.end(), 0.0);
    const double Rsup = *std::max_element(model.R.begin(), model.R.end());
    double minL = std::numeric_limits<double>::infinity();
    double minR = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> fpos;
    for (int id : g.F) {
        const std::size_t p = std::size_t(model.scc_pos[std::size_t(id)]);
        fpos.push_back(p);
        minL = std::min(minL, model.L[p]);
        minR = std::min(minR, model.R[p]);
    }
    g.K = std::max({2.0, Lsum * Rsup, 1.0 / (minL * minR)});

    g.min_ratio = std::numeric_limits<double>::infinity();
    const PiecewiseMonotoneMap& map = *model.diagram->map;
    for (int n = 1; n <= n_max; ++n) {
        const double enh = std::exp(-double(n) * model.h);
        for (const Word& u : enumerate_words(map, n)) {
            const double mass = project_cylinder_mass(model, u);
            g.max_ratio = std::max(g.max_ratio, mass / enh);
            ++g.upper_words;
            if (mass > g.K * enh * (1.0 + 1e-9))
                g.violations.push_back({u, mass, g.K * enh, true});
        }
        // words spelled by paths staying inside F
        std::set<Word> internal;
        Word prefix;
        auto dfs = [&](auto&& self, std::size_t pos) -> void {
            prefix.push_back(model.symbol_at(pos));
            if (int(prefix.size()) == n) {
                internal.insert(prefix);
            } else {
                for (std::size_t next : fpos)
                    if (model.M(pos, next) != 0.0) self(self, next);
            }
            prefix.pop_back();
        };
        for (std::size_t start : fpos) dfs(dfs, start);
        for (const Word& u : internal) {
            const double mass = project_cylinder_mass(model, u);
            g.min_ratio = std::min(g.min_ratio, mass / enh);
            ++g.lower_words;
            if (mass < enh / g.K * (1.0 - 1e-9))
                g.violations.push_back({u, mass, enh / g.K, false});
        }
    }
    if (!std::isfinite(g.min_ratio)) g.min_ratio = 0.0;
    return g;
}

namespace {

Matrix tilted_matrix(const MMEModel& model, const std::vector<double>& f, double q,
                     double& c_out) {
    if (int(f.size()) != model.diagram->k)
        throw std::domain_error("potential must assign one value per symbol");
    const std::size_t n = model.scc.size();
    std::vector<double> fs(n);
    for (std::size_t i = 0; i < n; ++i) fs[i] = f[std::size_t(model.symbol_at(i)) - 1];
    const double c = q >= 0.0 ? *std::max_element(fs.begin(), fs.end())
                              : *std::min_element(fs.begin(), fs.end());
    c_out = c;
    Matrix Mq(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (model.M(i, j) != 0.0) {
                double w = std::exp(q * (fs[j] - c));
                // keep the pattern intact even when the weight underflows
                if (w == 0.0) w = DBL_MIN;
                Mq(i, j) = w;
            }
    return Mq;
}

} // namespace

double pressure(const MMEModel& model, const std::vector<double>& f, double q) {
    double c = 0.0;
    const Matrix Mq = tilted_matrix(model, f, q, c);
    return q * c + std::log(spectral_radius(Mq).lambda);
}

double pressure_derivative(const MMEModel& model, const std::vector<double>& f, double q) {
    double c = 0.0;
    const Matrix Mq = tilted_matrix(model, f, q, c);
    const PerronResult p = spectral_radius(Mq);
    double mean = 0.0;
    for (std::size_t i = 0; i < model.scc.size(); ++i)
        mean += p.l[i] * p.r[i] * f[std::size_t(model.symbol_at(i)) - 1];
    return mean;
}

std::string mme_to_json(const MMEModel& m) {
    json j = json::object();
    j["lambda"] = m.lambda;
    j["h"] = m.h;
    j["period"] = m.period;
    j["depth"] = m.diagram->truncation_level;
    json scc = json::array();
    for (int id : m.scc) {
        const Vertex& v = m.diagram->vertices[std::size_t(id)];
        json e = json::object();
        e["id"] = v.id;
        e["symbol"] = v.symbol;
        e["lo"] = scalar_to_string(v.interval.lo);
        e["hi"] = scalar_to_string(v.interval.hi);
        scc.push_back(std::move(e));
    }
    j["scc"] = std::move(scc);
    j["pi"] = m.pi;
    j["L"] = m.L;
    j["R"] = m.R;
    json P = json::array();
    for (std::size_t i = 0; i < m.P.n; ++i) {
        json row = json::array();
        for (std::size_t k = 0; k < m.P.n; ++k) row.push_back(m.P(i, k));
        P.push_back(std::move(row));
    }
    j["P"] = std::move(P);
    return j.dump();
}

std::string gibbs_report_to_json(const GibbsReport& g, const MMEModel& m) {
    json j = json::object();
    j["K"] = g.K;
    j["n_max"] = g.n_max;
    j["depth"] = g.depth;
    j["h"] = m.h;
    j["F"] = g.F;
    j["upper_words"] = g.upper_words;
    j["lower_words"] = g.lower_words;
    j["max_ratio"] = g.max_ratio;
    j["min_ratio"] = g.min_ratio;
    j["ok"] = g.violations.empty();
    json vs = json::array();
    for (const GibbsViolation& v : g.violations) {
        json e = json::object();
        e["word"] = word_to_string(v.word);
        e["mass"] = v.mass;
        e["bound"] = v.bound;
        e["side"] = v.upper ? "upper" : "lower";
        vs.push_back(std::move(e));
    }
    j["violations"] = std::move(vs);
    return j.dump();
}

} // namespace symdyn
