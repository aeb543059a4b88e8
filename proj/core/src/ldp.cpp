#include "symdyn/ldp.hpp"

#include "symdyn/errors.hpp"
#include "symdyn/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <thread>

namespace symdyn {

using nlohmann::json;

Observable make_indicator(int k, int sym) {
    if (sym < 1 || sym > k) throw std::domain_error("indicator symbol out of range");
    Observable o;
    o.name = "sym=" + std::to_string(sym);
    o.values.assign(std::size_t(k), 0.0);
    o.values[std::size_t(sym) - 1] = 1.0;
    return o;
}

EmpiricalStats empirical_stats(const Word& word, int k,
                               const std::vector<Observable>& observables) {
    EmpiricalStats st;
    st.n = int(word.size());
    st.freq.assign(std::size_t(k), 0.0);
    for (int s : word) {
        if (s < 1 || s > k) throw std::domain_error("symbol out of range in word");
        st.freq[std::size_t(s) - 1] += 1.0;
    }
    if (st.n > 0)
        for (double& v : st.freq) v /= double(st.n);
    for (const Observable& o : observables) {
        if (int(o.values.size()) != k)
            throw std::domain_error("observable must assign one value per symbol");
        double acc = 0.0;
        for (int s : word) acc += o.values[std::size_t(s) - 1];
        st.averages.push_back(st.n > 0 ? acc / double(st.n) : 0.0);
    }
    return st;
}

namespace {

std::size_t pick_from_cdf(const std::vector<double>& cdf, double u) {
    for (std::size_t i = 0; i + 1 < cdf.size(); ++i)
        if (u < cdf[i]) return i;
    return cdf.size() - 1;
}

std::vector<double> prefix_sums(const double* row, std::size_t m) {
    std::vector<double> cdf(m);
    double acc = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        acc += row[i];
        cdf[i] = acc;
    }
    return cdf;
}

} // namespace

SamplePath sample_mme(const MMEModel& model, int n, std::uint64_t seed) {
    if (n < 1) throw std::domain_error("sample length must be positive");
    const std::size_t m = model.scc.size();
    const std::vector<double> cdf_pi = prefix_sums(model.pi.data(), m);
    std::vector<std::vector<double>> cdf_rows(m);
    for (std::size_t i = 0; i < m; ++i) cdf_rows[i] = prefix_sums(&model.P.a[i * m], m);

    rng::Stream stream(seed, 0);
    rng::TrialRng draw(stream, 0);
    SamplePath out;
    std::size_t pos = pick_from_cdf(cdf_pi, draw());
    for (int step = 0; step < n; ++step) {
        out.vertex_path.push_back(model.scc[pos]);
        out.word.push_back(model.symbol_at(pos));
        if (step + 1 < n) pos = pick_from_cdf(cdf_rows[pos], draw());
    }
    const PiecewiseMonotoneMap& map = *model.diagram->map;
    ScopedPrecision prec(map.policy.precision_bits);
    const CylinderResult cyl = cylinder_interval(map, out.word);
    const Scalar two = map.policy.is_exact() ? Scalar(Rational(2)) : Scalar(BigFloat(2));
    out.x = (cyl.interval.lo + cyl.interval.hi) / two;
    out.cylinder_width = iv_width(cyl.interval).to_double();
    return out;
}

RatePoint rate_level1(const MMEModel& model, const std::vector<double>& f, double s) {
    RatePoint rp;
    rp.s = s;
    std::vector<double> fs;
    for (std::size_t i = 0; i < model.scc.size(); ++i)
        fs.push_back(f.at(std::size_t(model.symbol_at(i)) - 1));
    const double smin = *std::min_element(fs.begin(), fs.end());
    const double smax = *std::max_element(fs.begin(), fs.end());
    if (s < smin - 1e-12 || s > smax + 1e-12) {
        rp.infinite = true;
        rp.I = std::numeric_limits<double>::infinity();
        return rp;
    }
    const auto g = [&](double q) { return q * s - pressure(model, f, q) + model.h; };
    const auto maximize = [&](double lo, double hi) {
        while (hi - lo > 1e-8) {
            const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
            if (g(m1) < g(m2))
                lo = m1;
            else
                hi = m2;
        }
        return 0.5 * (lo + hi);
    };
    double q = maximize(-50.0, 50.0);
    if (std::min(q + 50.0, 50.0 - q) < 1e-4) {
        q = maximize(-500.0, 500.0);
        if (std::min(q + 500.0, 500.0 - q) < 1e-4) {
            // supremum not attained inside the widened range: genuine infinity
            // unless the pressure slope has already reached s (flat tail)
            if (std::abs(s - pressure_derivative(model, f, q)) > 1e-6) {
                rp.infinite = true;
                rp.q_star = q;
                rp.I = std::numeric_limits<double>::infinity();
                return rp;
            }
            rp.boundary_hit = true;
        }
    }
    rp.q_star = q;
    rp.I = std::max(g(q), 0.0);
    return rp;
}

DeviationEstimate deviation_probability(const MMEModel& model, const std::vector<double>& f,
                                        double lo, double hi, const std::vector<int>& n_grid,
                                        std::uint64_t trials, std::uint64_t seed,
                                        const DeviationOptions& opts) {
    if (n_grid.empty()) throw std::domain_error("empty n grid");
    if (trials == 0) throw std::domain_error("need at least one trial");
    if (lo > hi) throw std::domain_error("deviation interval is empty");
    const std::size_t m = model.scc.size();
    std::vector<double> fs(m);
    for (std::size_t i = 0; i < m; ++i) fs[i] = f.at(std::size_t(model.symbol_at(i)) - 1);
    const std::vector<double> cdf_pi = prefix_sums(model.pi.data(), m);
    std::vector<std::vector<double>> cdf_rows(m);
    for (std::size_t i = 0; i < m; ++i) cdf_rows[i] = prefix_sums(&model.P.a[i * m], m);

    DeviationEstimate est;
    est.lo = lo;
    est.hi = hi;
    for (std::size_t ni = 0; ni < n_grid.size(); ++ni) {
        const int n = n_grid[ni];
        if (n < 1) throw std::domain_error("n grid entries must be positive");
        const rng::Stream stream(seed, opts.stream_base + std::uint32_t(ni));
        const double lo_sum = double(n) * lo - 1e-9;
        const double hi_sum = double(n) * hi + 1e-9;
        auto run = [&](std::uint64_t t0, std::uint64_t t1) -> std::uint64_t {
            std::uint64_t hits = 0;
            for (std::uint64_t t = t0; t < t1; ++t) {
                rng::TrialRng draw(stream, t);
                std::size_t pos = pick_from_cdf(cdf_pi, draw());
                double sum = fs[pos];
                for (int step = 1; step < n; ++step) {
                    pos = pick_from_cdf(cdf_rows[pos], draw());
                    sum += fs[pos];
                }
                if (sum >= lo_sum && sum <= hi_sum) ++hits;
            }
            return hits;
        };
        std::uint64_t hits = 0;
        const int jobs = std::max(1, opts.jobs);
        if (jobs == 1 || trials < 1024) {
            hits = run(0, trials);
        } else {
            std::vector<std::uint64_t> parts(std::size_t(jobs), 0);
            std::vector<std::thread> pool;
            const std::uint64_t chunk = (trials + std::uint64_t(jobs) - 1) / std::uint64_t(jobs);
            for (int w = 0; w < jobs; ++w) {
                const std::uint64_t t0 = std::min(trials, chunk * std::uint64_t(w));
                const std::uint64_t t1 = std::min(trials, t0 + chunk);
                pool.emplace_back([&, w, t0, t1] { parts[std::size_t(w)] = run(t0, t1); });
            }
            for (auto& th : pool) th.join();
            hits = std::accumulate(parts.begin(), parts.end(), std::uint64_t(0));
        }
        DeviationCell cell;
        cell.n = n;
        cell.hits = hits;
        cell.trials = trials;
        cell.p = double(hits) / double(trials);
        cell.se = std::sqrt(cell.p * (1.0 - cell.p) / double(trials));
        cell.censored = hits == 0;
        cell.rate = cell.censored ? std::log(double(trials)) / double(n)
                                  : -std::log(cell.p) / double(n);
        est.cells.push_back(cell);
    }

    // regress rate on 1/n; the intercept removes the O(1/n) constant offset
    std::vector<double> xs, ys;
    for (const DeviationCell& c : est.cells)
        if (!c.censored) {
            xs.push_back(1.0 / double(c.n));
            ys.push_back(c.rate);
        }
    est.used = int(xs.size());
    if (est.used == 0) {
        est.fitted_rate = std::numeric_limits<double>::infinity();
    } else if (est.used == 1) {
        est.fitted_rate = ys[0];
    } else {
        const double xbar = std::accumulate(xs.begin(), xs.end(), 0.0) / double(est.used);
        const double ybar = std::accumulate(ys.begin(), ys.end(), 0.0) / double(est.used);
        double sxx = 0.0, sxy = 0.0;
        for (int i = 0; i < est.used; ++i) {
            sxx += (xs[std::size_t(i)] - xbar) * (xs[std::size_t(i)] - xbar);
            sxy += (xs[std::size_t(i)] - xbar) * (ys[std::size_t(i)] - ybar);
        }
        est.slope = sxy / sxx;
        est.fitted_rate = ybar - est.slope * xbar;
        if (est.used > 2) {
            double rss = 0.0;
            for (int i = 0; i < est.used; ++i) {
                const double r = ys[std::size_t(i)] - est.fitted_rate -
                                 est.slope * xs[std::size_t(i)];
                rss += r * r;
            }
            const double sigma2 = rss / double(est.used - 2);
            est.fitted_se =
                std::sqrt(sigma2 * (1.0 / double(est.used) + xbar * xbar / sxx));
        }
    }
    return est;
}

unsigned long long count_words_constrained(const Diagram& d, const std::vector<int>& F, int n,
                                           const std::vector<double>& f, double lo, double hi) {
    if (n < 1) throw std::domain_error("word length must be positive");
    if (n > 64) throw resource_error("constrained count capped at length 64");
    if (F.empty()) throw std::domain_error("F must be nonempty");
    std::vector<char> in_F(d.vertices.size(), 0);
    for (int id : F) {
        if (id < 0 || id >= int(d.vertices.size()))
            throw std::domain_error("F vertex out of range");
        in_F[std::size_t(id)] = 1;
    }
    const int k = d.k;
    std::vector<long long> qv;
    qv.assign(std::size_t(k), 0);
    for (int sym = 1; sym <= k; ++sym)
        qv[std::size_t(sym) - 1] = llround(f.at(std::size_t(sym) - 1) * 1e9);

    auto add_checked = [](unsigned long long& acc, unsigned long long v) {
        if (__builtin_add_overflow(acc, v, &acc))
            throw resource_error("constrained count overflows 64 bits");
    };

    // determinized DP: a state is the set of vertices reachable by some path
    // spelling the current word, plus the word's quantized f sum; states are
    // in bijection with (word sum class, follower set), so summing counts at
    // the end counts distinct words exactly
    using State = std::pair<std::vector<int>, long long>;
    std::map<State, unsigned long long> cur;
    for (int sym = 1; sym <= k; ++sym) {
        std::vector<int> s;
        for (int id : F)
            if (d.vertices[std::size_t(id)].symbol == sym) s.push_back(id);
        if (!s.empty()) {
            std::sort(s.begin(), s.end());
            add_checked(cur[{std::move(s), qv[std::size_t(sym) - 1]}], 1);
        }
    }
    for (int step = 1; step < n; ++step) {
        std::map<State, unsigned long long> next;
        for (const auto& [state, cnt] : cur) {
            for (int sym = 1; sym <= k; ++sym) {
                std::vector<int> succ;
                for (int id : state.first)
                    for (int t : d.out[std::size_t(id)])
                        if (in_F[std::size_t(t)] &&
                            d.vertices[std::size_t(t)].symbol == sym)
                            succ.push_back(t);
                if (succ.empty()) continue;
                std::sort(succ.begin(), succ.end());
                succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
                add_checked(next[{std::move(succ), state.second + qv[std::size_t(sym) - 1]}],
                            cnt);
            }
        }
        cur.swap(next);
    }
    unsigned long long total = 0;
    const double lo_sum = double(n) * lo - 1e-9;
    const double hi_sum = double(n) * hi + 1e-9;
    for (const auto& [state, cnt] : cur) {
        const double sum = double(state.second) * 1e-9;
        if (sum >= lo_sum && sum <= hi_sum) add_checked(total, cnt);
    }
    return total;
}

LdpReport ldp_report(const MMEModel& model, const Observable& obs,
                     const std::vector<double>& levels, const std::vector<int>& n_grid,
                     std::uint64_t trials, std::uint64_t seed, const DeviationOptions& opts) {
    const std::vector<double>& f = obs.values;
    LdpReport rep;
    rep.observable = obs.name;
    rep.f = f;
    rep.h_top = model.h;
    rep.s_star = pressure_derivative(model, f, 0.0);
    rep.n_grid = n_grid;
    rep.trials = trials;
    rep.seed = seed;

    std::vector<double> fs;
    for (std::size_t i = 0; i < model.scc.size(); ++i)
        fs.push_back(f.at(std::size_t(model.symbol_at(i)) - 1));
    const double fmin = *std::min_element(fs.begin(), fs.end());
    const double fmax = *std::max_element(fs.begin(), fs.end());
    const double range = fmax - fmin;

    for (std::size_t li = 0; li < levels.size(); ++li) {
        const double s = levels[li];
        LdpRow row;
        row.s = s;
        row.analytic = rate_level1(model, f, s);

        if (std::abs(s - rep.s_star) <= 1e-9) {
            row.tail_lo = std::max(fmin, s - 0.05 * range);
            row.tail_hi = std::min(fmax, s + 0.05 * range);
        } else if (s > rep.s_star) {
            row.tail_lo = s;
            row.tail_hi = fmax;
        } else {
            row.tail_lo = fmin;
            row.tail_hi = s;
        }
        DeviationOptions local = opts;
        local.stream_base = opts.stream_base + std::uint32_t(li * n_grid.size());
        row.mc = deviation_probability(model, f, row.tail_lo, row.tail_hi, n_grid, trials,
                                       seed, local);
        if (row.analytic.infinite)
            row.rel_err = std::numeric_limits<double>::infinity();
        else
            row.rel_err = std::abs(row.mc.fitted_rate - row.analytic.I) /
                          std::max(row.analytic.I, 1e-2);

        // growth of constrained words around s against h_top - min I;
        // the slack 0.1 absorbs the polynomial prefactor at finite n
        row.ps_lo = std::max(fmin, s - 0.1);
        row.ps_hi = std::min(fmax, s + 0.1);
        double min_I = std::numeric_limits<double>::infinity();
        for (int gi = 0; gi <= 10; ++gi) {
            const double t = row.ps_lo + (row.ps_hi - row.ps_lo) * double(gi) / 10.0;
            const RatePoint rp = rate_level1(model, f, t);
            if (!rp.infinite) min_I = std::min(min_I, rp.I);
        }
        row.ps_h = model.h - (std::isfinite(min_I) ? min_I : 0.0);
        // pick n large enough to beat finite-size effects but small enough
        // that the count stays inside 64 bits (count <= C lambda^n)
        const int n_safe = int(43.0 / std::max(model.h, 0.1));
        int n_try = std::min({40, *std::max_element(n_grid.begin(), n_grid.end()), n_safe});
        n_try = std::max(n_try, 8);
        for (;; n_try -= 8) {
            try {
                row.ps_count = count_words_constrained(*model.diagram, model.scc, n_try, f,
                                                       row.ps_lo, row.ps_hi);
                break;
            } catch (const resource_error&) {
                if (n_try <= 8) throw;
            }
        }
        row.ps_n = n_try;
        row.ps_growth = row.ps_count > 0
                            ? std::log(double(row.ps_count)) / double(row.ps_n)
                            : -std::numeric_limits<double>::infinity();
        row.ps_ok = row.ps_growth >= row.ps_h - 0.1;
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

std::string ldp_report_to_json(const LdpReport& r) {
    json j = json::object();
    j["observable"] = r.observable;
    j["f"] = r.f;
    j["h_top"] = r.h_top;
    j["s_star"] = r.s_star;
    j["n_grid"] = r.n_grid;
    j["trials"] = r.trials;
    j["seed"] = r.seed;
    json rows = json::array();
    for (const LdpRow& row : r.rows) {
        json e = json::object();
        e["s"] = row.s;
        json a = json::object();
        a["I"] = row.analytic.I;
        a["q_star"] = row.analytic.q_star;
        a["infinite"] = row.analytic.infinite;
        a["boundary_hit"] = row.analytic.boundary_hit;
        e["analytic"] = std::move(a);
        e["tail"] = json::array({row.tail_lo, row.tail_hi});
        json mc = json::object();
        mc["fitted_rate"] = row.mc.fitted_rate;
        mc["fitted_se"] = row.mc.fitted_se;
        mc["slope"] = row.mc.slope;
        mc["used"] = row.mc.used;
        json cells = json::array();
        for (const DeviationCell& c : row.mc.cells) {
            json ce = json::object();
            ce["n"] = c.n;
            ce["hits"] = c.hits;
            ce["trials"] = c.trials;
            ce["p"] = c.p;
            ce["se"] = c.se;
            ce["rate"] = c.rate;
            ce["censored"] = c.censored;
            cells.push_back(std::move(ce));
        }
        mc["cells"] = std::move(cells);
        e["mc"] = std::move(mc);
        e["rel_err"] = row.rel_err;
        json ps = json::object();
        ps["lo"] = row.ps_lo;
        ps["hi"] = row.ps_hi;
        ps["n"] = row.ps_n;
        ps["count"] = row.ps_count;
        ps["growth"] = row.ps_growth;
        ps["h_constrained"] = row.ps_h;
        ps["ok"] = row.ps_ok;
        e["count_check"] = std::move(ps);
        rows.push_back(std::move(e));
    }
    j["rows"] = std::move(rows);
    return j.dump();
}

} // namespace symdyn
