#include "cli.hpp"

#include "symdyn/coding.hpp"
#include "symdyn/diagram.hpp"
#include "symdyn/errors.hpp"
#include "symdyn/ldp.hpp"
#include "symdyn/manifest.hpp"
#include "symdyn/maps.hpp"
#include "symdyn/numeric.hpp"
#include "symdyn/spectral.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace symdyn::cli {
namespace {

using nlohmann::json;

// Post-parse problems with how the tool was invoked (cap breaches, malformed
// composite flags). Distinct from domain errors so it can map to exit 2.
class usage_error : public std::runtime_error {
public:
    explicit usage_error(const std::string& what) : std::runtime_error(what) {}
};

struct CommonArgs {
    std::string map_path;
    std::string mode;            // "" = keep the spec's inferred mode
    unsigned precision_bits = 0; // 0 = unset
    double tolerance = 0.0;      // 0 = unset
    std::string out_path;        // "" = stdout
    int jobs = 1;
    bool unsafe = false;
};

void add_common(CLI::App* sub, CommonArgs& c) {
    sub->add_option("--map", c.map_path, "map spec JSON file")->required();
    sub->add_option("--mode", c.mode, "number mode override")
        ->check(CLI::IsMember({"exact", "approx"}));
    sub->add_option("--precision-bits", c.precision_bits, "mantissa bits in approx mode")
        ->envname("SYMDYN_PRECISION_BITS");
    sub->add_option("--tolerance", c.tolerance, "comparison tolerance in approx mode");
    sub->add_option("--out", c.out_path, "output file (default stdout)");
    sub->add_option("--jobs", c.jobs, "worker threads")->check(CLI::Range(1, 256));
    sub->add_flag("--unsafe", c.unsafe, "lift the hard caps on depth/len/pmax/trials");
}

void check_cap(const CommonArgs& c, const char* flag, long long value, long long cap) {
    if (!c.unsafe && value > cap)
        throw usage_error(std::string(flag) + "=" + std::to_string(value) + " exceeds the cap " +
                          std::to_string(cap) + " (pass --unsafe to lift it)");
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::domain_error("cannot read file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

PiecewiseMonotoneMap load_map(const CommonArgs& c) {
    const std::string text = read_file(c.map_path);
    PiecewiseMonotoneMap map = map_from_json(text);
    if (c.mode.empty() && c.precision_bits == 0 && c.tolerance == 0.0) return map;
    NumberPolicy p = map.policy;
    if (!c.mode.empty())
        p = c.mode == "exact" ? NumberPolicy::exact() : NumberPolicy::approx();
    if (c.precision_bits != 0) p.precision_bits = c.precision_bits;
    if (c.tolerance != 0.0) p.tolerance = c.tolerance;
    return map_from_json(text, p);
}

RunManifest start_manifest(const std::string& command, const PiecewiseMonotoneMap& map,
                           const CommonArgs& c) {
    RunManifest m;
    m.command = command;
    m.map_spec_hash = fnv1a64_hex(map.spec_text);
    m.policy = map.policy;
    m.out_path = c.out_path.empty() ? "stdout" : c.out_path;
    return m;
}

void write_text(std::string text, const CommonArgs& c, std::ostream& out) {
    if (!text.empty() && text.back() != '\n') text.push_back('\n');
    if (c.out_path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(c.out_path, std::ios::binary);
    if (!f) throw std::domain_error("cannot open output file: " + c.out_path);
    f << text;
}

using Clock = std::chrono::steady_clock;

// Attaches the manifest (with the measured duration) and writes the artifact.
void emit_json(json payload, RunManifest& m, Clock::time_point t0, const CommonArgs& c,
               std::ostream& out) {
    m.duration_ms =
        long(std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - t0).count());
    payload["manifest"] = json::parse(manifest_to_json(m));
    write_text(payload.dump(2), c, out);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string item;
    std::stringstream ss(s);
    while (std::getline(ss, item, sep)) parts.push_back(item);
    if (!s.empty() && s.back() == sep) parts.push_back("");
    return parts;
}

std::vector<double> parse_doubles(const std::string& s, const char* flag) {
    std::vector<double> v;
    for (const std::string& item : split(s, ',')) {
        try {
            std::size_t pos = 0;
            v.push_back(std::stod(item, &pos));
            if (pos != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw usage_error(std::string(flag) + ": bad number '" + item + "'");
        }
    }
    if (v.empty()) throw usage_error(std::string(flag) + ": empty list");
    return v;
}

std::vector<int> parse_ints(const std::string& s, const char* flag) {
    std::vector<int> v;
    for (const std::string& item : split(s, ',')) {
        try {
            std::size_t pos = 0;
            v.push_back(std::stoi(item, &pos));
            if (pos != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw usage_error(std::string(flag) + ": bad integer '" + item + "'");
        }
    }
    if (v.empty()) throw usage_error(std::string(flag) + ": empty list");
    return v;
}

// "start:stop:step" (inclusive arithmetic ramp) or a comma list.
std::vector<int> parse_n_grid(const std::string& s) {
    if (s.find(':') != std::string::npos) {
        const std::vector<std::string> parts = split(s, ':');
        if (parts.size() != 3) throw usage_error("--ns: expected start:stop:step");
        const std::vector<int> p = parse_ints(parts[0] + "," + parts[1] + "," + parts[2], "--ns");
        if (p[2] <= 0 || p[0] <= 0 || p[1] < p[0]) throw usage_error("--ns: bad range");
        std::vector<int> v;
        for (int n = p[0]; n <= p[1]; n += p[2]) v.push_back(n);
        return v;
    }
    std::vector<int> v = parse_ints(s, "--ns");
    for (int n : v)
        if (n <= 0) throw usage_error("--ns: lengths must be positive");
    return v;
}

Interval parse_interval(const std::string& s, const NumberPolicy& policy) {
    const std::vector<std::string> parts = split(s, ',');
    if (parts.size() != 2) throw usage_error("--interval: expected lo,hi");
    Interval iv{scalar_from_string(parts[0], policy), scalar_from_string(parts[1], policy)};
    if (!(iv.lo < iv.hi)) throw usage_error("--interval: lo must be below hi");
    return iv;
}

// "sym=J" (indicator of branch J) or "values=v1,...,vk" (one value per symbol).
Observable parse_observable(const std::string& s, int k) {
    if (s.rfind("sym=", 0) == 0) {
        int sym = 0;
        try {
            std::size_t pos = 0;
            sym = std::stoi(s.substr(4), &pos);
            if (pos != s.size() - 4) throw std::invalid_argument(s);
        } catch (const std::exception&) {
            throw usage_error("--observable: bad symbol in '" + s + "'");
        }
        return make_indicator(k, sym);
    }
    if (s.rfind("values=", 0) == 0) {
        Observable o;
        o.name = s;
        o.values = parse_doubles(s.substr(7), "--observable");
        if (int(o.values.size()) != k)
            throw usage_error("--observable: expected " + std::to_string(k) + " values");
        return o;
    }
    throw usage_error("--observable: expected sym=J or values=v1,...,vk");
}

// --- subcommand argument bundles -------------------------------------------

struct WordsArgs {
    CommonArgs c;
    int len = 0;
};

struct CylinderArgs {
    CommonArgs c;
    std::string word;
};

struct DiagramArgs {
    CommonArgs c;
    int depth = 12;
    long budget = 2'000'000;
};

struct CheckIrrArgs {
    CommonArgs c;
    std::string interval;
    int tau_max = 64;
    long queue_cap = 1'000'000;
};

struct EntropyArgs {
    CommonArgs c;
    int depth = 12;
};

struct MmeArgs {
    CommonArgs c;
    int depth = 12;
    long budget = 2'000'000;
};

struct GibbsArgs {
    CommonArgs c;
    int depth = 12;
    int nmax = 12;
    long budget = 2'000'000;
    std::string F; // comma vertex ids; empty = dominant component
};

struct PeriodicArgs {
    CommonArgs c;
    int depth = 12;
    int pmax = 8;
    long budget = 2'000'000;
    long cycle_cap = 1'000'000;
    std::string cycle; // comma vertex ids; empty = enumerate
};

struct LdpArgs {
    CommonArgs c;
    int depth = 12;
    std::string observable = "sym=1";
    std::string levels;
    std::string ns;
    std::uint64_t trials = 100'000;
    std::uint64_t seed = 0;
    long budget = 2'000'000;
    std::string csv;
};

struct ReportArgs {
    CommonArgs c;
    int depth = 12;
    int nmax = 8;
    long budget = 2'000'000;
};

// --- handlers ---------------------------------------------------------------

int run_words(const WordsArgs& a, std::ostream& out) {
    const Clock::time_point t0 = Clock::now();
    check_cap(a.c, "--len", a.len, 24);
    const PiecewiseMonotoneMap map = load_map(a.c);
    const std::vector<Word> words = enumerate_words(map, a.len, std::max(a.len, 24));
    if (a.c.out_path.empty()) {
        // line-per-word on stdout; files get JSON so the manifest can ride along
        std::string text;
        for (const Word& u : words) {
            text += word_to_string(u);
            text += '\n';
        }
        out << text;
        return 0;
    }
    json j;
    j["count"] = words.size();
    json list = json::array();
    for (const Word& u : words) list.push_back(word_to_string(u));
    j["words"] = std::move(list);
    RunManifest m = start_manifest("words", map, a.c);
    m.params.emplace_back("len", std::to_string(a.len));
    emit_json(std::move(j), m, t0, a.c, out);
    return 0;
}

int run_cylinder(const CylinderArgs& a, std::ostream& out) {
    const Clock::time_point t0 = Clock::now();
    const PiecewiseMonotoneMap map = load_map(a.c);
    const Word u = word_from_string(a.word);
    const CylinderResult res = cylinder_interval(map, u);
    json j;
    j["word"] = word_to_string(u);
    j["empty"] = res.empty;
    j["admissible"] = is_admissible(map, u);
    if (res.empty) {
        j["lo"] = nullptr;
        j["hi"] = nullptr;
        j["width"] = 0.0;
    } else {
        j["lo"] = scalar_to_string(res.interval.lo);
        j["hi"] = scalar_to_string(res.interval.hi);
        j["width"] = iv_width(res.interval).to_double();
    }
    RunManifest m = start_manifest("cylinder", map, a.c);
    m.params.emplace_back("word", a.word);
    emit_json(std::move(j), m, t0, a.c, out);
    return 0;
}

int run_diagram(const DiagramArgs& a, std::ostream& out) {
    check_cap(a.c, "--depth", a.depth, 64);
    const Clock::time_point t0 = Clock::now();
    const PiecewiseMonotoneMap map = load_map(a.c);
    BuildOptions opts;
    opts.vertex_budget = a.budget;
    opts.jobs = a.c.jobs;
    const Diagram d = build_truncation(map, a.depth, opts);
    json j = json::parse(diagram_to_json(d));
    RunManifest m = start_manifest("diagram", map, a.c);
    m.params.emplace_back("depth", std::to_string(a.depth));
    m.params.emplace_back("budget", std::to_string(a.budget));
    m.params.emplace_back("jobs", std::to_string(a.c.jobs));
    emit_json(std::move(j), m, t0, a.c, out);
    return 0;
}

int run_check_irreducible(const CheckIrrArgs& a, std::ostream& out) {
    check_cap(a.c, "--tau-max", a.tau_max, 1000);
    const Clock::time_point t0 = Clock::now();
    const PiecewiseMonotoneMap map = load_map(a.c);
    const Interval I = parse_interval(a.interval, map.policy);
    const IrreducibilityCertificate cert = check_irreducibility(map, I, a.tau_max, a.queue_cap);
    json j;
    j["found"] = cert.found;
    j["tau"] = cert.tau;
    j["chain"] = word_to_string(cert.chain);
    j["input"] = {scalar_to_string(cert.input.lo), scalar_to_string(cert.input.hi)};
    if (cert.found)
        j["L"] = {scalar_to_string(cert.L.lo), scalar_to_string(cert.L.hi)};
    else
        j["L"] = nullptr;
    j["max_width"] = cert.max_width;
    j["verified"] = cert.found && verify_certificate(map, cert);
    RunManifest m = start_manifest("check-irreducible", map, a.c);
    m.params.emplace_back("interval", a.interval);
    m.params.emplace_back("tau_max", std::to_string(a.tau_max));
    m.params.emplace_back("queue_cap", std::to_string(a.queue_cap));
    emit_json(std::move(j), m, t0, a.c, out);
    return 0;
}

int run_entropy(const EntropyArgs& a, std::ostream& out) {
    check_cap(a.c, "--depth", a.depth, 64);
    const Clock::time_point t0 = Clock::now();
    const PiecewiseMonotoneMap map = load_map(a.c);
    const EntropyEstimate e = entropy_estimate(map, a.depth);
    json j;
    j["h"] = e.h;
    j["lambda"] = e.lambda;
    j["scc_size"] = e.scc_size;
    j["depth"] = e.depth;
    RunManifest m = start_manifest("entropy", map, a.c);
    m.params.emplace_back("depth", std::to_string(a.depth));
    emit_json(std::move(j), m, t0, a.c, out);
    return 0;
}

MMEModel model_at_depth(const PiecewiseMonotoneMap& map, int depth, long budget, int jobs) {
    BuildOptions opts;
    opts.vertex_budget = budget;
    opts.jobs = jobs;
    return mme_on_truncation(build_truncation(map, depth, opts));
}

int run_mme(const MmeArgs& a, std::ostream& out) {
    check_cap(a.c, "--depth", a.depth, 64);
    const Clock::time_point t0 = Clock::now();
    const PiecewiseMonotoneMap map = load_map(a.c);
    const MMEModel model = model_at_depth(map, a.depth, a.budget, a.c.jobs);
    json j = json::parse(mme_to_json(model));
    RunManifest m = start_manifest("mme", map, a.c);
    m.params.emplace_back("depth", std::to_string(a.depth));
    m.params.emplace_back("jobs", std::to_string(a.c.jobs));
    emit_json(std::move(j), m, t0, a.c, out);
    return 0;
}

int run_gibbs(const GibbsArgs& a, std::ostream& out) {
    check_cap(a.c, "--depth", a.depth, 64);
    check_cap(a.c, "--nmax", a.nmax, 16);
    const Clock::time_point t0 = Clock::now();
    const PiecewiseMonotoneMap map = load_map(a.c);
    const MMEModel model = model_at_depth(map, a.depth, a.budget, a.c.jobs);
    const std::vector<int> F = a.F.empty() ? model.scc : parse_ints(a.F, "--F");
    const GibbsReport rep = gibbs_check(model, F, a.nmax);
    json j = json::parse(gibbs_report_to_json(rep, model));
    RunManifest m = start_manifest("gibbs", map, a.c);
    m.params.emplace_back("depth", std::to_string(a.depth));
    m.params.emplace_back("nmax", std::to_string(a.nmax));
    if (!a.F.empty()) m.params.emplace_back("F", a.F);
    emit_json(std::move(j), m, t0, a.c, out);
    return 0;
}

json periodic_entry(const PeriodicPoint& p) {
    json e;
    e["cycle"] = p.cycle;
    e["word"] = word_to_string(p.word);
    e["ok"] = p.ok;
    e["x"] = scalar_to_string(p.x);
    json orbit = json::array();
    for (const Scalar& y : p.orbit) orbit.push_back(scalar_to_string(y));
    e["orbit"] = std::move(orbit);
    e["boundary_touch"] = p.boundary_touch;
    e["residual"] = p.residual;
    e["note"] = p.note;
    return e;
}

int run_periodic(const PeriodicArgs& a, std::ostream& out) {
    check_cap(a.c, "--depth", a.depth, 64);
    check_cap(a.c, "--pmax", a.pmax, 12);
    const Clock::time_point t0 = Clock::now();
    const PiecewiseMonotoneMap map = load_map(a.c);
    BuildOptions opts;
    opts.vertex_budget = a.budget;
    opts.jobs = a.c.jobs;
    const Diagram d = build_truncation(map, a.depth, opts);
    std::vector<std::vector<int>> cycles;
    if (a.cycle.empty())
        cycles = simple_cycles(d, a.pmax, a.cycle_cap);
    else
        cycles.push_back(parse_ints(a.cycle, "--cycle"));
    json arr = json::array();
    for (const std::vector<int>& cyc : cycles) arr.push_back(periodic_entry(periodic_points(d, cyc)));
    json j;
    j["depth"] = a.depth;
    j["p_max"] = a.pmax;
    j["count"] = arr.size();
    j["cycles"] = std::move(arr);
    RunManifest m = start_manifest("periodic", map, a.c);
    m.params.emplace_back("depth", std::to_string(a.depth));
    m.params.emplace_back("pmax", std::to_string(a.pmax));
    if (!a.cycle.empty()) m.params.emplace_back("cycle", a.cycle);
    emit_json(std::move(j), m, t0, a.c, out);
    return 0;
}

void write_csv(const LdpReport& r, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::domain_error("cannot open output file: " + path);
    f << "level,n,hits,trials,p,se,rate,censored\n";
    for (const LdpRow& row : r.rows)
        for (const DeviationCell& cell : row.mc.cells)
            f << row.s << ',' << cell.n << ',' << cell.hits << ',' << cell.trials << ','
              << cell.p << ',' << cell.se << ',' << cell.rate << ',' << (cell.censored ? 1 : 0)
              << '\n';
}

int run_ldp(const LdpArgs& a, std::ostream& out) {
    check_cap(a.c, "--depth", a.depth, 64);
    check_cap(a.c, "--trials", (long long)a.trials, 100'000'000);
    const Clock::time_point t0 = Clock::now();
    const PiecewiseMonotoneMap map = load_map(a.c);
    const Observable obs = parse_observable(a.observable, map.k);
    const std::vector<double> levels = parse_doubles(a.levels, "--levels");
    const std::vector<int> n_grid = parse_n_grid(a.ns);
    const MMEModel model = model_at_depth(map, a.depth, a.budget, a.c.jobs);
    DeviationOptions opts;
    opts.jobs = a.c.jobs;
    const LdpReport rep = ldp_report(model, obs, levels, n_grid, a.trials, a.seed, opts);
    if (!a.csv.empty()) write_csv(rep, a.csv);
    json j = json::parse(ldp_report_to_json(rep));
    RunManifest m = start_manifest("ldp", map, a.c);
    m.seed = a.seed;
    m.params.emplace_back("depth", std::to_string(a.depth));
    m.params.emplace_back("observable", a.observable);
    m.params.emplace_back("levels", a.levels);
    m.params.emplace_back("ns", a.ns);
    m.params.emplace_back("trials", std::to_string(a.trials));
    m.params.emplace_back("jobs", std::to_string(a.c.jobs));
    if (!a.csv.empty()) m.params.emplace_back("csv", a.csv);
    emit_json(std::move(j), m, t0, a.c, out);
    return 0;
}

int run_report(const ReportArgs& a, std::ostream& out) {
    check_cap(a.c, "--depth", a.depth, 64);
    check_cap(a.c, "--nmax", a.nmax, 16);
    const Clock::time_point t0 = Clock::now();
    const PiecewiseMonotoneMap map = load_map(a.c);
    BuildOptions opts;
    opts.vertex_budget = a.budget;
    opts.jobs = a.c.jobs;
    const Diagram d = build_truncation(map, a.depth, opts);
    const MMEModel model = mme_on_truncation(d);
    const GibbsReport rep = gibbs_check(model, model.scc, a.nmax);
    json j;
    j["map"] = json::parse(map_to_json(map));
    j["diagram"] = {{"vertices", d.vertices.size()},
                    {"arrows", d.arrows.size()},
                    {"truncation_level", d.truncation_level},
                    {"stabilized", d.stabilized},
                    {"stabilized_at", d.stabilized_at}};
    j["entropy"] = {{"h", model.h},
                    {"lambda", model.lambda},
                    {"scc_size", int(model.scc.size())},
                    {"depth", a.depth}};
    j["mme"] = json::parse(mme_to_json(model));
    j["gibbs"] = json::parse(gibbs_report_to_json(rep, model));
    RunManifest m = start_manifest("report", map, a.c);
    m.params.emplace_back("depth", std::to_string(a.depth));
    m.params.emplace_back("nmax", std::to_string(a.nmax));
    m.params.emplace_back("jobs", std::to_string(a.c.jobs));
    emit_json(std::move(j), m, t0, a.c, out);
    return 0;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"symbolic dynamics of piecewise monotone interval maps"};
    app.name("symdyn");
    app.require_subcommand(1);

    WordsArgs words;
    CylinderArgs cylinder;
    DiagramArgs diagram;
    CheckIrrArgs checkirr;
    EntropyArgs entropy;
    MmeArgs mme;
    GibbsArgs gibbs;
    PeriodicArgs periodic;
    LdpArgs ldp;
    ReportArgs report;

    CLI::App* s_words = app.add_subcommand("words", "admissible words of a given length");
    add_common(s_words, words.c);
    s_words->add_option("--len", words.len, "word length")->required()->check(CLI::PositiveNumber);

    CLI::App* s_cyl = app.add_subcommand("cylinder", "realizing interval of a coding word");
    add_common(s_cyl, cylinder.c);
    s_cyl->add_option("--word", cylinder.word, "comma-separated symbols, e.g. 1,2,1")->required();

    CLI::App* s_diag = app.add_subcommand("diagram", "Markov diagram truncation as JSON");
    add_common(s_diag, diagram.c);
    s_diag->add_option("--depth", diagram.depth, "truncation depth");
    s_diag->add_option("--budget", diagram.budget, "vertex budget");

    CLI::App* s_irr = app.add_subcommand("check-irreducible", "search an onto-image certificate");
    add_common(s_irr, checkirr.c);
    s_irr->add_option("--interval", checkirr.interval, "seed interval lo,hi")->required();
    s_irr->add_option("--tau-max", checkirr.tau_max, "maximum iterate");
    s_irr->add_option("--queue-cap", checkirr.queue_cap, "search queue cap");

    CLI::App* s_ent = app.add_subcommand("entropy", "topological entropy from a truncation");
    add_common(s_ent, entropy.c);
    s_ent->add_option("--depth", entropy.depth, "truncation depth");

    CLI::App* s_mme = app.add_subcommand("mme", "measure of maximal entropy on a truncation");
    add_common(s_mme, mme.c);
    s_mme->add_option("--depth", mme.depth, "truncation depth");
    s_mme->add_option("--budget", mme.budget, "vertex budget");

    CLI::App* s_gibbs = app.add_subcommand("gibbs", "two-sided cylinder mass bounds check");
    add_common(s_gibbs, gibbs.c);
    s_gibbs->add_option("--depth", gibbs.depth, "truncation depth");
    s_gibbs->add_option("--nmax", gibbs.nmax, "maximum word length checked");
    s_gibbs->add_option("--budget", gibbs.budget, "vertex budget");
    s_gibbs->add_option("--F", gibbs.F, "vertex ids for the lower bound (default dominant SCC)");

    CLI::App* s_per = app.add_subcommand("periodic", "periodic points from diagram cycles");
    add_common(s_per, periodic.c);
    s_per->add_option("--depth", periodic.depth, "truncation depth");
    s_per->add_option("--pmax", periodic.pmax, "maximum cycle length");
    s_per->add_option("--budget", periodic.budget, "vertex budget");
    s_per->add_option("--cycle-cap", periodic.cycle_cap, "cycle enumeration cap");
    s_per->add_option("--cycle", periodic.cycle, "analyze one vertex cycle, e.g. 0,1");

    CLI::App* s_ldp = app.add_subcommand("ldp", "large deviation experiment report");
    add_common(s_ldp, ldp.c);
    s_ldp->add_option("--depth", ldp.depth, "truncation depth");
    s_ldp->add_option("--observable", ldp.observable, "sym=J or values=v1,...,vk");
    s_ldp->add_option("--levels", ldp.levels, "deviation levels, comma list")->required();
    s_ldp->add_option("--ns", ldp.ns, "word lengths: start:stop:step or comma list")->required();
    s_ldp->add_option("--trials", ldp.trials, "Monte Carlo trials per length");
    s_ldp->add_option("--seed", ldp.seed, "RNG seed")->required();
    s_ldp->add_option("--budget", ldp.budget, "vertex budget");
    s_ldp->add_option("--csv", ldp.csv, "also write (level,n,p) curves as CSV");

    CLI::App* s_rep = app.add_subcommand("report", "combined diagram/entropy/mme/gibbs summary");
    add_common(s_rep, report.c);
    s_rep->add_option("--depth", report.depth, "truncation depth");
    s_rep->add_option("--nmax", report.nmax, "gibbs check length");
    s_rep->add_option("--budget", report.budget, "vertex budget");

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(std::move(rev));
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        err << "run 'symdyn --help' for usage\n";
        return 2;
    }

    try {
        if (app.got_subcommand(s_words)) return run_words(words, out);
        if (app.got_subcommand(s_cyl)) return run_cylinder(cylinder, out);
        if (app.got_subcommand(s_diag)) return run_diagram(diagram, out);
        if (app.got_subcommand(s_irr)) return run_check_irreducible(checkirr, out);
        if (app.got_subcommand(s_ent)) return run_entropy(entropy, out);
        if (app.got_subcommand(s_mme)) return run_mme(mme, out);
        if (app.got_subcommand(s_gibbs)) return run_gibbs(gibbs, out);
        if (app.got_subcommand(s_per)) return run_periodic(periodic, out);
        if (app.got_subcommand(s_ldp)) return run_ldp(ldp, out);
        if (app.got_subcommand(s_rep)) return run_report(report, out);
    } catch (const usage_error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const resource_error& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return 1;
    }
    err << "error: no subcommand\n";
    return 2;
}

} // namespace symdyn::cli
