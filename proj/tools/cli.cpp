#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "fracdual/fracdual.hpp"

namespace fracdual::cli {
namespace {

using json = nlohmann::ordered_json;

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
    std::string summary;  // goes to the error stream
};

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string to_csv(const Table& t) {
    std::string s;
    for (std::size_t i = 0; i < t.header.size(); ++i) {
        if (i) s += ',';
        s += t.header[i];
    }
    s += '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) s += ',';
            s += format_double(row[i]);
        }
        s += '\n';
    }
    return s;
}

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::InvalidArgument, what); }

// Every flag of a subcommand, so the manifest can record the values after defaulting.
class FlagSet {
public:
    explicit FlagSet(CLI::App* app) : app_(app) {}

    template <class T>
    CLI::Option* option(const std::string& names, T& var, const std::string& help) {
        keys_.push_back(key_of(names));
        getters_.push_back([&var] { return json(var); });
        return app_->add_option(names, var, help)->capture_default_str();
    }

    CLI::Option* flag(const std::string& names, bool& var, const std::string& help) {
        keys_.push_back(key_of(names));
        getters_.push_back([&var] { return json(var); });
        return app_->add_flag(names, var, help);
    }

    json dump() const {
        json j = json::object();
        for (std::size_t i = 0; i < keys_.size(); ++i) j[keys_[i]] = getters_[i]();
        return j;
    }

private:
    static std::string key_of(const std::string& names) {
        std::string k = names.substr(0, names.find(','));
        while (!k.empty() && k.front() == '-') k.erase(k.begin());
        return k;
    }

    CLI::App* app_;
    std::vector<std::string> keys_;
    std::vector<std::function<json()>> getters_;
};

struct Command {
    CLI::App* app = nullptr;
    std::unique_ptr<FlagSet> flags;
    std::function<Table()> body;
    const std::uint64_t* seed = nullptr;
};

std::vector<double> grid(double lo, double hi, std::size_t points) {
    if (points < 1) invalid("--points must be >= 1");
    if (!(lo <= hi)) invalid("--x-min must not exceed --x-max");
    if (points == 1) return {lo};
    return linspace(lo, hi, points);
}

json tolerances() {
    const DensityOptions d;
    const MittagLefflerOptions ml;
    const SubordinationSpec sub;
    auto quad = [](const QuadratureOptions& q) {
        return json{{"abs_tol", q.abs_tol}, {"rel_tol", q.rel_tol}, {"max_intervals", q.max_intervals}};
    };
    return json{{"density", {{"series_cap", d.series_cap}, {"tol", d.tol}, {"max_precision", d.max_precision},
                             {"quad", quad(d.quad)}}},
                {"mittag_leffler", {{"series_cap", ml.series_cap}, {"tol", ml.tol}, {"quad", quad(ml.quad)}}},
                {"subordination_quad", quad(sub.quad)},
                {"analytic_cdf_cells", 2000}};
}

// ---- density ---------------------------------------------------------------

struct DensityArgs {
    std::string param = "eta";
    double alpha = 1.5;
    double asym = 0.0;
    double scale = 1.0;
    std::string method = "auto";
    double x_min = -3.0;
    double x_max = 3.0;
    std::size_t points = 7;
};

Table run_density(const DensityArgs& a) {
    const auto tag = parse_parametrization(a.param);
    if (!tag) invalid("--param must be one of theta, eta, beta, q");
    const auto method = parse_density_method(a.method);
    if (!method) invalid("--method must be one of series, quad, dual, auto");
    const StableParams p = StableParams::make(*tag, a.alpha, a.asym, a.scale);
    const auto xs = grid(a.x_min, a.x_max, a.points);
    Table t{{"x", "value"}, {}, {}};
    for (double x : xs) t.rows.push_back({x, density(x, p, *method)});
    return t;
}

// ---- inverse-density -------------------------------------------------------

struct InverseArgs {
    double gamma = 0.5;
    double b = 1.0;
    double t = 1.0;
    std::string route = "self-similar";
    std::string method = "auto";
    double x_min = 0.1;
    double x_max = 3.0;
    std::size_t points = 30;
    std::string check = "none";
    std::vector<double> z{0.0, 0.5, 1.0, 2.0};
};

Table run_inverse(const InverseArgs& a) {
    const auto method = parse_density_method(a.method);
    if (!method) invalid("--method must be one of series, quad, dual, auto");
    const bool both = a.route == "both";
    const auto route = both ? InverseRoute::SelfSimilar : *parse_inverse_route(a.route);
    const auto spec = InverseDensitySpec::make(a.gamma, a.b, a.t, route);
    const auto other = both ? InverseDensitySpec::make(a.gamma, a.b, a.t, InverseRoute::Duality) : spec;
    Table t;
    if (a.check == "laplace") {
        if (a.z.empty()) invalid("--z needs at least one value");
        for (double z : a.z) {
            if (!(z >= 0.0)) invalid("--z values must be >= 0");
        }
        t.header = {"z", "lhs", "rhs", "abs_err"};
        for (double z : a.z) {
            const auto c = laplace_check(spec, z);
            t.rows.push_back({z, c.lhs, c.rhs, std::abs(c.lhs - c.rhs)});
        }
        return t;
    }
    const auto xs = grid(a.x_min, a.x_max, a.points);
    if (!(xs.front() > 0.0)) invalid("--x-min must be > 0");
    t.header = both ? std::vector<std::string>{"x", "h", "h_other", "abs_err"} : std::vector<std::string>{"x", "h"};
    for (double x : xs) {
        const double h = h_density(x, spec, *method);
        if (both) {
            const double h2 = h_density(x, other, *method);
            t.rows.push_back({x, h, h2, std::abs(h - h2)});
        } else {
            t.rows.push_back({x, h});
        }
    }
    return t;
}

// ---- solve / compare fig1 --------------------------------------------------

struct SolveArgs {
    double alpha = 1.5;
    double b = 1.0;
    double dx = 0.1;
    double dt = 0.0;
    double x_max = 6.0;
    double t_end = 1.0;
    bool extrapolate = false;
    bool two_sided = false;
    double q = 0.5;
    double delta = 1.5;
    double a = 1.0;
    bool compare = false;
};

DensityGrid solve_grid(SolveArgs& a) {
    SolverConfig cfg;
    cfg.alpha = a.alpha;
    cfg.b = a.b;
    cfg.dx = a.dx;
    cfg.x_max = a.x_max;
    cfg.t_end = a.t_end;
    if (a.two_sided) cfg.two_sided = TwoSided{a.q, a.delta, a.a};
    if (a.dt == 0.0) a.dt = even_step_dt(cfg);
    cfg.dt = a.dt;
    auto run = [&](const SolverConfig& c) { return c.two_sided ? solve_two_sided(c) : solve_bvp(c); };
    const DensityGrid fine = run(cfg);
    if (!a.extrapolate) return fine;
    SolverConfig coarse = cfg;
    coarse.dx = 2.0 * cfg.dx;
    coarse.dt = 2.0 * cfg.dt;
    return richardson_extrapolate(fine, run(coarse));
}

Table run_solve(SolveArgs& a, double x_lo = 0.0, double x_hi = 0.0, bool positive_only = false) {
    const DensityGrid g = solve_grid(a);
    std::function<double(double)> exact;
    if (a.two_sided) {
        const auto p = StableParams::make(Parametrization::FellerQ, a.delta, a.q, a.a * a.t_end);
        exact = [p](double x) { return density(x, p); };
    } else {
        const auto s = InverseDensitySpec::make(1.0 / a.alpha, a.b, a.t_end, InverseRoute::Duality);
        const double origin = h_origin_limit(s);
        exact = [s, origin](double x) { return x > 0.0 ? h_density(x, s) : origin; };
    }
    Table t;
    t.header = a.compare ? std::vector<std::string>{"x", "h_numeric", "h_analytic", "abs_err"}
                         : std::vector<std::string>{"x", "h_numeric"};
    double worst = 0.0;
    // one-sided grids carry a ghost node at -dx
    const std::size_t first = a.two_sided ? 0 : 1;
    for (std::size_t i = first; i < g.size(); ++i) {
        const double x = g.x(i);
        if (positive_only && !(x > 1e-12)) continue;
        if (!a.compare) {
            t.rows.push_back({x, g.values[i]});
            continue;
        }
        const double h = exact(x);
        const double e = std::abs(g.values[i] - h);
        t.rows.push_back({x, g.values[i], h, e});
        if (x >= x_lo - 1e-12 && x <= x_hi + 1e-12) worst = std::max(worst, e);
    }
    if (x_hi > x_lo) t.summary = "max_abs_err\n" + format_double(worst) + "\n";
    return t;
}

// ---- simulate / compare fig2 -----------------------------------------------

struct SimulateArgs {
    std::string process = "Z";
    double alpha = 0.0;
    double gamma = 0.0;
    double b = 1.0;
    double t = 1.0;
    std::size_t n = 100000;
    std::uint64_t seed = 7;
    double dt_walk = 0.05;
    double dx_path = 1e-3;
    std::size_t bins = 50;
    double x_max = 0.0;
};

void resolve_index(SimulateArgs& a) {
    if (a.alpha == 0.0 && a.gamma == 0.0) invalid("one of --alpha or --gamma is required");
    if (a.alpha != 0.0 && a.gamma != 0.0 && std::abs(a.alpha * a.gamma - 1.0) > 1e-12) {
        invalid("--alpha and --gamma must satisfy alpha = 1 / gamma");
    }
    if (a.alpha == 0.0) a.alpha = 1.0 / a.gamma;
    if (a.gamma == 0.0) a.gamma = 1.0 / a.alpha;
}

Table run_simulate(SimulateArgs& a) {
    resolve_index(a);
    if (a.bins < 1) invalid("--bins must be >= 1");
    if (a.x_max < 0.0) invalid("--x-max must be >= 0");
    Ensemble cfg;
    cfg.seed = a.seed;
    cfg.n = a.n;
    cfg.dt_walk = a.dt_walk;
    cfg.dx_path = a.dx_path;
    const auto spec = InverseDensitySpec::make(a.gamma, a.b, a.t);
    Ensemble e;
    if (a.process == "E") {
        e = simulate_E(a.gamma, a.b, {a.t}, cfg).front();
    } else if (a.process == "Ycond") {
        e = simulate_Y_conditional(a.alpha, a.b, a.t, cfg);
    } else {
        e = simulate_Z(a.alpha, a.b, a.t, cfg);
    }
    if (e.accepted == 0) throw Error(ErrorCode::NonConverged, "no particles accepted");
    const TabulatedCdf cdf = h_cdf(spec);
    const double ks = ks_statistic(e.samples, [&cdf](double x) { return cdf(x); });

    std::vector<double> sorted = e.samples;
    std::sort(sorted.begin(), sorted.end());
    double hi = a.x_max;
    if (hi == 0.0) hi = sorted[static_cast<std::size_t>(0.995 * static_cast<double>(sorted.size() - 1))];
    if (!(hi > 0.0)) throw Error(ErrorCode::NonConverged, "degenerate sample range");
    const double width = hi / static_cast<double>(a.bins);
    std::vector<double> counts(a.bins, 0.0);
    for (double x : sorted) {
        if (x < 0.0 || x >= hi) continue;
        counts[std::min(a.bins - 1, static_cast<std::size_t>(x / width))] += 1.0;
    }
    InverseDensitySpec fast = spec;
    if (spec.gamma >= 0.5) fast.route = InverseRoute::Duality;
    Table t{{"x_mid", "emp_density", "analytic"}, {}, {}};
    for (std::size_t k = 0; k < a.bins; ++k) {
        const double mid = (static_cast<double>(k) + 0.5) * width;
        t.rows.push_back({mid, counts[k] / (static_cast<double>(e.accepted) * width), h_density(mid, fast)});
    }
    t.summary = "accepted,ks,mean\n" + std::to_string(e.accepted) + "," + format_double(ks) + "," +
                format_double(mean_of(e.samples)) + "\n";
    return t;
}

// ---- subordinate -----------------------------------------------------------

struct SubordinateArgs {
    double gamma = 0.75;
    std::string domain = "line";
    double length = 1.0;
    std::string r = "delta:0";
    std::string route = "inverse";
    double t = 1.0;
    double x_min = -1.0;
    double x_max = 1.0;
    std::size_t points = 5;
};

double parse_number(const std::string& s, const std::string& what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        invalid("cannot parse " + what + " '" + s + "'");
    }
}

Datum parse_datum(const std::string& r) {
    if (r.rfind("delta:", 0) == 0) return PointSource{parse_number(r.substr(6), "point-source location"), 1.0};
    if (r.rfind("file:", 0) == 0) {
        const std::string path = r.substr(5);
        std::ifstream in(path);
        if (!in) invalid("cannot read datum file '" + path + "'");
        TabulatedDatum d;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            const auto comma = line.find(',');
            if (comma == std::string::npos) invalid("datum file rows must be 'x,value'");
            const std::string xs = line.substr(0, comma);
            if (d.xs.empty() && !xs.empty() && std::isalpha(static_cast<unsigned char>(xs[0]))) continue;  // header
            d.xs.push_back(parse_number(xs, "datum x"));
            d.values.push_back(parse_number(line.substr(comma + 1), "datum value"));
        }
        if (d.xs.size() < 2) invalid("datum file needs at least two rows");
        for (std::size_t i = 0; i + 1 < d.xs.size(); ++i) {
            if (!(d.xs[i] < d.xs[i + 1])) invalid("datum file x values must increase");
        }
        return d;
    }
    invalid("--r must be delta:<x0> or file:<path>");
}

Table run_subordinate(const SubordinateArgs& a) {
    SubordinationSpec s;
    s.gamma = a.gamma;
    if (a.domain == "interval") {
        s.domain = Interval{a.length};
    } else {
        s.domain = FreeLine{};
    }
    s.r = parse_datum(a.r);
    const bool both = a.route == "both";
    s.route = both ? SubordinationRoute::Inverse : *parse_subordination_route(a.route);
    if (auto v = validate(s); !v) invalid(v.violation);
    SubordinationSpec other = s;
    if (both) {
        other.route = SubordinationRoute::Dual;
        if (auto v = validate(other); !v) invalid(v.violation);
    }
    if (!(a.t > 0.0)) invalid("--t must be > 0");
    const auto xs = grid(a.x_min, a.x_max, a.points);
    Table t;
    t.header = both ? std::vector<std::string>{"x", "m", "m_other", "abs_err"} : std::vector<std::string>{"x", "m"};
    for (double x : xs) {
        const double m = subordinate(s, x, a.t);
        if (both) {
            const double m2 = subordinate(other, x, a.t);
            t.rows.push_back({x, m, m2, std::abs(m - m2)});
        } else {
            t.rows.push_back({x, m});
        }
    }
    return t;
}

// ---- compare ---------------------------------------------------------------

struct CompareArgs {
    std::string mode = "fig1";
    double alpha = 1.5;
    double b = 1.0;
    double t = 1.0;
    double dx = 0.2;
    double dt = 0.0;
    double x_max = 10.0;
    bool extrapolate = false;
    double x_lo = 0.2;
    double x_hi = 4.0;
    std::size_t n = 200000;
    std::uint64_t seed = 7;
    double dt_walk = 0.05;
    std::size_t bins = 50;
};

Table run_compare(CompareArgs& a) {
    if (a.mode == "fig1") {
        if (!(a.x_lo < a.x_hi)) invalid("--x-lo must be below --x-hi");
        SolveArgs s;
        s.alpha = a.alpha;
        s.b = a.b;
        s.dx = a.dx;
        s.dt = a.dt;
        s.x_max = a.x_max;
        s.t_end = a.t;
        s.extrapolate = a.extrapolate;
        s.compare = true;
        Table t = run_solve(s, a.x_lo, a.x_hi, true);
        a.dt = s.dt;
        return t;
    }
    SimulateArgs s;
    s.process = "Z";
    s.alpha = a.alpha;
    s.b = a.b;
    s.t = a.t;
    s.n = a.n;
    s.seed = a.seed;
    s.dt_walk = a.dt_walk;
    s.bins = a.bins;
    return run_simulate(s);
}

// ---- driver ----------------------------------------------------------------

int emit(const Table& t, const std::string& name, const json& flags, const std::uint64_t* seed,
         const std::string& out_path, std::ostream& out, std::ostream& err) {
    const std::string csv = to_csv(t);
    if (out_path.empty()) {
        out << csv;
        out.flush();
    } else {
        std::ofstream f(out_path, std::ios::binary);
        if (!f) {
            err << "error: cannot open output file '" << out_path << "'\n";
            return kValidation;
        }
        f << csv;
        json m;
        m["subcommand"] = name;
        m["flags"] = flags;
        m["seed"] = seed ? json(*seed) : json(nullptr);
        m["tolerances"] = tolerances();
        m["output"] = out_path;
        std::ofstream mf(out_path + ".manifest.json", std::ios::binary);
        mf << m.dump(2) << '\n';
    }
    err << t.summary;
    return kOk;
}

std::vector<std::string> replay_args(const std::string& manifest_path, const std::string& out_path) {
    std::ifstream in(manifest_path);
    if (!in) invalid("cannot read manifest '" + manifest_path + "'");
    json m;
    try {
        m = json::parse(in);
    } catch (const std::exception& e) {
        invalid(std::string("manifest is not valid JSON: ") + e.what());
    }
    if (!m.contains("subcommand") || !m["subcommand"].is_string() || !m.contains("flags") ||
        !m["flags"].is_object()) {
        invalid("manifest needs 'subcommand' and 'flags'");
    }
    std::vector<std::string> args{"fracdual", m["subcommand"].get<std::string>()};
    for (const auto& [key, value] : m["flags"].items()) {
        const std::string name = "--" + key;
        if (value.is_boolean()) {
            if (value.get<bool>()) args.push_back(name);
        } else if (value.is_array()) {
            if (value.empty()) continue;
            args.push_back(name);
            for (const auto& v : value) args.push_back(format_double(v.get<double>()));
        } else if (value.is_number_float()) {
            args.push_back(name);
            args.push_back(format_double(value.get<double>()));
        } else if (value.is_number()) {
            args.push_back(name);
            args.push_back(value.dump());
        } else if (value.is_string()) {
            args.push_back(name);
            args.push_back(value.get<std::string>());
        } else {
            invalid("unsupported manifest value for '" + key + "'");
        }
    }
    if (!out_path.empty()) {
        args.push_back("--out");
        args.push_back(out_path);
    }
    return args;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Stable densities, inverse stable subordinators, fractional diffusion and subordination"};
    app.name(args.empty() ? "fracdual" : args.front());
    app.require_subcommand(1);
    std::string out_path;

    DensityArgs da;
    InverseArgs ia;
    SolveArgs sa;
    SimulateArgs ma;
    SubordinateArgs ua;
    CompareArgs ca;
    std::string manifest_path;

    std::vector<std::pair<std::string, Command>> commands;
    auto add = [&](const std::string& name, const std::string& help) -> Command& {
        Command c;
        c.app = app.add_subcommand(name, help);
        c.flags = std::make_unique<FlagSet>(c.app);
        c.app->add_option("--out", out_path, "CSV output file; a manifest is written next to it");
        commands.emplace_back(name, std::move(c));
        return commands.back().second;
    };

    {
        auto& c = add("density", "Stable density on a grid");
        auto& f = *c.flags;
        f.option("--param", da.param, "Parametrization")->check(CLI::IsMember({"theta", "eta", "beta", "q"}));
        f.option("--alpha", da.alpha, "Index alpha in (0, 2]");
        f.option("--asym,--eta", da.asym, "Asymmetry in the chosen parametrization");
        f.option("--scale", da.scale, "Scale in the chosen parametrization");
        f.option("--method", da.method, "Evaluation route")->check(CLI::IsMember({"series", "quad", "dual", "auto"}));
        f.option("--x-min", da.x_min, "Grid start");
        f.option("--x-max", da.x_max, "Grid end");
        f.option("--points", da.points, "Grid points");
        c.body = [&] { return run_density(da); };
    }
    {
        auto& c = add("inverse-density", "Density h(x, t) of the inverse stable subordinator");
        auto& f = *c.flags;
        f.option("--gamma", ia.gamma, "Subordinator index in (0, 1)");
        f.option("--b", ia.b, "Subordinator scale");
        f.option("--t", ia.t, "Time");
        f.option("--route", ia.route, "Route")->check(CLI::IsMember({"self-similar", "duality", "both"}));
        f.option("--method", ia.method, "Stable density route")
            ->check(CLI::IsMember({"series", "quad", "dual", "auto"}));
        f.option("--x-min", ia.x_min, "Grid start");
        f.option("--x-max", ia.x_max, "Grid end");
        f.option("--points", ia.points, "Grid points");
        f.option("--check", ia.check, "Identity check instead of a density grid")
            ->check(CLI::IsMember({"none", "laplace"}));
        f.option("--z", ia.z, "Laplace variables for --check laplace");
        c.body = [&] { return run_inverse(ia); };
    }
    {
        auto& c = add("solve", "Finite-difference solution of the fractional boundary value problem");
        auto& f = *c.flags;
        f.option("--alpha", sa.alpha, "Space index in (1, 2]");
        f.option("--b", sa.b, "Scale b");
        f.option("--dx", sa.dx, "Grid step");
        f.option("--dt", sa.dt, "Time step; 0 picks the largest stable step dividing t-end");
        f.option("--x-max", sa.x_max, "Right end of the grid");
        f.option("--t-end", sa.t_end, "Final time");
        f.flag("--extrapolate", sa.extrapolate, "Richardson extrapolation with a 2 dx run");
        f.flag("--two-sided", sa.two_sided, "Two-sided equation on [-x-max, x-max]");
        f.option("--q", sa.q, "Two-sided weight q in [0, 1]");
        f.option("--delta", sa.delta, "Two-sided order in (1, 2]");
        f.option("--a", sa.a, "Two-sided coefficient");
        f.flag("--compare", sa.compare, "Add analytic values and errors");
        c.body = [&] { return run_solve(sa); };
    }
    {
        auto& c = add("simulate", "Monte Carlo for E, Y | Y > 0, or the snip-and-glue process Z");
        auto& f = *c.flags;
        f.option("--process", ma.process, "Process")->check(CLI::IsMember({"E", "Ycond", "Z"}));
        f.option("--alpha", ma.alpha, "Index of Y; 0 derives it from --gamma");
        f.option("--gamma", ma.gamma, "Index of D; 0 derives it from --alpha");
        f.option("--b", ma.b, "Scale b");
        f.option("--t", ma.t, "Time");
        f.option("--n", ma.n, "Particles");
        f.option("--seed", ma.seed, "Seed");
        f.option("--dt-walk", ma.dt_walk, "Walk time step for Z");
        f.option("--dx-path", ma.dx_path, "Path step for E");
        f.option("--bins", ma.bins, "Histogram bins");
        f.option("--x-max", ma.x_max, "Histogram right end; 0 uses the 99.5% sample quantile");
        c.body = [&] { return run_simulate(ma); };
        c.seed = &ma.seed;
    }
    {
        auto& c = add("subordinate", "Solution of the time-fractional Cauchy problem by subordination");
        auto& f = *c.flags;
        f.option("--gamma", ua.gamma, "Time order in (0, 1)");
        f.option("--domain", ua.domain, "Spatial domain")->check(CLI::IsMember({"line", "interval"}));
        f.option("--length", ua.length, "Interval length");
        f.option("--r", ua.r, "Initial datum: delta:<x0> or file:<path> with rows x,value");
        f.option("--route", ua.route, "Mixing route")->check(CLI::IsMember({"inverse", "dual", "abs-y", "both"}));
        f.option("--t", ua.t, "Time");
        f.option("--x-min", ua.x_min, "Grid start");
        f.option("--x-max", ua.x_max, "Grid end");
        f.option("--points", ua.points, "Grid points");
        c.body = [&] { return run_subordinate(ua); };
    }
    {
        auto& c = add("compare", "Solver (fig1) or particle tracking (fig2) against the analytic h");
        auto& f = *c.flags;
        f.option("--mode", ca.mode, "Comparison")->check(CLI::IsMember({"fig1", "fig2"}));
        f.option("--alpha", ca.alpha, "Index of Y in (1, 2]");
        f.option("--b", ca.b, "Scale b");
        f.option("--t", ca.t, "Time");
        f.option("--dx", ca.dx, "fig1 grid step");
        f.option("--dt", ca.dt, "fig1 time step; 0 picks the largest stable step");
        f.option("--x-max", ca.x_max, "fig1 right end of the grid");
        f.flag("--extrapolate", ca.extrapolate, "fig1 Richardson extrapolation");
        f.option("--x-lo", ca.x_lo, "fig1 error window start");
        f.option("--x-hi", ca.x_hi, "fig1 error window end");
        f.option("--n", ca.n, "fig2 particles");
        f.option("--seed", ca.seed, "fig2 seed");
        f.option("--dt-walk", ca.dt_walk, "fig2 walk time step");
        f.option("--bins", ca.bins, "fig2 histogram bins");
        c.body = [&] { return run_compare(ca); };
        c.seed = &ca.seed;
    }
    CLI::App* replay = app.add_subcommand("replay", "Re-run a manifest");
    replay->add_option("manifest", manifest_path, "Manifest file")->required();
    replay->add_option("--out", out_path, "CSV output file");

    try {
        std::vector<std::string> rev(args.begin() + (args.empty() ? 0 : 1), args.end());
        std::reverse(rev.begin(), rev.end());
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e, out, err);
        err << "error: " << e.what() << '\n';
        return kValidation;
    }

    try {
        if (replay->parsed()) return run(replay_args(manifest_path, out_path), out, err);
        for (auto& [name, c] : commands) {
            if (!c.app->parsed()) continue;
            const Table t = c.body();
            return emit(t, name, c.flags->dump(), c.seed, out_path, out, err);
        }
    } catch (const Error& e) {
        err << e.what() << '\n';
        return is_numerical(e.code()) ? kNumerical : kValidation;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kNumerical;
    }
    return kValidation;
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
    return run(std::vector<std::string>(argv, argv + argc), out, err);
}

}  // namespace fracdual::cli
