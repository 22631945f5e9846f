// singser: command-line front end for the singular-series and prime-variance
// experiments. Every command writes CSV to stdout or --out, and a JSON
// metadata sidecar next to --out (or to --meta).
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
#include "singser/arith.hpp"
#include "singser/error.hpp"
#include "singser/field.hpp"
#include "singser/ideals.hpp"
#include "singser/parallel.hpp"
#include "singser/primes.hpp"
#include "singser/singular_series.hpp"
#include "singser/smoothing.hpp"
#include "singser/statistics.hpp"

#ifndef SINGSER_VERSION
#define SINGSER_VERSION "0.0.0"
#endif

using namespace singser;
using json = nlohmann::ordered_json;

namespace {

constexpr const char* kExitCodes =
    "Exit codes: 0 success, 1 unexpected failure, 2 invalid argument, 3 budget exceeded,\n"
    "4 out of extent, 5 non-convergence, 6 arithmetic overflow. Errors print one line\n"
    "'error: code=<name> message=<text>' on stderr.";

int exit_code(ErrorCode c) {
    switch (c) {
        case ErrorCode::InvalidArgument: return 2;
        case ErrorCode::BudgetExceeded: return 3;
        case ErrorCode::OutOfExtent: return 4;
        case ErrorCode::NonConvergence: return 5;
        case ErrorCode::Overflow: return 6;
    }
    return 1;
}

std::string g12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string join(const std::vector<std::string>& parts, const char* sep = ",") {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
    return out;
}

std::vector<double> parse_reals(const std::string& text, const char* what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            fail(ErrorCode::InvalidArgument, std::string("bad ") + what + " '" + text + "'");
        }
    }
    if (out.empty()) fail(ErrorCode::InvalidArgument, std::string("empty ") + what);
    return out;
}

// "a:b:step" or a comma list.
std::vector<double> parse_deltas(const std::string& text) {
    if (text.find(':') == std::string::npos) return parse_reals(text, "delta list");
    std::string spec = text;
    std::replace(spec.begin(), spec.end(), ':', ',');
    const auto v = parse_reals(spec, "delta range");
    if (v.size() != 3 || !(v[2] > 0.0) || v[1] < v[0]) {
        fail(ErrorCode::InvalidArgument, "delta range must be start:stop:step with step > 0, got '" + text + "'");
    }
    const auto n = static_cast<std::int64_t>(std::floor((v[1] - v[0]) / v[2] + 1e-9)) + 1;
    std::vector<double> out;
    for (std::int64_t i = 0; i < n; ++i) out.push_back(std::stod(g12(v[0] + static_cast<double>(i) * v[2])));
    return out;
}

std::string ideal_label(const SquarefreeIdeal& q) {
    if (q.factors.empty()) return "1";
    std::vector<std::string> parts;
    for (const auto& p : q.factors) {
        parts.push_back(p.root ? std::to_string(p.p) + "/" + std::to_string(*p.root) : std::to_string(p.p));
    }
    return join(parts, "*");
}

// Output sink plus sidecar bookkeeping shared by all commands.
struct Run {
    std::string out_path;
    std::string meta_path;
    unsigned threads = 0;
    json meta = json::object();
    std::ofstream file;
    std::ostream* os = &std::cout;

    void open() {
        if (!out_path.empty()) {
            file.open(out_path);
            if (!file) fail(ErrorCode::InvalidArgument, "cannot open " + out_path + " for writing");
            os = &file;
        }
        if (meta_path.empty() && !out_path.empty()) meta_path = out_path + ".json";
        if (threads == 0) threads = default_threads();
    }
    void row(std::vector<std::string> cells) {
        for (auto& c : cells) {
            if (c.find_first_of(",\"") == std::string::npos) continue;
            std::string q = "\"";
            for (char ch : c) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
            c = q + "\"";
        }
        *os << join(cells) << '\n';
    }
    void line(const std::string& text) { *os << text << '\n'; }
    void finish() {
        os->flush();
        if (meta_path.empty()) return;
        std::ofstream m(meta_path);
        if (!m) fail(ErrorCode::InvalidArgument, "cannot open " + meta_path + " for writing");
        m << meta.dump(2) << '\n';
    }
};

json residue_json(const ResidueValue& r) {
    return {{"value", r.value}, {"error_bound", r.error_bound}, {"method", r.method}, {"terms", r.terms}};
}

// Options every leaf command shares.
void add_common(CLI::App* cmd, Run& run) {
    cmd->add_option("--out", run.out_path, "CSV output path (default stdout); the sidecar goes to <out>.json");
    cmd->add_option("--meta", run.meta_path, "metadata JSON path (overrides <out>.json)");
    cmd->add_option("--threads", run.threads, "worker threads (0 = hardware concurrency); results do not depend on it");
    cmd->add_option("--config", "file of 'key = value' lines; command-line flags override it");
    cmd->footer(kExitCodes);
}

// Reads a config file into "--key value" pairs.
std::vector<std::string> read_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::InvalidArgument, "cannot read config file " + path);
    std::vector<std::string> args;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            fail(ErrorCode::InvalidArgument, path + ":" + std::to_string(lineno) + ": expected 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        if (key.empty() || key == "config") {
            fail(ErrorCode::InvalidArgument, path + ":" + std::to_string(lineno) + ": bad key");
        }
        args.push_back("--" + key);
        args.push_back(value);
    }
    return args;
}

// Splices config-file pairs in right after the command path so that later
// command-line flags win.
std::vector<std::string> expand_config(std::vector<std::string> args) {
    const auto it = std::find_if(args.begin(), args.end(),
                                 [](const std::string& a) { return a == "--config" || a.rfind("--config=", 0) == 0; });
    if (it == args.end()) return args;
    std::string path;
    auto end = it + 1;
    if (*it == "--config") {
        if (end == args.end()) fail(ErrorCode::InvalidArgument, "--config needs a file");
        path = *end++;
    } else {
        path = it->substr(9);
    }
    const auto pos = static_cast<std::size_t>(it - args.begin());
    args.erase(it, end);
    std::size_t insert_at = 1;
    while (insert_at < pos && args[insert_at].rfind("-", 0) != 0) ++insert_at;
    const auto extra = read_config(path);
    args.insert(args.begin() + static_cast<std::ptrdiff_t>(insert_at), extra.begin(), extra.end());
    return args;
}

// Echo every option of the selected command verbatim.
json echo_options(const CLI::App* cmd) {
    json params = json::object();
    for (const auto* opt : cmd->get_options()) {
        const std::string name = opt->get_single_name();
        if (name == "help" || name == "config") continue;
        if (opt->count() > 0) {
            const auto& res = opt->results();
            params[name] = res.size() == 1 ? json(res.front()) : json(res);
        } else {
            params[name] = opt->get_default_str();
        }
    }
    return params;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    try {
        args = expand_config(args);
    } catch (const Error& e) {
        std::cerr << "error: code=" << error_code_name(e.code()) << " message=" << e.what() << '\n';
        return exit_code(e.code());
    }

    CLI::App app{"Singular series sums and prime-count variance in short intervals of quadratic integer rings."};
    app.require_subcommand(1);
    app.option_defaults()->always_capture_default()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.footer(std::string("Field specs are D=<squarefree int>, with ',half' for the basis {1, (1+sqrt D)/2}\n"
                           "(required when D = 1 mod 4). ") +
               kExitCodes);
    app.set_version_flag("--version", SINGSER_VERSION);

    Run run;
    std::string field_text = "D=-1";
    std::function<void()> action;
    CLI::App* leaf = nullptr;
    auto add_field = [&](CLI::App* cmd) {
        cmd->add_option("--field", field_text, "quadratic field, e.g. D=-1 or D=5,half");
    };
    auto command = [&](CLI::App* cmd, std::function<void()> body) {
        add_common(cmd, run);
        cmd->callback([&, cmd, body] {
            leaf = cmd;
            action = body;
        });
    };

    // field-info
    double residue_tol = 1e-8;
    auto* field_info = app.add_subcommand("field-info", "discriminant, basis and residue r_K of a field");
    add_field(field_info);
    field_info->add_option("--tol", residue_tol, "absolute error target for r_K (dimensionless)");
    command(field_info, [&] {
        const auto F = FieldSpec::parse(field_text);
        const auto r = residue_rk(F, residue_tol);
        run.row({"field", "D", "basis", "discriminant", "omega_trace", "omega_constant", "rK", "rK_error", "method"});
        run.row({F.to_string(), std::to_string(F.D()), F.basis() == BasisKind::Half ? "half" : "sqrtD",
                 std::to_string(F.discriminant()), std::to_string(F.omega_trace()), std::to_string(F.omega_constant()),
                 g12(r.value), g12(r.error_bound), r.method});
        run.meta["rK"] = residue_json(r);
    });

    // residue
    auto* residue = app.add_subcommand("residue", "residue r_K of the Dedekind zeta function at s = 1");
    add_field(residue);
    residue->add_option("--tol", residue_tol, "absolute error target (dimensionless)");
    std::int64_t residue_budget = 2'000'000'000;
    residue->add_option("--max-terms", residue_budget, "character-sum term budget (count)");
    command(residue, [&] {
        const auto F = FieldSpec::parse(field_text);
        const auto r = residue_rk(F, residue_tol, residue_budget);
        run.row({"field", "rK", "error_bound", "method", "terms"});
        run.row({F.to_string(), g12(r.value), g12(r.error_bound), r.method, std::to_string(r.terms)});
        run.meta["rK"] = residue_json(r);
    });

    // primes count | grid
    auto* primes = app.add_subcommand("primes", "prime elements in coordinate boxes");
    primes->require_subcommand(1);
    std::string center_text = "0,0", grid_path;
    double box_H = 1.0;
    std::int64_t extent = 0;
    double max_bytes = 3e9;
    auto* pcount = primes->add_subcommand("count", "count primes with sup-norm distance <= H from a center");
    add_field(pcount);
    pcount->add_option("--center", center_text, "box center x1,x2 (integral-basis coordinates)");
    pcount->add_option("--H", box_H, "box half-width (coordinate units, >= 0)");
    pcount->add_option("--grid", grid_path, "load a grid file instead of building one (its field wins)");
    pcount->add_option("--extent", extent, "grid extent R (coordinate units; 0 = smallest covering the box)");
    pcount->add_option("--max-bytes", max_bytes, "memory budget for the grid (bytes)");
    command(pcount, [&] {
        const auto c = parse_reals(center_text, "center");
        if (c.size() != 2) fail(ErrorCode::InvalidArgument, "--center needs two coordinates");
        std::unique_ptr<PrefixGrid> g;
        if (!grid_path.empty()) {
            g = std::make_unique<PrefixGrid>(load_grid(grid_path));
        } else {
            std::int64_t R = extent;
            if (R == 0) R = static_cast<std::int64_t>(std::ceil(std::max(std::abs(c[0]), std::abs(c[1])) + box_H)) + 1;
            g = std::make_unique<PrefixGrid>(build_grid(FieldSpec::parse(field_text), R, run.threads, max_bytes));
        }
        const auto n = count_primes_box(*g, c[0], c[1], box_H);
        const double w = log_weight_box(*g, c[0], c[1], box_H);
        run.row({"field", "x1", "x2", "H", "count", "log_weight"});
        run.row({g->field().to_string(), g12(c[0]), g12(c[1]), g12(box_H), std::to_string(n), g12(w)});
        run.meta["grid_extent"] = g->extent();
    });
    auto* pgrid = primes->add_subcommand("grid", "build a prefix grid and save it in the SINF binary format");
    add_field(pgrid);
    std::string grid_out;
    pgrid->add_option("--extent", extent, "grid extent R (coordinate units, >= 0)")->required();
    pgrid->add_option("--grid-out", grid_out, "binary grid file to write")->required();
    pgrid->add_option("--max-bytes", max_bytes, "memory budget (bytes)");
    command(pgrid, [&] {
        const auto g = build_grid(FieldSpec::parse(field_text), extent, run.threads, max_bytes);
        save_grid(g, grid_out);
        run.row({"field", "extent", "total_count", "total_weight", "path"});
        run.row({g.field().to_string(), std::to_string(g.extent()), std::to_string(g.total_count()),
                 g12(g.total_weight()), grid_out});
    });

    // sstar
    std::string eta_text = "1,1";
    std::int64_t cutoff = 100000;
    auto* sstar = app.add_subcommand("sstar", "singular series S(eta) truncated at prime ideals of norm <= P");
    add_field(sstar);
    sstar->add_option("--eta", eta_text, "nonzero element k1,k2 (integral-basis coordinates)");
    sstar->add_option("--cutoff", cutoff, "cutoff P on prime-ideal norms (>= 2)");
    command(sstar, [&] {
        const auto F = FieldSpec::parse(field_text);
        const auto e = parse_reals(eta_text, "eta");
        if (e.size() != 2 || e[0] != std::floor(e[0]) || e[1] != std::floor(e[1])) {
            fail(ErrorCode::InvalidArgument, "--eta needs two integers");
        }
        const QuadInt eta{static_cast<std::int64_t>(e[0]), static_cast<std::int64_t>(e[1])};
        const auto s = singular_series(F, eta, cutoff);
        run.row({"field", "eta1", "eta2", "cutoff", "value", "tail_bound"});
        run.row({F.to_string(), std::to_string(eta.k1), std::to_string(eta.k2), std::to_string(s.cutoff), g12(s.value),
                 g12(s.tail_bound)});
    });

    // sum-singular
    double sum_H = 64;
    std::string w_text = "square";
    std::int64_t sum_cutoff = 0;
    auto* sum_singular = app.add_subcommand("sum-singular", "smoothed sum of S(eta) - 1 over nonzero eta");
    add_field(sum_singular);
    sum_singular->add_option("--H", sum_H, "scale H (coordinate units, >= 2)");
    sum_singular->add_option("--w", w_text, "weight: square or disc autocorrelation");
    sum_singular->add_option("--cutoff", sum_cutoff,
                             "prime-ideal norm cutoff P (0 = max(1e5, 4 x largest |N| in the box))");
    sum_singular->add_option("--tol", residue_tol, "error target for r_K in the target column");
    command(sum_singular, [&] {
        const auto F = FieldSpec::parse(field_text);
        const auto w = TestFunction::parse(w_text);
        if (w.dimension() != 2) fail(ErrorCode::InvalidArgument, "--w must be square or disc here");
        if (!(sum_H >= 2.0)) fail(ErrorCode::InvalidArgument, "--H must be >= 2");
        const auto R = static_cast<std::int64_t>(std::floor(w.support_radius() * sum_H));
        std::int64_t P = sum_cutoff;
        if (P == 0) {
            const auto maxnorm = max_abs_norm_in_box(F, R);
            P = maxnorm > std::int64_t{1} << 60 ? std::int64_t{1} << 62 : std::max<std::int64_t>(100000, 4 * maxnorm);
        }
        const auto r = residue_rk(F, residue_tol);
        SingularSeriesTable table(F, P);
        const auto s = singular_sum_smoothed(table, w, sum_H, run.threads);
        const double target = -w.value_at_zero() * r.value * std::log(sum_H * sum_H);
        run.row({"field", "w", "H", "cutoff", "sum", "uncertainty", "target", "ratio"});
        run.row({F.to_string(), w.name(), g12(sum_H), std::to_string(P), g12(s.sum), g12(s.uncertainty), g12(target),
                 g12(s.sum / target)});
        run.meta["cutoff"] = P;
        run.meta["rK"] = residue_json(r);
    });

    // montgomery
    std::int64_t Hmax = 131072, fit_min = 1024, m_cutoff = 10'000'000;
    auto* montgomery = app.add_subcommand("montgomery", "dyadic table of sum_{h<=H} (S(h) - 1)(1 - h/H) over the integers");
    montgomery->add_option("--Hmax", Hmax, "largest H (integer >= 2); rows at H = 2, 4, 8, ...");
    montgomery->add_option("--cutoff", m_cutoff, "prime cutoff P (>= 2)");
    montgomery->add_option("--fit-min", fit_min, "smallest H used in the slope fit");
    command(montgomery, [&] {
        if (Hmax < 2) fail(ErrorCode::InvalidArgument, "--Hmax must be >= 2");
        RationalSingularTable table(m_cutoff);
        const auto values = table.sieve(Hmax);
        run.row({"H", "sum", "target", "ratio"});
        std::vector<double> x, y;
        for (std::int64_t H = 2; H <= Hmax; H *= 2) {
            const double s = montgomery_sum_from_values(H, values);
            const double target = -0.5 * std::log(static_cast<double>(H));
            run.row({std::to_string(H), g12(s), g12(target), g12(s / target)});
            if (H >= fit_min) {
                x.push_back(std::log(static_cast<double>(H)));
                y.push_back(s);
            }
            if (H > Hmax / 2) break;
        }
        if (x.size() >= 2) {
            const double slope = least_squares_slope(x, y);
            run.line("# slope " + g12(slope) + " over H >= " + std::to_string(fit_min) + " (target -0.5)");
            run.meta["slope"] = slope;
        } else {
            run.line("# slope unavailable: fewer than two rows with H >= " + std::to_string(fit_min));
        }
        run.meta["cutoff"] = m_cutoff;
    });

    // variance
    double var_X = 1000;
    std::string deltas_text = "0.1:0.9:0.1", sampler_text = "exhaustive";
    std::uint64_t seed = 0;
    auto* variance = app.add_subcommand("variance", "V/E of prime counts in boxes of half-width X^delta");
    add_field(variance);
    variance->add_option("--X", var_X, "center range: centers lie in [-X, X]^2 (coordinate units)");
    variance->add_option("--deltas", deltas_text, "exponents as start:stop:step or a comma list, each in (0, 1)");
    variance->add_option("--sampler", sampler_text, "exhaustive (integer centers) or jitter[:q] (q x q per unit cell)");
    variance->add_option("--seed", seed, "64-bit seed for the jitter sampler");
    variance->add_option("--tol", residue_tol, "error target for r_K");
    command(variance, [&] {
        const auto F = FieldSpec::parse(field_text);
        const auto deltas = parse_deltas(deltas_text);
        const auto sampler = Sampler::parse(sampler_text, seed);
        const auto prof = variance_profile(F, var_X, deltas, sampler, run.threads, residue_tol);
        run.row({"field", "X", "delta", "H", "n_samples", "E", "V", "ratio", "target"});
        for (const auto& r : prof.rows) {
            run.row({F.to_string(), g12(var_X), g12(r.delta), g12(r.H), std::to_string(r.n_samples), g12(r.E), g12(r.V),
                     g12(r.ratio), g12(r.target)});
        }
        run.meta["sampler"] = sampler.name();
        run.meta["seed"] = seed;
        run.meta["rK"] = {{"value", prof.rK}, {"error_bound", prof.rK_error}};
        run.meta["grid_extent"] = prof.extent;
    });

    // variance-z
    std::int64_t z_X = 100000;
    auto* variance_z = app.add_subcommand("variance-z", "integer baseline: prime and von Mangoldt variances in [x, x+H]");
    variance_z->add_option("--X", z_X, "range of x: integers 0..X-1 (>= 2)");
    variance_z->add_option("--deltas", deltas_text, "exponents, H = round(X^delta)");
    command(variance_z, [&] {
        run.row({"X", "delta", "H", "E", "V_prime", "V_lambda", "ratio_prime", "ratio_lambda", "closeness"});
        for (double d : parse_deltas(deltas_text)) {
            const auto z = z_baseline(z_X, d);
            const double close = std::abs(std::sqrt(z.V_lambda) / std::log(static_cast<double>(z_X)) -
                                          std::sqrt(z.V_prime)) /
                                 std::sqrt(z.V_prime);
            run.row({std::to_string(z.X), g12(z.delta), std::to_string(z.H), g12(z.E), g12(z.V_prime), g12(z.V_lambda),
                     g12(z.ratio_prime), g12(z.ratio_lambda), g12(close)});
        }
    });

    // diagnose lemma32 | lemma33 | condensation
    auto* diagnose = app.add_subcommand("diagnose", "lattice and Ramanujan-sum diagnostics");
    diagnose->require_subcommand(1);
    std::int64_t max_norm = 100;
    std::string radii_text = "0.05,0.1,0.2,0.5,1";
    auto* lemma32 = diagnose->add_subcommand("lemma32", "dual-lattice counts of ideal lattices against N(a) r^2");
    add_field(lemma32);
    lemma32->add_option("--max-norm", max_norm, "largest ideal norm (count)");
    lemma32->add_option("--radii", radii_text, "comma list of radii r (dual coordinate units)");
    command(lemma32, [&] {
        const auto F = FieldSpec::parse(field_text);
        const auto radii = parse_reals(radii_text, "radii");
        run.row({"ideal", "norm", "a", "b", "c", "dual_shortest", "norm_shortest_sq", "r", "norm_r_sq", "count"});
        double cmin = INFINITY, kmax = 0.0;
        for (const auto& q : enumerate_squarefree_ideals(F, max_norm)) {
            const auto L = ideal_lattice(q);
            const double l = dual_shortest_length(L);
            const double N = static_cast<double>(q.norm);
            cmin = std::min(cmin, N * l * l);
            for (double r : radii) {
                const auto n = dual_lattice_count(L, r);
                if (n > 0) kmax = std::max(kmax, static_cast<double>(n) / (N * r * r));
                run.row({ideal_label(q), std::to_string(q.norm), std::to_string(L.a), std::to_string(L.b),
                         std::to_string(L.c), g12(l), g12(N * l * l), g12(r), g12(N * r * r), std::to_string(n)});
            }
        }
        run.line("# c_min " + g12(cmin) + " K_max " + g12(kmax));
        run.meta["c_min"] = cmin;
        run.meta["K_max"] = kmax;
    });
    double lemma_H = 50;
    auto* lemma33 = diagnose->add_subcommand("lemma33", "smoothed ideal counts against H^2 w^(0) / N(a) and w(0)");
    add_field(lemma33);
    lemma33->add_option("--max-norm", max_norm, "largest ideal norm (count)");
    lemma33->add_option("--H", lemma_H, "scale H (coordinate units, > 0)");
    lemma33->add_option("--w", w_text, "weight: square or disc autocorrelation");
    command(lemma33, [&] {
        const auto F = FieldSpec::parse(field_text);
        const auto w = TestFunction::parse(w_text);
        if (w.dimension() != 2) fail(ErrorCode::InvalidArgument, "--w must be square or disc here");
        run.row({"ideal", "norm", "H", "sum", "w0", "main", "rel_to_main", "only_zero"});
        for (const auto& q : enumerate_squarefree_ideals(F, max_norm)) {
            const double s = ideal_smoothed_count(q, w, lemma_H);
            const double main_term = lemma_H * lemma_H * w.fourier_at_zero() / static_cast<double>(q.norm);
            run.row({ideal_label(q), std::to_string(q.norm), g12(lemma_H), g12(s), g12(w.value_at_zero()), g12(main_term),
                     g12((s - main_term) / main_term), s == w.value_at_zero() ? "1" : "0"});
        }
    });
    std::int64_t cond_box = 20;
    auto* condensation = diagnose->add_subcommand("condensation", "check sum_{d|c} c_d(eta) = N(c) [eta in c]");
    add_field(condensation);
    condensation->add_option("--max-norm", max_norm, "largest ideal norm (count)");
    condensation->add_option("--box", cond_box, "eta ranges over [-box, box]^2 (coordinate units)");
    command(condensation, [&] {
        const auto F = FieldSpec::parse(field_text);
        run.row({"ideal", "norm", "points", "mismatches"});
        std::int64_t total = 0;
        for (const auto& c : enumerate_squarefree_ideals(F, max_norm)) {
            const auto divs = divisors(c);
            std::int64_t bad = 0, points = 0;
            for (std::int64_t y = -cond_box; y <= cond_box; ++y)
                for (std::int64_t x = -cond_box; x <= cond_box; ++x) {
                    const QuadInt eta{x, y};
                    std::int64_t s = 0;
                    for (const auto& d : divs) s += ramanujan_sum(d, eta);
                    bad += s != (c.contains(eta) ? c.norm : 0);
                    ++points;
                }
            total += bad;
            run.row({ideal_label(c), std::to_string(c.norm), std::to_string(points), std::to_string(bad)});
        }
        run.line("# total mismatches " + std::to_string(total));
        run.meta["mismatches"] = total;
    });

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend() - 1);
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << "error: code=invalid_argument message=" << e.what() << '\n';
        return 2;
    }

    try {
        run.open();
        run.meta["version"] = SINGSER_VERSION;
        std::vector<std::string> path;
        for (const auto* a = leaf; a != nullptr && a->get_parent() != nullptr; a = a->get_parent()) {
            path.insert(path.begin(), a->get_name());
        }
        run.meta["command"] = join(path, " ");
        run.meta["parameters"] = echo_options(leaf);
        action();
        run.finish();
    } catch (const Error& e) {
        std::cerr << "error: code=" << error_code_name(e.code()) << " message=" << e.what() << '\n';
        return exit_code(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: code=internal message=" << e.what() << '\n';
        return 1;
    }
    return 0;
}
