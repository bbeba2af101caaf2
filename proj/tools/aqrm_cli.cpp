/*
 * aqrm — command-line front end for the asymmetric-Rabi heat-kernel library.
 *
 * Subcommands:
 *   kernel     one 2×2 heat-kernel evaluation with diagnostics
 *   partition  Z(β) over a single β or a --grid
 *   spectrum   truncated-basis eigenvalues (CSV or JSON export)
 *   zeta       spectral zeta values (dirichlet | mellin | hankel), residue probe
 *   trotter    finite-N kernel ladder against the series reference
 *   validate   cross-validation suites (closed-forms | oracle | fourier | zeta | all)
 *
 * Output contract: a JSON document {manifest, results:[{name, value(s),
 * error, flags}]} or a flat CSV mirror of the results (manifest as comment
 * lines).  Every numeric output carries an error estimate or an explicit
 * "exact" marker.  Identical invocations produce bit-identical JSON: wall
 * clock time enters only via --stamp or the AQRM_TIMESTAMP variable.
 *
 * Exit codes: 0 success · 1 validation failure · 2 bad flags · 3 numerical
 * domain / convergence failure.
 */
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "aqrm/fock.hpp"
#include "aqrm/model.hpp"
#include "aqrm/reduce.hpp"
#include "aqrm/series.hpp"
#include "aqrm/trotter.hpp"
#include "aqrm/validate.hpp"
#include "aqrm/zeta.hpp"

using json = nlohmann::ordered_json;

namespace {

constexpr const char* kToolVersion = "aqrm 0.1.0";

// ── shared option block ─────────────────────────────────────────────────────

struct CommonOpts {
    double g = 0.5;
    double delta = 1.0;
    double eps = 0.0;
    std::string format = "json";
    std::string out_path;
    std::string plot_path;
    bool stamp = false;
    int threads = 0;
};

void attach_common(CLI::App* sub, CommonOpts& c, bool plot_allowed) {
    sub->add_option("--g", c.g, "coupling g >= 0")->check(CLI::NonNegativeNumber);
    sub->add_option("--delta", c.delta, "level splitting Delta >= 0")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--eps", c.eps, "asymmetry eps");
    sub->add_option("--format", c.format, "output format")
        ->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--out", c.out_path, "write the document to this file instead of stdout");
    sub->add_flag("--stamp", c.stamp, "embed the current UTC time in the manifest");
    sub->add_option("--threads", c.threads,
                    "worker threads (0 = machine parallelism; AQRM_THREADS overrides)")
        ->check(CLI::Range(0, 4096));
    if (plot_allowed)
        sub->add_option("--emit-plot-data", c.plot_path,
                        "also write two-column (x, value) rows to this file");
}

std::string timestamp_string(bool stamp) {
    if (stamp) {
        std::time_t now = std::time(nullptr);
        char buf[32];
        std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
        return buf;
    }
    if (const char* env = std::getenv("AQRM_TIMESTAMP")) return env;
    return "unstamped";
}

// ── document assembly ───────────────────────────────────────────────────────

struct Document {
    json manifest;
    json results = json::array();

    void add_scalar(const std::string& name, double value, const json& error,
                    std::vector<std::string> flags = {}) {
        results.push_back(
            {{"name", name}, {"value", value}, {"error", error}, {"flags", flags}});
    }
    void add_complex(const std::string& name, std::complex<double> value, const json& error,
                     std::vector<std::string> flags = {}) {
        flags.insert(flags.begin(), "complex");
        results.push_back({{"name", name},
                           {"value", json::array({value.real(), value.imag()})},
                           {"error", error},
                           {"flags", flags}});
    }
    void add_matrix(const std::string& name, const aqrm::Mat2& m, const json& error,
                    std::vector<std::string> flags = {}) {
        results.push_back(
            {{"name", name},
             {"values", json::array({json::array({m.m11, m.m12}), json::array({m.m21, m.m22})})},
             {"error", error},
             {"flags", flags}});
    }
};

json make_manifest(const CommonOpts& c, const std::string& command, const json& config) {
    json m;
    m["command"] = command;
    m["params"] = {{"g", c.g}, {"delta", c.delta}, {"eps", c.eps}, {"omega", 1.0}};
    m["config"] = config;
    m["timestamp"] = timestamp_string(c.stamp);
    m["tool_version"] = kToolVersion;
    return m;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += "\"\"";
        out += ch;
    }
    out += '"';
    return out;
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string error_cell(const json& err) {
    if (err.is_string()) return err.get<std::string>();
    if (err.is_null()) return "";
    return fmt17(err.get<double>());
}

std::string flags_cell(const json& flags) {
    std::string out;
    for (const auto& f : flags) {
        if (!out.empty()) out += '|';
        out += f.get<std::string>();
    }
    return out;
}

/// Flat CSV mirror of the results array; the manifest rides along as
/// comment lines so every output file is self-describing.
std::string render_csv(const Document& doc) {
    std::string out;
    out += "# command: " + doc.manifest["command"].get<std::string>() + "\n";
    out += "# params: " + doc.manifest["params"].dump() + "\n";
    out += "# config: " + doc.manifest["config"].dump() + "\n";
    out += "# timestamp: " + doc.manifest["timestamp"].get<std::string>() + "\n";
    out += "# tool_version: " + std::string(kToolVersion) + "\n";
    out += "name,value,error,flags\n";
    for (const auto& r : doc.results) {
        const std::string name = r["name"].get<std::string>();
        const std::string err = error_cell(r["error"]);
        const std::string flg = flags_cell(r["flags"]);
        auto row = [&](const std::string& n, double v) {
            out += csv_escape(n) + "," + fmt17(v) + "," + csv_escape(err) + "," +
                   csv_escape(flg) + "\n";
        };
        if (r.contains("values")) {
            const auto& m = r["values"];
            for (std::size_t i = 0; i < m.size(); ++i)
                for (std::size_t j = 0; j < m[i].size(); ++j)
                    row(name + "[" + std::to_string(i) + "][" + std::to_string(j) + "]",
                        m[i][j].get<double>());
        } else if (r["value"].is_array()) {
            row(name + ".re", r["value"][0].get<double>());
            row(name + ".im", r["value"][1].get<double>());
        } else {
            row(name, r["value"].get<double>());
        }
    }
    return out;
}

void emit(const Document& doc, const CommonOpts& c) {
    std::string text;
    if (c.format == "csv") {
        text = render_csv(doc);
    } else {
        json whole;
        whole["manifest"] = doc.manifest;
        whole["results"] = doc.results;
        text = whole.dump(2) + "\n";
    }
    if (!c.out_path.empty()) {
        std::ofstream f(c.out_path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open --out file: " + c.out_path);
        f << text;
    } else {
        std::cout << text;
    }
}

void emit_plot(const CommonOpts& c, const std::vector<std::pair<double, double>>& cols) {
    if (c.plot_path.empty()) return;
    std::ofstream f(c.plot_path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open --emit-plot-data file: " + c.plot_path);
    for (const auto& [x, v] : cols) f << fmt17(x) << " " << fmt17(v) << "\n";
}

// ── grids ───────────────────────────────────────────────────────────────────

std::vector<double> parse_grid(const std::string& s) {
    double lo = 0, hi = 0;
    int n = 0;
    char extra = 0;
    if (std::sscanf(s.c_str(), "%lf:%lf:%d%c", &lo, &hi, &n, &extra) != 3 || n < 1)
        throw CLI::ValidationError("--grid", "expected start:stop:count with count >= 1");
    std::vector<double> out(static_cast<std::size_t>(n));
    if (n == 1) {
        out[0] = lo;
    } else {
        for (int i = 0; i < n; ++i) out[i] = lo + (hi - lo) * i / (n - 1);
    }
    return out;
}

/// Evaluate f(i) for i in [0, n) on a pool sized by `threads`; results land
/// in input order no matter which worker finished first.
template <class T, class F>
std::vector<T> map_indexed(std::size_t n, int threads, F&& f) {
    std::vector<T> out(n);
    const int nw = std::min<std::size_t>(n, static_cast<std::size_t>(aqrm::thread_count(threads)));
    if (nw <= 1) {
        for (std::size_t i = 0; i < n; ++i) out[i] = f(i);
        return out;
    }
    std::atomic<std::size_t> next{0};
    auto run = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) break;
            out[i] = f(i);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(nw - 1);
    for (int i = 0; i + 1 < nw; ++i) pool.emplace_back(run);
    run();
    for (auto& th : pool) th.join();
    return out;
}

std::string join_args(int argc, char** argv) {
    std::string s;
    for (int i = 0; i < argc; ++i) {
        if (i) s += ' ';
        s += argv[i];
    }
    return s;
}

std::string fmt_label(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

// ── subcommand runners ──────────────────────────────────────────────────────

int run_kernel(const CommonOpts& c, const std::string& cmd, double t, double x, double y,
               int lambda_max, int quad_order) {
    aqrm::SeriesConfig cfg;
    cfg.lambda_max = lambda_max;
    cfg.threads = c.threads;
    if (quad_order > 0) {
        cfg.rule_override = true;
        cfg.rule.kind = aqrm::QuadratureRule::Kind::tensor_gauss;
        cfg.rule.order = quad_order;
    }
    const aqrm::ModelParams p{c.g, c.delta, c.eps};
    const aqrm::KernelResult k = aqrm::heat_kernel(x, y, t, p, cfg);
    const double err = k.quad_error + k.tail_bound;
    const std::string conv = k.converged ? "converged" : "not-converged";

    Document doc;
    doc.manifest = make_manifest(
        c, cmd,
        {{"t", t}, {"x", x}, {"y", y}, {"lambda_max", cfg.lambda_max}, {"quad_order", quad_order}});
    doc.add_matrix("kernel", k.value, err, {conv});
    doc.add_scalar("lambda_used", k.lambda_used, "exact", {"diagnostic"});
    doc.add_scalar("quad_error", k.quad_error, "exact", {"diagnostic"});
    doc.add_scalar("tail_bound", k.tail_bound, "exact", {"diagnostic"});
    emit(doc, c);
    return k.converged ? 0 : 3;
}

int run_partition(const CommonOpts& c, const std::string& cmd, double beta,
                  const std::string& grid, int lambda_max) {
    std::vector<double> betas = grid.empty() ? std::vector<double>{beta} : parse_grid(grid);
    aqrm::SeriesConfig cfg;
    cfg.lambda_max = lambda_max;
    cfg.threads = betas.size() > 1 ? 1 : c.threads;
    const aqrm::ModelParams p{c.g, c.delta, c.eps};

    struct Row {
        double z = 0, err = 0;
        bool conv = false;
        int pairs = 0;
    };
    auto rows = map_indexed<Row>(betas.size(), c.threads, [&](std::size_t i) {
        aqrm::ZInfo info;
        Row r;
        r.z = aqrm::partition_function(betas[i], p, cfg, &info);
        r.err = info.quad_error + info.tail_bound;
        r.conv = info.converged;
        r.pairs = info.pairs_used;
        return r;
    });

    Document doc;
    doc.manifest = make_manifest(
        c, cmd, {{"beta_grid", betas}, {"lambda_max", cfg.lambda_max}});
    std::vector<std::pair<double, double>> plot;
    bool all_conv = true;
    for (std::size_t i = 0; i < betas.size(); ++i) {
        doc.add_scalar("Z[beta=" + fmt_label(betas[i]) + "]", rows[i].z, rows[i].err,
                       {rows[i].conv ? "converged" : "not-converged",
                        "pairs:" + std::to_string(rows[i].pairs)});
        plot.emplace_back(betas[i], rows[i].z);
        all_conv = all_conv && rows[i].conv;
    }
    emit(doc, c);
    emit_plot(c, plot);
    return all_conv ? 0 : 3;
}

int run_spectrum(const CommonOpts& c, const std::string& cmd, int cutoff, int count) {
    const aqrm::ModelParams p{c.g, c.delta, c.eps};
    aqrm::FockConfig fc;
    fc.cutoff = cutoff;
    const aqrm::Spectrum full = aqrm::eigen_spectrum(p, fc);
    aqrm::FockConfig fh;
    fh.cutoff = std::max(4, cutoff / 2);
    const aqrm::Spectrum half = aqrm::eigen_spectrum(p, fh);

    if (count <= 0) count = full.trusted_count;
    count = std::min<int>(count, static_cast<int>(full.eigenvalues.size()));

    if (c.format == "csv") {
        aqrm::Spectrum head = full;
        head.eigenvalues.resize(static_cast<std::size_t>(count));
        std::string text;
        text += "# command: " + cmd + "\n";
        text += "# params: g=" + fmt_label(c.g) + " delta=" + fmt_label(c.delta) +
                " eps=" + fmt_label(c.eps) + "\n";
        text += "# cutoff: " + std::to_string(cutoff) +
                ", trusted_count: " + std::to_string(full.trusted_count) + "\n";
        text += "# timestamp: " + timestamp_string(c.stamp) + "\n";
        text += "# tool_version: " + std::string(kToolVersion) + "\n";
        text += aqrm::spectrum_to_csv(head);
        if (!c.out_path.empty()) {
            std::ofstream f(c.out_path, std::ios::binary);
            if (!f) throw std::runtime_error("cannot open --out file: " + c.out_path);
            f << text;
        } else {
            std::cout << text;
        }
        return 0;
    }

    Document doc;
    doc.manifest = make_manifest(
        c, cmd,
        {{"cutoff", cutoff}, {"count", count}, {"trusted_count", full.trusted_count}});
    for (int j = 0; j < count; ++j) {
        std::vector<std::string> flags{j < full.trusted_count ? "trusted" : "untrusted"};
        json err;
        if (j < static_cast<int>(half.eigenvalues.size()))
            err = std::abs(full.eigenvalues[static_cast<std::size_t>(j)] -
                           half.eigenvalues[static_cast<std::size_t>(j)]);
        else
            flags.push_back("error-unavailable");
        doc.add_scalar("lambda[" + std::to_string(j) + "]",
                       full.eigenvalues[static_cast<std::size_t>(j)], err, flags);
    }
    emit(doc, c);
    return 0;
}

int run_zeta(const CommonOpts& c, const std::string& cmd, double s_re, double s_im, double tau,
             const std::string& method, const std::string& grid, int cutoff, bool residue) {
    const aqrm::ModelParams p{c.g, c.delta, c.eps};
    aqrm::ZetaConfig zc;
    zc.cutoff = cutoff;
    zc.series.threads = c.threads;
    aqrm::ZetaEvaluator ev(p, zc);

    Document doc;
    doc.manifest = make_manifest(c, cmd,
                                 {{"s", json::array({s_re, s_im})},
                                  {"tau", tau},
                                  {"method", method},
                                  {"cutoff", cutoff},
                                  {"s_grid", grid.empty() ? json() : json(grid)},
                                  {"residue", residue}});
    std::vector<std::pair<double, double>> plot;

    if (residue) {
        const aqrm::ResidueProbe probe = ev.residue_probe(tau);
        for (std::size_t i = 0; i < probe.raw.size(); ++i)
            doc.add_scalar("residue_raw[" + std::to_string(i) + "]", probe.raw[i],
                           std::abs(probe.raw[i] - probe.value), {"probe"});
        doc.add_scalar("residue", probe.value, std::abs(probe.value - probe.rich1.back()),
                       {"richardson"});
    } else {
        std::vector<double> ss = grid.empty() ? std::vector<double>{s_re} : parse_grid(grid);
        // the evaluator caches Z(t) internally and is not a shared-state-free
        // object, so grid points run sequentially
        for (double sr : ss) {
            const std::complex<double> s{sr, s_im};
            aqrm::ZetaValue v;
            if (method == "dirichlet")
                v = ev.dirichlet(s, tau);
            else if (method == "hankel")
                v = ev.hankel(s, tau);
            else
                v = ev.mellin(s, tau);
            std::string name = "zeta[s=" + fmt_label(sr);
            if (s_im != 0.0) name += "+" + fmt_label(s_im) + "i";
            name += ",tau=" + fmt_label(tau) + "]";
            doc.add_complex(name, v.value, v.error, {method});
            plot.emplace_back(sr, v.value.real());
        }
    }
    emit(doc, c);
    emit_plot(c, plot);
    return 0;
}

int run_trotter(const CommonOpts& c, const std::string& cmd, std::vector<int> ns, double t,
                double x, double y) {
    if (ns.empty()) ns = {2, 4, 8, 16};
    const aqrm::ModelParams p{c.g, c.delta, c.eps};
    aqrm::SeriesConfig cfg;
    cfg.threads = ns.size() > 1 ? 1 : c.threads;
    const aqrm::KernelResult ref = aqrm::heat_kernel(x, y, t, p, cfg);
    const double ref_err = ref.quad_error + ref.tail_bound;

    auto kernels = map_indexed<aqrm::Mat2>(ns.size(), c.threads, [&](std::size_t i) {
        return aqrm::trotter_kernel(x, y, t, ns[i], p);
    });

    Document doc;
    doc.manifest = make_manifest(c, cmd, {{"n", ns}, {"t", t}, {"x", x}, {"y", y}});
    std::vector<std::pair<double, double>> plot;
    std::vector<double> errs(ns.size());
    for (std::size_t i = 0; i < ns.size(); ++i) {
        errs[i] = aqrm::max_abs_diff(kernels[i], ref.value);
        doc.add_matrix("trotter[N=" + std::to_string(ns[i]) + "]", kernels[i], "exact",
                       {"path-sum"});
        doc.add_scalar("err[N=" + std::to_string(ns[i]) + "]", errs[i], ref_err,
                       {"vs-series-reference"});
        plot.emplace_back(ns[i], errs[i]);
    }
    for (std::size_t i = 0; i + 1 < ns.size(); ++i)
        doc.add_scalar(
            "ratio[" + std::to_string(ns[i]) + "/" + std::to_string(ns[i + 1]) + "]",
            errs[i] / errs[i + 1], "exact", {"derived"});
    doc.add_matrix("series_reference", ref.value, ref_err,
                   {ref.converged ? "converged" : "not-converged"});
    emit(doc, c);
    emit_plot(c, plot);
    return 0;
}

int run_validate(const CommonOpts& c, const std::string& cmd, const std::string& suite) {
    const auto results = aqrm::validate::run_suite(suite);
    Document doc;
    doc.manifest = make_manifest(c, cmd, {{"suite", suite}});
    for (const auto& r : results) {
        std::fprintf(stderr, "[%s] %-22s metric %.3g (bound %.3g, %.2fs) %s\n",
                     r.passed ? "PASS" : "FAIL", r.name.c_str(), r.metric, r.tolerance,
                     r.seconds, r.detail.c_str());
        doc.add_scalar(r.name, r.metric, r.tolerance,
                       {r.passed ? "pass" : "fail", "error-field-is-bound", r.detail});
    }
    emit(doc, c);
    return aqrm::validate::all_passed(results) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"asymmetric-Rabi heat-kernel toolkit"};
    app.require_subcommand(1);
    const std::string cmd = join_args(argc, argv);

    CommonOpts ck, cp, cs, cz, ct, cv;

    auto* sk = app.add_subcommand("kernel", "evaluate the 2x2 heat kernel at one point");
    attach_common(sk, ck, false);
    double k_t = 1.0, k_x = 0.0, k_y = 0.0;
    int k_lmax = 12, k_qorder = 0;
    sk->add_option("--t", k_t, "time t > 0")->required()->check(CLI::PositiveNumber);
    sk->add_option("--x", k_x, "first coordinate");
    sk->add_option("--y", k_y, "second coordinate");
    sk->add_option("--lambda-max", k_lmax, "series depth cap")->check(CLI::Range(0, 200));
    sk->add_option("--quad-order", k_qorder, "force tensor Gauss-Legendre of this order")
        ->check(CLI::Range(0, 64));

    auto* sp = app.add_subcommand("partition", "partition function over a beta grid");
    attach_common(sp, cp, true);
    double p_beta = 1.0;
    std::string p_grid;
    int p_lmax = 12;
    sp->add_option("--beta", p_beta, "inverse temperature")->check(CLI::PositiveNumber);
    sp->add_option("--grid", p_grid, "beta grid start:stop:count");
    sp->add_option("--lambda-max", p_lmax, "series depth cap (pairs)")
        ->check(CLI::Range(0, 200));

    auto* ss = app.add_subcommand("spectrum", "truncated-basis spectrum export");
    attach_common(ss, cs, false);
    int s_cutoff = 300, s_count = 0;
    ss->add_option("--cutoff", s_cutoff, "boson modes in the truncated basis")
        ->check(CLI::Range(4, 4000));
    ss->add_option("--count", s_count, "eigenvalues to export (default: trusted third)")
        ->check(CLI::Range(0, 8000));

    auto* sz = app.add_subcommand("zeta", "spectral zeta values");
    attach_common(sz, cz, true);
    double z_sre = 2.0, z_sim = 0.0, z_tau = 1.0;
    std::string z_method = "mellin", z_grid;
    int z_cutoff = 600;
    bool z_residue = false;
    sz->add_option("--s", z_sre, "Re s");
    sz->add_option("--s-im", z_sim, "Im s");
    sz->add_option("--tau", z_tau, "spectral shift tau");
    sz->add_option("--method", z_method, "evaluation route")
        ->check(CLI::IsMember({"dirichlet", "mellin", "hankel"}));
    sz->add_option("--grid", z_grid, "Re s grid start:stop:count");
    sz->add_option("--cutoff", z_cutoff, "oracle cutoff for the dirichlet route")
        ->check(CLI::Range(4, 4000));
    sz->add_flag("--residue", z_residue, "run the s -> 1 residue probe instead");

    auto* st = app.add_subcommand("trotter", "finite-N kernel convergence ladder");
    attach_common(st, ct, true);
    std::vector<int> t_ns;
    double t_t = 1.0, t_x = 0.0, t_y = 0.0;
    st->add_option("--n", t_ns, "Trotter step counts (comma separated)")
        ->delimiter(',')
        ->check(CLI::Range(1, aqrm::kTrotterMaxN));
    st->add_option("--t", t_t, "time t > 0")->required()->check(CLI::PositiveNumber);
    st->add_option("--x", t_x, "first coordinate");
    st->add_option("--y", t_y, "second coordinate");

    auto* sv = app.add_subcommand("validate", "run the cross-validation suites");
    attach_common(sv, cv, false);
    std::string v_suite = "all";
    sv->add_option("--suite", v_suite, "which suite to run")
        ->check(CLI::IsMember({"closed-forms", "oracle", "fourier", "zeta", "all"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (sk->parsed()) return run_kernel(ck, cmd, k_t, k_x, k_y, k_lmax, k_qorder);
        if (sp->parsed()) return run_partition(cp, cmd, p_beta, p_grid, p_lmax);
        if (ss->parsed()) return run_spectrum(cs, cmd, s_cutoff, s_count);
        if (sz->parsed())
            return run_zeta(cz, cmd, z_sre, z_sim, z_tau, z_method, z_grid, z_cutoff, z_residue);
        if (st->parsed()) return run_trotter(ct, cmd, t_ns, t_t, t_x, t_y);
        if (sv->parsed()) return run_validate(cv, cmd, v_suite);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
