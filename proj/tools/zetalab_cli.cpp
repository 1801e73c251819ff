/*
 * zetalab command line front end.
 *
 * Configures and runs the experiment suites exposed by the zetalab C API:
 * zeta line evaluation, moment averages (1/T) int_1^T |zeta(sigma+it)|^{2k} dt
 * against their Dirichlet series targets sum d_k(n)^2 n^{-2sigma}, generalized
 * Fourier coefficients at frequencies lambda = -log n, Besicovitch B2
 * distances to Bohr partial sums, empirical Cauchy distances between vertical
 * lines, Laplace/Abel smoothing probes, level-set concentration profiles, and
 * the critical-line growth diagnostic.
 *
 * Experiments are selected by subcommand; parameters come from flags, with an
 * optional JSON config file supplying values for flags that were not passed
 * explicitly. Numeric output goes to stdout or --out as CSV or JSON with 17
 * significant digits. Data files are byte-identical for identical configs
 * regardless of worker count; wall-clock metadata lives in a separate
 * .meta.json side file so the data artifacts stay reproducible.
 *
 * Exit codes: 0 success, 1 numerical failure or failed report-all assertion,
 * 2 usage or config error.
 */
#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <ctime>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "zetalab.h"

using nlohmann::json;

namespace {

// ----------------------------------------------------------------------
// formatting helpers

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt_short(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

json jcomplex(zl_complex z) { return json::array({z.re, z.im}); }

// ----------------------------------------------------------------------
// options, presets, config file

struct Options {
    int k = 1;
    double sigma = 0.75;
    double sigma_b = std::numeric_limits<double>::quiet_NaN();
    double t_max = -1.0;
    std::string t_grid;
    std::uint64_t n = 0;
    std::string xs;
    double lambda = std::numeric_limits<double>::quiet_NaN();
    std::string thresholds;
    double panel_width = 0.25;
    double tol = 1e-6;
    int workers = 0;
    std::string format;
    std::string out;
    std::string config_path;
    std::string preset = "desk";
    std::uint64_t table_limit = 0;
};

struct Preset {
    double t_max;               // default averaging horizon
    double t_coeff;             // horizon for coefficient runs
    double t_abel_cesaro;       // horizon for the Abel vs Cesaro comparison
    double laplace_x;           // default Laplace rate
    const char* abel_xs;        // default Abel rate ladder
    std::uint64_t table_limit;  // divisor table extent (series targets)
    int k_cap;                  // largest admissible power
};

const std::map<std::string, Preset>& presets() {
    static const std::map<std::string, Preset> table = {
        {"quick", {2e3, 2e3, 5e2, 1e-2, "1e-1,3e-2,1e-2", 100000, 2}},
        {"desk", {2e4, 1e4, 2e4, 1e-3, "1e-2,3e-3,1e-3", 1000000, 2}},
        {"extended", {1e5, 1e4, 5e4, 1e-4, "1e-3,3e-4,1e-4", 1000000, 4}},
    };
    return table;
}

// Attach the shared flag set to a subcommand and remember the option
// handles so the config file can fill in anything not passed explicitly.
struct FlagSet {
    CLI::App* cmd = nullptr;
    std::map<std::string, CLI::Option*> opts;

    void add(CLI::App* sub, Options& o) {
        cmd = sub;
        opts["k"] = sub->add_option("--k", o.k, "zeta power k");
        opts["sigma"] = sub->add_option("--sigma", o.sigma, "real part of s");
        opts["sigma_b"] =
            sub->add_option("--sigma-b", o.sigma_b, "second real part (cauchy)");
        opts["t_max"] = sub->add_option("--t-max", o.t_max,
                                        "averaging horizon T (laplace/abel: "
                                        "truncation override)");
        opts["t_grid"] = sub->add_option(
            "--t-grid", o.t_grid, "t values: comma list or lo:hi:count");
        opts["n"] = sub->add_option("--n", o.n,
                                    "integer frequency index / truncation order");
        opts["x"] = sub->add_option("--x", o.xs, "Laplace rates, comma list");
        opts["lambda"] = sub->add_option(
            "--lambda", o.lambda, "raw frequency (coeff; overrides --n)");
        opts["thresholds"] = sub->add_option("--thresholds", o.thresholds,
                                             "level thresholds, ascending comma list");
        opts["panel_width"] =
            sub->add_option("--panel-width", o.panel_width, "quadrature panel width");
        opts["tol"] = sub->add_option("--tol", o.tol, "per-panel relative tolerance");
        opts["workers"] =
            sub->add_option("--workers", o.workers, "worker threads (0 = hardware)");
        opts["format"] = sub->add_option("--format", o.format, "csv or json");
        opts["out"] = sub->add_option("--out", o.out, "output path (default stdout)");
        opts["config"] =
            sub->add_option("--config", o.config_path, "JSON config file");
        opts["preset"] = sub->add_option("--preset", o.preset,
                                         "quick, desk, or extended");
        opts["table_limit"] = sub->add_option("--table-limit", o.table_limit,
                                              "divisor table extent");
    }

    bool passed(const std::string& key) const {
        auto it = opts.find(key);
        return it != opts.end() && it->second->count() > 0;
    }
};

// Config file values fill any flag the user did not pass on the command
// line; flags always win. Returns false (with a message) on bad input.
bool apply_config(const FlagSet& flags, Options& o, std::string& err) {
    if (o.config_path.empty()) return true;
    std::ifstream in(o.config_path);
    if (!in) {
        err = "cannot open config file: " + o.config_path;
        return false;
    }
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        err = std::string("config parse error: ") + e.what();
        return false;
    }
    if (!j.is_object()) {
        err = "config root must be a JSON object";
        return false;
    }
    try {
        auto want = [&](const char* key) { return j.contains(key) && !flags.passed(key); };
        if (want("k")) o.k = j["k"].get<int>();
        if (want("sigma")) o.sigma = j["sigma"].get<double>();
        if (want("sigma_b")) o.sigma_b = j["sigma_b"].get<double>();
        if (want("t_max")) o.t_max = j["t_max"].get<double>();
        if (want("t_grid")) o.t_grid = j["t_grid"].get<std::string>();
        if (want("n")) o.n = j["n"].get<std::uint64_t>();
        if (want("x")) o.xs = j["x"].get<std::string>();
        if (want("lambda")) o.lambda = j["lambda"].get<double>();
        if (want("thresholds")) o.thresholds = j["thresholds"].get<std::string>();
        if (want("panel_width")) o.panel_width = j["panel_width"].get<double>();
        if (want("tol")) o.tol = j["tol"].get<double>();
        if (want("workers")) o.workers = j["workers"].get<int>();
        if (want("format")) o.format = j["format"].get<std::string>();
        if (want("out")) o.out = j["out"].get<std::string>();
        if (want("preset")) o.preset = j["preset"].get<std::string>();
        if (want("table_limit")) o.table_limit = j["table_limit"].get<std::uint64_t>();
    } catch (const std::exception& e) {
        err = std::string("config value error: ") + e.what();
        return false;
    }
    return true;
}

// ----------------------------------------------------------------------
// grid parsing

bool parse_list(const std::string& text, std::vector<double>& out, std::string& err) {
    out.clear();
    if (text.empty()) {
        err = "empty value list";
        return false;
    }
    if (text.find(':') != std::string::npos) {
        double lo = 0, hi = 0;
        long count = 0;
        if (std::sscanf(text.c_str(), "%lf:%lf:%ld", &lo, &hi, &count) != 3 ||
            count < 1 || !(hi >= lo)) {
            err = "grid must be lo:hi:count with hi >= lo, count >= 1";
            return false;
        }
        if (count > 2000000) {
            err = "grid count too large";
            return false;
        }
        if (count == 1) {
            out.push_back(lo);
            return true;
        }
        const double step = (hi - lo) / static_cast<double>(count - 1);
        for (long i = 0; i < count; ++i)
            out.push_back(i + 1 == count ? hi : lo + step * static_cast<double>(i));
        return true;
    }
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            size_t pos = 0;
            const double v = std::stod(item, &pos);
            while (pos < item.size() && std::isspace(static_cast<unsigned char>(item[pos])))
                ++pos;
            if (pos != item.size()) throw std::invalid_argument(item);
            out.push_back(v);
        } catch (const std::exception&) {
            err = "cannot parse number: " + item;
            return false;
        }
    }
    if (out.empty()) {
        err = "empty value list";
        return false;
    }
    return true;
}

// ----------------------------------------------------------------------
// output plumbing

struct Sink {
    std::string path;       // empty = stdout
    std::ostringstream buf; // data accumulates here, written once

    template <typename... Args> void row(Args&&... parts) {
        bool first = true;
        ((buf << (first ? "" : ","), buf << parts, first = false), ...);
        buf << '\n';
    }
    void text(const std::string& s) { buf << s; }

    bool flush(std::string& err) {
        if (path.empty()) {
            std::fputs(buf.str().c_str(), stdout);
            return true;
        }
        std::ofstream f(path, std::ios::binary);
        if (!f) {
            err = "cannot open output file: " + path;
            return false;
        }
        f << buf.str();
        if (!f.good()) {
            err = "write failure: " + path;
            return false;
        }
        return true;
    }
};

// Wall-clock stamp and resolved parameters live next to the data file so
// the data bytes depend on the config alone.
void write_meta(const Options& o, const std::string& subcmd) {
    if (o.out.empty()) return;
    json meta;
    char stamp[64];
    std::time_t now = std::time(nullptr);
    std::tm tm_utc;
    gmtime_r(&now, &tm_utc);
    std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    meta["created"] = stamp;
    meta["tool"] = "zetalab";
    meta["command"] = subcmd;
    meta["preset"] = o.preset;
    meta["workers"] = o.workers;
    json params;
    params["k"] = o.k;
    params["sigma"] = o.sigma;
    if (std::isfinite(o.sigma_b)) params["sigma_b"] = o.sigma_b;
    params["t_max"] = o.t_max;
    if (!o.t_grid.empty()) params["t_grid"] = o.t_grid;
    if (o.n) params["n"] = o.n;
    if (!o.xs.empty()) params["x"] = o.xs;
    if (std::isfinite(o.lambda)) params["lambda"] = o.lambda;
    if (!o.thresholds.empty()) params["thresholds"] = o.thresholds;
    params["panel_width"] = o.panel_width;
    params["tol"] = o.tol;
    params["table_limit"] = o.table_limit;
    meta["params"] = params;
    std::ofstream f(o.out + ".meta.json");
    if (f) f << meta.dump(2) << '\n';
}

int fail_status(const char* what) {
    std::fprintf(stderr, "error: %s: %s\n", what, zl_last_error());
    return 1;
}

int usage_error(const std::string& msg) {
    std::fprintf(stderr, "usage error: %s\n", msg.c_str());
    return 2;
}

// ----------------------------------------------------------------------
// shared setup

struct Session {
    Options o;
    zl_quad_config qcfg;
    zl_zeta_config zcfg;
    Preset preset;

    int prepare(const FlagSet& flags, const std::string& subcmd) {
        std::string err;
        if (!apply_config(flags, o, err)) return usage_error(err);
        auto it = presets().find(o.preset);
        if (it == presets().end())
            return usage_error("unknown preset: " + o.preset +
                               " (expected quick, desk, or extended)");
        preset = it->second;
        if (o.t_max <= 0 &&
            (subcmd == "moment" || subcmd == "b2dist" || subcmd == "cauchy" ||
             subcmd == "conc"))
            o.t_max = preset.t_max;
        if (o.t_max <= 0 && subcmd == "coeff") o.t_max = preset.t_coeff;
        if (o.table_limit == 0) o.table_limit = preset.table_limit;
        if (o.k < 1 || o.k > preset.k_cap)
            return usage_error("k=" + std::to_string(o.k) + " outside [1, " +
                               std::to_string(preset.k_cap) + "] for preset " +
                               o.preset);
        if (o.workers < 0) return usage_error("workers must be >= 0");
        if (!o.format.empty() && o.format != "csv" && o.format != "json")
            return usage_error("format must be csv or json");
        if (!(o.panel_width > 0) || !(o.tol > 0))
            return usage_error("panel width and tolerance must be positive");
        qcfg = zl_quad_config_default();
        qcfg.panel_width = o.panel_width;
        qcfg.refine_tol = o.tol;
        qcfg.workers = o.workers;
        zcfg = zl_zeta_config_default();
        return 0;
    }

    std::string format_or(const char* dflt) const {
        return o.format.empty() ? dflt : o.format;
    }
};

struct TableHandle {
    zl_divisor_table* t = nullptr;
    ~TableHandle() { zl_divisor_table_free(t); }
};

struct FunctionHandle {
    zl_function* f = nullptr;
    ~FunctionHandle() { zl_function_free(f); }
};

int sieve_table(int k, std::uint64_t limit, TableHandle& h) {
    if (zl_divisor_sieve(k, limit, &h.t) != ZL_OK) return fail_status("divisor sieve");
    return 0;
}

// ----------------------------------------------------------------------
// subcommand runners

int run_zeta(Session& s) {
    if (s.o.t_grid.empty()) return usage_error("zeta requires --t-grid");
    std::vector<double> ts;
    std::string err;
    if (!parse_list(s.o.t_grid, ts, err)) return usage_error(err);

    Sink sink;
    sink.path = s.o.out;
    const std::string fmt = s.format_or("csv");
    json rows = json::array();
    if (fmt == "csv") sink.row("t", "re", "im", "abs");
    for (double t : ts) {
        zl_complex z;
        if (zl_zeta(s.o.sigma, t, &s.zcfg, &z) != ZL_OK) return fail_status("zeta");
        const double mag = std::hypot(z.re, z.im);
        if (fmt == "csv")
            sink.row(fmt17(t), fmt17(z.re), fmt17(z.im), fmt17(mag));
        else
            rows.push_back({{"t", t}, {"re", z.re}, {"im", z.im}, {"abs", mag}});
    }
    if (fmt == "json") {
        json doc = {{"sigma", s.o.sigma}, {"values", rows}};
        sink.text(doc.dump(2) + "\n");
    }
    if (!sink.flush(err)) return usage_error(err);
    write_meta(s.o, "zeta");
    return 0;
}

json moment_json(const zl_moment_record& r) {
    return {{"k", r.k},           {"sigma", r.sigma},
            {"T", r.t_max},       {"integral", r.integral},
            {"average", r.average}, {"target", r.target},
            {"tail_bound", r.tail_bound}, {"rel_gap", r.rel_gap},
            {"quad_err", r.quad_err}};
}

void moment_csv_row(Sink& sink, const zl_moment_record& r) {
    sink.row(r.k, fmt17(r.sigma), fmt17(r.t_max), fmt17(r.integral),
             fmt17(r.average), fmt17(r.target), fmt17(r.tail_bound),
             fmt17(r.rel_gap));
}

int run_moment(Session& s) {
    TableHandle table;
    if (int rc = sieve_table(s.o.k, s.o.table_limit, table)) return rc;

    std::vector<zl_moment_record> records;
    if (!s.o.t_grid.empty()) {
        std::vector<double> ts;
        std::string err;
        if (!parse_list(s.o.t_grid, ts, err)) return usage_error(err);
        records.resize(ts.size());
        if (zl_convergence_sweep(table.t, s.o.k, s.o.sigma, ts.data(), ts.size(),
                                 &s.qcfg, &s.zcfg, records.data()) != ZL_OK)
            return fail_status("convergence sweep");
    } else {
        records.resize(1);
        if (zl_moment(table.t, s.o.k, s.o.sigma, s.o.t_max, &s.qcfg, &s.zcfg,
                      &records[0]) != ZL_OK)
            return fail_status("moment");
    }

    Sink sink;
    sink.path = s.o.out;
    const std::string fmt = s.format_or("csv");
    std::string err;
    if (fmt == "csv") {
        sink.row("k", "sigma", "T", "integral", "average", "target", "tail_bound",
                 "rel_gap");
        for (const auto& r : records) moment_csv_row(sink, r);
    } else {
        json rows = json::array();
        for (const auto& r : records) rows.push_back(moment_json(r));
        sink.text(json(rows).dump(2) + "\n");
    }
    if (!sink.flush(err)) return usage_error(err);
    write_meta(s.o, "moment");
    return 0;
}

int run_coeff(Session& s) {
    double lambda;
    if (std::isfinite(s.o.lambda)) {
        lambda = s.o.lambda;
    } else {
        if (s.o.n == 0)
            return usage_error("coeff requires --n (frequency -log n) or --lambda");
        lambda = -std::log(static_cast<double>(s.o.n));
    }
    zl_fourier_coefficient fc;
    if (zl_fourier_coeff(s.o.k, s.o.sigma, lambda, s.o.t_max, &s.qcfg, &s.zcfg,
                         &fc) != ZL_OK)
        return fail_status("fourier coefficient");

    Sink sink;
    sink.path = s.o.out;
    std::string err;
    const std::string fmt = s.format_or("json");
    if (fmt == "json") {
        json doc = {{"lambda", fc.lambda},
                    {"T", fc.t_max},
                    {"empirical", jcomplex(fc.empirical)},
                    {"predicted", jcomplex(fc.predicted)},
                    {"abs_error", fc.abs_error}};
        sink.text(doc.dump(2) + "\n");
    } else {
        sink.row("lambda", "T", "empirical_re", "empirical_im", "predicted_re",
                 "predicted_im", "abs_error");
        sink.row(fmt17(fc.lambda), fmt17(fc.t_max), fmt17(fc.empirical.re),
                 fmt17(fc.empirical.im), fmt17(fc.predicted.re),
                 fmt17(fc.predicted.im), fmt17(fc.abs_error));
    }
    if (!sink.flush(err)) return usage_error(err);
    write_meta(s.o, "coeff");
    return 0;
}

int run_b2dist(Session& s) {
    if (s.o.n == 0) return usage_error("b2dist requires --n (truncation order N)");
    TableHandle table;
    if (int rc = sieve_table(s.o.k, s.o.table_limit, table)) return rc;

    std::vector<double> ts;
    std::string err;
    if (!s.o.t_grid.empty()) {
        if (!parse_list(s.o.t_grid, ts, err)) return usage_error(err);
    } else {
        ts.push_back(s.o.t_max);
    }

    Sink sink;
    sink.path = s.o.out;
    const std::string fmt = s.format_or("csv");
    json rows = json::array();
    if (fmt == "csv")
        sink.row("k", "sigma", "N", "T", "empirical", "analytic_tail", "tail_bound",
                 "quad_err");
    for (double t : ts) {
        zl_b2_distance b;
        if (zl_b2_dist(table.t, s.o.k, s.o.sigma, s.o.n, t, &s.qcfg, &s.zcfg, &b) !=
            ZL_OK)
            return fail_status("b2 distance");
        if (fmt == "csv")
            sink.row(b.k, fmt17(b.sigma), b.n_terms, fmt17(b.t_max),
                     fmt17(b.empirical), fmt17(b.analytic_tail), fmt17(b.tail_bound),
                     fmt17(b.quad_err));
        else
            rows.push_back({{"k", b.k}, {"sigma", b.sigma}, {"N", b.n_terms},
                            {"T", b.t_max}, {"empirical", b.empirical},
                            {"analytic_tail", b.analytic_tail},
                            {"tail_bound", b.tail_bound}, {"quad_err", b.quad_err}});
    }
    if (fmt == "json") sink.text(json(rows).dump(2) + "\n");
    if (!sink.flush(err)) return usage_error(err);
    write_meta(s.o, "b2dist");
    return 0;
}

int run_cauchy(Session& s) {
    if (!std::isfinite(s.o.sigma_b)) return usage_error("cauchy requires --sigma-b");
    TableHandle table;
    if (int rc = sieve_table(s.o.k, s.o.table_limit, table)) return rc;

    std::vector<double> ts;
    std::string err;
    if (!s.o.t_grid.empty()) {
        if (!parse_list(s.o.t_grid, ts, err)) return usage_error(err);
    } else {
        ts.push_back(s.o.t_max);
    }

    double closed = 0, closed_tail = 0;
    if (zl_cauchy_closed_form(table.t, s.o.sigma, s.o.sigma_b, s.o.table_limit, -1.0,
                              &closed, &closed_tail) != ZL_OK)
        return fail_status("cauchy closed form");

    Sink sink;
    sink.path = s.o.out;
    const std::string fmt = s.format_or("csv");
    json rows = json::array();
    if (fmt == "csv")
        sink.row("k", "sigma_a", "sigma_b", "T", "empirical", "closed_form",
                 "closed_tail_bound", "quad_err");
    for (double t : ts) {
        double value = 0, quad_err = 0;
        if (zl_cauchy_empirical(s.o.k, s.o.sigma, s.o.sigma_b, t, &s.qcfg, &s.zcfg,
                                &value, &quad_err) != ZL_OK)
            return fail_status("cauchy distance");
        if (fmt == "csv")
            sink.row(s.o.k, fmt17(s.o.sigma), fmt17(s.o.sigma_b), fmt17(t),
                     fmt17(value), fmt17(closed), fmt17(closed_tail),
                     fmt17(quad_err));
        else
            rows.push_back({{"k", s.o.k}, {"sigma_a", s.o.sigma},
                            {"sigma_b", s.o.sigma_b}, {"T", t},
                            {"empirical", value}, {"closed_form", closed},
                            {"closed_tail_bound", closed_tail},
                            {"quad_err", quad_err}});
    }
    if (fmt == "json") sink.text(json(rows).dump(2) + "\n");
    if (!sink.flush(err)) return usage_error(err);
    write_meta(s.o, "cauchy");
    return 0;
}

int run_laplace(Session& s) {
    std::vector<double> xs;
    std::string err;
    if (!parse_list(s.o.xs.empty() ? fmt_short(s.preset.laplace_x) : s.o.xs, xs, err))
        return usage_error(err);

    TableHandle table;
    if (int rc = sieve_table(s.o.k, s.o.table_limit, table)) return rc;
    zl_series_value series;
    if (zl_series_eval(table.t, s.o.sigma, s.o.table_limit, -1.0, &series) != ZL_OK)
        return fail_status("series target");

    Sink sink;
    sink.path = s.o.out;
    const std::string fmt = s.format_or("csv");
    json rows = json::array();
    if (fmt == "csv")
        sink.row("k", "sigma", "x", "t_cut", "value_re", "value_im", "trunc_bound",
                 "target", "rel_gap");
    for (double x : xs) {
        const double t_cut = s.o.t_max > 0 ? s.o.t_max : zl_default_t_cut(x);
        zl_laplace_probe lp;
        if (zl_laplace(s.o.k, s.o.sigma, x, 0.0, t_cut, &s.qcfg, &s.zcfg, &lp) !=
            ZL_OK)
            return fail_status("laplace probe");
        const double scaled = x * lp.value.re;
        const double rel_gap = std::abs(scaled - series.partial_sum) / series.partial_sum;
        if (fmt == "csv")
            sink.row(lp.k, fmt17(lp.sigma), fmt17(lp.x), fmt17(lp.t_cut),
                     fmt17(lp.value.re), fmt17(lp.value.im),
                     fmt17(lp.truncation_bound), fmt17(series.partial_sum),
                     fmt17(rel_gap));
        else
            rows.push_back({{"k", lp.k}, {"sigma", lp.sigma}, {"x", lp.x},
                            {"t_cut", lp.t_cut},
                            {"value", jcomplex(lp.value)},
                            {"trunc_bound", lp.truncation_bound},
                            {"target", series.partial_sum}, {"rel_gap", rel_gap}});
    }
    if (fmt == "json") sink.text(json(rows).dump(2) + "\n");
    if (!sink.flush(err)) return usage_error(err);
    write_meta(s.o, "laplace");
    return 0;
}

int run_abel(Session& s) {
    std::vector<double> xs;
    std::string err;
    if (!parse_list(s.o.xs.empty() ? s.preset.abel_xs : s.o.xs, xs, err))
        return usage_error(err);
    for (size_t i = 1; i < xs.size(); ++i)
        if (!(xs[i] < xs[i - 1]))
            return usage_error("abel rates must be strictly descending");

    TableHandle table;
    if (int rc = sieve_table(s.o.k, s.o.table_limit, table)) return rc;

    std::vector<zl_abel_row> rows(xs.size());
    if (zl_abel_probe(table.t, s.o.k, s.o.sigma, xs.data(), xs.size(),
                      s.o.t_max > 0 ? s.o.t_max : 0.0, &s.qcfg, &s.zcfg,
                      rows.data()) != ZL_OK)
        return fail_status("abel probe");

    Sink sink;
    sink.path = s.o.out;
    const std::string fmt = s.format_or("csv");
    if (fmt == "csv") {
        sink.row("k", "sigma", "x", "t_cut", "scaled", "target", "rel_gap",
                 "trunc_bound");
        for (const auto& r : rows)
            sink.row(s.o.k, fmt17(s.o.sigma), fmt17(r.x), fmt17(r.t_cut),
                     fmt17(r.scaled), fmt17(r.target), fmt17(r.rel_gap),
                     fmt17(r.truncation_bound));
    } else {
        json arr = json::array();
        for (const auto& r : rows)
            arr.push_back({{"k", s.o.k}, {"sigma", s.o.sigma}, {"x", r.x},
                           {"t_cut", r.t_cut}, {"scaled", r.scaled},
                           {"target", r.target}, {"rel_gap", r.rel_gap},
                           {"trunc_bound", r.truncation_bound}});
        sink.text(arr.dump(2) + "\n");
    }
    if (!sink.flush(err)) return usage_error(err);
    write_meta(s.o, "abel");
    return 0;
}

int run_conc(Session& s) {
    std::vector<double> thresholds;
    std::string err;
    if (!parse_list(s.o.thresholds.empty() ? "0.5,1,2,4" : s.o.thresholds,
                    thresholds, err))
        return usage_error(err);
    for (size_t i = 0; i < thresholds.size(); ++i) {
        if (thresholds[i] < 0) return usage_error("thresholds must be nonnegative");
        if (i && !(thresholds[i] > thresholds[i - 1]))
            return usage_error("thresholds must be strictly ascending");
    }

    FunctionHandle f;
    if (zl_function_zeta_power(s.o.k, s.o.sigma, &f.f) != ZL_OK)
        return fail_status("function construction");

    std::vector<double> densities(thresholds.size());
    std::vector<double> mass_fractions(thresholds.size());
    std::vector<double> density_errs(thresholds.size());
    double mean_square = 0, quad_err = 0;
    if (zl_concentration_profile(f.f, thresholds.data(), thresholds.size(),
                                 s.o.t_max, &s.qcfg, &s.zcfg, densities.data(),
                                 mass_fractions.data(), density_errs.data(),
                                 &mean_square, &quad_err) != ZL_OK)
        return fail_status("concentration profile");

    json profile;
    profile["k"] = s.o.k;
    profile["sigma"] = s.o.sigma;
    profile["T"] = s.o.t_max;
    profile["mean_square"] = mean_square;
    profile["quad_err"] = quad_err;
    json jrows = json::array();
    for (size_t i = 0; i < thresholds.size(); ++i)
        jrows.push_back({{"threshold", thresholds[i]},
                         {"density", densities[i]},
                         {"mass_fraction", mass_fractions[i]},
                         {"density_err", density_errs[i]}});
    profile["levels"] = jrows;

    Sink sink;
    sink.path = s.o.out;
    const std::string fmt = s.format_or("csv");
    if (fmt == "csv") {
        sink.row("T", "threshold", "density", "mass_fraction");
        for (size_t i = 0; i < thresholds.size(); ++i)
            sink.row(fmt17(s.o.t_max), fmt17(thresholds[i]), fmt17(densities[i]),
                     fmt17(mass_fractions[i]));
    } else {
        sink.text(profile.dump(2) + "\n");
    }
    if (!sink.flush(err)) return usage_error(err);
    // The CSV carries the plot-ready columns; the full profile (density error
    // bars, mean square) rides along as a JSON side file.
    if (fmt == "csv" && !s.o.out.empty()) {
        std::ofstream pf(s.o.out + ".profile.json");
        if (pf) pf << profile.dump(2) << '\n';
    }
    write_meta(s.o, "conc");
    return 0;
}

int run_growth(Session& s) {
    std::string grid = s.o.t_grid;
    if (grid.empty())
        grid = "10:" + fmt_short(s.preset.t_max) + ":200";
    std::vector<double> ts;
    std::string err;
    if (!parse_list(grid, ts, err)) return usage_error(err);

    std::vector<double> abs_zeta(ts.size());
    std::vector<double> ratio(ts.size());
    zl_growth_report rep;
    if (zl_growth_diagnostic(ts.data(), ts.size(), &s.zcfg, abs_zeta.data(),
                             ratio.data(), &rep) != ZL_OK)
        return fail_status("growth diagnostic");

    Sink sink;
    sink.path = s.o.out;
    const std::string fmt = s.format_or("csv");
    if (fmt == "csv") {
        sink.row("t", "abs_zeta", "ratio");
        for (size_t i = 0; i < ts.size(); ++i)
            sink.row(fmt17(ts[i]), fmt17(abs_zeta[i]), fmt17(ratio[i]));
    } else {
        json rows = json::array();
        for (size_t i = 0; i < ts.size(); ++i)
            rows.push_back({{"t", ts[i]}, {"abs_zeta", abs_zeta[i]},
                            {"ratio", ratio[i]}});
        json doc = {{"ratio_max", rep.ratio_max},
                    {"fitted_exponent", rep.fitted_exponent},
                    {"has_exponent", rep.has_exponent != 0},
                    {"rows", rows}};
        sink.text(doc.dump(2) + "\n");
    }
    if (!sink.flush(err)) return usage_error(err);
    std::fprintf(stderr, "growth: ratio_max=%.6g fitted_exponent=%.6g\n",
                 rep.ratio_max, rep.fitted_exponent);
    write_meta(s.o, "growth");
    return 0;
}

// ----------------------------------------------------------------------
// report-all: the whole suite at a preset scale with smoke tolerances

struct ReportRow {
    std::string experiment;
    std::string params;
    double value = 0;
    double target = 0;
    double gap = 0;  // relative where the target is a magnitude, absolute for
                     // coefficient rows and monotonicity slack
    double tol = 0;
    bool pass = false;
};

struct ReportTols {
    double moment1, moment2, coeff, b2, cauchy, laplace, abel_cesaro, growth_ratio;
};

// Gap ceilings for the pass column. These gate plumbing at each preset's
// horizon: generous multiples of gaps measured on this implementation, not
// statements about asymptotic rates. Two rows converge very slowly and get
// wide ceilings on purpose: the k=2 moment closes like T^{-1/2} log^4 T,
// and the Cauchy distance between the 0.6 and 0.7 lines carries a
// T^{-0.1}-ish deficit (measured 0.68 at T=2e3, 0.50 at T=2e4) because its
// integrand lives close to the critical strip on both lines.
ReportTols report_tols(const std::string& preset) {
    if (preset == "quick") return {0.08, 0.50, 0.05, 0.40, 0.75, 0.25, 0.25, 5.0};
    if (preset == "desk") return {0.05, 0.30, 0.02, 0.15, 0.65, 0.10, 0.10, 5.0};
    return {0.05, 0.20, 0.02, 0.15, 0.50, 0.05, 0.10, 5.0};
}

int run_report_all(Session& s) {
    const Preset& p = s.preset;
    const ReportTols tols = report_tols(s.o.preset);
    std::vector<ReportRow> rows;
    auto rel_row = [&](const std::string& name, const std::string& params,
                       double value, double target, double tol) {
        ReportRow r;
        r.experiment = name;
        r.params = params;
        r.value = value;
        r.target = target;
        r.gap = std::abs(value - target) / std::abs(target);
        r.tol = tol;
        r.pass = r.gap <= tol;
        rows.push_back(r);
    };
    auto abs_row = [&](const std::string& name, const std::string& params,
                       double value, double target, double tol) {
        ReportRow r;
        r.experiment = name;
        r.params = params;
        r.value = value;
        r.target = target;
        r.gap = std::abs(value - target);
        r.tol = tol;
        r.pass = r.gap <= tol;
        rows.push_back(r);
    };

    TableHandle d1, d2;
    if (int rc = sieve_table(1, s.o.table_limit, d1)) return rc;
    if (int rc = sieve_table(2, s.o.table_limit, d2)) return rc;

    char params[160];

    // moments for k = 1, 2 against their series targets
    for (int k = 1; k <= 2; ++k) {
        zl_moment_record r;
        if (zl_moment(k == 1 ? d1.t : d2.t, k, 0.75, p.t_max, &s.qcfg, &s.zcfg,
                      &r) != ZL_OK)
            return fail_status("moment");
        std::snprintf(params, sizeof(params), "k=%d sigma=0.75 T=%g", k, p.t_max);
        rel_row("moment", params, r.average, r.target,
                k == 1 ? tols.moment1 : tols.moment2);
    }

    // Fourier coefficients at lambda = -log n plus one off-frequency probe
    for (std::uint64_t n : {1ull, 2ull, 3ull, 5ull}) {
        zl_fourier_coefficient fc;
        if (zl_fourier_coeff(1, 0.75, -std::log(static_cast<double>(n)), p.t_coeff,
                             &s.qcfg, &s.zcfg, &fc) != ZL_OK)
            return fail_status("fourier coefficient");
        std::snprintf(params, sizeof(params), "k=1 sigma=0.75 n=%" PRIu64 " T=%g",
                      n, p.t_coeff);
        abs_row("coeff", params, std::hypot(fc.empirical.re, fc.empirical.im),
                std::hypot(fc.predicted.re, fc.predicted.im), tols.coeff);
    }
    {
        zl_fourier_coefficient fc;
        if (zl_fourier_coeff(1, 0.75, 0.5, p.t_coeff, &s.qcfg, &s.zcfg, &fc) !=
            ZL_OK)
            return fail_status("fourier coefficient");
        std::snprintf(params, sizeof(params), "k=1 sigma=0.75 lambda=0.5 T=%g",
                      p.t_coeff);
        abs_row("coeff_off", params,
                std::hypot(fc.empirical.re, fc.empirical.im), 0.0, tols.coeff);
    }

    // B2 distance against the analytic series tail
    {
        zl_b2_distance b;
        if (zl_b2_dist(d1.t, 1, 0.75, 10, p.t_max, &s.qcfg, &s.zcfg, &b) != ZL_OK)
            return fail_status("b2 distance");
        std::snprintf(params, sizeof(params), "k=1 sigma=0.75 N=10 T=%g", p.t_max);
        rel_row("b2dist", params, b.empirical, b.analytic_tail, tols.b2);
    }

    // Cauchy distance between two vertical lines
    {
        double value = 0, quad_err = 0, closed = 0, closed_tail = 0;
        if (zl_cauchy_empirical(1, 0.6, 0.7, p.t_max, &s.qcfg, &s.zcfg, &value,
                                &quad_err) != ZL_OK)
            return fail_status("cauchy distance");
        if (zl_cauchy_closed_form(d1.t, 0.6, 0.7, s.o.table_limit, -1.0, &closed,
                                  &closed_tail) != ZL_OK)
            return fail_status("cauchy closed form");
        std::snprintf(params, sizeof(params), "k=1 sigma_a=0.6 sigma_b=0.7 T=%g",
                      p.t_max);
        rel_row("cauchy", params, value, closed, tols.cauchy);
    }

    // Laplace probe x L(x) against the series target
    {
        const double x = p.laplace_x;
        zl_laplace_probe lp;
        if (zl_laplace(1, 0.75, x, 0.0, zl_default_t_cut(x), &s.qcfg, &s.zcfg,
                       &lp) != ZL_OK)
            return fail_status("laplace probe");
        zl_series_value series;
        if (zl_series_eval(d1.t, 0.75, s.o.table_limit, -1.0, &series) != ZL_OK)
            return fail_status("series target");
        std::snprintf(params, sizeof(params), "k=1 sigma=0.75 x=%g t_cut=%g", x,
                      lp.t_cut);
        rel_row("laplace", params, x * lp.value.re, series.partial_sum,
                tols.laplace);
    }

    // Abel vs Cesaro smoothing comparison
    {
        zl_abel_cesaro ac;
        if (zl_abel_cesaro_compare(d1.t, 1, 0.75, p.t_abel_cesaro, &s.qcfg,
                                   &s.zcfg, &ac) != ZL_OK)
            return fail_status("abel cesaro comparison");
        std::snprintf(params, sizeof(params), "k=1 sigma=0.75 T=%g x=%g",
                      p.t_abel_cesaro, ac.x);
        rel_row("abel_cesaro", params, ac.abel_scaled, ac.cesaro_mean,
                tols.abel_cesaro);
    }

    // convexity of the moment average in sigma
    {
        const double grid[3] = {0.6, 0.7, 0.8};
        double averages[3], quad_errs[3];
        int midpoint_ok[1], all_ok = 0;
        if (zl_convexity_probe(d1.t, 1, grid, 3, p.t_coeff, &s.qcfg, &s.zcfg,
                               averages, quad_errs, midpoint_ok, &all_ok) != ZL_OK)
            return fail_status("convexity probe");
        std::snprintf(params, sizeof(params),
                      "k=1 grid=0.6,0.7,0.8 T=%g", p.t_coeff);
        ReportRow r;
        r.experiment = "convexity";
        r.params = params;
        r.value = averages[1];
        r.target = 0.5 * (averages[0] + averages[2]);
        r.gap = r.value - r.target;  // negative when convex
        r.tol = 0.0;
        r.pass = all_ok != 0;
        rows.push_back(r);
    }

    // concentration profile monotonicity for |zeta|
    {
        FunctionHandle f;
        if (zl_function_zeta_power(1, 0.75, &f.f) != ZL_OK)
            return fail_status("function construction");
        const double thresholds[4] = {0.5, 1.0, 2.0, 4.0};
        double dens[4], mass[4], derr[4], mean_square = 0, quad_err = 0;
        if (zl_concentration_profile(f.f, thresholds, 4, p.t_max, &s.qcfg, &s.zcfg,
                                     dens, mass, derr, &mean_square, &quad_err) !=
            ZL_OK)
            return fail_status("concentration profile");
        bool mono = true;
        for (int i = 1; i < 4; ++i)
            if (dens[i] > dens[i - 1] || mass[i] > mass[i - 1]) mono = false;
        std::snprintf(params, sizeof(params),
                      "k=1 sigma=0.75 thresholds=0.5,1,2,4 T=%g", p.t_max);
        ReportRow r;
        r.experiment = "conc_monotone";
        r.params = params;
        r.value = dens[0];
        r.target = mass[0];
        r.gap = 0.0;
        r.tol = 0.0;
        r.pass = mono;
        rows.push_back(r);
    }

    // spike train closed forms: unit per-spike mass stays concentrated,
    // decaying per-spike mass does not
    {
        const double t_grid[3] = {1e2, 1e3, 1e4};
        double dens[3], mass[3];
        FunctionHandle concentrated;
        if (zl_function_spike_train(0.5, 2.0, std::sqrt(2.0), 1.0,
                                    &concentrated.f) != ZL_OK)
            return fail_status("spike train construction");
        if (zl_spike_null_set_demo(concentrated.f, {1.0, 0.0}, t_grid, 3, dens,
                                   mass) != ZL_OK)
            return fail_status("spike null set demo");
        ReportRow r;
        r.experiment = "spike_concentrated";
        r.params = "w=0.5/n^2 h=sqrt(2)n baseline=1 T=1e2,1e3,1e4";
        r.value = mass[2];
        r.target = mass[0];
        r.gap = dens[2];
        r.tol = 0.0;
        r.pass = dens[2] < dens[0] && mass[2] > 0.2;
        rows.push_back(r);

        FunctionHandle vanishing;
        if (zl_function_spike_train(0.5, 2.0, 1.0, 0.0, &vanishing.f) != ZL_OK)
            return fail_status("spike train construction");
        if (zl_spike_null_set_demo(vanishing.f, {1.0, 0.0}, t_grid, 3, dens,
                                   mass) != ZL_OK)
            return fail_status("spike null set demo");
        ReportRow v;
        v.experiment = "spike_vanishing";
        v.params = "w=0.5/n^2 h=1 baseline=1 T=1e2,1e3,1e4";
        v.value = mass[2];
        v.target = mass[0];
        v.gap = dens[2];
        v.tol = 0.0;
        v.pass = mass[2] < mass[0] && mass[2] < 0.05;
        rows.push_back(v);
    }

    // growth diagnostic on the critical line
    {
        std::vector<double> ts;
        const int count = 200;
        const double lo = 10.0, hi = p.t_max;
        for (int i = 0; i < count; ++i)
            ts.push_back(lo + (hi - lo) * static_cast<double>(i) / (count - 1));
        zl_growth_report rep;
        if (zl_growth_diagnostic(ts.data(), ts.size(), &s.zcfg, nullptr, nullptr,
                                 &rep) != ZL_OK)
            return fail_status("growth diagnostic");
        std::snprintf(params, sizeof(params), "sigma=0.5 grid=10..%g", p.t_max);
        ReportRow r;
        r.experiment = "growth";
        r.params = params;
        r.value = rep.ratio_max;
        r.target = 0.0;
        r.gap = rep.fitted_exponent;
        r.tol = tols.growth_ratio;
        r.pass = rep.ratio_max <= tols.growth_ratio;
        rows.push_back(r);
    }

    bool all_pass = true;
    for (const auto& r : rows) all_pass = all_pass && r.pass;

    Sink sink;
    sink.path = s.o.out;
    std::string err;
    const std::string fmt = s.format_or("csv");
    if (fmt == "csv") {
        sink.row("experiment", "params", "value", "target", "rel_gap", "tol",
                 "pass");
        for (const auto& r : rows)
            sink.row(r.experiment, r.params, fmt17(r.value), fmt17(r.target),
                     fmt17(r.gap), fmt_short(r.tol), r.pass ? 1 : 0);
    } else {
        json arr = json::array();
        for (const auto& r : rows)
            arr.push_back({{"experiment", r.experiment}, {"params", r.params},
                           {"value", r.value}, {"target", r.target},
                           {"rel_gap", r.gap}, {"tol", r.tol}, {"pass", r.pass}});
        json doc = {{"preset", s.o.preset}, {"rows", arr}, {"pass", all_pass}};
        sink.text(doc.dump(2) + "\n");
    }
    if (!sink.flush(err)) return usage_error(err);
    write_meta(s.o, "report-all");
    std::fprintf(stderr, "report-all %s: %zu rows, %s\n", s.o.preset.c_str(),
                 rows.size(), all_pass ? "all pass" : "FAILURES PRESENT");
    return all_pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"zetalab: mean values of zeta powers and their Dirichlet "
                 "series targets"};
    app.require_subcommand(1);

    Options o;
    std::map<std::string, FlagSet> flagsets;
    const char* subcommands[] = {"zeta",    "moment", "coeff", "b2dist",
                                 "cauchy",  "laplace", "abel",  "conc",
                                 "growth",  "report-all"};
    const char* descriptions[] = {
        "evaluate zeta(sigma+it) on a t grid",
        "moment average (1/T) int_1^T |zeta|^{2k} dt vs series target",
        "generalized Fourier coefficient at lambda = -log n",
        "B2 distance between zeta^k and its Bohr partial sum",
        "empirical Cauchy distance between two vertical lines",
        "Laplace probe L(x) = int_1^{t_cut} |zeta|^{2k} e^{-xt} dt",
        "Abel probe ladder x L(x) along descending rates",
        "level-set concentration profile of |zeta^k|",
        "growth diagnostic |zeta(1/2+it)| / t^{1/6}",
        "full suite at a preset scale with pass/fail summary",
    };
    for (size_t i = 0; i < std::size(subcommands); ++i) {
        CLI::App* sub = app.add_subcommand(subcommands[i], descriptions[i]);
        flagsets[subcommands[i]].add(sub, o);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    CLI::App* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();

    Session s;
    s.o = o;
    if (int rc = s.prepare(flagsets[name], name)) return rc;

    if (name == "zeta") return run_zeta(s);
    if (name == "moment") return run_moment(s);
    if (name == "coeff") return run_coeff(s);
    if (name == "b2dist") return run_b2dist(s);
    if (name == "cauchy") return run_cauchy(s);
    if (name == "laplace") return run_laplace(s);
    if (name == "abel") return run_abel(s);
    if (name == "conc") return run_conc(s);
    if (name == "growth") return run_growth(s);
    if (name == "report-all") return run_report_all(s);
    return usage_error("unknown subcommand");
}
