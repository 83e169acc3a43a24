// rshape: support estimation from 2D point clouds.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>

#include "rshape/errors.h"
#include "rshape/io.h"
#include "rshape/metrics.h"
#include "rshape/selector.h"
#include "rshape/simulation.h"
#include "rshape/spacing.h"

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;
using namespace rshape;

namespace {

constexpr std::size_t kMinPoints = 10;

int exit_code(ErrorKind k) {
    switch (k) {
        case ErrorKind::InvalidConfig:
        case ErrorKind::AlphaOutOfRange:
            return 2;
        case ErrorKind::Parse:
        case ErrorKind::Io:
        case ErrorKind::TooFewPoints:
        case ErrorKind::AllCollinear:
        case ErrorKind::EmptyCloud:
        case ErrorKind::NonFinite:
        case ErrorKind::UnknownModel:
        case ErrorKind::GridMismatch:
            return 3;
        default:
            return 4;
    }
}

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

struct Run {
    std::string command;
    std::vector<std::string> argv;
    std::vector<std::string> inputs;
    std::string out;
    std::uint64_t seed = 0;
    unsigned threads = 0;
    int grid = 334;
};

std::string timestamp() {
    std::time_t t = 0;
    if (const char* e = std::getenv("SOURCE_DATE_EPOCH")) {
        t = static_cast<std::time_t>(std::strtoll(e, nullptr, 10));
    } else {
        t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    }
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

void write_manifest(const Run& run, const fs::path& path, const json& flags) {
    json m;
    m["command"] = run.command;
    m["argv"] = run.argv;
    m["flags"] = flags;
    json in = json::array();
    for (const auto& p : run.inputs) {
        if (fs::is_regular_file(p)) in.push_back({{"path", p}, {"fnv1a64", file_digest(p)}});
    }
    m["inputs"] = in;
    m["seed"] = run.seed;
    m["version"] = RSHAPE_VERSION;
    m["timestamp"] = timestamp();
    write_text_file(path.string(), m.dump(2) + "\n");
}

PointCloud load_cloud(const std::string& path) {
    PointCloud c = read_points_csv(path);
    if (c.size() < kMinPoints) {
        throw Error(ErrorKind::TooFewPoints,
                    path + " holds " + std::to_string(c.size()) + " distinct points; at least 10 are needed");
    }
    return c;
}

json trace_json(const SelectorTrace& tr) {
    json steps = json::array();
    for (const auto& s : tr.iterations) {
        steps.push_back({{"r", s.r},
                         {"reject", s.probe.reject},
                         {"degenerate", s.probe.degenerate},
                         {"cycles", s.probe.cycle_count},
                         {"M_r", num(s.probe.verdict.M_r)},
                         {"critical_radius", num(s.probe.verdict.critical_radius)},
                         {"r_lo", s.r_lo},
                         {"r_hi", s.r_hi}});
    }
    json growth = json::array();
    for (const auto& [r, c] : tr.r_min_growth) growth.push_back({{"r", r}, {"cycles", c}});
    return {{"outcome", outcome_name(tr.outcome)}, {"r_hat", tr.r_hat}, {"r_min", tr.r_min},
            {"r_max", tr.r_max}, {"r_min_growth", growth}, {"iterations", steps}};
}

json verdict_json(const UniformityVerdict& v, double r, double alpha) {
    json j{{"r", r},
           {"alpha", alpha},
           {"reject", v.reject},
           {"M_r", v.M_r},
           {"critical_radius", v.critical_radius},
           {"critical_volume", v.critical.c_star_volume},
           {"u_alpha", v.critical.u_alpha},
           {"n", v.critical.n},
           {"v_n", v.critical.v_n},
           {"area", v.critical.a_n},
           {"candidates", v.candidate_count}};
    j["witness"] = v.witness ? json{v.witness->x, v.witness->y} : json(nullptr);
    return j;
}

json selector_flags(const SelectorConfig& c) {
    return {{"alpha", c.alpha}, {"nu", c.nu},       {"iters", c.max_iterations},
            {"max_cycles", c.max_cycles}, {"rmin", c.r_min}, {"rmax", c.r_max}};
}

void add_selector_flags(CLI::App* sub, SelectorConfig& cfg) {
    sub->add_option("--alpha", cfg.alpha, "test level")->capture_default_str();
    sub->add_option("--nu", cfg.nu, "shrinkage of r_hat for the final estimate")->capture_default_str();
    sub->add_option("--iters", cfg.max_iterations, "bisection iterations")->capture_default_str();
    sub->add_option("--max-cycles", cfg.max_cycles, "boundary cycle cap")->capture_default_str();
    sub->add_option("--rmin", cfg.r_min, "lower bracket (0: half the median NN distance)");
    sub->add_option("--rmax", cfg.r_max, "upper bracket (0: sample diameter)");
}

void ensure_dir(const std::string& out) {
    if (!out.empty()) fs::create_directories(out);
}

void emit(const std::string& out, const std::string& name, const json& j) {
    const std::string text = j.dump(2) + "\n";
    std::cout << text;
    if (!out.empty()) write_text_file((fs::path(out) / name).string(), text);
}

// ------------------------------------------------------------- commands

int cmd_estimate(Run& run, const std::string& input, SelectorConfig cfg, std::optional<double> fixed_r,
                 double spacing) {
    const PointCloud cloud = load_cloud(input);
    const auto geo = std::make_shared<const SampleGeometry>(cloud);
    json j{{"input", input}, {"n", cloud.size()}, {"duplicates_removed", cloud.duplicates_removed()}};
    std::optional<RConvexHull> hull;
    if (fixed_r) {
        hull = build_rconvex_hull(geo, *fixed_r);
        j["method"] = "fixed";
        j["r"] = *fixed_r;
    } else {
        validate(cfg);
        SupportEstimate est = estimate_support(geo, cfg);
        j["method"] = "rs";
        j["r_hat"] = est.trace.r_hat;
        j["nu"] = cfg.nu;
        j["r"] = est.hull.r();
        j["trace"] = trace_json(est.trace);
        hull = std::move(est.hull);
    }
    j["convex_regime"] = hull->convex_regime();
    j["area"] = hull->area();
    j["cycles"] = hull->cycle_count();
    j["boundary_vertices"] = hull->boundary_vertex_count();
    ensure_dir(run.out);
    write_text_file((fs::path(run.out) / "boundary.csv").string(), format_boundary_csv(*hull, spacing));
    write_text_file((fs::path(run.out) / "grid.txt").string(),
                    format_grid(hull->rasterize(Box::unit(), run.grid, run.grid)));
    emit(run.out, "estimate.json", j);
    json flags = selector_flags(cfg);
    flags["r"] = fixed_r ? json(*fixed_r) : json(nullptr);
    flags["boundary_spacing"] = spacing;
    flags["grid"] = run.grid;
    write_manifest(run, fs::path(run.out) / "manifest.json", flags);
    return 0;
}

int cmd_select(Run& run, const std::string& input, const SelectorConfig& cfg, const std::string& method) {
    const PointCloud cloud = load_cloud(input);
    json j{{"input", input}, {"n", cloud.size()}, {"method", method}};
    if (method == "mm") {
        j["r_hat"] = select_mm(cloud);
    } else if (method == "rs") {
        validate(cfg);
        const SelectorTrace tr = select_rs(cloud, cfg);
        j["r_hat"] = tr.r_hat;
        j["trace"] = trace_json(tr);
    } else {
        throw Error(ErrorKind::InvalidConfig, "--method must be rs or mm");
    }
    ensure_dir(run.out);
    emit(run.out, "select.json", j);
    json flags = selector_flags(cfg);
    flags["method"] = method;
    if (!run.out.empty()) write_manifest(run, fs::path(run.out) / "manifest.json", flags);
    return 0;
}

int cmd_test(Run& run, const std::string& input, std::optional<double> r, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorKind::AlphaOutOfRange, "--alpha must lie in (0, 1)");
    const PointCloud cloud = load_cloud(input);
    const auto geo = std::make_shared<const SampleGeometry>(cloud);
    const double radius = r ? *r : geo->diameter();
    const UniformityVerdict v = test_uniformity(build_rconvex_hull(geo, radius), alpha);
    std::cerr << (v.reject ? "reject" : "accept") << ": M(r) = " << v.M_r << (v.reject ? " > " : " <= ")
              << v.critical_radius << " (r = " << radius << ", alpha = " << alpha << ")\n";
    json j = verdict_json(v, radius, alpha);
    j["input"] = input;
    ensure_dir(run.out);
    emit(run.out, "test.json", j);
    if (!run.out.empty()) write_manifest(run, fs::path(run.out) / "manifest.json", {{"r", radius}, {"alpha", alpha}});
    return 0;
}

int cmd_study(Run& run, const std::string& config, std::optional<std::size_t> replicates, bool raw,
              const std::string& replay, bool quiet) {
    auto kv = parse_kv_config(read_text_file(config));
    StudyConfig cfg = study_config_from(kv);
    if (replicates) cfg.replicates = *replicates;
    if (raw) cfg.scale_d_mu = false;
    if (run.threads) cfg.threads = run.threads;
    if (!run.out.empty()) cfg.out_dir = run.out;
    if (run.seed) cfg.seed = run.seed;
    validate(cfg);
    if (!replay.empty()) {
        // model,n,replicate
        const auto c1 = replay.find(','), c2 = replay.rfind(',');
        if (c1 == std::string::npos || c1 == c2) throw Error(ErrorKind::InvalidConfig, "--replay expects model,n,replicate");
        const ReplicateRecord rec = replay_replicate(cfg, replay.substr(0, c1), std::stoull(replay.substr(c1 + 1, c2 - c1 - 1)),
                                                     std::stoull(replay.substr(c2 + 1)));
        std::cout << records_csv_header(cfg) << "\n" << record_csv_row(rec) << "\n";
        return 0;
    }
    StudyProgress progress;
    if (!quiet) {
        progress = [](const std::string& m, std::size_t n, std::size_t done, std::size_t total) {
            if (done == total || done % 10 == 0) std::cerr << "\r" << m << " n=" << n << ": " << done << "/" << total << std::flush;
            if (done == total) std::cerr << "\n";
        };
    }
    const StudyResult res = run_study(cfg, progress);
    for (const auto& m : cfg.models) std::cout << format_r_table(res, m) << "\n" << format_d_mu_table(res, m) << "\n";
    if (res.failures) std::cerr << "failed replicates: " << res.failures << "\n";
    if (!cfg.out_dir.empty()) {
        json flags{{"config", config}, {"replicates", cfg.replicates}, {"seed", cfg.seed}, {"grid", cfg.grid}};
        run.seed = cfg.seed;
        write_manifest(run, fs::path(cfg.out_dir) / "manifest.json", flags);
    }
    return 0;
}

struct Operand {
    std::optional<SupportModel> model;
    std::optional<MembershipGrid> grid;
    std::optional<RConvexHull> hull;
};

Operand load_operand(const std::string& what, std::optional<double> r, const SelectorConfig& cfg) {
    Operand o;
    const auto names = model_names();
    if (std::find(names.begin(), names.end(), what) != names.end()) {
        o.model = make_model(what);
        return o;
    }
    const std::string text = read_text_file(what);
    if (text.rfind("# membership-grid", 0) == 0) {
        o.grid = parse_grid(text);
        return o;
    }
    const PointCloud cloud = parse_points_csv(text, what);
    if (cloud.size() < kMinPoints) throw Error(ErrorKind::TooFewPoints, what + " holds fewer than 10 points");
    o.hull = r ? build_rconvex_hull(cloud, *r) : estimate_support(cloud, cfg);
    return o;
}

int cmd_metrics(Run& run, const std::string& a, const std::string& b, std::optional<double> r,
                const SelectorConfig& cfg) {
    // a model operand supplies the radius for point-cloud operands
    std::optional<double> radius = r;
    const auto names = model_names();
    for (const auto& s : {a, b}) {
        if (!radius && std::find(names.begin(), names.end(), s) != names.end()) radius = make_model(s).true_r0;
    }
    const Operand A = load_operand(a, radius, cfg), B = load_operand(b, radius, cfg);
    auto grid_of = [&](const Operand& o) {
        if (o.grid) return *o.grid;
        if (o.model) return rasterize_model(*o.model, Box::unit(), run.grid);
        return o.hull->rasterize(Box::unit(), run.grid, run.grid);
    };
    auto boundary_of = [&](const Operand& o) -> std::optional<std::vector<Point2>> {
        if (o.model) return sample_arcs(o.model->boundary);
        if (o.hull) return sample_boundary(*o.hull);
        return std::nullopt;
    };
    const MembershipGrid ga = grid_of(A), gb = grid_of(B);
    MetricReport rep;
    rep.d_mu = distance_in_measure(ga, gb);
    rep.grid_resolution = ga.nx;
    const bool ea = ga.inside_count() == 0, eb = gb.inside_count() == 0;
    rep.d_H = ea && eb ? 0.0 : (ea || eb ? std::numeric_limits<double>::infinity() : hausdorff_grids(ga, gb));
    json j{{"a", a}, {"b", b}, {"d_mu", rep.d_mu}, {"d_mu_x10", rep.d_mu * 10}, {"d_H", num(rep.d_H)}};
    const auto ba = boundary_of(A), bb = boundary_of(B);
    if (ba && bb) {
        if (ba->empty() || bb->empty()) throw Error(ErrorKind::EmptyBoundary, "operand has no boundary");
        rep.d_H_boundary = hausdorff_points(*ba, *bb);
        j["d_H_boundary"] = rep.d_H_boundary;
    } else {
        j["d_H_boundary"] = nullptr;
    }
    j["grid_resolution"] = rep.grid_resolution;
    j["r"] = radius ? json(*radius) : json(nullptr);
    ensure_dir(run.out);
    emit(run.out, "metrics.json", j);
    if (!run.out.empty()) {
        write_manifest(run, fs::path(run.out) / "manifest.json", {{"r", j["r"]}, {"grid", run.grid}});
    }
    return 0;
}

int cmd_sample(Run& run, const std::string& model, std::size_t n) {
    const SupportModel m = make_model(model);
    const PointCloud cloud = sample_uniform(m, n, run.seed);
    const std::string text = format_points_csv(cloud);
    if (run.out.empty()) {
        std::cout << text;
        return 0;
    }
    const fs::path out(run.out);
    if (out.has_parent_path()) fs::create_directories(out.parent_path());
    write_text_file(out.string(), text);
    write_manifest(run, fs::path(out.string() + ".manifest.json"), {{"model", model}, {"n", n}});
    return 0;
}

int dispatch(int argc, char** argv);

int cmd_replay(const std::string& manifest_path) {
    const json m = json::parse(read_text_file(manifest_path), nullptr, false);
    if (m.is_discarded() || !m.contains("argv") || !m["argv"].is_array()) {
        throw Error(ErrorKind::Parse, manifest_path + " is not a run manifest");
    }
    for (const auto& in : m.value("inputs", json::array())) {
        const std::string p = in.at("path");
        if (file_digest(p) != in.at("fnv1a64").get<std::string>()) {
            throw Error(ErrorKind::Io, "input " + p + " changed since the manifest was written");
        }
    }
    std::vector<std::string> args = m["argv"].get<std::vector<std::string>>();
    std::vector<char*> ptrs;
    for (auto& s : args) ptrs.push_back(s.data());
    return dispatch(static_cast<int>(ptrs.size()), ptrs.data());
}

int dispatch(int argc, char** argv) {
    CLI::App app{"rshape: r-convex support estimation for planar samples"};
    app.set_version_flag("--version", std::string(RSHAPE_VERSION));
    app.require_subcommand(1);

    Run run;
    run.argv.assign(argv, argv + argc);
    SelectorConfig sel;
    std::string input, input_b, config, method = "rs", replay, model, manifest;
    std::optional<double> r;
    double spacing = 0.002;
    double alpha = 0.01;
    std::size_t n = 0;
    std::optional<std::size_t> replicates;
    bool raw = false, quiet = false;

    auto common = [&](CLI::App* s, bool with_grid) {
        s->add_option("--seed", run.seed, "random seed")->capture_default_str();
        s->add_option("--threads", run.threads, "worker threads (0: all cores)")->capture_default_str();
        s->add_option("--out", run.out, "output location");
        if (with_grid) s->add_option("--grid", run.grid, "metric grid cells per axis")->capture_default_str()->check(CLI::Range(2, 100000));
    };

    auto* est = app.add_subcommand("estimate", "select r_hat and build the support estimate");
    est->add_option("input", input, "point CSV")->required();
    est->add_option("--r", r, "use this radius instead of the selector");
    est->add_option("--boundary-spacing", spacing, "arclength between boundary polyline points")->capture_default_str();
    add_selector_flags(est, sel);
    common(est, true);
    run.out = "out";

    auto* sel_cmd = app.add_subcommand("select", "run the bisection selector (or the MST baseline)");
    sel_cmd->add_option("input", input, "point CSV")->required();
    sel_cmd->add_option("--method", method, "rs or mm")->capture_default_str();
    add_selector_flags(sel_cmd, sel);
    common(sel_cmd, false);

    auto* test = app.add_subcommand("test", "maximal-spacing uniformity test on C_r");
    test->add_option("input", input, "point CSV")->required();
    test->add_option("--r", r, "radius (default: sample diameter)");
    test->add_option("--alpha", alpha, "test level")->capture_default_str();
    common(test, false);

    auto* study = app.add_subcommand("study", "Monte Carlo study from a key = value config");
    study->add_option("config", config, "config file")->required();
    study->add_option("--replicates", replicates, "override replicates");
    study->add_flag("--raw", raw, "report raw d_mu instead of d_mu x 10");
    study->add_option("--replay", replay, "recompute one replicate: model,n,replicate");
    study->add_flag("--quiet", quiet, "no progress output");
    common(study, false);

    auto* metrics = app.add_subcommand("metrics", "distance in measure and Hausdorff distances");
    metrics->add_option("a", input, "model name, grid file or point CSV")->required();
    metrics->add_option("b", input_b, "model name, grid file or point CSV")->required();
    metrics->add_option("--r", r, "radius for point-cloud operands (default: model r0 or the selector)");
    add_selector_flags(metrics, sel);
    common(metrics, true);

    auto* sample = app.add_subcommand("sample", "draw a uniform sample from a benchmark model");
    sample->add_option("model", model, "ring, cshape or sshape")->required();
    sample->add_option("--n", n, "sample size")->required()->check(CLI::PositiveNumber);
    common(sample, false);

    auto* rep = app.add_subcommand("replay", "re-run the command recorded in a manifest");
    rep->add_option("manifest", manifest, "manifest.json")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    // --out defaults to "out" only for estimate
    if (!est->parsed() && run.out == "out" && est->count("--out") == 0) run.out.clear();

    if (est->parsed()) {
        run.command = "estimate";
        run.inputs = {input};
        return cmd_estimate(run, input, sel, r, spacing);
    }
    if (sel_cmd->parsed()) {
        run.command = "select";
        run.inputs = {input};
        return cmd_select(run, input, sel, method);
    }
    if (test->parsed()) {
        run.command = "test";
        run.inputs = {input};
        return cmd_test(run, input, r, alpha);
    }
    if (study->parsed()) {
        run.command = "study";
        run.inputs = {config};
        return cmd_study(run, config, replicates, raw, replay, quiet);
    }
    if (metrics->parsed()) {
        run.command = "metrics";
        run.inputs = {input, input_b};
        return cmd_metrics(run, input, input_b, r, sel);
    }
    if (sample->parsed()) {
        run.command = "sample";
        return cmd_sample(run, model, n);
    }
    return cmd_replay(manifest);
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const Error& e) {
        json j{{"error", std::string(error_kind_name(e.kind()))}, {"message", e.what()}};
        std::cerr << j.dump() << "\n";
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        json j{{"error", "Internal"}, {"message", e.what()}};
        std::cerr << j.dump() << "\n";
        return 4;
    }
}
