#include "rshape/simulation.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include "rshape/errors.h"
#include "rshape/metrics.h"

namespace rshape {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

ArcSegment ccw_arc(Point2 c, double radius, double start, double sweep) {
    ArcSegment a;
    a.center = c;
    a.radius = radius;
    a.start_angle = normalize_angle(start);
    a.sweep = sweep;
    a.end_angle = normalize_angle(start + sweep);
    a.start_point = polar(c, radius, start);
    a.end_point = polar(c, radius, start + sweep);
    return a;
}

ArcSegment segment(Point2 p, Point2 q) {
    ArcSegment a;
    a.straight = true;
    a.start_point = p;
    a.end_point = q;
    a.center = p;
    return a;
}

SupportModel ring_model() {
    const Point2 c{0.5, 0.5};
    SupportModel m;
    m.name = "ring";
    m.contains = [c](Point2 x) {
        const double d2 = dist2(x, c);
        return d2 <= 0.35 * 0.35 && d2 > 0.15 * 0.15;
    };
    m.box = {0.15, 0.15, 0.85, 0.85};
    m.true_area = kPi * (0.35 * 0.35 - 0.15 * 0.15);
    m.true_r0 = 0.15;
    m.boundary = {ccw_arc(c, 0.35, 0.0, kTwoPi), ccw_arc(c, 0.15, 0.0, kTwoPi)};
    return m;
}

// annular sector, 90 degree opening facing +x
SupportModel cshape_model() {
    const Point2 c{0.5, 0.5};
    constexpr double inner = 0.2, outer = 0.35;
    SupportModel m;
    m.name = "cshape";
    m.contains = [c](Point2 x) {
        const double d2 = dist2(x, c);
        if (d2 < inner * inner || d2 > outer * outer) return false;
        const double a = angle_of(x - c);
        return a >= kPi / 4 && a <= 7 * kPi / 4;
    };
    m.box = {c.x - outer, c.y - outer, c.x + outer * std::cos(kPi / 4), c.y + outer};
    m.true_area = 0.75 * kPi * (outer * outer - inner * inner);
    m.true_r0 = 0.2;
    m.boundary = {ccw_arc(c, outer, kPi / 4, 1.5 * kPi), ccw_arc(c, inner, kPi / 4, 1.5 * kPi),
                  segment(polar(c, inner, kPi / 4), polar(c, outer, kPi / 4)),
                  segment(polar(c, inner, -kPi / 4), polar(c, outer, -kPi / 4))};
    return m;
}

// two semi-annular tubes: upper one opens to the right, lower one to the left
SupportModel sshape_model() {
    constexpr double a = 0.0353, w = 0.06;
    constexpr double outer = a + 2 * w, mid = a + w;
    const Point2 cu{0.5, 0.5 + mid}, cl{0.5, 0.5 - mid};
    SupportModel m;
    m.name = "sshape";
    m.contains = [cu, cl](Point2 x) {
        auto in_tube = [](double d2) { return d2 >= a * a && d2 <= outer * outer; };
        return (x.x <= 0.5 && in_tube(dist2(x, cu))) || (x.x >= 0.5 && in_tube(dist2(x, cl)));
    };
    m.box = {0.5 - outer, cl.y - outer, 0.5 + outer, cu.y + outer};
    m.true_area = kPi * (outer * outer - a * a);
    m.true_r0 = a;
    m.boundary = {ccw_arc(cu, outer, kPi / 2, kPi),          ccw_arc(cu, a, kPi / 2, kPi),
                  ccw_arc(cl, outer, 3 * kPi / 2, kPi),      ccw_arc(cl, a, 3 * kPi / 2, kPi),
                  segment({0.5, cu.y + a}, {0.5, cu.y + outer}), segment({0.5, cl.y - outer}, {0.5, cl.y - a})};
    return m;
}

std::string fmt(double v) {
    if (std::isnan(v)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string alpha_tag(double a) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", a);
    return buf;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

MeanSe mean_se(const std::vector<double>& v) {
    MeanSe m;
    m.count = v.size();
    if (v.empty()) {
        m.mean = kNaN;
        m.se = kNaN;
        return m;
    }
    double s = 0.0;
    for (double x : v) s += x;
    m.mean = s / v.size();
    if (v.size() > 1) {
        double q = 0.0;
        for (double x : v) q += (x - m.mean) * (x - m.mean);
        m.se = std::sqrt(q / (v.size() - 1) / v.size());
    }
    return m;
}

}  // namespace

SupportModel make_model(std::string_view name) {
    if (name == "ring") return ring_model();
    if (name == "cshape") return cshape_model();
    if (name == "sshape") return sshape_model();
    throw Error(ErrorKind::UnknownModel, "unknown model '" + std::string(name) + "' (ring, cshape, sshape)");
}

std::vector<std::string> model_names() { return {"ring", "cshape", "sshape"}; }

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t replicate_seed(std::uint64_t seed, std::string_view model, std::size_t n, std::size_t replicate) {
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ fnv1a64(model));
    h = splitmix64(h ^ static_cast<std::uint64_t>(n));
    return splitmix64(h ^ static_cast<std::uint64_t>(replicate));
}

PointCloud sample_uniform(const SupportModel& model, std::size_t n, std::uint64_t seed, SamplingStats* stats) {
    if (n < 1) throw Error(ErrorKind::InvalidConfig, "sample size must be >= 1");
    Rng rng(seed);
    std::vector<Point2> pts;
    pts.reserve(n);
    std::size_t proposals = 0;
    while (pts.size() < n) {
        const Point2 x{rng.uniform(model.box.xmin, model.box.xmax), rng.uniform(model.box.ymin, model.box.ymax)};
        ++proposals;
        if (model.contains(x)) pts.push_back(x);
        if (proposals >= 10000 && static_cast<double>(pts.size()) < 1e-3 * proposals) {
            throw Error(ErrorKind::RejectionStall, "rejection sampling acceptance below 1e-3 for model " + model.name);
        }
    }
    if (stats) *stats = {proposals, pts.size()};
    return PointCloud(std::move(pts), model.name);
}

MembershipGrid rasterize_model(const SupportModel& model, const Box& box, int resolution) {
    if (resolution < 2) throw Error(ErrorKind::InvalidConfig, "grid resolution must be at least 2");
    MembershipGrid g{box, resolution, resolution,
                     std::vector<std::uint8_t>(static_cast<std::size_t>(resolution) * resolution, 0)};
    for (int j = 0; j < resolution; ++j)
        for (int i = 0; i < resolution; ++i)
            g.bits[static_cast<std::size_t>(j) * resolution + i] = model.contains(g.cell_center(i, j)) ? 1 : 0;
    return g;
}

void validate(const StudyConfig& cfg) {
    std::vector<std::string> bad;
    if (cfg.models.empty()) bad.push_back("models is empty");
    for (const auto& m : cfg.models) {
        const auto names = model_names();
        if (std::find(names.begin(), names.end(), m) == names.end()) bad.push_back("unknown model '" + m + "'");
    }
    if (cfg.sample_sizes.empty()) bad.push_back("sample_sizes is empty");
    for (auto n : cfg.sample_sizes)
        if (n < 10) bad.push_back("sample size " + std::to_string(n) + " is below 10");
    if (cfg.alphas.empty() && cfg.run_rs) bad.push_back("alphas is empty");
    for (double a : cfg.alphas)
        if (!(a > 0.0 && a < 1.0)) bad.push_back("alpha " + alpha_tag(a) + " outside (0, 1)");
    if (cfg.replicates < 1) bad.push_back("replicates must be >= 1");
    if (cfg.grid < 2) bad.push_back("grid must be >= 2");
    if (!(cfg.grid_box.width() > 0.0 && cfg.grid_box.height() > 0.0)) bad.push_back("grid box is empty");
    SelectorConfig sc = cfg.selector;
    sc.alpha = 0.5;  // checked per column above
    try {
        validate(sc);
    } catch (const Error& e) {
        bad.push_back(e.what());
    }
    if (bad.empty()) return;
    std::string msg = "invalid study configuration:";
    for (const auto& b : bad) msg += " " + b + ";";
    throw Error(ErrorKind::InvalidConfig, msg);
}

StudyConfig study_config_from(const std::map<std::string, std::string>& kv) {
    StudyConfig cfg;
    std::vector<std::string> bad;
    auto num = [&](const std::string& key, const std::string& v, auto& out) {
        try {
            std::size_t used = 0;
            using T = std::decay_t<decltype(out)>;
            if constexpr (std::is_floating_point_v<T>) {
                out = std::stod(v, &used);
            } else {
                if (!v.empty() && v[0] == '-') throw std::invalid_argument("negative");
                out = static_cast<T>(std::stoull(v, &used));
            }
            if (used != v.size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            bad.push_back(key + " = '" + v + "' is not a valid number");
        }
    };
    auto flag = [&](const std::string& key, const std::string& v, bool& out) {
        if (v == "true" || v == "1" || v == "yes") out = true;
        else if (v == "false" || v == "0" || v == "no") out = false;
        else bad.push_back(key + " = '" + v + "' is not a boolean");
    };
    for (const auto& [key, value] : kv) {
        const std::string v = trim(value);
        if (key == "models") {
            cfg.models.clear();
            for (const auto& m : split(v, ',')) cfg.models.push_back(trim(m));
        } else if (key == "sample_sizes") {
            cfg.sample_sizes.clear();
            for (const auto& s : split(v, ',')) {
                std::size_t n = 0;
                num(key, trim(s), n);
                cfg.sample_sizes.push_back(n);
            }
        } else if (key == "alphas") {
            cfg.alphas.clear();
            for (const auto& s : split(v, ',')) {
                double a = 0.0;
                num(key, trim(s), a);
                cfg.alphas.push_back(a);
            }
        } else if (key == "replicates") num(key, v, cfg.replicates);
        else if (key == "seed") num(key, v, cfg.seed);
        else if (key == "grid") num(key, v, cfg.grid);
        else if (key == "threads") num(key, v, cfg.threads);
        else if (key == "nu") num(key, v, cfg.selector.nu);
        else if (key == "iters") num(key, v, cfg.selector.max_iterations);
        else if (key == "max_cycles") num(key, v, cfg.selector.max_cycles);
        else if (key == "rmin") num(key, v, cfg.selector.r_min);
        else if (key == "rmax") num(key, v, cfg.selector.r_max);
        else if (key == "angular_step") num(key, v, cfg.selector.angular_step);
        else if (key == "run_rs") flag(key, v, cfg.run_rs);
        else if (key == "run_mm") flag(key, v, cfg.run_mm);
        else if (key == "run_benchmark") flag(key, v, cfg.run_benchmark);
        else if (key == "scale_d_mu") flag(key, v, cfg.scale_d_mu);
        else if (key == "out") cfg.out_dir = v;
        else bad.push_back("unknown key '" + key + "'");
    }
    try {
        validate(cfg);
    } catch (const Error& e) {
        if (bad.empty()) throw;
        const std::string more = e.what();
        bad.push_back(more.substr(more.find(':') + 2));
    }
    if (!bad.empty()) {
        std::string msg = "invalid study configuration:";
        for (const auto& b : bad) msg += " " + b + ";";
        if (msg.ends_with(";;")) msg.pop_back();
        throw Error(ErrorKind::InvalidConfig, msg);
    }
    return cfg;
}

ReplicateRecord run_replicate(const StudyConfig& cfg, const SupportModel& model, const MembershipGrid& truth,
                              std::size_t n, std::size_t replicate) {
    ReplicateRecord rec;
    rec.model = model.name;
    rec.n = n;
    rec.replicate = replicate;
    rec.seed = replicate_seed(cfg.seed, model.name, n, replicate);
    const std::size_t k = cfg.run_rs ? cfg.alphas.size() : 0;
    rec.r_hat.assign(k, kNaN);
    rec.outcome.assign(k, "");
    rec.d_mu_rs.assign(k, kNaN);
    rec.r_mm = rec.d_mu_mm = rec.d_mu_r0 = kNaN;
    try {
        const PointCloud cloud = sample_uniform(model, n, rec.seed);
        const auto geo = std::make_shared<const SampleGeometry>(cloud);
        auto d_mu = [&](const RConvexHull& h) {
            return distance_in_measure(h.rasterize(cfg.grid_box, cfg.grid, cfg.grid), truth);
        };
        for (std::size_t a = 0; a < k; ++a) {
            SelectorConfig sc = cfg.selector;
            sc.alpha = cfg.alphas[a];
            const SupportEstimate est = estimate_support(geo, sc);
            rec.r_hat[a] = est.trace.r_hat;
            rec.outcome[a] = outcome_name(est.trace.outcome);
            rec.d_mu_rs[a] = d_mu(est.hull);
        }
        if (cfg.run_mm) {
            rec.r_mm = select_mm(cloud);
            rec.d_mu_mm = d_mu(build_rconvex_hull(geo, rec.r_mm));
        }
        if (cfg.run_benchmark) rec.d_mu_r0 = d_mu(build_rconvex_hull(geo, model.true_r0));
    } catch (const Error& e) {
        rec.error = std::string(error_kind_name(e.kind())) + ": " + e.what();
    }
    return rec;
}

ReplicateRecord replay_replicate(const StudyConfig& cfg, std::string_view model, std::size_t n,
                                 std::size_t replicate) {
    const SupportModel m = make_model(model);
    const MembershipGrid truth = rasterize_model(m, cfg.grid_box, cfg.grid);
    return run_replicate(cfg, m, truth, n, replicate);
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& f) {
    unsigned t = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
    t = static_cast<unsigned>(std::min<std::size_t>(t, count));
    if (t <= 1) {
        for (std::size_t i = 0; i < count; ++i) f(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex mu;
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < t; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i; (i = next.fetch_add(1)) < count;) {
                try {
                    f(i);
                } catch (...) {
                    std::lock_guard lock(mu);
                    if (!failure) failure = std::current_exception();
                    next = count;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

CellSummary summarize(const StudyConfig& cfg, const std::string& model, std::size_t n,
                      std::span<const ReplicateRecord> records) {
    CellSummary c;
    c.model = model;
    c.n = n;
    const std::size_t k = cfg.run_rs ? cfg.alphas.size() : 0;
    std::vector<std::vector<double>> r(k), d(k);
    std::vector<double> rm, dm, d0;
    for (const auto& rec : records) {
        if (!rec.ok()) {
            ++c.failures;
            continue;
        }
        for (std::size_t a = 0; a < k; ++a) {
            r[a].push_back(rec.r_hat[a]);
            d[a].push_back(rec.d_mu_rs[a]);
        }
        if (cfg.run_mm) {
            rm.push_back(rec.r_mm);
            dm.push_back(rec.d_mu_mm);
        }
        if (cfg.run_benchmark) d0.push_back(rec.d_mu_r0);
    }
    for (std::size_t a = 0; a < k; ++a) {
        c.r_hat.push_back(mean_se(r[a]));
        c.d_mu_rs.push_back(mean_se(d[a]));
    }
    c.r_mm = mean_se(rm);
    c.d_mu_mm = mean_se(dm);
    c.d_mu_r0 = mean_se(d0);
    return c;
}

std::string records_csv_header(const StudyConfig& cfg) {
    std::string h = "model,n,replicate,seed";
    if (cfg.run_rs) {
        for (double a : cfg.alphas) h += ",r_hat_" + alpha_tag(a);
        for (double a : cfg.alphas) h += ",outcome_" + alpha_tag(a);
        for (double a : cfg.alphas) h += ",d_mu_rs_" + alpha_tag(a);
    }
    return h + ",r_mm,d_mu_mm,d_mu_r0,error";
}

std::string record_csv_row(const ReplicateRecord& rec) {
    std::string s = rec.model + "," + std::to_string(rec.n) + "," + std::to_string(rec.replicate) + "," +
                    std::to_string(rec.seed);
    for (double v : rec.r_hat) s += "," + fmt(v);
    for (const auto& o : rec.outcome) s += "," + o;
    for (double v : rec.d_mu_rs) s += "," + fmt(v);
    s += "," + fmt(rec.r_mm) + "," + fmt(rec.d_mu_mm) + "," + fmt(rec.d_mu_r0) + ",";
    for (char ch : rec.error) s += (ch == ',' || ch == '\n' || ch == '\r') ? ';' : ch;
    return s;
}

std::vector<ReplicateRecord> parse_records_csv(const StudyConfig& cfg, const std::string& text) {
    std::vector<ReplicateRecord> out;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    const std::size_t k = cfg.run_rs ? cfg.alphas.size() : 0;
    const std::size_t expected = 4 + 3 * k + 4;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (lineno == 1 || line.empty()) continue;
        const auto f = split(line, ',');
        if (f.size() != expected) {
            throw Error(ErrorKind::Parse, "line " + std::to_string(lineno) + ": expected " +
                                              std::to_string(expected) + " fields, got " + std::to_string(f.size()));
        }
        try {
            ReplicateRecord r;
            std::size_t i = 0;
            r.model = f[i++];
            r.n = std::stoull(f[i++]);
            r.replicate = std::stoull(f[i++]);
            r.seed = std::stoull(f[i++]);
            for (std::size_t a = 0; a < k; ++a) r.r_hat.push_back(std::stod(f[i++]));
            for (std::size_t a = 0; a < k; ++a) r.outcome.push_back(f[i++]);
            for (std::size_t a = 0; a < k; ++a) r.d_mu_rs.push_back(std::stod(f[i++]));
            r.r_mm = std::stod(f[i++]);
            r.d_mu_mm = std::stod(f[i++]);
            r.d_mu_r0 = std::stod(f[i++]);
            r.error = f[i++];
            out.push_back(std::move(r));
        } catch (const std::exception&) {
            throw Error(ErrorKind::Parse, "line " + std::to_string(lineno) + ": malformed number");
        }
    }
    return out;
}

namespace {

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
    if (!out) throw Error(ErrorKind::Io, "cannot write " + p.string());
}

// A flushed cell is reused only when it holds exactly the expected replicates.
std::optional<std::vector<ReplicateRecord>> load_cell(const StudyConfig& cfg, const std::filesystem::path& p,
                                                      const std::string& model, std::size_t n) {
    if (!std::filesystem::exists(p)) return std::nullopt;
    const std::string text = read_file(p);
    if (text.substr(0, text.find('\n')) != records_csv_header(cfg)) return std::nullopt;
    std::vector<ReplicateRecord> recs;
    try {
        recs = parse_records_csv(cfg, text);
    } catch (const Error&) {
        return std::nullopt;
    }
    if (recs.size() != cfg.replicates) return std::nullopt;
    for (std::size_t i = 0; i < recs.size(); ++i) {
        if (recs[i].model != model || recs[i].n != n || recs[i].replicate != i ||
            recs[i].seed != replicate_seed(cfg.seed, model, n, i)) {
            return std::nullopt;
        }
    }
    return recs;
}

}  // namespace

StudyResult run_study(const StudyConfig& cfg, const StudyProgress& progress) {
    validate(cfg);
    StudyResult res;
    res.config = cfg;
    namespace fs = std::filesystem;
    const bool persist = !cfg.out_dir.empty();
    if (persist) fs::create_directories(fs::path(cfg.out_dir) / "cells");
    for (const auto& name : cfg.models) {
        const SupportModel model = make_model(name);
        const MembershipGrid truth = rasterize_model(model, cfg.grid_box, cfg.grid);
        for (std::size_t n : cfg.sample_sizes) {
            const fs::path cell_path =
                persist ? fs::path(cfg.out_dir) / "cells" / (name + "_n" + std::to_string(n) + ".csv") : fs::path();
            std::vector<ReplicateRecord> recs;
            if (auto loaded = persist ? load_cell(cfg, cell_path, name, n) : std::nullopt) {
                recs = std::move(*loaded);
                ++res.resumed_cells;
                if (progress) progress(name, n, recs.size(), recs.size());
            } else {
                recs.resize(cfg.replicates);
                std::atomic<std::size_t> done{0};
                std::mutex mu;
                parallel_for(cfg.replicates, cfg.threads, [&](std::size_t i) {
                    recs[i] = run_replicate(cfg, model, truth, n, i);
                    const std::size_t d = ++done;
                    if (progress) {
                        std::lock_guard lock(mu);
                        progress(name, n, d, cfg.replicates);
                    }
                });
                if (persist) {
                    std::string text = records_csv_header(cfg) + "\n";
                    for (const auto& r : recs) text += record_csv_row(r) + "\n";
                    write_file(cell_path, text);
                }
            }
            res.cells.push_back(summarize(cfg, name, n, recs));
            res.failures += res.cells.back().failures;
            res.records.insert(res.records.end(), recs.begin(), recs.end());
        }
    }
    if (persist) {
        std::string text = records_csv_header(cfg) + "\n";
        for (const auto& r : res.records) text += record_csv_row(r) + "\n";
        write_file(fs::path(cfg.out_dir) / "replicates.csv", text);
        std::string tables;
        for (const auto& name : cfg.models) tables += format_r_table(res, name) + "\n" + format_d_mu_table(res, name) + "\n";
        write_file(fs::path(cfg.out_dir) / "summary.txt", tables);
    }
    return res;
}

namespace {

std::string cell_text(const MeanSe& m, double scale) {
    if (m.count == 0) return "       -";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%8.4f", m.mean * scale);
    return buf;
}

std::string table(const StudyResult& result, const std::string& model, const std::string& title, bool d_mu) {
    const StudyConfig& cfg = result.config;
    std::vector<const CellSummary*> cols;
    for (std::size_t n : cfg.sample_sizes)
        for (const auto& c : result.cells)
            if (c.model == model && c.n == n) cols.push_back(&c);
    const double scale = d_mu && cfg.scale_d_mu ? 10.0 : 1.0;
    std::ostringstream out;
    out << title << '\n';
    char buf[64];
    std::snprintf(buf, sizeof buf, "%-14s", "");
    out << buf;
    for (const auto* c : cols) {
        std::snprintf(buf, sizeof buf, " %8s", ("n=" + std::to_string(c->n)).c_str());
        out << buf;
    }
    out << '\n';
    auto row = [&](const std::string& label, auto pick) {
        std::snprintf(buf, sizeof buf, "%-14s", label.c_str());
        out << buf;
        for (const auto* c : cols) out << ' ' << cell_text(pick(*c), scale);
        out << '\n';
    };
    if (cfg.run_rs) {
        for (std::size_t a = 0; a < cfg.alphas.size(); ++a) {
            std::snprintf(buf, sizeof buf, "RS a=%.0e", cfg.alphas[a]);
            row(buf, [&](const CellSummary& c) { return d_mu ? c.d_mu_rs[a] : c.r_hat[a]; });
        }
    }
    if (cfg.run_mm) row("MM", [&](const CellSummary& c) { return d_mu ? c.d_mu_mm : c.r_mm; });
    if (d_mu && cfg.run_benchmark) row("r0-hull", [](const CellSummary& c) { return c.d_mu_r0; });
    std::size_t failures = 0;
    for (const auto* c : cols) failures += c->failures;
    if (failures) out << "failed replicates: " << failures << '\n';
    return out.str();
}

}  // namespace

std::string format_r_table(const StudyResult& result, const std::string& model) {
    const SupportModel m = make_model(model);
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s (r0 = %g): mean r_hat over %zu replicates", model.c_str(), m.true_r0,
                  result.config.replicates);
    return table(result, model, buf, false);
}

std::string format_d_mu_table(const StudyResult& result, const std::string& model) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s: mean d_mu%s over %zu replicates", model.c_str(),
                  result.config.scale_d_mu ? " x 10" : "", result.config.replicates);
    return table(result, model, buf, true);
}

double loglog_slope(std::span<const double> sizes, std::span<const double> values) {
    if (sizes.size() != values.size() || sizes.size() < 3) {
        throw Error(ErrorKind::InvalidConfig, "slope needs at least 3 (size, value) pairs");
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double k = static_cast<double>(sizes.size());
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        if (!(sizes[i] > 0.0 && values[i] > 0.0)) {
            throw Error(ErrorKind::InvalidConfig, "log-log slope needs positive sizes and values");
        }
        const double x = std::log(sizes[i]), y = std::log(values[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double den = k * sxx - sx * sx;
    if (den <= 0.0) throw Error(ErrorKind::InvalidConfig, "sizes must not all be equal");
    return (k * sxy - sx * sy) / den;
}

bool plausible_rate(double slope) { return slope >= -0.90 && slope <= -0.45; }

ConvergenceProbe convergence_probe(const std::string& model_name, const std::vector<std::size_t>& sizes,
                                   std::size_t replicates, std::uint64_t seed, int grid, unsigned threads) {
    if (sizes.size() < 3) throw Error(ErrorKind::InvalidConfig, "convergence probe needs at least 3 sizes");
    if (replicates < 1) throw Error(ErrorKind::InvalidConfig, "replicates must be >= 1");
    const SupportModel model = make_model(model_name);
    const Box box = Box::unit();
    const MembershipGrid truth = rasterize_model(model, box, grid);
    const std::vector<Point2> ref = sample_arcs(model.boundary);
    ConvergenceProbe out;
    out.sizes = sizes;
    for (std::size_t n : sizes) {
        std::vector<double> dm(replicates), dh(replicates);
        parallel_for(replicates, threads, [&](std::size_t i) {
            const PointCloud cloud = sample_uniform(model, n, replicate_seed(seed, model.name, n, i));
            const RConvexHull h = build_rconvex_hull(cloud, model.true_r0);
            dm[i] = distance_in_measure(h.rasterize(box, grid, grid), truth);
            dh[i] = hausdorff_boundary(h, std::span<const Point2>(ref));
        });
        double a = 0, b = 0;
        for (std::size_t i = 0; i < replicates; ++i) {
            a += dm[i];
            b += dh[i];
        }
        out.mean_d_mu.push_back(a / replicates);
        out.mean_d_H.push_back(b / replicates);
    }
    std::vector<double> x(sizes.begin(), sizes.end());
    out.slope_d_mu = loglog_slope(x, out.mean_d_mu);
    out.slope_d_H = loglog_slope(x, out.mean_d_H);
    out.plausible = plausible_rate(out.slope_d_mu);
    return out;
}

}  // namespace rshape
