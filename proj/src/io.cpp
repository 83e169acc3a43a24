#include "rshape/io.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "rshape/errors.h"
#include "rshape/simulation.h"

namespace rshape {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> lines_of(std::string_view text) {
    std::vector<std::string_view> out;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        out.push_back(text.substr(0, nl));
        if (nl == std::string_view::npos) break;
        text.remove_prefix(nl + 1);
    }
    return out;
}

bool parse_double(std::string_view s, double& out) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    if (s.empty()) return false;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && p == s.data() + s.size();
}

[[noreturn]] void parse_error(std::size_t line, const std::string& msg) {
    throw Error(ErrorKind::Parse, "line " + std::to_string(line) + ": " + msg);
}

std::string g17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

PointCloud parse_points_csv(std::string_view text, const std::string& label) {
    std::vector<Point2> pts;
    bool seen_data = false;
    std::size_t lineno = 0;
    for (std::string_view raw : lines_of(text)) {
        ++lineno;
        const std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        const auto comma = line.find(',');
        if (comma == std::string_view::npos || line.find(',', comma + 1) != std::string_view::npos) {
            parse_error(lineno, "expected two comma-separated fields");
        }
        const auto a = trim(line.substr(0, comma)), b = trim(line.substr(comma + 1));
        if (!seen_data && a == "x" && b == "y") {
            seen_data = true;
            continue;
        }
        seen_data = true;
        Point2 p;
        if (!parse_double(a, p.x) || !parse_double(b, p.y)) parse_error(lineno, "malformed number");
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
            throw Error(ErrorKind::NonFinite, "line " + std::to_string(lineno) + ": non-finite coordinate");
        }
        pts.push_back(p);
    }
    return PointCloud(std::move(pts), label);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
}

PointCloud read_points_csv(const std::string& path) { return parse_points_csv(read_text_file(path), path); }

std::string format_points_csv(const PointCloud& cloud) {
    std::string s = "x,y\n";
    for (const Point2& p : cloud.points()) s += g17(p.x) + "," + g17(p.y) + "\n";
    return s;
}

std::map<std::string, std::string> parse_kv_config(std::string_view text) {
    std::map<std::string, std::string> kv;
    std::size_t lineno = 0;
    for (std::string_view raw : lines_of(text)) {
        ++lineno;
        const std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#' || line.front() == ';' || line.front() == '[') continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) parse_error(lineno, "expected key = value");
        const std::string key(trim(line.substr(0, eq)));
        if (key.empty()) parse_error(lineno, "empty key");
        if (!kv.emplace(key, std::string(trim(line.substr(eq + 1)))).second) parse_error(lineno, "repeated key " + key);
    }
    return kv;
}

std::string format_grid(const MembershipGrid& g) {
    std::string s = "# membership-grid " + g17(g.box.xmin) + " " + g17(g.box.ymin) + " " + g17(g.box.xmax) + " " +
                    g17(g.box.ymax) + " " + std::to_string(g.nx) + " " + std::to_string(g.ny) + "\n";
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) s += g.at(i, j) ? '1' : '0';
        s += '\n';
    }
    return s;
}

MembershipGrid parse_grid(std::string_view text) {
    const auto lines = lines_of(text);
    if (lines.empty()) parse_error(1, "empty grid file");
    std::istringstream head{std::string(trim(lines[0]))};
    std::string hash, tag;
    MembershipGrid g;
    head >> hash >> tag >> g.box.xmin >> g.box.ymin >> g.box.xmax >> g.box.ymax >> g.nx >> g.ny;
    if (!head || hash != "#" || tag != "membership-grid" || g.nx < 1 || g.ny < 1) {
        parse_error(1, "expected '# membership-grid xmin ymin xmax ymax nx ny'");
    }
    g.bits.reserve(static_cast<std::size_t>(g.nx) * g.ny);
    int row = 0;
    for (std::size_t k = 1; k < lines.size(); ++k) {
        const auto line = trim(lines[k]);
        if (line.empty()) continue;
        if (row == g.ny) parse_error(k + 1, "more rows than declared");
        if (static_cast<int>(line.size()) != g.nx) parse_error(k + 1, "row length differs from nx");
        for (char c : line) {
            if (c != '0' && c != '1') parse_error(k + 1, "cells must be 0 or 1");
            g.bits.push_back(c == '1');
        }
        ++row;
    }
    if (row != g.ny) parse_error(lines.size(), "fewer rows than declared");
    return g;
}

std::string format_boundary_csv(const RConvexHull& hull, double spacing) {
    std::string s = "cycle,piece,x,y\n";
    auto row = [&](std::size_t c, std::size_t p, Point2 x) {
        s += std::to_string(c) + "," + std::to_string(p) + "," + g17(x.x) + "," + g17(x.y) + "\n";
    };
    if (hull.convex_regime()) {
        const auto& poly = hull.geometry().convex_hull();
        for (std::size_t i = 0; i < poly.size(); ++i) {
            row(0, i, poly[i]);
            row(0, i, poly[(i + 1) % poly.size()]);
        }
        return s;
    }
    const auto& cycles = hull.boundary();
    for (std::size_t c = 0; c < cycles.size(); ++c) {
        for (std::size_t p = 0; p < cycles[c].size(); ++p) {
            const ArcSegment& a = cycles[c][p];
            const double len = a.length();
            const auto m = len > 0.0 && spacing > 0.0 ? std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(len / spacing))) : 1;
            for (std::size_t k = 0; k <= m; ++k) row(c, p, a.point_at(static_cast<double>(k) / m));
        }
    }
    return s;
}

std::string file_digest(const std::string& path) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(read_text_file(path))));
    return buf;
}

}  // namespace rshape
