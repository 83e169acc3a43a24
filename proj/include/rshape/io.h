#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "rshape/rconvex.h"

namespace rshape {

/// Point CSV: optional `x,y` header, `#` comments, blank lines ignored.
/// Throws Parse naming the line, Io when the file cannot be read.
PointCloud parse_points_csv(std::string_view text, const std::string& label = {});
PointCloud read_points_csv(const std::string& path);

/// Canonical form: `x,y` header then one `%.17g,%.17g` row per point.
std::string format_points_csv(const PointCloud& cloud);
void write_text_file(const std::string& path, std::string_view text);
std::string read_text_file(const std::string& path);

/// `key = value` lines, `#` comments. Throws Parse on malformed lines or
/// repeated keys.
std::map<std::string, std::string> parse_kv_config(std::string_view text);

/// "# membership-grid xmin ymin xmax ymax nx ny" followed by ny rows of 0/1.
std::string format_grid(const MembershipGrid& g);
MembershipGrid parse_grid(std::string_view text);

/// cycle,piece,x,y rows; arcs sampled every `spacing` of arclength (at least
/// two points per piece).
std::string format_boundary_csv(const RConvexHull& hull, double spacing);

/// FNV-1a 64 of the file contents, as 16 hex digits.
std::string file_digest(const std::string& path);

}  // namespace rshape
