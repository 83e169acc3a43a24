#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "rshape/rconvex.h"
#include "rshape/selector.h"

namespace rshape {

struct SupportModel {
    std::string name;
    std::function<bool(Point2)> contains;
    Box box;  // sampling box, tight around the support
    double true_area = 0.0;
    double true_r0 = 0.0;
    std::vector<ArcSegment> boundary;
};

/// ring, cshape or sshape. Throws UnknownModel.
SupportModel make_model(std::string_view name);
std::vector<std::string> model_names();

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t fnv1a64(std::string_view bytes);

/// Seed of one study cell replicate: every (model, n, replicate) gets an
/// independent stream.
std::uint64_t replicate_seed(std::uint64_t seed, std::string_view model, std::size_t n, std::size_t replicate);

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}
    /// Uniform on [0, 1) from the top 53 bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

private:
    std::mt19937_64 engine_;
};

struct SamplingStats {
    std::size_t proposals = 0;
    std::size_t accepted = 0;
};

/// Rejection sampling from the model box. Throws RejectionStall when the
/// acceptance rate drops below 1e-3.
PointCloud sample_uniform(const SupportModel& model, std::size_t n, std::uint64_t seed,
                          SamplingStats* stats = nullptr);

MembershipGrid rasterize_model(const SupportModel& model, const Box& box, int resolution);

struct StudyConfig {
    std::vector<std::string> models{"ring"};
    std::vector<std::size_t> sample_sizes{100, 500, 1000, 1500};
    std::vector<double> alphas{1e-1, 1e-2, 1e-3, 1e-4};
    std::size_t replicates = 200;
    SelectorConfig selector;  // alpha is overridden per column
    std::uint64_t seed = 1;
    int grid = 334;
    Box grid_box = Box::unit();
    unsigned threads = 0;  // 0: all cores
    bool run_rs = true;
    bool run_mm = true;
    bool run_benchmark = true;
    bool scale_d_mu = true;  // tables report d_mu x 10
    std::string out_dir;     // empty: nothing written
};

/// Throws InvalidConfig (or AlphaOutOfRange) naming every offending field.
void validate(const StudyConfig& cfg);

/// key = value pairs as read from a config file. Unknown keys and bad values
/// are reported together.
StudyConfig study_config_from(const std::map<std::string, std::string>& kv);

struct ReplicateRecord {
    std::string model;
    std::size_t n = 0;
    std::size_t replicate = 0;
    std::uint64_t seed = 0;
    std::vector<double> r_hat;  // one per alpha
    std::vector<std::string> outcome;
    std::vector<double> d_mu_rs;
    double r_mm = 0.0;
    double d_mu_mm = 0.0;
    double d_mu_r0 = 0.0;
    std::string error;  // empty on success

    bool ok() const { return error.empty(); }
};

/// One replicate: sample, select per alpha, MM, benchmark, d_mu against
/// `truth` (the model rasterised on cfg's grid).
ReplicateRecord run_replicate(const StudyConfig& cfg, const SupportModel& model, const MembershipGrid& truth,
                              std::size_t n, std::size_t replicate);
ReplicateRecord replay_replicate(const StudyConfig& cfg, std::string_view model, std::size_t n,
                                 std::size_t replicate);

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
    std::size_t count = 0;
};

struct CellSummary {
    std::string model;
    std::size_t n = 0;
    std::size_t failures = 0;
    std::vector<MeanSe> r_hat;  // per alpha
    std::vector<MeanSe> d_mu_rs;
    MeanSe r_mm;
    MeanSe d_mu_mm;
    MeanSe d_mu_r0;
};

struct StudyResult {
    StudyConfig config;
    std::vector<ReplicateRecord> records;  // ordered by (model, n, replicate)
    std::vector<CellSummary> cells;
    std::size_t failures = 0;
    std::size_t resumed_cells = 0;
};

using StudyProgress = std::function<void(const std::string& model, std::size_t n, std::size_t done,
                                         std::size_t total)>;

/// Runs every cell. With cfg.out_dir set, each finished cell is flushed to
/// <out_dir>/cells/ and reused on the next run; summary tables and the full
/// replicate CSV are written at the end.
StudyResult run_study(const StudyConfig& cfg, const StudyProgress& progress = {});

CellSummary summarize(const StudyConfig& cfg, const std::string& model, std::size_t n,
                      std::span<const ReplicateRecord> records);

std::string records_csv_header(const StudyConfig& cfg);
std::string record_csv_row(const ReplicateRecord& rec);
/// Parses rows written by record_csv_row. Throws Parse.
std::vector<ReplicateRecord> parse_records_csv(const StudyConfig& cfg, const std::string& text);

/// Mean r_hat table: rows RS per alpha then MM, columns n.
std::string format_r_table(const StudyResult& result, const std::string& model);
/// Mean d_mu table: RS per alpha, MM, then the r0-hull benchmark row.
std::string format_d_mu_table(const StudyResult& result, const std::string& model);

/// Least-squares slope of log(value) against log(size). Throws InvalidConfig
/// for fewer than 3 sizes or non-positive values.
double loglog_slope(std::span<const double> sizes, std::span<const double> values);

struct ConvergenceProbe {
    std::vector<std::size_t> sizes;
    std::vector<double> mean_d_mu;
    std::vector<double> mean_d_H;  // boundary Hausdorff
    double slope_d_mu = 0.0;
    double slope_d_H = 0.0;
    /// Slope inside [-0.90, -0.45]; a flat metric is flagged here.
    bool plausible = false;
};

bool plausible_rate(double slope);

/// Monte Carlo means of the r0-hull errors against the model across sizes.
ConvergenceProbe convergence_probe(const std::string& model, const std::vector<std::size_t>& sizes,
                                   std::size_t replicates, std::uint64_t seed, int grid = 334,
                                   unsigned threads = 0);

/// Calls f(i) for i in [0, count) on `threads` workers (0: all cores).
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& f);

}  // namespace rshape
