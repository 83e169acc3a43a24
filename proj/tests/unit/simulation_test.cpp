#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <numbers>
#include <set>

#include "rshape/errors.h"
#include "rshape/metrics.h"
#include "rshape/simulation.h"

using namespace rshape;

TEST(Models, Ring) {
    const SupportModel m = make_model("ring");
    EXPECT_NEAR(m.true_area, std::numbers::pi * 0.1, 1e-12);
    EXPECT_NEAR(m.true_area, 0.31416, 1e-5);
    EXPECT_EQ(m.true_r0, 0.15);
    EXPECT_FALSE(m.contains({0.5, 0.5}));
    EXPECT_TRUE(m.contains({0.85, 0.5}));
    EXPECT_FALSE(m.contains({0.64, 0.5}));
    EXPECT_TRUE(m.contains({0.66, 0.5}));
    EXPECT_FALSE(m.contains({0.86, 0.5}));
}

TEST(Models, UnknownName) {
    try {
        make_model("triangle");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::UnknownModel);
    }
}

TEST(Models, AreaBoxAndR0) {
    for (const auto& name : model_names()) {
        const SupportModel m = make_model(name);
        EXPECT_GT(m.true_area, 0.0);
        EXPECT_GT(m.true_r0, 0.0);
        // fine raster of the unit square: area agrees, support stays in the box
        const MembershipGrid g = rasterize_model(m, Box::unit(), 1200);
        EXPECT_NEAR(g.inside_count() * g.cell_area(), m.true_area, 0.01 * m.true_area) << name;
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i)
                if (g.at(i, j)) ASSERT_TRUE(m.box.contains(g.cell_center(i, j))) << name;
        // boundary arcs lie on the set's edge
        for (const Point2& p : sample_arcs(m.boundary, 2000)) {
            bool in = false, out = false;
            for (int k = 0; k < 16; ++k) {
                const Point2 q = polar(p, 1e-6, kTwoPi * k / 16);
                (m.contains(q) ? in : out) = true;
            }
            ASSERT_TRUE(in && out) << name << " (" << p.x << ", " << p.y << ")";
        }
    }
}

TEST(Sampling, InsideAndDeterministic) {
    for (const auto& name : model_names()) {
        const SupportModel m = make_model(name);
        const PointCloud a = sample_uniform(m, 500, 42), b = sample_uniform(m, 500, 42), c = sample_uniform(m, 500, 43);
        ASSERT_EQ(a.size(), 500u);
        for (const Point2& p : a.points()) ASSERT_TRUE(m.contains(p));
        EXPECT_TRUE(std::equal(a.points().begin(), a.points().end(), b.points().begin()));
        EXPECT_FALSE(std::equal(a.points().begin(), a.points().end(), c.points().begin()));
    }
}

TEST(Sampling, AcceptanceRateBinomial) {
    for (const auto& name : model_names()) {
        const SupportModel m = make_model(name);
        const double p = m.true_area / (m.box.width() * m.box.height());
        SamplingStats st;
        sample_uniform(m, static_cast<std::size_t>(1e5 * p), 7, &st);
        ASSERT_GE(st.proposals, 90000u);
        const double rate = static_cast<double>(st.accepted) / st.proposals;
        const double se = std::sqrt(p * (1 - p) / st.proposals);
        EXPECT_LE(std::abs(rate - p), 3 * se) << name;
    }
}

TEST(Sampling, RejectionStall) {
    SupportModel m = make_model("ring");
    m.contains = [](Point2 x) { return x.x < 0.15 + 1e-9; };
    try {
        sample_uniform(m, 10, 1);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::RejectionStall);
    }
}

TEST(Seeds, IndependentPerCell) {
    std::set<std::uint64_t> seen;
    for (const auto& name : model_names())
        for (std::size_t n : {100u, 500u})
            for (std::size_t r = 0; r < 50; ++r) seen.insert(replicate_seed(1, name, n, r));
    EXPECT_EQ(seen.size(), 3u * 2u * 50u);
    EXPECT_EQ(replicate_seed(1, "ring", 100, 3), replicate_seed(1, "ring", 100, 3));
    EXPECT_NE(replicate_seed(1, "ring", 100, 3), replicate_seed(2, "ring", 100, 3));
}

TEST(Rng, UnitInterval) {
    Rng rng(5);
    double lo = 1, hi = 0, s = 0;
    for (int i = 0; i < 100000; ++i) {
        const double u = rng.uniform();
        lo = std::min(lo, u);
        hi = std::max(hi, u);
        s += u;
    }
    EXPECT_GE(lo, 0.0);
    EXPECT_LT(hi, 1.0);
    EXPECT_NEAR(s / 100000, 0.5, 0.005);
}

namespace {

StudyConfig small_config() {
    StudyConfig cfg;
    cfg.models = {"ring"};
    cfg.sample_sizes = {100};
    cfg.alphas = {0.1, 0.01};
    cfg.replicates = 3;
    cfg.seed = 9;
    cfg.threads = 1;
    return cfg;
}

bool same(double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; }

void expect_same(const ReplicateRecord& a, const ReplicateRecord& b) {
    EXPECT_EQ(a.model, b.model);
    EXPECT_EQ(a.n, b.n);
    EXPECT_EQ(a.replicate, b.replicate);
    EXPECT_EQ(a.seed, b.seed);
    ASSERT_EQ(a.r_hat.size(), b.r_hat.size());
    for (std::size_t i = 0; i < a.r_hat.size(); ++i) {
        EXPECT_TRUE(same(a.r_hat[i], b.r_hat[i]));
        EXPECT_TRUE(same(a.d_mu_rs[i], b.d_mu_rs[i]));
        EXPECT_EQ(a.outcome[i], b.outcome[i]);
    }
    EXPECT_TRUE(same(a.r_mm, b.r_mm));
    EXPECT_TRUE(same(a.d_mu_mm, b.d_mu_mm));
    EXPECT_TRUE(same(a.d_mu_r0, b.d_mu_r0));
    EXPECT_EQ(a.error, b.error);
}

}  // namespace

TEST(Study, SingleReplicateEqualsManualPipeline) {
    StudyConfig cfg = small_config();
    cfg.replicates = 1;
    const StudyResult res = run_study(cfg);
    ASSERT_EQ(res.records.size(), 1u);
    const ReplicateRecord& rec = res.records[0];
    ASSERT_TRUE(rec.ok()) << rec.error;

    const SupportModel m = make_model("ring");
    const MembershipGrid truth = rasterize_model(m, Box::unit(), 334);
    const PointCloud cloud = sample_uniform(m, 100, replicate_seed(9, "ring", 100, 0));
    for (std::size_t a = 0; a < cfg.alphas.size(); ++a) {
        SelectorConfig sc;
        sc.alpha = cfg.alphas[a];
        const SelectorTrace tr = select_rs(cloud, sc);
        const RConvexHull est = estimate_support(cloud, sc);
        EXPECT_EQ(rec.r_hat[a], tr.r_hat);
        EXPECT_EQ(rec.d_mu_rs[a], distance_in_measure(est.rasterize(Box::unit(), 334, 334), truth));
    }
    const double r_mm = select_mm(cloud);
    EXPECT_EQ(rec.r_mm, r_mm);
    EXPECT_EQ(rec.d_mu_mm, distance_in_measure(build_rconvex_hull(cloud, r_mm).rasterize(Box::unit(), 334, 334), truth));
    EXPECT_EQ(rec.d_mu_r0, distance_in_measure(build_rconvex_hull(cloud, 0.15).rasterize(Box::unit(), 334, 334), truth));
    EXPECT_EQ(res.cells[0].r_hat[0].mean, rec.r_hat[0]);
}

TEST(Study, ThreadCountDoesNotChangeResults) {
    StudyConfig cfg = small_config();
    const StudyResult one = run_study(cfg);
    cfg.threads = 3;
    const StudyResult three = run_study(cfg);
    ASSERT_EQ(one.records.size(), three.records.size());
    for (std::size_t i = 0; i < one.records.size(); ++i) expect_same(one.records[i], three.records[i]);
}

TEST(Study, ReplayMatchesCell) {
    const StudyConfig cfg = small_config();
    const StudyResult res = run_study(cfg);
    for (const auto& rec : res.records) expect_same(rec, replay_replicate(cfg, rec.model, rec.n, rec.replicate));
}

TEST(Study, ResumesFlushedCells) {
    StudyConfig cfg = small_config();
    const auto dir = std::filesystem::temp_directory_path() / "rshape_resume_test";
    std::filesystem::remove_all(dir);
    cfg.out_dir = dir.string();
    const StudyResult first = run_study(cfg);
    EXPECT_EQ(first.resumed_cells, 0u);
    EXPECT_TRUE(std::filesystem::exists(dir / "cells" / "ring_n100.csv"));
    EXPECT_TRUE(std::filesystem::exists(dir / "summary.txt"));
    const StudyResult second = run_study(cfg);
    EXPECT_EQ(second.resumed_cells, 1u);
    for (std::size_t i = 0; i < first.records.size(); ++i) expect_same(first.records[i], second.records[i]);
    // a different replicate count does not reuse the cell
    cfg.replicates = 2;
    EXPECT_EQ(run_study(cfg).resumed_cells, 0u);
    std::filesystem::remove_all(dir);
}

TEST(Study, CsvRoundTrip) {
    const StudyConfig cfg = small_config();
    const StudyResult res = run_study(cfg);
    std::string text = records_csv_header(cfg) + "\n";
    for (const auto& r : res.records) text += record_csv_row(r) + "\n";
    const auto back = parse_records_csv(cfg, text);
    ASSERT_EQ(back.size(), res.records.size());
    for (std::size_t i = 0; i < back.size(); ++i) expect_same(back[i], res.records[i]);
    EXPECT_THROW(parse_records_csv(cfg, text + "ring,100\n"), Error);
}

TEST(Study, FailuresAreCounted) {
    StudyConfig cfg = small_config();
    cfg.selector.r_max = 1e-6;  // below any useful r_min: every selector run fails
    cfg.selector.r_min = 1e-7;
    const StudyResult res = run_study(cfg);
    EXPECT_EQ(res.records.size(), 3u);
    EXPECT_EQ(res.failures + res.cells[0].r_hat[0].count, 3u);
}

TEST(Study, TablesHaveReferenceLayout) {
    StudyConfig cfg = small_config();
    cfg.sample_sizes = {100, 150};
    cfg.replicates = 1;
    const StudyResult res = run_study(cfg);
    const std::string t = format_r_table(res, "ring");
    EXPECT_NE(t.find("n=100"), std::string::npos);
    EXPECT_NE(t.find("n=150"), std::string::npos);
    EXPECT_NE(t.find("RS a=1e-01"), std::string::npos);
    EXPECT_NE(t.find("RS a=1e-02"), std::string::npos);
    EXPECT_NE(t.find("MM"), std::string::npos);
    const std::string d = format_d_mu_table(res, "ring");
    EXPECT_NE(d.find("x 10"), std::string::npos);
    EXPECT_NE(d.find("r0-hull"), std::string::npos);
}

TEST(StudyConfig, ValidationListsEveryProblem) {
    StudyConfig cfg;
    cfg.alphas = {1.5};
    cfg.replicates = 0;
    cfg.sample_sizes = {5};
    cfg.models = {"blob"};
    try {
        validate(cfg);
        FAIL();
    } catch (const Error& e) {
        const std::string w = e.what();
        EXPECT_EQ(e.kind(), ErrorKind::InvalidConfig);
        EXPECT_NE(w.find("alpha 1.5"), std::string::npos);
        EXPECT_NE(w.find("replicates"), std::string::npos);
        EXPECT_NE(w.find("below 10"), std::string::npos);
        EXPECT_NE(w.find("blob"), std::string::npos);
    }
}

TEST(StudyConfig, FromKeyValues) {
    const StudyConfig cfg = study_config_from(
        {{"models", "ring, sshape"}, {"sample_sizes", "100,500"}, {"alphas", "0.1, 0.001"}, {"replicates", "7"},
         {"nu", "0.9"}, {"seed", "12"}});
    EXPECT_EQ(cfg.models, (std::vector<std::string>{"ring", "sshape"}));
    EXPECT_EQ(cfg.sample_sizes, (std::vector<std::size_t>{100, 500}));
    EXPECT_EQ(cfg.alphas, (std::vector<double>{0.1, 0.001}));
    EXPECT_EQ(cfg.replicates, 7u);
    EXPECT_EQ(cfg.selector.nu, 0.9);
    EXPECT_EQ(cfg.seed, 12u);
    EXPECT_THROW(study_config_from({{"alphas", "1.5"}}), Error);
    EXPECT_THROW(study_config_from({{"replicates", "x"}}), Error);
    EXPECT_THROW(study_config_from({{"colour", "red"}}), Error);
}

TEST(Convergence, SlopeOfPowerLaw) {
    const std::vector<double> n{100, 200, 400, 800};
    std::vector<double> v;
    for (double x : n) v.push_back(3.0 * std::pow(x, -0.7));
    EXPECT_NEAR(loglog_slope(n, v), -0.7, 1e-12);
    EXPECT_TRUE(plausible_rate(loglog_slope(n, v)));
    const std::vector<double> flat(4, 0.02);
    EXPECT_NEAR(loglog_slope(n, flat), 0.0, 1e-12);
    EXPECT_FALSE(plausible_rate(loglog_slope(n, flat)));
    EXPECT_THROW(loglog_slope(std::vector<double>{1, 2}, std::vector<double>{1, 2}), Error);
}

TEST(Convergence, ReferenceBenchmarkRowSlope) {
    // reference ring r0-hull d_mu x 10 means, n = 100 .. 1500
    const std::vector<double> n{100, 500, 1000, 1500};
    const std::vector<double> v{0.9337, 0.2956, 0.1819, 0.1364};
    EXPECT_NEAR(loglog_slope(n, v), -0.71, 0.02);
}

TEST(Convergence, ProbeOnRing) {
    const ConvergenceProbe p = convergence_probe("ring", {250, 500, 1000}, 6, 3, 334, 1);
    ASSERT_EQ(p.mean_d_mu.size(), 3u);
    EXPECT_GT(p.mean_d_mu[0], p.mean_d_mu[2]);
    EXPECT_LT(p.slope_d_mu, -0.3);
    EXPECT_LT(p.slope_d_H, 0.0);
    EXPECT_THROW(convergence_probe("ring", {250, 500}, 2, 3), Error);
}
