#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "chronoagg/report.hpp"
#include "chronoagg/run_config.hpp"
#include "test_support.hpp"

namespace chronoagg {
namespace {

TEST(SnapshotJson, RoundTripsExactly)
{
    std::mt19937_64 rng(61);
    std::vector<Snapshot> snaps;
    double t = 0.1;
    for (int k = 0; k < 4; ++k) {
        const double d = 0.7 + 0.1 * k;
        snaps.emplace_back(testing::random_symmetric(5, rng), t, d, 0.013);
        t += d;
    }
    const SnapshotSequence seq(std::move(snaps));
    const json doc = json::parse(snapshots_to_json(seq).dump());
    const SnapshotSequence back = snapshots_from_json(doc, 0.013);
    ASSERT_EQ(back.size(), seq.size());
    for (std::size_t k = 0; k < seq.size(); ++k) {
        EXPECT_EQ(back[k].matrix(), seq[k].matrix());
        EXPECT_EQ(back[k].start_time(), seq[k].start_time());
        EXPECT_EQ(back[k].duration(), seq[k].duration());
    }
}

TEST(SnapshotJson, RejectsMalformedDocuments)
{
    EXPECT_THROW(snapshots_from_json(json::array(), 0.1), DataError);
    EXPECT_THROW(snapshots_from_json(json::object(), 0.1), DataError);
    EXPECT_THROW(snapshots_from_json(json::parse(R"([{"start_time":0,"duration":1,"matrix":[0,1,1]}])"), 0.1),
                 DataError);
    EXPECT_THROW(snapshots_from_json(json::parse(R"([{"start_time":0,"matrix":[0]}])"), 0.1), DataError);
    // Gap between snapshots.
    EXPECT_THROW(snapshots_from_json(json::parse(R"([{"start_time":0,"duration":1,"matrix":[0]},
                                                     {"start_time":2,"duration":1,"matrix":[0]}])"),
                                     0.1),
                 DataError);
}

TEST(Csv, ProfileRowsCarryFullPrecision)
{
    const SnapshotSequence seq({Snapshot(Matrix::Zero(2, 2), 0, 1, 0.1), Snapshot(Matrix::Zero(2, 2), 1, 1, 0.1)});
    ErrorProfile profile{{PairError{0.1, 0.2, 1.0 / 3.0, 0}}, 2};
    std::ostringstream out;
    write_profile_csv(out, seq, profile);
    EXPECT_EQ(out.str(), "pair_start_time,xi,epsilon_end,epsilon_mid\n0,0.3333333333333333,0.1,0.2\n");
}

TEST(Csv, MergeLogAndBoundaries)
{
    std::ostringstream log, bounds, tau;
    write_merge_log_csv(log, {{1, 3, 0.25}, {2, 0, 1e-20}});
    EXPECT_EQ(log.str(), "step,merged_pair_index,xi\n1,3,0.25\n2,0,1e-20\n");
    write_boundaries_csv(bounds, {0.0, 12.5});
    EXPECT_EQ(bounds.str(), "start_time\n0\n12.5\n");
    write_tau_header(tau, TauRange{0.01, 0.4});
    EXPECT_EQ(tau.str(), "# tau_min=0.01 tau_max=0.4\n");
}

TEST(RunConfig, ReadsEveryField)
{
    const auto cfg = run_config_from_json(json::parse(R"({
        "beta": 0.002, "resolution": 300, "target": 6, "mode": "binary", "seed": 9,
        "output_dir": "out", "input": "contacts.txt", "levels": [200, 100], "sweep": [25, 12],
        "integrator": {"step_fraction": 0.01, "sample_count": 21},
        "synth": {"snapshot_count": 30, "node_count": 20, "duration_per_snapshot": 2.5,
                  "edge_model": {"type": "activity_driven", "rate": 0.3, "links": 2},
                  "modulation": {"kind": "day_night", "period": 12, "depth": 0.8},
                  "format": "contacts"}
    })"));
    EXPECT_EQ(cfg.beta, 0.002);
    ASSERT_TRUE(cfg.resolution.has_value());
    EXPECT_EQ(*cfg.resolution, 300.0);
    EXPECT_FALSE(cfg.bins.has_value());
    EXPECT_EQ(cfg.target, 6u);
    EXPECT_EQ(cfg.mode, BinMode::binary);
    EXPECT_EQ(cfg.seed, 9u);
    EXPECT_EQ(cfg.output_dir, "out");
    EXPECT_EQ(cfg.input, "contacts.txt");
    EXPECT_EQ(cfg.levels, (std::vector<std::size_t>{200, 100}));
    EXPECT_EQ(cfg.sweep, (std::vector<std::size_t>{25, 12}));
    EXPECT_EQ(cfg.integrator.step_fraction, 0.01);
    EXPECT_EQ(cfg.integrator.sample_count, 21u);
    EXPECT_EQ(cfg.synth.snapshot_count, 30u);
    EXPECT_EQ(cfg.synth.duration_per_snapshot, 2.5);
    const auto* model = std::get_if<ActivityDriven>(&cfg.synth.edge_model);
    ASSERT_NE(model, nullptr);
    EXPECT_EQ(model->links, 2);
    EXPECT_EQ(cfg.synth.modulation.kind, Modulation::Kind::day_night);
    EXPECT_EQ(cfg.synth.modulation.period, 12.0);
    EXPECT_EQ(cfg.synth_format, SynthFormat::contacts);
}

TEST(RunConfig, DefaultsAndErrors)
{
    const auto cfg = run_config_from_json(json::object());
    EXPECT_EQ(cfg.mode, BinMode::weighted);
    EXPECT_EQ(cfg.integrator.sample_count, 51u);
    EXPECT_TRUE(std::holds_alternative<UniformRandom>(cfg.synth.edge_model));
    EXPECT_THROW(run_config_from_json(json::parse(R"({"mode": "sum"})")), InvalidArgument);
    EXPECT_THROW(run_config_from_json(json::parse(R"({"target": "six"})")), InvalidArgument);
    EXPECT_THROW(run_config_from_json(json::parse(R"({"synth": {"edge_model": {"type": "lattice"}}})")),
                 InvalidArgument);
}

TEST(TauCheck, Thresholds)
{
    EXPECT_EQ(classify_tau({0.01, 0.5}), TauStatus::ok);
    EXPECT_EQ(classify_tau({0.01, 0.7}), TauStatus::warning);
    EXPECT_EQ(classify_tau({0.01, 1.0}), TauStatus::warning);
    EXPECT_EQ(classify_tau({0.01, 1.2}), TauStatus::too_large);
}

} // namespace
} // namespace chronoagg
