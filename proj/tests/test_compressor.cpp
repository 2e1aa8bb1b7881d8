#include <algorithm>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "chronoagg/compressor.hpp"
#include "test_support.hpp"

namespace chronoagg {
namespace {

SnapshotSequence random_sequence(std::mt19937_64& rng, Eigen::Index n, int count, double beta,
                                 bool varied_durations = false)
{
    std::uniform_real_distribution<double> dur(0.5, 3.0);
    std::vector<Snapshot> snaps;
    double t = 0.0;
    for (int k = 0; k < count; ++k) {
        const double d = varied_durations ? dur(rng) : 1.0;
        snaps.emplace_back(testing::random_symmetric(n, rng, 0.4), t, d, beta);
        t += d;
    }
    return SnapshotSequence(std::move(snaps));
}

Matrix edge(Eigen::Index n, Eigen::Index i, Eigen::Index j, double w = 1.0)
{
    Matrix m = Matrix::Zero(n, n);
    m(i, j) = m(j, i) = w;
    return m;
}

// Duration-weighted contact mass: sum over snapshots of duration * sum(matrix).
double mass(const SnapshotSequence& seq)
{
    double total = 0.0;
    for (const auto& s : seq)
        total += s.duration() * s.matrix().sum();
    return total;
}

TEST(ErrorProfile, ConstantSequenceIsZero)
{
    std::mt19937_64 rng(31);
    const Matrix m = testing::random_symmetric(7, rng);
    std::vector<Snapshot> snaps;
    for (int k = 0; k < 6; ++k)
        snaps.emplace_back(m, k * 2.0, 2.0, 0.05);
    const auto profile = error_profile(SnapshotSequence(std::move(snaps)));
    ASSERT_EQ(profile.pair_errors.size(), 5u);
    EXPECT_EQ(profile.resolution, 6u);
    for (std::size_t k = 0; k < 5; ++k) {
        EXPECT_LT(profile.pair_errors[k].xi, 1e-12);
        EXPECT_EQ(profile.pair_errors[k].pair_index, k);
    }
}

TEST(ErrorProfile, MatchesPairwiseXi)
{
    std::mt19937_64 rng(32);
    // Long enough to take the threaded path.
    const SnapshotSequence seq = random_sequence(rng, 6, 60, 0.05, true);
    const auto profile = error_profile(seq);
    for (std::size_t k = 0; k + 1 < seq.size(); ++k)
        EXPECT_EQ(profile.pair_errors[k], xi(seq[k], seq[k + 1], k));
}

TEST(ErrorProfile, NeedsTwoSnapshots)
{
    EXPECT_THROW(error_profile(SnapshotSequence({Snapshot(Matrix::Zero(2, 2), 0, 1, 1)})), InvalidArgument);
}

TEST(GreedyCompress, IdenticalSnapshotsCollapse)
{
    std::mt19937_64 rng(33);
    const Matrix m = testing::random_symmetric(5, rng);
    std::vector<Snapshot> snaps;
    for (int k = 0; k < 8; ++k)
        snaps.emplace_back(m, 3.0 + k * 1.5, 1.5, 0.1);
    const auto result = greedy_compress(SnapshotSequence(std::move(snaps)), 1);
    ASSERT_EQ(result.compressed.size(), 1u);
    EXPECT_NEAR(result.compressed[0].duration(), 12.0, 1e-12);
    EXPECT_DOUBLE_EQ(result.compressed[0].start_time(), 3.0);
    EXPECT_TRUE(result.compressed[0].matrix().isApprox(m, 1e-14));
    EXPECT_EQ(result.merge_log.size(), 7u);
    EXPECT_EQ(result.boundaries, std::vector<double>{3.0});
}

TEST(GreedyCompress, CommutingPairMergesFirst)
{
    // Snapshots 2 and 3 share one edge and commute; 1 -> 2 is a chain.
    const SnapshotSequence seq({Snapshot(edge(4, 0, 1), 0, 1, 0.2), Snapshot(edge(4, 1, 2), 1, 1, 0.2),
                                Snapshot(edge(4, 1, 2), 2, 1, 0.2)});
    const PairError first = xi(seq[0], seq[1]);
    const PairError second = xi(seq[1], seq[2]);
    ASSERT_GT(first.xi, 0.0);
    ASSERT_LT(second.xi, 1e-15);

    const auto result = greedy_compress(seq, 2);
    ASSERT_EQ(result.merge_log.size(), 1u);
    EXPECT_EQ(result.merge_log[0].pair_index, 1u);
    EXPECT_EQ(result.merge_log[0].step, 1u);
    EXPECT_EQ(result.merge_log[0].xi, second.xi);
    EXPECT_EQ(result.boundaries, (std::vector<double>{0.0, 1.0}));
    EXPECT_DOUBLE_EQ(result.compressed[1].duration(), 2.0);
}

TEST(GreedyCompress, TiesGoLeft)
{
    // All pairs identical by construction: alternating snapshots of equal duration.
    Matrix x = edge(3, 0, 1), y = edge(3, 0, 1);
    const SnapshotSequence seq({Snapshot(x, 0, 1, 0.1), Snapshot(y, 1, 1, 0.1), Snapshot(x, 2, 1, 0.1),
                                Snapshot(y, 3, 1, 0.1)});
    GreedyCompressor c(seq);
    EXPECT_EQ(c.step().pair_index, 0u);
}

TEST(GreedyCompress, IncrementalMatchesFullRecompute)
{
    std::mt19937_64 rng(34);
    for (int trial = 0; trial < 3; ++trial) {
        GreedyCompressor c(random_sequence(rng, 8, 20, 0.03, true));
        while (c.size() > 1) {
            c.step();
            if (c.size() < 2)
                break;
            const auto full = error_profile(c.sequence()).pair_errors;
            ASSERT_EQ(full.size(), c.pair_errors().size());
            for (std::size_t k = 0; k < full.size(); ++k)
                EXPECT_EQ(c.pair_errors()[k], full[k]) << "pair " << k << " at size " << c.size();
        }
    }
}

TEST(GreedyCompress, ChoosesMinimumEachStep)
{
    std::mt19937_64 rng(35);
    GreedyCompressor c(random_sequence(rng, 6, 15, 0.05));
    while (c.size() > 1) {
        const auto& errors = c.pair_errors();
        const auto best = std::min_element(errors.begin(), errors.end(),
                                           [](const PairError& a, const PairError& b) { return a.xi < b.xi; });
        const auto expected = static_cast<std::size_t>(best - errors.begin());
        const double expected_xi = best->xi;
        const MergeRecord r = c.step();
        EXPECT_EQ(r.pair_index, expected);
        EXPECT_EQ(r.xi, expected_xi);
    }
}

TEST(GreedyCompress, ConservesDurationAndMass)
{
    std::mt19937_64 rng(36);
    const SnapshotSequence seq = random_sequence(rng, 7, 25, 0.04, true);
    const double duration = seq.total_duration();
    const double contact_mass = mass(seq);
    GreedyCompressor c(seq);
    while (c.size() > 1) {
        c.step();
        const SnapshotSequence now = c.sequence();
        EXPECT_NEAR(now.total_duration(), duration, 1e-9 * duration);
        EXPECT_NEAR(mass(now), contact_mass, 1e-9 * contact_mass);
        EXPECT_DOUBLE_EQ(now.start_time(), seq.start_time());
        EXPECT_NEAR(now.end_time(), seq.end_time(), 1e-9 * seq.end_time());
        // Group starts name the original snapshot where each group begins.
        for (std::size_t g = 0; g < now.size(); ++g)
            EXPECT_DOUBLE_EQ(now[g].start_time(), seq[c.group_starts()[g]].start_time());
    }
}

TEST(GreedyCompress, Deterministic)
{
    std::mt19937_64 rng(37);
    const SnapshotSequence seq = random_sequence(rng, 6, 30, 0.05, true);
    const auto a = greedy_compress(seq, 5);
    const auto b = greedy_compress(seq, 5);
    EXPECT_EQ(a.merge_log, b.merge_log);
    EXPECT_EQ(a.boundaries, b.boundaries);
    for (std::size_t k = 0; k < 5; ++k)
        EXPECT_EQ(a.compressed[k].matrix(), b.compressed[k].matrix());
}

TEST(GreedyCompress, RejectsTargetsOutsideRange)
{
    std::mt19937_64 rng(38);
    const SnapshotSequence seq = random_sequence(rng, 4, 5, 0.05);
    EXPECT_THROW(greedy_compress(seq, 0), InvalidArgument);
    EXPECT_THROW(greedy_compress(seq, 5), InvalidArgument);
    EXPECT_THROW(greedy_compress(seq, 9), InvalidArgument);
    EXPECT_NO_THROW(greedy_compress(seq, 4));
}

// Exhaustive oracle: every composition into `groups` nonempty runs, scored
// by the cut-by-cut rule (each cut nearest its ideal point, earlier on ties).
std::vector<std::size_t> brute_even_partition(const std::vector<double>& d, std::size_t groups)
{
    const std::size_t n = d.size();
    std::vector<double> cum(n + 1, 0.0);
    for (std::size_t k = 0; k < n; ++k)
        cum[k + 1] = cum[k] + d[k];
    std::vector<std::size_t> starts{0};
    for (std::size_t g = 1; g < groups; ++g) {
        const double ideal = cum[n] * static_cast<double>(g) / static_cast<double>(groups);
        std::size_t best = 0;
        double gap = std::numeric_limits<double>::infinity();
        for (std::size_t c = starts.back() + 1; c + (groups - g) <= n; ++c) {
            if (std::abs(cum[c] - ideal) < gap - 1e-12) {
                gap = std::abs(cum[c] - ideal);
                best = c;
            }
        }
        starts.push_back(best);
    }
    return starts;
}

TEST(EvenPartition, Examples)
{
    EXPECT_EQ(even_partition({1, 1, 8, 1, 1}, 2), (std::vector<std::size_t>{0, 2}));
    EXPECT_EQ(even_partition({1, 1, 1, 1}, 2), (std::vector<std::size_t>{0, 2}));
    EXPECT_EQ(even_partition(std::vector<double>(10, 1.0), 5), (std::vector<std::size_t>{0, 2, 4, 6, 8}));
    EXPECT_EQ(even_partition({1, 2, 3}, 3), (std::vector<std::size_t>{0, 1, 2}));
    EXPECT_EQ(even_partition({4, 4}, 1), (std::vector<std::size_t>{0}));
}

TEST(EvenPartition, MatchesBruteForce)
{
    std::mt19937_64 rng(39);
    std::uniform_real_distribution<double> u(0.1, 5.0);
    std::uniform_int_distribution<int> len(1, 14);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> d(static_cast<std::size_t>(len(rng)));
        for (auto& x : d)
            x = u(rng);
        for (std::size_t g = 1; g <= d.size(); ++g) {
            const auto starts = even_partition(d, g);
            EXPECT_EQ(starts, brute_even_partition(d, g));
            ASSERT_EQ(starts.size(), g);
            EXPECT_TRUE(std::is_sorted(starts.begin(), starts.end()));
            EXPECT_EQ(std::adjacent_find(starts.begin(), starts.end()), starts.end());
        }
    }
}

TEST(EvenPartition, RejectsBadGroupCounts)
{
    EXPECT_THROW(even_partition({1, 1}, 0), InvalidArgument);
    EXPECT_THROW(even_partition({1, 1}, 3), InvalidArgument);
}

TEST(EvenCompress, AggregatesRunsInOrder)
{
    std::mt19937_64 rng(40);
    const SnapshotSequence seq = random_sequence(rng, 5, 10, 0.05);
    const SnapshotSequence even = even_compress(seq, 5);
    ASSERT_EQ(even.size(), 5u);
    for (std::size_t g = 0; g < 5; ++g) {
        const Matrix expected = 0.5 * (seq[2 * g].matrix() + seq[2 * g + 1].matrix());
        EXPECT_TRUE(even[g].matrix().isApprox(expected, 1e-14));
        EXPECT_DOUBLE_EQ(even[g].duration(), 2.0);
    }
    EXPECT_NEAR(mass(even), mass(seq), 1e-9 * mass(seq));
    EXPECT_EQ(pre_aggregate(seq, 5)[3].matrix(), even[3].matrix());
}

} // namespace
} // namespace chronoagg
