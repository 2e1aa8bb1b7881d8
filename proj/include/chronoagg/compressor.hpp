#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <thread>
#include <vector>

#include "chronoagg/bch_error.hpp"
#include "chronoagg/snapshot.hpp"

namespace chronoagg {

struct MergeRecord {
    std::size_t step = 0;       ///< 1-based merge step
    std::size_t pair_index = 0; ///< left snapshot of the merged pair, in the sequence at that step
    double xi = 0.0;

    friend bool operator==(const MergeRecord&, const MergeRecord&) = default;
};

struct CompressionResult {
    SnapshotSequence compressed;
    std::vector<double> boundaries; ///< start times of the surviving snapshots
    std::vector<MergeRecord> merge_log;
    std::size_t final_count = 0;
};

struct ErrorProfile {
    std::vector<PairError> pair_errors;
    std::size_t resolution = 0; ///< snapshot count the profile was computed at
};

namespace detail {

/// xi for every adjacent pair. Pairs are independent, so large sweeps are
/// split across hardware threads; results do not depend on the split.
inline std::vector<PairError> all_pair_errors(const std::vector<Snapshot>& snaps)
{
    const std::size_t pairs = snaps.size() < 2 ? 0 : snaps.size() - 1;
    std::vector<PairError> out(pairs);
    auto work = [&](std::size_t first, std::size_t last) {
        for (std::size_t k = first; k < last; ++k)
            out[k] = xi(snaps[k], snaps[k + 1], k);
    };

    const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t threads = std::min<std::size_t>(hw, pairs / 16);
    if (threads <= 1) {
        work(0, pairs);
        return out;
    }
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    const std::size_t chunk = (pairs + threads - 1) / threads;
    for (std::size_t t = 0; t < threads; ++t) {
        const std::size_t first = t * chunk;
        const std::size_t last = std::min(pairs, first + chunk);
        if (first < last)
            pool.emplace_back(work, first, last);
    }
    return out;
}

} // namespace detail

/// xi for each adjacent pair of the sequence, in order.
inline ErrorProfile error_profile(const SnapshotSequence& seq)
{
    if (seq.size() < 2)
        throw InvalidArgument("error profile needs at least two snapshots");
    return ErrorProfile{detail::all_pair_errors(seq.snapshots()), seq.size()};
}

/// Stateful greedy merger. Each step merges the adjacent pair with the
/// smallest xi (leftmost on ties) and refreshes only the two pair errors
/// that involve the merged snapshot.
class GreedyCompressor {
public:
    explicit GreedyCompressor(const SnapshotSequence& seq)
        : snaps_(seq.snapshots()), labels_(seq.node_labels()), errors_(detail::all_pair_errors(snaps_))
    {
        group_first_.reserve(snaps_.size());
        for (std::size_t k = 0; k < snaps_.size(); ++k)
            group_first_.push_back(k);
    }

    std::size_t size() const { return snaps_.size(); }
    const std::vector<Snapshot>& snapshots() const { return snaps_; }
    const std::vector<PairError>& pair_errors() const { return errors_; }
    const std::vector<MergeRecord>& merge_log() const { return log_; }

    /// Index in the original sequence of the first snapshot of each current group.
    const std::vector<std::size_t>& group_starts() const { return group_first_; }

    SnapshotSequence sequence() const { return SnapshotSequence(snaps_, labels_); }

    MergeRecord step()
    {
        if (snaps_.size() < 2)
            throw InvalidArgument("nothing left to merge");

        std::size_t best = 0;
        for (std::size_t k = 1; k < errors_.size(); ++k)
            if (errors_[k].xi < errors_[best].xi)
                best = k;

        const MergeRecord record{log_.size() + 1, best, errors_[best].xi};
        snaps_[best] = aggregate(snaps_[best], snaps_[best + 1]);
        snaps_.erase(snaps_.begin() + static_cast<std::ptrdiff_t>(best) + 1);
        group_first_.erase(group_first_.begin() + static_cast<std::ptrdiff_t>(best) + 1);
        errors_.erase(errors_.begin() + static_cast<std::ptrdiff_t>(best));
        for (std::size_t k = best; k < errors_.size(); ++k)
            errors_[k].pair_index = k;
        if (best > 0)
            errors_[best - 1] = xi(snaps_[best - 1], snaps_[best], best - 1);
        if (best < errors_.size())
            errors_[best] = xi(snaps_[best], snaps_[best + 1], best);

        log_.push_back(record);
        return record;
    }

private:
    std::vector<Snapshot> snaps_;
    std::vector<std::string> labels_;
    std::vector<PairError> errors_;
    std::vector<std::size_t> group_first_;
    std::vector<MergeRecord> log_;
};

/// Greedily merges adjacent pairs until `target` snapshots remain.
inline CompressionResult greedy_compress(const SnapshotSequence& seq, std::size_t target)
{
    if (target < 1 || target >= seq.size())
        throw InvalidArgument("compression target " + std::to_string(target) + " must lie in [1, " +
                              std::to_string(seq.size() - 1) + "]");
    GreedyCompressor compressor(seq);
    while (compressor.size() > target)
        compressor.step();

    SnapshotSequence compressed = compressor.sequence();
    std::vector<double> boundaries = compressed.start_times();
    return CompressionResult{std::move(compressed), std::move(boundaries), compressor.merge_log(), target};
}

/// Splits durations into `groups` contiguous runs whose totals are as equal
/// as possible. Cut k goes where the running total is closest to k/groups of
/// the whole; ties go to the earlier cut. Returns the first index of each run.
inline std::vector<std::size_t> even_partition(const std::vector<double>& durations, std::size_t groups)
{
    const std::size_t n = durations.size();
    if (groups < 1 || groups > n)
        throw InvalidArgument("group count " + std::to_string(groups) + " must lie in [1, " + std::to_string(n) +
                              "]");
    std::vector<double> cumulative(n + 1, 0.0);
    for (std::size_t k = 0; k < n; ++k)
        cumulative[k + 1] = cumulative[k] + durations[k];
    const double total = cumulative[n];

    std::vector<std::size_t> starts{0};
    starts.reserve(groups);
    for (std::size_t g = 1; g < groups; ++g) {
        const double ideal = total * static_cast<double>(g) / static_cast<double>(groups);
        // Cut index c means the new group starts at snapshot c.
        const std::size_t lo = starts.back() + 1;
        const std::size_t hi = n - (groups - g);
        std::size_t best = lo;
        double best_gap = std::abs(cumulative[lo] - ideal);
        for (std::size_t c = lo + 1; c <= hi; ++c) {
            const double gap = std::abs(cumulative[c] - ideal);
            if (gap < best_gap - 1e-12 * std::max(1.0, total)) {
                best = c;
                best_gap = gap;
            }
        }
        starts.push_back(best);
    }
    return starts;
}

/// Aggregates each run of an even partition into one snapshot.
inline SnapshotSequence even_compress(const SnapshotSequence& seq, std::size_t target)
{
    std::vector<double> durations;
    durations.reserve(seq.size());
    for (const auto& s : seq)
        durations.push_back(s.duration());
    const auto starts = even_partition(durations, target);

    std::vector<Snapshot> out;
    out.reserve(target);
    for (std::size_t g = 0; g < starts.size(); ++g) {
        const std::size_t last = g + 1 < starts.size() ? starts[g + 1] : seq.size();
        out.push_back(aggregate_range(seq, starts[g], last));
    }
    return SnapshotSequence(std::move(out), seq.node_labels());
}

/// Even coarse-graining to `m` snapshots, used before greedy compression.
inline SnapshotSequence pre_aggregate(const SnapshotSequence& seq, std::size_t m)
{
    return even_compress(seq, m);
}

} // namespace chronoagg
