#pragma once

#include <cmath>
#include <cstddef>
#include <future>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "chronoagg/compressor.hpp"
#include "chronoagg/diffusion.hpp"
#include "chronoagg/snapshot.hpp"

namespace chronoagg {

/// Time grid and infected-compartment totals of a trajectory.
struct CurveSummary {
    std::vector<double> times;
    std::vector<double> totals;
};

inline CurveSummary summarize(const Trajectory& t)
{
    return CurveSummary{t.times, t.totals};
}

struct ValidationReport {
    double d_alg = 0.0;
    double d_even = 0.0;
    double d_full = 0.0; ///< distance of the single fully aggregated snapshot
    /// d_alg / d_full; zero when d_full is zero.
    double relative_error_vs_full_aggregation = 0.0;
    double relative_even_vs_full_aggregation = 0.0;
    std::size_t target_count = 0;
    std::size_t original_count = 0;
    std::vector<double> boundaries_alg;
    std::vector<double> boundaries_even;
    std::vector<MergeRecord> merge_log;
    CurveSummary curve_temporal;
    CurveSummary curve_alg;
    CurveSummary curve_even;
};

/// Integral of |candidate - reference| / reference over the shared grid
/// (composite trapezoid).
inline double validation_distance(const CurveSummary& candidate, const CurveSummary& reference)
{
    const std::size_t n = reference.times.size();
    if (candidate.times.size() != n || candidate.totals.size() != n || reference.totals.size() != n)
        throw DataError("validation curves are sampled on different grids");
    for (std::size_t k = 0; k < n; ++k)
        if (!detail::nearly_equal_times(candidate.times[k], reference.times[k]))
            throw DataError("validation curves are sampled on different grids");

    double total = 0.0;
    double previous = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double ref = reference.totals[k];
        if (!(ref > 0.0))
            throw DataError("reference curve is zero at t = " + std::to_string(reference.times[k]));
        const double value = std::abs(candidate.totals[k] - ref) / ref;
        if (k > 0)
            total += 0.5 * (value + previous) * (reference.times[k] - reference.times[k - 1]);
        previous = value;
    }
    return total;
}

inline double validation_distance(const Trajectory& candidate, const Trajectory& reference)
{
    return validation_distance(summarize(candidate), summarize(reference));
}

/// Re-expresses a coarser sequence on the partition of `reference`: every
/// reference interval takes the matrix of the coarse snapshot covering it.
/// Both sequences must span the same time range and every coarse boundary
/// must be a reference boundary.
inline SnapshotSequence expand_onto(const SnapshotSequence& coarse, const SnapshotSequence& reference)
{
    std::vector<Snapshot> out;
    out.reserve(reference.size());
    std::size_t c = 0;
    for (const auto& r : reference) {
        const double mid = r.start_time() + 0.5 * r.duration();
        while (c + 1 < coarse.size() && coarse[c].end_time() <= mid)
            ++c;
        if (mid < coarse[c].start_time() || mid > coarse[c].end_time())
            throw DataError("coarse sequence does not cover the reference interval");
        out.emplace_back(coarse[c].matrix(), r.start_time(), r.duration(), r.beta());
    }
    return SnapshotSequence(std::move(out), reference.node_labels());
}

namespace detail {

inline ValidationReport finish_report(const SnapshotSequence& seq, const CompressionResult& alg,
                                      const SnapshotSequence& even, const IntegratorConfig& cfg)
{
    const ProbabilityVector p0 = initial_condition(seq.front());
    const SnapshotSequence full = even_compress(seq, 1);

    auto run = [&](const SnapshotSequence& s) { return integrate_si(expand_onto(s, seq), p0, cfg); };
    auto temporal_f = std::async(std::launch::async, [&] { return integrate_si(seq, p0, cfg); });
    auto alg_f = std::async(std::launch::async, [&] { return run(alg.compressed); });
    auto even_f = std::async(std::launch::async, [&] { return run(even); });
    const Trajectory full_t = run(full);
    const Trajectory temporal = temporal_f.get();
    const Trajectory alg_t = alg_f.get();
    const Trajectory even_t = even_f.get();

    ValidationReport report;
    report.curve_temporal = summarize(temporal);
    report.curve_alg = summarize(alg_t);
    report.curve_even = summarize(even_t);
    report.d_alg = validation_distance(report.curve_alg, report.curve_temporal);
    report.d_even = validation_distance(report.curve_even, report.curve_temporal);
    report.d_full = validation_distance(summarize(full_t), report.curve_temporal);
    if (report.d_full > 0.0) {
        report.relative_error_vs_full_aggregation = report.d_alg / report.d_full;
        report.relative_even_vs_full_aggregation = report.d_even / report.d_full;
    }
    report.target_count = alg.final_count;
    report.original_count = seq.size();
    report.boundaries_alg = alg.boundaries;
    report.boundaries_even = even.start_times();
    report.merge_log = alg.merge_log;
    return report;
}

inline CompressionResult identity_compression(const SnapshotSequence& seq)
{
    return CompressionResult{seq, seq.start_times(), {}, seq.size()};
}

} // namespace detail

/// Compresses `seq` to `target` snapshots both greedily and evenly and
/// measures each against the fully temporal SI dynamics. All curves start
/// from the degree vector of the first snapshot and share the grid of the
/// full-resolution sequence. target == size() means no compression.
inline ValidationReport compare_regimes(const SnapshotSequence& seq, std::size_t target,
                                        const IntegratorConfig& cfg = {})
{
    cfg.validate();
    if (target < 1 || target > seq.size())
        throw InvalidArgument("target " + std::to_string(target) + " must lie in [1, " +
                              std::to_string(seq.size()) + "]");
    const CompressionResult alg =
        target == seq.size() ? detail::identity_compression(seq) : greedy_compress(seq, target);
    return detail::finish_report(seq, alg, even_compress(seq, target), cfg);
}

struct SweepEntry {
    ValidationReport report;
    /// target / k for the smallest greedy count k <= target whose distance
    /// is still at most d_even(target); zero if even the target count fails.
    double further_compression_factor = 0.0;
    std::size_t matched_count = 0; ///< that smallest k; zero if none
};

/// One report per target, plus how much further the greedy hierarchy can be
/// compressed while staying within the even-compression error at that target.
/// The greedy hierarchy is built once; level k is the state after size() - k merges.
inline std::vector<SweepEntry> compression_sweep(const SnapshotSequence& seq, const std::vector<std::size_t>& targets,
                                                 const IntegratorConfig& cfg = {})
{
    cfg.validate();
    std::size_t max_target = 0;
    for (const auto t : targets) {
        if (t < 1 || t > seq.size())
            throw InvalidArgument("sweep target " + std::to_string(t) + " must lie in [1, " +
                                  std::to_string(seq.size()) + "]");
        max_target = std::max(max_target, t);
    }

    // levels[k] holds the greedy result with k snapshots, for k <= max_target.
    std::vector<std::optional<CompressionResult>> levels(max_target + 1);
    if (max_target == seq.size())
        levels[max_target] = detail::identity_compression(seq);
    {
        GreedyCompressor compressor(seq);
        while (compressor.size() > 1) {
            compressor.step();
            const std::size_t k = compressor.size();
            if (k <= max_target) {
                SnapshotSequence s = compressor.sequence();
                std::vector<double> b = s.start_times();
                levels[k] = CompressionResult{std::move(s), std::move(b), compressor.merge_log(), k};
            }
        }
    }

    const ProbabilityVector p0 = initial_condition(seq.front());
    const CurveSummary temporal = summarize(integrate_si(seq, p0, cfg));
    std::vector<double> d_alg_level(max_target + 1, std::numeric_limits<double>::quiet_NaN());
    auto alg_distance = [&](std::size_t k) {
        if (std::isnan(d_alg_level[k]))
            d_alg_level[k] = validation_distance(
                summarize(integrate_si(expand_onto(levels[k]->compressed, seq), p0, cfg)), temporal);
        return d_alg_level[k];
    };

    std::vector<SweepEntry> out;
    out.reserve(targets.size());
    for (const auto t : targets) {
        SweepEntry entry;
        entry.report = detail::finish_report(seq, *levels[t], even_compress(seq, t), cfg);
        d_alg_level[t] = entry.report.d_alg;
        for (std::size_t k = 1; k <= t; ++k) {
            if (alg_distance(k) <= entry.report.d_even) {
                entry.matched_count = k;
                entry.further_compression_factor = static_cast<double>(t) / static_cast<double>(k);
                break;
            }
        }
        out.push_back(std::move(entry));
    }
    return out;
}

} // namespace chronoagg
