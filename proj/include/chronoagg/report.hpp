#pragma once

#include <cmath>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "chronoagg/compressor.hpp"
#include "chronoagg/ingest.hpp"
#include "chronoagg/snapshot.hpp"
#include "chronoagg/validation.hpp"

namespace chronoagg {

using json = nlohmann::json;

// Snapshot files are a JSON array of {start_time, duration, matrix} with the
// matrix flattened row-major. Beta is not stored; readers supply it.

inline json snapshots_to_json(const SnapshotSequence& seq)
{
    json out = json::array();
    for (const auto& s : seq) {
        std::vector<double> flat;
        flat.reserve(static_cast<std::size_t>(s.matrix().size()));
        for (Eigen::Index i = 0; i < s.node_count(); ++i)
            for (Eigen::Index j = 0; j < s.node_count(); ++j)
                flat.push_back(s.matrix()(i, j));
        out.push_back({{"start_time", s.start_time()}, {"duration", s.duration()}, {"matrix", std::move(flat)}});
    }
    return out;
}

inline SnapshotSequence snapshots_from_json(const json& doc, double beta)
{
    if (!doc.is_array() || doc.empty())
        throw DataError("snapshot file must be a non-empty JSON array");
    std::vector<Snapshot> snaps;
    snaps.reserve(doc.size());
    for (const auto& item : doc) {
        if (!item.is_object() || !item.contains("start_time") || !item.contains("duration") ||
            !item.contains("matrix") || !item["matrix"].is_array())
            throw DataError("snapshot entries need start_time, duration and matrix");
        const auto& flat = item["matrix"];
        const auto n = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(flat.size()))));
        if (static_cast<std::size_t>(n * n) != flat.size())
            throw DataError("snapshot matrix length " + std::to_string(flat.size()) + " is not a square");
        Matrix m(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j)
                m(i, j) = flat[static_cast<std::size_t>(i * n + j)].get<double>();
        snaps.emplace_back(std::move(m), item["start_time"].get<double>(), item["duration"].get<double>(), beta);
    }
    return SnapshotSequence(std::move(snaps));
}

inline void write_tau_header(std::ostream& out, const TauRange& tau)
{
    out << "# tau_min=" << detail::format_double(tau.min) << " tau_max=" << detail::format_double(tau.max) << '\n';
}

/// pair_start_time,xi,epsilon_end,epsilon_mid; one row per adjacent pair.
inline void write_profile_csv(std::ostream& out, const SnapshotSequence& seq, const ErrorProfile& profile)
{
    out << "pair_start_time,xi,epsilon_end,epsilon_mid\n";
    for (const auto& e : profile.pair_errors)
        out << detail::format_double(seq[e.pair_index].start_time()) << ',' << detail::format_double(e.xi) << ','
            << detail::format_double(e.epsilon_end) << ',' << detail::format_double(e.epsilon_mid) << '\n';
}

inline void write_merge_log_csv(std::ostream& out, const std::vector<MergeRecord>& log)
{
    out << "step,merged_pair_index,xi\n";
    for (const auto& r : log)
        out << r.step << ',' << r.pair_index << ',' << detail::format_double(r.xi) << '\n';
}

inline void write_boundaries_csv(std::ostream& out, const std::vector<double>& boundaries)
{
    out << "start_time\n";
    for (const double b : boundaries)
        out << detail::format_double(b) << '\n';
}

/// time,temporal,alg,even
inline void write_curves_csv(std::ostream& out, const ValidationReport& report)
{
    out << "time,temporal,alg,even\n";
    const auto& t = report.curve_temporal;
    for (std::size_t k = 0; k < t.times.size(); ++k)
        out << detail::format_double(t.times[k]) << ',' << detail::format_double(t.totals[k]) << ','
            << detail::format_double(report.curve_alg.totals[k]) << ','
            << detail::format_double(report.curve_even.totals[k]) << '\n';
}

inline json merge_log_to_json(const std::vector<MergeRecord>& log)
{
    json out = json::array();
    for (const auto& r : log)
        out.push_back({{"step", r.step}, {"merged_pair_index", r.pair_index}, {"xi", r.xi}});
    return out;
}

inline json report_to_json(const ValidationReport& report, const TauRange& tau)
{
    double xi_max = 0.0;
    double xi_sum = 0.0;
    for (const auto& r : report.merge_log) {
        xi_max = std::max(xi_max, r.xi);
        xi_sum += r.xi;
    }
    return json{
        {"tau_range", {{"min", tau.min}, {"max", tau.max}}},
        {"original_count", report.original_count},
        {"target_count", report.target_count},
        {"d_alg", report.d_alg},
        {"d_even", report.d_even},
        {"d_full", report.d_full},
        {"full_aggregation", "target_count = 1"},
        {"relative_error_vs_full_aggregation", report.relative_error_vs_full_aggregation},
        {"relative_even_vs_full_aggregation", report.relative_even_vs_full_aggregation},
        {"boundaries_alg", report.boundaries_alg},
        {"boundaries_even", report.boundaries_even},
        {"merge_log_summary",
         {{"steps", report.merge_log.size()}, {"xi_max", xi_max}, {"xi_sum", xi_sum}}},
    };
}

} // namespace chronoagg
