#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "chronoagg/snapshot.hpp"

namespace chronoagg {

/// One undirected contact between two nodes (dense internal indices).
struct ContactEvent {
    double time = 0.0;
    std::size_t node_a = 0;
    std::size_t node_b = 0;

    friend bool operator==(const ContactEvent&, const ContactEvent&) = default;
};

struct ContactData {
    std::vector<ContactEvent> events; ///< sorted by time, stable
    std::vector<std::string> labels;  ///< internal index -> external id
    std::size_t self_contacts_dropped = 0;
};

enum class BinMode { weighted, binary };

namespace detail {

inline std::string format_double(double value)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

inline bool parse_double(std::string_view text, double& out)
{
    const auto res = std::from_chars(text.data(), text.data() + text.size(), out);
    return res.ec == std::errc() && res.ptr == text.data() + text.size() && std::isfinite(out);
}

} // namespace detail

/// Reads `<time> <id_a> <id_b> [ignored...]` lines. Blank lines and lines
/// starting with '#' are skipped. Node ids get dense indices in order of
/// first appearance in the time-sorted stream.
inline ContactData parse_contacts(std::istream& in)
{
    struct RawEvent {
        double time;
        std::string a, b;
    };
    std::vector<RawEvent> raw;
    ContactData out;

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        std::istringstream fields(line);
        std::string time_text, a, b;
        if (!(fields >> time_text))
            continue;
        if (time_text.front() == '#')
            continue;
        if (!(fields >> a >> b))
            throw DataError("line " + std::to_string(line_no) + ": expected '<time> <id_a> <id_b>'");
        double t = 0.0;
        if (!detail::parse_double(time_text, t) || t < 0.0)
            throw DataError("line " + std::to_string(line_no) + ": invalid time '" + time_text + "'");
        if (a == b) {
            ++out.self_contacts_dropped;
            continue;
        }
        raw.push_back({t, std::move(a), std::move(b)});
    }
    if (raw.empty())
        throw DataError("contact stream contains no events");

    std::stable_sort(raw.begin(), raw.end(), [](const RawEvent& x, const RawEvent& y) { return x.time < y.time; });

    std::unordered_map<std::string, std::size_t> index;
    auto intern = [&](const std::string& id) {
        auto [it, inserted] = index.try_emplace(id, out.labels.size());
        if (inserted)
            out.labels.push_back(id);
        return it->second;
    };
    out.events.reserve(raw.size());
    for (const auto& r : raw) {
        const std::size_t a = intern(r.a);
        const std::size_t b = intern(r.b);
        out.events.push_back({r.time, a, b});
    }
    return out;
}

inline ContactData parse_contacts(std::string_view text)
{
    std::istringstream in{std::string(text)};
    return parse_contacts(in);
}

/// Canonical text form: one `<time> <id_a> <id_b>` line per event, times in
/// shortest round-trip notation.
inline void write_contacts(std::ostream& out, const ContactData& data)
{
    for (const auto& e : data.events)
        out << detail::format_double(e.time) << ' ' << data.labels[e.node_a] << ' ' << data.labels[e.node_b] << '\n';
}

namespace detail {

inline SnapshotSequence bin_events(const ContactData& data, double t0, double width, std::size_t bins, double beta,
                                   BinMode mode)
{
    const auto n = static_cast<Eigen::Index>(data.labels.size());
    std::vector<Matrix> matrices(bins, Matrix::Zero(n, n));
    for (const auto& e : data.events) {
        auto k = static_cast<std::size_t>(std::floor((e.time - t0) / width));
        k = std::min(k, bins - 1);
        const auto a = static_cast<Eigen::Index>(e.node_a);
        const auto b = static_cast<Eigen::Index>(e.node_b);
        if (mode == BinMode::weighted) {
            matrices[k](a, b) += 1.0;
            matrices[k](b, a) += 1.0;
        } else {
            matrices[k](a, b) = 1.0;
            matrices[k](b, a) = 1.0;
        }
    }
    std::vector<Snapshot> snaps;
    snaps.reserve(bins);
    for (std::size_t k = 0; k < bins; ++k)
        snaps.emplace_back(std::move(matrices[k]), t0 + width * static_cast<double>(k), width, beta);
    return SnapshotSequence(std::move(snaps), data.labels);
}

inline void require_events(const ContactData& data)
{
    if (data.events.empty())
        throw DataError("no contact events to bin");
    if (data.labels.size() < 1)
        throw DataError("contact data has no nodes");
}

} // namespace detail

/// Bins sorted events into windows of `resolution` seconds starting at the
/// first event. The number of bins is ceil(span / resolution), at least one;
/// the last event always falls in the last bin. Empty bins are kept as
/// zero-matrix snapshots. Weighted mode counts events per pair, binary mode
/// records presence.
inline SnapshotSequence bin_contacts(const ContactData& data, double resolution, double beta,
                                     BinMode mode = BinMode::weighted)
{
    detail::require_events(data);
    if (!(resolution > 0.0) || !std::isfinite(resolution))
        throw InvalidArgument("resolution must be positive");
    const double t0 = data.events.front().time;
    const double span = data.events.back().time - t0;
    const auto bins = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(span / resolution)));
    return detail::bin_events(data, t0, resolution, bins, beta, mode);
}

/// Bins events into exactly `bins` equal windows covering [t_min, t_max].
inline SnapshotSequence bin_contacts_count(const ContactData& data, std::size_t bins, double beta,
                                           BinMode mode = BinMode::weighted)
{
    detail::require_events(data);
    if (bins < 1)
        throw InvalidArgument("bin count must be positive");
    const double t0 = data.events.front().time;
    const double span = data.events.back().time - t0;
    const double width = span > 0.0 ? span / static_cast<double>(bins) : 1.0;
    return detail::bin_events(data, t0, width, bins, beta, mode);
}

/// Independent edges with probability p per snapshot.
struct UniformRandom {
    double p = 0.1;
};

/// Erased configuration model on a fixed degree sequence.
struct DegreeSequence {
    std::vector<int> degrees;
};

/// Each node becomes active with probability `rate` per snapshot and then
/// links to `links` distinct random nodes.
struct ActivityDriven {
    double rate = 0.1;
    int links = 1;
};

using EdgeModel = std::variant<UniformRandom, DegreeSequence, ActivityDriven>;

/// Time variation of the edge model's intensity (p, rate) across snapshots.
struct Modulation {
    enum class Kind { none, sinusoidal, day_night };
    Kind kind = Kind::none;
    double period = 10.0; ///< in snapshots
    double depth = 0.0;   ///< in [0, 1]; 1 silences the low phase entirely
    double phase = 0.0;   ///< in snapshots

    double factor(std::size_t k) const
    {
        constexpr double two_pi = 6.283185307179586476925;
        const double x = (static_cast<double>(k) + phase) / period;
        switch (kind) {
        case Kind::sinusoidal:
            return 1.0 + depth * std::sin(two_pi * x);
        case Kind::day_night:
            return x - std::floor(x) < 0.5 ? 1.0 : 1.0 - depth;
        case Kind::none:
            break;
        }
        return 1.0;
    }
};

struct SynthConfig {
    std::size_t snapshot_count = 50;
    std::size_t node_count = 50;
    double duration_per_snapshot = 5.0;
    double beta = 0.0017;
    double start_time = 0.0;
    EdgeModel edge_model = UniformRandom{};
    Modulation modulation{};
    std::uint64_t seed = 1;

    void validate() const
    {
        if (snapshot_count < 2)
            throw InvalidArgument("snapshot_count must be at least 2");
        if (node_count < 2)
            throw InvalidArgument("node_count must be at least 2");
        if (!(duration_per_snapshot > 0.0))
            throw InvalidArgument("duration_per_snapshot must be positive");
        if (!(beta > 0.0))
            throw InvalidArgument("beta must be positive");
        if (modulation.period <= 0.0 || modulation.depth < 0.0 || modulation.depth > 1.0)
            throw InvalidArgument("modulation needs period > 0 and depth in [0, 1]");
        if (const auto* u = std::get_if<UniformRandom>(&edge_model); u && (u->p < 0.0 || u->p > 1.0))
            throw InvalidArgument("uniform_random p must lie in [0, 1]");
        if (const auto* a = std::get_if<ActivityDriven>(&edge_model);
            a && (a->rate < 0.0 || a->links < 1 || static_cast<std::size_t>(a->links) >= node_count))
            throw InvalidArgument("activity_driven needs rate >= 0 and 1 <= links < node_count");
    }
};

/// Erdos-Gallai test for a simple graph with the given degrees.
inline bool is_graphical(std::vector<int> degrees)
{
    if (std::any_of(degrees.begin(), degrees.end(), [](int d) { return d < 0; }))
        return false;
    const long long total = std::accumulate(degrees.begin(), degrees.end(), 0LL);
    if (total % 2 != 0)
        return false;
    std::sort(degrees.begin(), degrees.end(), std::greater<>());
    const auto n = static_cast<long long>(degrees.size());
    long long prefix = 0;
    for (long long k = 1; k <= n; ++k) {
        prefix += degrees[static_cast<std::size_t>(k - 1)];
        long long tail = 0;
        for (long long i = k; i < n; ++i)
            tail += std::min<long long>(degrees[static_cast<std::size_t>(i)], k);
        if (prefix > k * (k - 1) + tail)
            return false;
    }
    return true;
}

namespace detail {

inline Matrix uniform_random_graph(std::size_t n, double p, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const auto size = static_cast<Eigen::Index>(n);
    Matrix m = Matrix::Zero(size, size);
    for (Eigen::Index i = 0; i < size; ++i)
        for (Eigen::Index j = i + 1; j < size; ++j)
            if (u(rng) < p)
                m(i, j) = m(j, i) = 1.0;
    return m;
}

inline Matrix erased_configuration_graph(const std::vector<int>& degrees, double keep, std::mt19937_64& rng)
{
    const auto size = static_cast<Eigen::Index>(degrees.size());
    std::vector<std::size_t> stubs;
    for (std::size_t i = 0; i < degrees.size(); ++i)
        stubs.insert(stubs.end(), static_cast<std::size_t>(degrees[i]), i);
    std::shuffle(stubs.begin(), stubs.end(), rng);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Matrix m = Matrix::Zero(size, size);
    for (std::size_t k = 0; k + 1 < stubs.size(); k += 2) {
        const auto a = static_cast<Eigen::Index>(stubs[k]);
        const auto b = static_cast<Eigen::Index>(stubs[k + 1]);
        if (a != b && u(rng) < keep)
            m(a, b) = m(b, a) = 1.0;
    }
    return m;
}

inline Matrix activity_driven_graph(std::size_t n, double rate, int links, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> pick(0, n - 2);
    const auto size = static_cast<Eigen::Index>(n);
    Matrix m = Matrix::Zero(size, size);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(u(rng) < rate))
            continue;
        std::vector<std::size_t> chosen;
        while (chosen.size() < static_cast<std::size_t>(links)) {
            std::size_t j = pick(rng);
            if (j >= i)
                ++j;
            if (std::find(chosen.begin(), chosen.end(), j) == chosen.end())
                chosen.push_back(j);
        }
        for (const auto j : chosen)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = 1.0;
    }
    return m;
}

} // namespace detail

/// Binary synthetic snapshots with uniform durations, deterministic in the seed.
/// The modulation factor scales p (uniform_random), the fraction of kept
/// edges (degree_sequence) or the activation rate (activity_driven).
inline SnapshotSequence generate_synthetic(const SynthConfig& cfg)
{
    cfg.validate();
    if (const auto* d = std::get_if<DegreeSequence>(&cfg.edge_model)) {
        if (d->degrees.size() != cfg.node_count)
            throw DataError("degree sequence length must equal node_count");
        if (!is_graphical(d->degrees))
            throw DataError("degree sequence is not graphical");
    }

    std::mt19937_64 rng(cfg.seed);
    std::vector<Snapshot> snaps;
    snaps.reserve(cfg.snapshot_count);
    for (std::size_t k = 0; k < cfg.snapshot_count; ++k) {
        const double factor = std::clamp(cfg.modulation.factor(k), 0.0, 2.0);
        Matrix m = std::visit(
            [&](const auto& model) -> Matrix {
                using T = std::decay_t<decltype(model)>;
                if constexpr (std::is_same_v<T, UniformRandom>)
                    return detail::uniform_random_graph(cfg.node_count, std::clamp(model.p * factor, 0.0, 1.0), rng);
                else if constexpr (std::is_same_v<T, DegreeSequence>)
                    return detail::erased_configuration_graph(model.degrees, std::min(1.0, factor), rng);
                else
                    return detail::activity_driven_graph(cfg.node_count, std::clamp(model.rate * factor, 0.0, 1.0),
                                                         model.links, rng);
            },
            cfg.edge_model);
        snaps.emplace_back(std::move(m), cfg.start_time + cfg.duration_per_snapshot * static_cast<double>(k),
                           cfg.duration_per_snapshot, cfg.beta);
    }
    return SnapshotSequence(std::move(snaps));
}

} // namespace chronoagg
