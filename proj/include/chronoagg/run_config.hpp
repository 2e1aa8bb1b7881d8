#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "chronoagg/diffusion.hpp"
#include "chronoagg/error.hpp"
#include "chronoagg/ingest.hpp"
#include "chronoagg/snapshot.hpp"

namespace chronoagg {

/// Spreading-scale limits checked before any heavy computation.
inline constexpr double tau_warning_limit = 0.5;
inline constexpr double tau_error_limit = 1.0;

enum class SynthFormat { snapshots, contacts };

/// Settings shared by every CLI subcommand. Loaded from a JSON document and
/// then overridden by command-line flags.
struct RunConfig {
    double beta = 0.0;
    std::optional<double> resolution; ///< bin width in seconds
    std::optional<std::size_t> bins;  ///< bin count, alternative to resolution
    std::size_t target = 0;
    BinMode mode = BinMode::weighted;
    IntegratorConfig integrator{};
    std::uint64_t seed = 1;
    std::string output_dir = ".";
    std::string input;
    std::vector<std::size_t> levels; ///< pre-aggregation levels for profiles
    std::vector<std::size_t> sweep;  ///< extra targets for validation sweeps
    SynthConfig synth{};
    SynthFormat synth_format = SynthFormat::snapshots;
};

namespace detail {

inline Modulation::Kind parse_modulation_kind(const std::string& s)
{
    if (s == "none")
        return Modulation::Kind::none;
    if (s == "sinusoidal")
        return Modulation::Kind::sinusoidal;
    if (s == "day_night")
        return Modulation::Kind::day_night;
    throw InvalidArgument("unknown modulation kind '" + s + "'");
}

inline EdgeModel parse_edge_model(const nlohmann::json& j)
{
    const std::string type = j.value("type", "uniform_random");
    if (type == "uniform_random")
        return UniformRandom{j.value("p", 0.1)};
    if (type == "degree_sequence")
        return DegreeSequence{j.at("degrees").get<std::vector<int>>()};
    if (type == "activity_driven")
        return ActivityDriven{j.value("rate", 0.1), j.value("links", 1)};
    throw InvalidArgument("unknown edge model '" + type + "'");
}

} // namespace detail

inline BinMode parse_bin_mode(const std::string& s)
{
    if (s == "weighted")
        return BinMode::weighted;
    if (s == "binary")
        return BinMode::binary;
    throw InvalidArgument("mode must be 'weighted' or 'binary', got '" + s + "'");
}

/// Reads a RunConfig from JSON. Unknown keys are ignored.
inline RunConfig run_config_from_json(const nlohmann::json& j)
{
    RunConfig cfg;
    try {
        cfg.beta = j.value("beta", 0.0);
        if (j.contains("resolution"))
            cfg.resolution = j.at("resolution").get<double>();
        if (j.contains("bins"))
            cfg.bins = j.at("bins").get<std::size_t>();
        cfg.target = j.value("target", std::size_t{0});
        cfg.mode = parse_bin_mode(j.value("mode", "weighted"));
        cfg.seed = j.value("seed", std::uint64_t{1});
        cfg.output_dir = j.value("output_dir", ".");
        cfg.input = j.value("input", "");
        cfg.levels = j.value("levels", std::vector<std::size_t>{});
        cfg.sweep = j.value("sweep", std::vector<std::size_t>{});
        if (j.contains("integrator")) {
            const auto& ij = j.at("integrator");
            cfg.integrator.step_fraction = ij.value("step_fraction", cfg.integrator.step_fraction);
            cfg.integrator.sample_count = ij.value("sample_count", cfg.integrator.sample_count);
        }
        if (j.contains("synth")) {
            const auto& sj = j.at("synth");
            auto& s = cfg.synth;
            s.snapshot_count = sj.value("snapshot_count", s.snapshot_count);
            s.node_count = sj.value("node_count", s.node_count);
            s.duration_per_snapshot = sj.value("duration_per_snapshot", s.duration_per_snapshot);
            s.start_time = sj.value("start_time", s.start_time);
            if (sj.contains("edge_model"))
                s.edge_model = detail::parse_edge_model(sj.at("edge_model"));
            if (sj.contains("modulation")) {
                const auto& mj = sj.at("modulation");
                s.modulation.kind = detail::parse_modulation_kind(mj.value("kind", "none"));
                s.modulation.period = mj.value("period", s.modulation.period);
                s.modulation.depth = mj.value("depth", s.modulation.depth);
                s.modulation.phase = mj.value("phase", s.modulation.phase);
            }
            const std::string format = sj.value("format", "snapshots");
            if (format == "snapshots")
                cfg.synth_format = SynthFormat::snapshots;
            else if (format == "contacts")
                cfg.synth_format = SynthFormat::contacts;
            else
                throw InvalidArgument("synth format must be 'snapshots' or 'contacts'");
        }
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("invalid config: ") + e.what());
    }
    return cfg;
}

/// Outcome of the spreading-scale check.
enum class TauStatus { ok, warning, too_large };

inline TauStatus classify_tau(const TauRange& tau)
{
    if (tau.max > tau_error_limit)
        return TauStatus::too_large;
    if (tau.max > tau_warning_limit)
        return TauStatus::warning;
    return TauStatus::ok;
}

} // namespace chronoagg
