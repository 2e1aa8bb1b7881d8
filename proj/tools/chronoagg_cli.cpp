// chronoagg: profile, compress and validate snapshot aggregation of contact
// sequences.
//
//   chronoagg synth    --config cfg.json --out dir
//   chronoagg profile  --config cfg.json --input contacts.txt --bins 200
//   chronoagg compress --config cfg.json --input snapshots.json --target 6
//   chronoagg validate --config cfg.json --input snapshots.json --target 6
//
// Exit codes: 0 success, 1 usage or config error, 2 data error, 3 spreading
// scale out of range.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "chronoagg/chronoagg.hpp"
#include "chronoagg/run_config.hpp"

namespace fs = std::filesystem;
using namespace chronoagg;

namespace {

enum ExitCode { exit_ok = 0, exit_usage = 1, exit_data = 2, exit_range = 3 };

struct Overrides {
    std::string config_path;
    std::optional<double> beta;
    std::optional<std::size_t> target;
    std::optional<double> resolution;
    std::optional<std::size_t> bins;
    std::optional<std::string> mode;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::string> input;
    std::vector<std::size_t> levels;
    std::vector<std::size_t> sweep;
};

RunConfig load_config(const Overrides& o)
{
    RunConfig cfg;
    if (!o.config_path.empty()) {
        std::ifstream in(o.config_path);
        if (!in)
            throw InvalidArgument("cannot open config file " + o.config_path);
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw InvalidArgument("config file " + o.config_path + " is not valid JSON: " + e.what());
        }
        cfg = run_config_from_json(j);
    }
    if (o.beta)
        cfg.beta = *o.beta;
    if (o.target)
        cfg.target = *o.target;
    if (o.resolution) {
        cfg.resolution = o.resolution;
        cfg.bins.reset();
    }
    if (o.bins) {
        cfg.bins = o.bins;
        cfg.resolution.reset();
    }
    if (o.mode)
        cfg.mode = parse_bin_mode(*o.mode);
    if (o.seed)
        cfg.seed = *o.seed;
    if (o.out)
        cfg.output_dir = *o.out;
    if (o.input)
        cfg.input = *o.input;
    if (!o.levels.empty())
        cfg.levels = o.levels;
    if (!o.sweep.empty())
        cfg.sweep = o.sweep;
    cfg.synth.seed = cfg.seed;
    cfg.integrator.validate();
    return cfg;
}

void require_beta(const RunConfig& cfg)
{
    if (!(cfg.beta > 0.0))
        throw InvalidArgument("beta must be positive (set \"beta\" in the config or pass --beta)");
}

SnapshotSequence load_sequence(const RunConfig& cfg)
{
    require_beta(cfg);
    if (cfg.input.empty())
        throw InvalidArgument("no input file given (--input)");
    std::ifstream in(cfg.input);
    if (!in)
        throw DataError("cannot open input file " + cfg.input);

    if (fs::path(cfg.input).extension() == ".json") {
        nlohmann::json doc;
        try {
            in >> doc;
        } catch (const nlohmann::json::exception& e) {
            throw DataError("snapshot file " + cfg.input + " is not valid JSON: " + e.what());
        }
        SnapshotSequence seq = snapshots_from_json(doc, cfg.beta);
        if (cfg.bins && *cfg.bins < seq.size())
            return pre_aggregate(seq, *cfg.bins);
        return seq;
    }

    const ContactData data = parse_contacts(in);
    if (data.self_contacts_dropped > 0)
        std::cerr << "warning: dropped " << data.self_contacts_dropped << " self-contacts\n";
    if (cfg.bins)
        return bin_contacts_count(data, *cfg.bins, cfg.beta, cfg.mode);
    if (cfg.resolution)
        return bin_contacts(data, *cfg.resolution, cfg.beta, cfg.mode);
    throw InvalidArgument("contact input needs --resolution or --bins");
}

/// Reports the spreading-scale range and stops on values the third-order
/// expansion cannot handle.
TauRange check_tau(const TauRange& tau)
{
    std::cout << "tau_range " << detail::format_double(tau.min) << ' ' << detail::format_double(tau.max) << '\n';
    switch (classify_tau(tau)) {
    case TauStatus::too_large:
        throw RangeError("tau_max = " + detail::format_double(tau.max) + " exceeds " +
                         detail::format_double(tau_error_limit) + "; reduce beta or the resolution");
    case TauStatus::warning:
        std::cerr << "warning: tau_max = " << detail::format_double(tau.max) << " exceeds "
                  << detail::format_double(tau_warning_limit) << "; the third-order error estimate may be unreliable\n";
        break;
    case TauStatus::ok:
        break;
    }
    return tau;
}

TauRange merge_tau(TauRange a, const TauRange& b)
{
    if (a.max == 0.0)
        return b;
    if (b.max == 0.0)
        return a;
    return TauRange{std::min(a.min, b.min), std::max(a.max, b.max)};
}

fs::path prepare_output(const RunConfig& cfg)
{
    fs::path dir(cfg.output_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw DataError("cannot create output directory " + dir.string() + ": " + ec.message());
    return dir;
}

std::ofstream open_output(const fs::path& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw DataError("cannot write " + path.string());
    return out;
}

int cmd_profile(const RunConfig& cfg)
{
    const SnapshotSequence seq = load_sequence(cfg);
    std::vector<std::size_t> levels = cfg.levels;
    if (levels.empty())
        levels.push_back(seq.size());

    std::vector<SnapshotSequence> staged;
    TauRange tau{};
    for (const auto level : levels) {
        if (level < 2 || level > seq.size())
            throw InvalidArgument("profile level " + std::to_string(level) + " must lie in [2, " +
                                  std::to_string(seq.size()) + "]");
        staged.push_back(level == seq.size() ? seq : pre_aggregate(seq, level));
        tau = merge_tau(tau, tau_range(staged.back()));
    }
    check_tau(tau);

    const fs::path dir = prepare_output(cfg);
    for (const auto& level_seq : staged) {
        const ErrorProfile profile = error_profile(level_seq);
        const std::string name =
            staged.size() == 1 ? "profile.csv" : "profile_" + std::to_string(level_seq.size()) + ".csv";
        auto out = open_output(dir / name);
        write_tau_header(out, tau_range(level_seq));
        write_profile_csv(out, level_seq, profile);
        std::cout << "wrote " << (dir / name).string() << '\n';
    }
    return exit_ok;
}

int cmd_compress(const RunConfig& cfg)
{
    const SnapshotSequence seq = load_sequence(cfg);
    if (cfg.target < 1 || cfg.target > seq.size())
        throw InvalidArgument("target " + std::to_string(cfg.target) + " must lie in [1, " +
                              std::to_string(seq.size()) + "]");
    const TauRange tau = check_tau(tau_range(seq));

    CompressionResult result = cfg.target == seq.size()
                                   ? CompressionResult{seq, seq.start_times(), {}, seq.size()}
                                   : greedy_compress(seq, cfg.target);

    const fs::path dir = prepare_output(cfg);
    open_output(dir / "compressed.json") << snapshots_to_json(result.compressed).dump() << '\n';
    {
        auto out = open_output(dir / "merge_log.csv");
        write_tau_header(out, tau);
        write_merge_log_csv(out, result.merge_log);
    }
    {
        auto out = open_output(dir / "boundaries.csv");
        write_tau_header(out, tau);
        write_boundaries_csv(out, result.boundaries);
    }
    double xi_max = 0.0;
    for (const auto& r : result.merge_log)
        xi_max = std::max(xi_max, r.xi);
    const nlohmann::json report{
        {"tau_range", {{"min", tau.min}, {"max", tau.max}}},
        {"original_count", seq.size()},
        {"target_count", result.final_count},
        {"boundaries", result.boundaries},
        {"merge_log_summary", {{"steps", result.merge_log.size()}, {"xi_max", xi_max}}},
    };
    open_output(dir / "report.json") << report.dump(2) << '\n';
    std::cout << "compressed " << seq.size() << " -> " << result.final_count << " snapshots into "
              << dir.string() << '\n';
    return exit_ok;
}

int cmd_validate(const RunConfig& cfg)
{
    const SnapshotSequence seq = load_sequence(cfg);
    if (cfg.target < 1 || cfg.target > seq.size())
        throw InvalidArgument("target " + std::to_string(cfg.target) + " must lie in [1, " +
                              std::to_string(seq.size()) + "]");
    const TauRange tau = check_tau(tau_range(seq));

    const ValidationReport report = compare_regimes(seq, cfg.target, cfg.integrator);
    const fs::path dir = prepare_output(cfg);
    nlohmann::json doc = report_to_json(report, tau);

    if (!cfg.sweep.empty()) {
        nlohmann::json sweep = nlohmann::json::array();
        for (const auto& entry : compression_sweep(seq, cfg.sweep, cfg.integrator)) {
            sweep.push_back({{"target_count", entry.report.target_count},
                             {"d_alg", entry.report.d_alg},
                             {"d_even", entry.report.d_even},
                             {"relative_error_vs_full_aggregation", entry.report.relative_error_vs_full_aggregation},
                             {"relative_even_vs_full_aggregation", entry.report.relative_even_vs_full_aggregation},
                             {"matched_count", entry.matched_count},
                             {"further_compression_factor", entry.further_compression_factor}});
        }
        doc["sweep"] = std::move(sweep);
    }

    open_output(dir / "report.json") << doc.dump(2) << '\n';
    {
        auto out = open_output(dir / "curves.csv");
        write_tau_header(out, tau);
        write_curves_csv(out, report);
    }
    std::cout << "d_alg " << detail::format_double(report.d_alg) << " d_even " << detail::format_double(report.d_even)
              << '\n';
    return exit_ok;
}

int cmd_synth(RunConfig cfg)
{
    if (cfg.beta > 0.0)
        cfg.synth.beta = cfg.beta;
    const SnapshotSequence seq = generate_synthetic(cfg.synth);
    const fs::path dir = prepare_output(cfg);

    if (cfg.synth_format == SynthFormat::snapshots) {
        open_output(dir / "synthetic.json") << snapshots_to_json(seq).dump() << '\n';
        std::cout << "wrote " << (dir / "synthetic.json").string() << '\n';
        return exit_ok;
    }

    // One event per unit of weight, stamped at the snapshot start time.
    ContactData data;
    data.labels = seq.node_labels();
    for (const auto& s : seq)
        for (Eigen::Index i = 0; i < s.node_count(); ++i)
            for (Eigen::Index j = i + 1; j < s.node_count(); ++j)
                for (long c = 0; c < std::lround(s.matrix()(i, j)); ++c)
                    data.events.push_back(
                        {s.start_time(), static_cast<std::size_t>(i), static_cast<std::size_t>(j)});
    auto out = open_output(dir / "synthetic.txt");
    out << "# time id_a id_b\n";
    write_contacts(out, data);
    std::cout << "wrote " << (dir / "synthetic.txt").string() << '\n';
    return exit_ok;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Aggregation-error profiling and greedy compression of temporal contact networks"};
    app.require_subcommand(1);

    Overrides o;
    auto add_common = [&o](CLI::App* cmd) {
        cmd->add_option("-c,--config", o.config_path, "JSON run configuration");
        cmd->add_option("--beta", o.beta, "transmission rate per contact weight per second");
        cmd->add_option("--target", o.target, "number of snapshots to compress to");
        cmd->add_option("--resolution", o.resolution, "bin width in seconds for contact input");
        cmd->add_option("--bins", o.bins, "bin count for contact input, or pre-aggregation count for snapshot input");
        cmd->add_option("--mode", o.mode, "weighted or binary binning");
        cmd->add_option("--seed", o.seed, "random seed");
        cmd->add_option("-o,--out", o.out, "output directory");
        cmd->add_option("-i,--input", o.input, "contact file or snapshot JSON file");
    };

    auto* profile = app.add_subcommand("profile", "write the adjacent-pair error profile");
    add_common(profile);
    profile->add_option("--levels", o.levels, "pre-aggregation levels (snapshot counts)");
    auto* compress = app.add_subcommand("compress", "greedily compress to a target snapshot count");
    add_common(compress);
    auto* validate = app.add_subcommand("validate", "compare greedy and even compression against full dynamics");
    add_common(validate);
    validate->add_option("--sweep", o.sweep, "additional targets for a compression sweep");
    auto* synth = app.add_subcommand("synth", "generate a synthetic snapshot sequence");
    add_common(synth);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        const RunConfig cfg = load_config(o);
        if (profile->parsed())
            return cmd_profile(cfg);
        if (compress->parsed())
            return cmd_compress(cfg);
        if (validate->parsed())
            return cmd_validate(cfg);
        return cmd_synth(cfg);
    } catch (const InvalidArgument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const RangeError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_range;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_data;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_data;
    }
}
