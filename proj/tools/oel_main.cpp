// Command-line front end: reproducible intrinsic/extrinsic experiments,
// score-vs-intrinsic-length curves and planner diagnostics.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "oel/eval.hpp"

namespace fs = std::filesystem;
using namespace oel;

namespace {

struct Flags {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> actions;
    std::optional<std::string> mode;
    std::optional<int> objects;
    std::optional<int> latents;
    std::optional<int> levels;
    std::optional<int> goals;
    std::optional<std::string> out;
};

void add_common_flags(CLI::App* cmd, Flags& f) {
    cmd->add_option("--config", f.config_path, "key=value config file");
    cmd->add_option("--seed", f.seed, "run seed");
    cmd->add_option("--actions", f.actions, "intrinsic action count");
    cmd->add_option("--mode", f.mode, "round1 or round2");
    cmd->add_option("--objects", f.objects, "object count (1..3)");
    cmd->add_option("--latents", f.latents, "latent dimension");
    cmd->add_option("--levels", f.levels, "abstraction level count");
    cmd->add_option("--goals", f.goals, "extrinsic goal count");
    cmd->add_option("--out", f.out, "output directory");
}

RunConfig resolve_config(const Flags& f) {
    RunConfig cfg = f.config_path.empty() ? RunConfig{} : RunConfig::from_file(f.config_path);
    if (f.seed) cfg.seed = *f.seed;
    if (f.actions) cfg.intrinsic_actions = *f.actions;
    if (f.mode) cfg.set("mode", *f.mode);
    if (f.objects) cfg.objects = *f.objects;
    if (f.latents) cfg.latents = *f.latents;
    if (f.levels) cfg.levels = *f.levels;
    if (f.goals) cfg.goals = *f.goals;
    if (f.out) cfg.out_dir = *f.out;
    cfg.validate();
    return cfg;
}

std::string artifact_path(const RunConfig& cfg, const char* name) {
    return (fs::path(cfg.out_dir) / name).string();
}

void save_artifacts(const RunConfig& cfg, const IntrinsicArtifacts& artifacts) {
    fs::create_directories(cfg.out_dir);
    artifacts.store.save_file(artifact_path(cfg, "triplets.oelt"));
    artifacts.encoder.save_file(artifact_path(cfg, "encoder.oele"));
    artifacts.background.save_file(artifact_path(cfg, "background.oelb"));
    std::ofstream csv(artifact_path(cfg, "thresholds.csv"));
    if (!csv) throw IoError("cannot open thresholds.csv");
    csv << "# config " << std::hex << cfg.fingerprint() << std::dec << " seed " << cfg.seed
        << "\n";
    artifacts.table.save_csv(csv);
}

IntrinsicArtifacts load_artifacts(const RunConfig& cfg) {
    IntrinsicArtifacts a;
    a.store = TripletStore::load_file(artifact_path(cfg, "triplets.oelt"));
    a.encoder = Encoder::load_file(artifact_path(cfg, "encoder.oele"));
    a.background = BackgroundModel::load_file(artifact_path(cfg, "background.oelb"));
    a.table = ThresholdTable::build(a.store, cfg.levels);
    return a;
}

int cmd_intrinsic(const Flags& f) {
    const RunConfig cfg = resolve_config(f);
    const IntrinsicArtifacts artifacts = run_intrinsic(cfg);
    save_artifacts(cfg, artifacts);
    std::cout << "intrinsic done: " << artifacts.store.size() << " triplets -> " << cfg.out_dir
              << "\n";
    return 0;
}

int cmd_extrinsic(const Flags& f) {
    const RunConfig cfg = resolve_config(f);
    const IntrinsicArtifacts artifacts = load_artifacts(cfg);
    const Simulator sim(cfg.geometry, cfg.image_width, cfg.image_height);
    Rng goal_rng(cfg.seed ^ 0x2545f4914f6cdd1dull);
    const auto goals =
        generate_goals(goal_rng, cfg.goals, sim, cfg.mode, cfg.objects, cfg.object_radius);
    const ScoreReport report = run_extrinsic(artifacts, goals, cfg);
    std::ofstream csv(artifact_path(cfg, "score.csv"));
    if (!csv) throw IoError("cannot open score.csv");
    report.write_csv(csv);
    std::cout << "M " << report.mean << "\n";
    return 0;
}

int cmd_curve(const Flags& f, const std::string& grid_arg, int seed_count) {
    RunConfig cfg = resolve_config(f);
    std::vector<int> grid;
    std::stringstream ss(grid_arg);
    std::string item;
    while (std::getline(ss, item, ',')) grid.push_back(std::stoi(item));
    if (grid.empty()) throw ConfigError("empty --grid");
    if (seed_count < 1) throw ConfigError("--seeds must be >= 1");

    fs::create_directories(cfg.out_dir);
    std::ofstream csv(artifact_path(cfg, "curve.csv"));
    if (!csv) throw IoError("cannot open curve.csv");
    csv << "# config " << std::hex << cfg.fingerprint() << std::dec << " seed " << cfg.seed
        << "\n";
    csv << "actions,seed,score\n";
    for (int n : grid) {
        for (int s = 0; s < seed_count; ++s) {
            RunConfig point = cfg;
            point.intrinsic_actions = n;
            point.seed = cfg.seed + static_cast<std::uint64_t>(s);
            const IntrinsicArtifacts artifacts = run_intrinsic(point);
            const Simulator sim(point.geometry, point.image_width, point.image_height);
            Rng goal_rng(point.seed ^ 0x2545f4914f6cdd1dull);
            const auto goals = generate_goals(goal_rng, point.goals, sim, point.mode,
                                              point.objects, point.object_radius);
            const ScoreReport report = run_extrinsic(artifacts, goals, point);
            csv << n << "," << point.seed << "," << report.mean << "\n";
            std::cout << "actions " << n << " seed " << point.seed << " M " << report.mean
                      << "\n";
        }
    }
    return 0;
}

int cmd_diag(const Flags& f, int sample_count) {
    const RunConfig cfg = resolve_config(f);
    const IntrinsicArtifacts artifacts = load_artifacts(cfg);
    std::vector<Latent> samples;
    for (std::size_t t = 0; t < artifacts.store.size() && samples.size() < static_cast<std::size_t>(sample_count);
         ++t)
        samples.push_back(*artifacts.store[t].pre_latent);
    const SearchDiagnostics diag = diagnostics(artifacts.store, artifacts.table, samples);
    std::ofstream csv(artifact_path(cfg, "diagnostics.csv"));
    if (!csv) throw IoError("cannot open diagnostics.csv");
    csv << "# config " << std::hex << cfg.fingerprint() << std::dec << " seed " << cfg.seed
        << "\n";
    csv << "level,branching,distinct_states\n";
    for (std::size_t i = 0; i < diag.branching.size(); ++i)
        csv << (i + 1) << "," << diag.branching[i] << "," << diag.distinct_states[i] << "\n";
    std::cout << "diagnostics for " << diag.branching.size() << " levels -> " << cfg.out_dir
              << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Open-ended push-world baseline: intrinsic exploration, latent abstraction "
                 "and A* planning over experienced transitions"};
    app.require_subcommand(1);

    Flags flags;
    std::string grid = "200,1000,5000";
    int seed_count = 3;
    int sample_count = 50;

    auto* intrinsic = app.add_subcommand("intrinsic", "run the intrinsic phase, save artifacts");
    add_common_flags(intrinsic, flags);
    auto* extrinsic = app.add_subcommand("extrinsic", "score saved artifacts on fresh goals");
    add_common_flags(extrinsic, flags);
    auto* curve = app.add_subcommand("curve", "score versus intrinsic-phase length");
    add_common_flags(curve, flags);
    curve->add_option("--grid", grid, "comma-separated intrinsic action counts");
    curve->add_option("--seeds", seed_count, "seeds per grid point");
    auto* diag = app.add_subcommand("diag", "planner branching/state-count diagnostics");
    add_common_flags(diag, flags);
    diag->add_option("--samples", sample_count, "query states sampled from the store");

    try {
        app.parse(argc, argv);
        if (intrinsic->parsed()) return cmd_intrinsic(flags);
        if (extrinsic->parsed()) return cmd_extrinsic(flags);
        if (curve->parsed()) return cmd_curve(flags, grid, seed_count);
        if (diag->parsed()) return cmd_diag(flags, sample_count);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
