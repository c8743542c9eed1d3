#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "oel/abstraction.hpp"
#include "oel/agent.hpp"
#include "oel/background.hpp"
#include "oel/config.hpp"
#include "oel/encoder.hpp"
#include "oel/errors.hpp"
#include "oel/explorer.hpp"
#include "oel/image.hpp"
#include "oel/memory.hpp"
#include "oel/planner.hpp"
#include "oel/rng.hpp"
#include "oel/sim.hpp"

namespace oel {

/// Score decay constant: a per-object score of 0.25 at 0.10 m.
inline const double kScoreDecay = std::log(4.0) / 0.10;

using Position3 = std::array<double, 3>;

/// Per-goal score: sum over objects of exp(-c * distance to target).
/// 1.0 per object at distance 0; ranges in (0, n].
inline double goal_score(const std::vector<Position3>& targets,
                         const std::vector<Position3>& finals) {
    if (targets.size() != finals.size() || targets.empty())
        throw ConfigError("target/final object counts differ");
    double score = 0.0;
    for (std::size_t o = 0; o < targets.size(); ++o) {
        const double dx = targets[o][0] - finals[o][0];
        const double dy = targets[o][1] - finals[o][1];
        const double dz = targets[o][2] - finals[o][2];
        score += std::exp(-kScoreDecay * std::sqrt(dx * dx + dy * dy + dz * dz));
    }
    return score;
}

struct GoalSpec {
    Image goal_image;
    std::vector<Position3> target_positions;
    std::vector<ObjectState> initial_layout;
};

struct ScoreReport {
    std::vector<double> per_goal;       // M_g
    std::vector<double> final_distance;  // mean over objects, meters
    std::vector<int> actions_used;       // actions executed per trial
    double mean = 0.0;                   // M
    std::uint64_t config_fingerprint = 0;
    std::uint64_t seed = 0;

    void write_csv(std::ostream& os) const {
        os << "# config " << std::hex << config_fingerprint << std::dec << " seed " << seed
           << "\n";
        os << "goal_id,M_g,distance_m\n";
        for (std::size_t g = 0; g < per_goal.size(); ++g)
            os << g << "," << per_goal[g] << "," << final_distance[g] << "\n";
        os << "# mean_M " << mean << "\n";
    }
};

/// Non-overlapping random placement in the reachable region, one object
/// radius away from every edge.
inline std::vector<ObjectState> random_layout(Rng& rng, const TableGeometry& geom, int count,
                                              double radius) {
    std::vector<ObjectState> layout;
    for (int id = 0; id < count; ++id) {
        for (int attempt = 0;; ++attempt) {
            if (attempt > 1000) throw ConfigError("cannot place objects without overlap");
            Vec2 c{rng.uniform(radius, geom.width - radius),
                   rng.uniform(radius, geom.reachable_depth() - radius)};
            bool clear = true;
            for (const ObjectState& o : layout)
                if (distance(c, o.center) < radius + o.radius + 0.01) clear = false;
            if (clear) {
                layout.push_back({id, c, radius});
                break;
            }
        }
    }
    return layout;
}

/// A goal must ask for a real rearrangement: every object displaced by this
/// much. Grazing or missing perturbation pushes would otherwise produce
/// goals that any idle policy solves perfectly.
inline constexpr double kMinGoalDisplacement = 0.30;

/// One goal: perturb the layout with batches of `perturbations` random
/// pushes in the simulator until every object is displaced by
/// kMinGoalDisplacement, then record where the objects ended up. Every
/// generated goal is therefore physically reachable on the plane. Random
/// batches alone cannot reliably displace every object of a multi-object
/// layout, so after 100 batches the remaining pushes are aimed at whichever
/// object has not yet moved far enough.
inline GoalSpec make_goal(Rng& rng, const Simulator& sim, ExplorationMode mode,
                          const std::vector<ObjectState>& layout, int perturbations) {
    const TableGeometry& geom = sim.geometry();
    WorldState state = sim.reset(layout);
    for (int round = 0; perturbations > 0 && round < 600; ++round) {
        if (round < 100) {
            for (int i = 0; i < perturbations; ++i)
                state = sim.apply_action(state, propose_action(rng, mode, geom));
        } else {
            int lagging = 0;
            double lag = 1e9;
            for (std::size_t i = 0; i < layout.size(); ++i) {
                const double d = distance(state.objects[i].center, layout[i].center);
                if (d < lag) {
                    lag = d;
                    lagging = static_cast<int>(i);
                }
            }
            constexpr double kPi = 3.14159265358979323846;
            const Vec2 c = state.objects[lagging].center;
            const Vec2 away = c - layout[lagging].center;
            // Push outward from where the object started (within +/-90
            // degrees) so its displacement grows instead of random-walking.
            const double base_phi =
                away.norm() > 1e-9 ? std::atan2(away.y, away.x) : rng.uniform(0.0, 2.0 * kPi);
            const double phi = base_phi + rng.uniform(-0.5 * kPi, 0.5 * kPi);
            const Vec2 dir{std::cos(phi), std::sin(phi)};
            // Both endpoints clamp into reach; a start clamped onto the
            // object still pushes because contact resolution projects out
            // of overlap.
            Vec2 start = c - 0.08 * dir;
            Vec2 end = c + 0.12 * dir;
            end.x = std::clamp(end.x, 0.0, geom.width);
            end.y = std::clamp(end.y, 0.0, geom.reachable_depth());
            start.x = std::clamp(start.x, 0.0, geom.width);
            start.y = std::clamp(start.y, 0.0, geom.reachable_depth());
            state = sim.apply_action(state, PushAction{{start, end}});
        }
        double moved = kMinGoalDisplacement;
        for (std::size_t i = 0; i < layout.size(); ++i)
            moved = std::min(moved, distance(state.objects[i].center, layout[i].center));
        if (moved >= kMinGoalDisplacement) break;
    }
    GoalSpec goal;
    goal.initial_layout = layout;
    goal.goal_image = sim.render(state);
    for (const ObjectState& o : state.objects)
        goal.target_positions.push_back({o.center.x, o.center.y, 0.0});
    return goal;
}

/// G goals, each with a freshly randomized initial layout and 1..5
/// perturbation pushes.
inline std::vector<GoalSpec> generate_goals(Rng& rng, int count, const Simulator& sim,
                                            ExplorationMode mode, int objects,
                                            double object_radius) {
    if (count < 1) throw ConfigError("goal count must be >= 1");
    std::vector<GoalSpec> goals;
    goals.reserve(count);
    for (int g = 0; g < count; ++g) {
        const auto layout = random_layout(rng, sim.geometry(), objects, object_radius);
        goals.push_back(make_goal(rng, sim, mode, layout, rng.uniform_int(1, 5)));
    }
    return goals;
}

struct IntrinsicArtifacts {
    TripletStore store;
    BackgroundModel background;
    Encoder encoder;
    ThresholdTable table;
};

/// The whole intrinsic phase: N random actions recorded as triplets with the
/// background model updated on every pre/post image, then encoder fitting on
/// all foreground images, latent caching and threshold building.
inline IntrinsicArtifacts run_intrinsic(const RunConfig& cfg) {
    cfg.validate();
    const Simulator sim(cfg.geometry, cfg.image_width, cfg.image_height);
    Rng rng(cfg.seed);

    // The model must be usable on whatever this run produced, so the burn-in
    // never exceeds the number of frames the run can deliver.
    const int burn_in = std::min(cfg.bg_burn_in, 2 * cfg.intrinsic_actions);
    BackgroundModel background(cfg.image_width, cfg.image_height, cfg.bg_alpha, cfg.bg_k, 1e-6f,
                               burn_in);

    TripletStore store;
    Agent agent = Agent::intrinsic(&rng, cfg.mode, cfg.geometry, &store);
    WorldState state = sim.reset(random_layout(rng, cfg.geometry, cfg.objects, cfg.object_radius));

    for (int i = 0; i < cfg.intrinsic_actions; ++i) {
        // Episodic layout shuffles: random pushes alone leave objects parked
        // against walls most of the time, which starves the encoder and the
        // experience graph of interior coverage.
        if (i > 0 && i % cfg.episode_actions == 0)
            state = sim.reset(random_layout(rng, cfg.geometry, cfg.objects, cfg.object_radius));
        const Image pre = sim.render(state);
        background.update(pre);
        const auto action = agent.step(pre, nullptr, 0);
        state = sim.apply_action(state, *action);
        const Image post = sim.render(state);
        background.update(post);
        agent.finish(post);
    }

    std::vector<Image> foregrounds;
    foregrounds.reserve(store.size() * 2);
    for (const Triplet& t : store.triplets()) {
        foregrounds.push_back(background.foreground(t.pre));
        foregrounds.push_back(background.foreground(t.post));
    }
    Encoder encoder = fit_encoder(foregrounds, cfg.latents);
    store.encode_all(background, encoder);
    ThresholdTable table = ThresholdTable::build(store, cfg.levels);
    return {std::move(store), std::move(background), std::move(encoder), std::move(table)};
}

enum class Policy { Trained, Random, StayStill };

/// The extrinsic phase: one 10000-timestep trial per goal, scored on the
/// final object positions. Random and stay-still reference policies share
/// the same trial mechanics.
inline ScoreReport run_extrinsic(const IntrinsicArtifacts& artifacts,
                                 const std::vector<GoalSpec>& goals, const RunConfig& cfg,
                                 Policy policy = Policy::Trained) {
    constexpr std::int64_t kTrialBudget = 10000;
    const Simulator sim(cfg.geometry, cfg.image_width, cfg.image_height);
    Rng policy_rng(cfg.seed ^ 0x517cc1b727220a95ull);

    ScoreReport report;
    report.config_fingerprint = cfg.fingerprint();
    report.seed = cfg.seed;
    Agent agent = Agent::extrinsic(&artifacts.background, &artifacts.encoder, &artifacts.store,
                                   &artifacts.table);

    for (const GoalSpec& goal : goals) {
        WorldState state = sim.reset(goal.initial_layout);
        agent.reset_trial();
        int actions_this_trial = 0;
        std::int64_t remaining = kTrialBudget;
        while (remaining >= PushAction::kDurationTimesteps) {
            std::optional<PushAction> action;
            switch (policy) {
                case Policy::Trained:
                    action = agent.step(sim.render(state), &goal.goal_image, remaining);
                    break;
                case Policy::Random:
                    action = propose_action(policy_rng, cfg.mode, cfg.geometry);
                    break;
                case Policy::StayStill:
                    break;
            }
            if (action) {
                state = sim.apply_action(state, *action);
                ++actions_this_trial;
                if (policy == Policy::Trained) agent.finish(sim.render(state));
            }
            remaining -= PushAction::kDurationTimesteps;
            if (policy == Policy::Trained && agent.waiting()) break;
            if (policy == Policy::StayStill) break;
        }
        std::vector<Position3> finals;
        double dist_sum = 0.0;
        for (std::size_t o = 0; o < state.objects.size(); ++o) {
            const Vec2 c = state.objects[o].center;
            finals.push_back({c.x, c.y, 0.0});
            const double dx = goal.target_positions[o][0] - c.x;
            const double dy = goal.target_positions[o][1] - c.y;
            dist_sum += std::sqrt(dx * dx + dy * dy);
        }
        report.per_goal.push_back(goal_score(goal.target_positions, finals));
        report.final_distance.push_back(dist_sum / static_cast<double>(state.objects.size()));
        report.actions_used.push_back(actions_this_trial);
    }
    double total = 0.0;
    for (double m : report.per_goal) total += m;
    report.mean = total / static_cast<double>(report.per_goal.size());
    return report;
}

}  // namespace oel
