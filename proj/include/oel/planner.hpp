#pragma once

#include <algorithm>
#include <cmath>
#include <cstring>
#include <functional>
#include <optional>
#include <queue>
#include <string>
#include <unordered_map>
#include <vector>

#include "oel/abstraction.hpp"
#include "oel/errors.hpp"
#include "oel/geometry.hpp"
#include "oel/image.hpp"
#include "oel/memory.hpp"

namespace oel {

struct Plan {
    std::vector<PushAction> actions;
    int level = 0;
    std::vector<Latent> predicted_states;  // start state plus one post state per action
};

struct Successor {
    std::size_t triplet_index;
    const PushAction* action;
    const Latent* post_latent;
};

struct SearchDiagnostics {
    std::vector<double> branching;           // per level, mean successor count
    std::vector<std::size_t> distinct_states;  // per level, greedy dedup count
    std::size_t nodes_expanded = 0;
};

inline double manhattan(const Latent& a, const Latent& b) {
    double d = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) d += std::abs(a[j] - b[j]);
    return d;
}

using Heuristic = std::function<double(const Latent&, const Latent&)>;

/// Actions applicable in `state`: every triplet whose pre state is
/// level-equivalent to it, in store order. The experienced post state stands
/// in for the predicted outcome.
inline std::vector<Successor> successors(const Latent& state, int level, const TripletStore& store,
                                         const ThresholdTable& table) {
    std::vector<Successor> out;
    for (std::size_t t = 0; t < store.size(); ++t) {
        const Triplet& trip = store[t];
        if (table.same_state(state, *trip.pre_latent, level))
            out.push_back({t, &trip.action, &*trip.post_latent});
    }
    return out;
}

/// Depth limit implied by the remaining trial budget: one action per 1000
/// timesteps.
inline int compute_max_depth(std::int64_t remaining_timesteps) {
    return static_cast<int>(remaining_timesteps / PushAction::kDurationTimesteps);
}

namespace detail {

inline std::string latent_key(const Latent& v) {
    return std::string(reinterpret_cast<const char*>(v.data()), v.size() * sizeof(double));
}

/// A* at one abstraction level. Unit action cost, goal test via same_state,
/// FIFO tie-breaking on equal f, node depth capped at max_depth. Duplicate
/// pruning keys on exact latent equality and re-opens states reached at a
/// strictly smaller depth, so the depth cap never hides a reachable goal.
inline std::optional<Plan> astar_at_level(const Latent& start, const Latent& goal, int level,
                                          const TripletStore& store, const ThresholdTable& table,
                                          int max_depth, const Heuristic& h) {
    struct Node {
        Latent state;
        int depth;
        int parent;
        std::size_t via_triplet;
    };
    struct Entry {
        double f;
        std::uint64_t seq;
        int node;
        bool operator>(const Entry& o) const {
            return f != o.f ? f > o.f : seq > o.seq;
        }
    };

    std::vector<Node> nodes;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> open;
    std::unordered_map<std::string, int> best_depth;
    std::uint64_t seq = 0;

    nodes.push_back({start, 0, -1, 0});
    best_depth[latent_key(start)] = 0;
    open.push({h(start, goal), seq++, 0});

    while (!open.empty()) {
        const Entry e = open.top();
        open.pop();
        const Node node = nodes[e.node];
        auto it = best_depth.find(latent_key(node.state));
        if (it != best_depth.end() && node.depth > it->second) continue;  // stale

        if (table.same_state(node.state, goal, level)) {
            Plan plan;
            plan.level = level;
            std::vector<int> chain;
            for (int i = e.node; i != -1; i = nodes[i].parent) chain.push_back(i);
            std::reverse(chain.begin(), chain.end());
            plan.predicted_states.push_back(nodes[chain.front()].state);
            for (std::size_t i = 1; i < chain.size(); ++i) {
                plan.actions.push_back(store[nodes[chain[i]].via_triplet].action);
                plan.predicted_states.push_back(nodes[chain[i]].state);
            }
            return plan;
        }
        if (node.depth >= max_depth) continue;

        for (const Successor& s : successors(node.state, level, store, table)) {
            const int nd = node.depth + 1;
            const std::string key = latent_key(*s.post_latent);
            auto bit = best_depth.find(key);
            if (bit != best_depth.end() && bit->second <= nd) continue;
            best_depth[key] = nd;
            nodes.push_back({*s.post_latent, nd, e.node, s.triplet_index});
            open.push({nd + h(*s.post_latent, goal), seq++, static_cast<int>(nodes.size()) - 1});
        }
    }
    return std::nullopt;
}

}  // namespace detail

/// Abstraction-ladder planning: try A* at level 1, then at successively
/// higher levels until a plan is found. Levels whose threshold row repeats
/// the previous one are skipped; they would rerun an identical search.
inline std::optional<Plan> plan(const Latent& current, const Latent& goal,
                                const TripletStore& store, const ThresholdTable& table,
                                int max_depth, const Heuristic& heuristic = manhattan,
                                int level_stride = 1) {
    if (max_depth < 0) throw ConfigError("max_depth must be >= 0");
    if (level_stride < 1) throw ConfigError("level_stride must be >= 1");
    int previous = 0;
    int level = 1;
    while (true) {
        if (previous == 0 || !table.rows_equal(previous, level)) {
            if (auto p = detail::astar_at_level(current, goal, level, store, table, max_depth,
                                                heuristic))
                return p;
        }
        previous = level;
        if (level == table.levels()) break;
        level = std::min(level + level_stride, table.levels());
    }
    return std::nullopt;
}

/// Per-level branching factor over sample states and the count of states
/// the level distinguishes (greedy first-fit over all pre/post latents in
/// store order).
inline SearchDiagnostics diagnostics(const TripletStore& store, const ThresholdTable& table,
                                     const std::vector<Latent>& sample_states) {
    SearchDiagnostics diag;
    std::vector<const Latent*> all;
    all.reserve(store.size() * 2);
    for (std::size_t t = 0; t < store.size(); ++t) {
        all.push_back(&*store[t].pre_latent);
        all.push_back(&*store[t].post_latent);
    }
    for (int level = 1; level <= table.levels(); ++level) {
        double total = 0.0;
        for (const Latent& s : sample_states) {
            const auto succ = successors(s, level, store, table);
            total += static_cast<double>(succ.size());
            diag.nodes_expanded += succ.size();
        }
        diag.branching.push_back(sample_states.empty() ? 0.0
                                                       : total / static_cast<double>(sample_states.size()));
        std::vector<const Latent*> reps;
        for (const Latent* s : all) {
            bool found = false;
            for (const Latent* r : reps)
                if (table.same_state(*s, *r, level)) {
                    found = true;
                    break;
                }
            if (!found) reps.push_back(s);
        }
        diag.distinct_states.push_back(reps.size());
    }
    return diag;
}

}  // namespace oel
