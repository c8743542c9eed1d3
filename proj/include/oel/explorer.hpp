#pragma once

#include "oel/geometry.hpp"
#include "oel/rng.hpp"

namespace oel {

/// Round1: a single start/end push. Round2: a polyline of 1 to 10 segments,
/// the planar surrogate of the joint-waypoint action.
enum class ExplorationMode { Round1, Round2 };

/// Random exploration: waypoints uniform over the reachable part of the
/// table (the shelf strip is excluded).
inline PushAction propose_action(Rng& rng, ExplorationMode mode, const TableGeometry& geom) {
    const int segments = mode == ExplorationMode::Round1 ? 1 : rng.uniform_int(1, 10);
    PushAction action;
    action.waypoints.resize(segments + 1);
    for (Vec2& w : action.waypoints) {
        // Rounded through f32 so an executed action is identical to its
        // serialized form in the experience log.
        w.x = snap_f32(rng.uniform(0.0, geom.width));
        w.y = snap_f32(rng.uniform(0.0, geom.reachable_depth()));
    }
    return action;
}

}  // namespace oel
