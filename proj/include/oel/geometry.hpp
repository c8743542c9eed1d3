#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace oel {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
    friend bool operator==(Vec2 a, Vec2 b) { return a.x == b.x && a.y == b.y; }

    double norm() const { return std::hypot(x, y); }
};

inline double distance(Vec2 a, Vec2 b) { return (a - b).norm(); }

/// Round a double through f32 precision. The volatile keeps the narrowing
/// conversion alive: GCC 11's vectorizer drops the double->float->double
/// round-trip in the scalar tail of loops over Vec2 at -O3.
inline double snap_f32(double v) {
    volatile float f = static_cast<float>(v);
    return static_cast<double>(f);
}

/// Table plane with a shelf strip at the back (high y). Planar pushes can
/// only reach y in [0, depth - shelf_depth].
struct TableGeometry {
    double width = 0.70;
    double depth = 0.50;
    double shelf_depth = 0.15;
    double effector_radius = 0.02;

    double reachable_depth() const { return depth - shelf_depth; }

    bool contains(Vec2 p) const {
        return p.x >= 0.0 && p.x <= width && p.y >= 0.0 && p.y <= depth;
    }

    bool reachable(Vec2 p) const {
        return p.x >= 0.0 && p.x <= width && p.y >= 0.0 && p.y <= reachable_depth();
    }
};

struct ObjectState {
    int id = 0;
    Vec2 center;
    double radius = 0.03;

    friend bool operator==(const ObjectState& a, const ObjectState& b) {
        return a.id == b.id && a.center == b.center && a.radius == b.radius;
    }
};

struct WorldState {
    std::vector<ObjectState> objects;
    std::int64_t timestep = 0;
};

/// Effector sweep along a waypoint polyline. 2 waypoints is the single
/// start/end push; 3..11 waypoints give 2..10 segments.
struct PushAction {
    static constexpr int kDurationTimesteps = 1000;
    static constexpr int kMinWaypoints = 2;
    static constexpr int kMaxWaypoints = 11;

    std::vector<Vec2> waypoints;

    int segments() const { return static_cast<int>(waypoints.size()) - 1; }

    bool valid(const TableGeometry& geom) const {
        if (waypoints.size() < kMinWaypoints || waypoints.size() > kMaxWaypoints) return false;
        for (Vec2 w : waypoints)
            if (!geom.contains(w)) return false;
        return true;
    }

    friend bool operator==(const PushAction& a, const PushAction& b) {
        return a.waypoints == b.waypoints;
    }
};

}  // namespace oel
