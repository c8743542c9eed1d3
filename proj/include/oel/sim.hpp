#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "oel/errors.hpp"
#include "oel/geometry.hpp"
#include "oel/image.hpp"

namespace oel {

/// Deterministic 2D push world. The effector disc exists only while an
/// action is running: it appears at the first waypoint, sweeps each segment
/// in 1000 discrete timesteps total, and vanishes. Objects it overlaps are
/// displaced so the discs stay externally tangent (quasi-static push, no
/// rotation). Objects that start an action outside the shelf strip cannot
/// be pushed into it.
class Simulator {
  public:
    explicit Simulator(TableGeometry geom = {}, int image_width = 64, int image_height = 48)
        : geom_(geom), img_w_(image_width), img_h_(image_height) {}

    const TableGeometry& geometry() const { return geom_; }
    int image_width() const { return img_w_; }
    int image_height() const { return img_h_; }

    WorldState reset(const std::vector<ObjectState>& layout) const {
        for (std::size_t i = 0; i < layout.size(); ++i) {
            const ObjectState& o = layout[i];
            if (o.radius <= 0.0)
                throw ConfigError("object " + std::to_string(o.id) + " has non-positive radius");
            if (!geom_.contains(o.center))
                throw ConfigError("object " + std::to_string(o.id) + " is out of bounds");
            for (std::size_t j = i + 1; j < layout.size(); ++j) {
                if (distance(o.center, layout[j].center) < o.radius + layout[j].radius)
                    throw ConfigError("objects " + std::to_string(o.id) + " and " +
                                      std::to_string(layout[j].id) + " overlap");
            }
        }
        if (layout.empty() || layout.size() > 3)
            throw ConfigError("layout must contain 1 to 3 objects");
        WorldState s;
        s.objects = layout;
        s.timestep = 0;
        return s;
    }

    WorldState apply_action(const WorldState& state, const PushAction& action) const {
        WorldState out = state;
        const int nseg = action.segments();
        // y ceiling per object for this action: objects outside the shelf
        // strip stay outside it, objects already inside keep full depth.
        std::vector<double> ymax(out.objects.size());
        for (std::size_t i = 0; i < out.objects.size(); ++i)
            ymax[i] = out.objects[i].center.y <= geom_.reachable_depth() ? geom_.reachable_depth()
                                                                         : geom_.depth;

        Vec2 effector = action.waypoints.front();
        resolve_contacts(out, effector, ymax);

        const int base = PushAction::kDurationTimesteps / nseg;
        const int extra = PushAction::kDurationTimesteps % nseg;
        for (int seg = 0; seg < nseg; ++seg) {
            const Vec2 a = action.waypoints[seg];
            const Vec2 b = action.waypoints[seg + 1];
            const int steps = base + (seg < extra ? 1 : 0);
            for (int i = 1; i <= steps; ++i) {
                const double t = static_cast<double>(i) / steps;
                effector = a + t * (b - a);
                resolve_contacts(out, effector, ymax);
            }
        }
        out.timestep = state.timestep + PushAction::kDurationTimesteps;
        return out;
    }

    /// Top-view camera: static background (checker texture, darker shelf
    /// strip, shelf edge line) with objects drawn as filled discs at
    /// per-id intensities. Pure function of object positions.
    Image render(const WorldState& state) const {
        Image img(img_w_, img_h_);
        const double px = geom_.width / img_w_;
        const double py = geom_.depth / img_h_;
        const int shelf_row = static_cast<int>(geom_.reachable_depth() / py);
        for (int y = 0; y < img_h_; ++y) {
            const double wy = (y + 0.5) * py;
            const bool shelf = wy > geom_.reachable_depth();
            for (int x = 0; x < img_w_; ++x) {
                float v = ((x / 4 + y / 4) % 2 == 0) ? 0.10f : 0.16f;
                if (shelf) v += 0.10f;
                if (y == shelf_row) v = 0.35f;
                img.at(x, y) = v;
            }
        }
        for (const ObjectState& o : state.objects) {
            const float intensity = object_intensity(o.id);
            for (int y = 0; y < img_h_; ++y) {
                const double wy = (y + 0.5) * py;
                for (int x = 0; x < img_w_; ++x) {
                    const double wx = (x + 0.5) * px;
                    const double dx = wx - o.center.x;
                    const double dy = wy - o.center.y;
                    if (dx * dx + dy * dy <= o.radius * o.radius) img.at(x, y) = intensity;
                }
            }
        }
        return img;
    }

    static float object_intensity(int id) { return 0.90f - 0.15f * static_cast<float>(id); }

  private:
    void resolve_contacts(WorldState& s, Vec2 effector, const std::vector<double>& ymax) const {
        for (std::size_t i = 0; i < s.objects.size(); ++i) {
            ObjectState& o = s.objects[i];
            const double reach = o.radius + geom_.effector_radius;
            Vec2 d = o.center - effector;
            const double dist = d.norm();
            if (dist >= reach) continue;
            Vec2 dir = dist > 1e-12 ? (1.0 / dist) * d : Vec2{1.0, 0.0};
            o.center = effector + reach * dir;
            // The boundary is a solid wall: the whole disc stays on the
            // table, so the effector can always reach between wall and
            // object to push it back out.
            o.center.x = std::clamp(o.center.x, o.radius, geom_.width - o.radius);
            o.center.y = std::clamp(o.center.y, o.radius, ymax[i] - o.radius);
        }
    }

    TableGeometry geom_;
    int img_w_;
    int img_h_;
};

}  // namespace oel
