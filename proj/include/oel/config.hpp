#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>

#include "oel/errors.hpp"
#include "oel/explorer.hpp"
#include "oel/geometry.hpp"
#include "oel/serial.hpp"

namespace oel {

/// Everything a run needs, with the defaults used throughout. A plain
/// key=value file can override any field; CLI flags override the file.
struct RunConfig {
    std::uint64_t seed = 1;
    int intrinsic_actions = 5000;
    int episode_actions = 40;  // layout re-randomized every this many intrinsic actions
    ExplorationMode mode = ExplorationMode::Round1;
    int objects = 1;
    int latents = 7;
    int levels = 200;
    int goals = 50;
    TableGeometry geometry;
    double object_radius = 0.03;
    float bg_alpha = 0.05f;
    float bg_k = 4.0f;
    int bg_burn_in = 50;
    int image_width = 64;
    int image_height = 48;
    std::string out_dir = "out";

    void validate() const {
        if (intrinsic_actions <= 0) throw ConfigError("intrinsic_actions must be positive");
        if (episode_actions <= 0) throw ConfigError("episode_actions must be positive");
        if (objects < 1 || objects > 3) throw ConfigError("objects must be 1, 2 or 3");
        if (latents < 1) throw ConfigError("latents must be positive");
        if (levels < 2) throw ConfigError("levels must be at least 2");
        if (goals < 1) throw ConfigError("goals must be positive");
        if (geometry.width <= 0 || geometry.depth <= 0) throw ConfigError("bad table size");
        if (geometry.shelf_depth <= 0 || geometry.shelf_depth >= geometry.depth)
            throw ConfigError("shelf_depth must be in (0, depth)");
        if (object_radius <= 0) throw ConfigError("object_radius must be positive");
        if (bg_alpha <= 0.0f || bg_alpha >= 1.0f) throw ConfigError("bg_alpha must be in (0,1)");
        if (image_width <= 0 || image_height <= 0) throw ConfigError("bad image resolution");
    }

    std::string canonical() const {
        std::ostringstream os;
        os << "seed=" << seed << "\nactions=" << intrinsic_actions
           << "\nepisode_actions=" << episode_actions
           << "\nmode=" << (mode == ExplorationMode::Round1 ? "round1" : "round2")
           << "\nobjects=" << objects << "\nlatents=" << latents << "\nlevels=" << levels
           << "\ngoals=" << goals << "\ntable_width=" << geometry.width
           << "\ntable_depth=" << geometry.depth << "\nshelf_depth=" << geometry.shelf_depth
           << "\neffector_radius=" << geometry.effector_radius
           << "\nobject_radius=" << object_radius << "\nbg_alpha=" << bg_alpha
           << "\nbg_k=" << bg_k << "\nbg_burn_in=" << bg_burn_in
           << "\nimage_width=" << image_width << "\nimage_height=" << image_height << "\n";
        return os.str();
    }

    std::uint64_t fingerprint() const {
        const std::string c = canonical();
        return serial::fnv1a(c.data(), c.size());
    }

    void set(const std::string& key, const std::string& value) {
        try {
            if (key == "seed") seed = std::stoull(value);
            else if (key == "actions") intrinsic_actions = std::stoi(value);
            else if (key == "episode_actions") episode_actions = std::stoi(value);
            else if (key == "mode") {
                if (value == "round1") mode = ExplorationMode::Round1;
                else if (value == "round2") mode = ExplorationMode::Round2;
                else throw ConfigError("mode must be round1 or round2");
            } else if (key == "objects") objects = std::stoi(value);
            else if (key == "latents") latents = std::stoi(value);
            else if (key == "levels") levels = std::stoi(value);
            else if (key == "goals") goals = std::stoi(value);
            else if (key == "table_width") geometry.width = std::stod(value);
            else if (key == "table_depth") geometry.depth = std::stod(value);
            else if (key == "shelf_depth") geometry.shelf_depth = std::stod(value);
            else if (key == "effector_radius") geometry.effector_radius = std::stod(value);
            else if (key == "object_radius") object_radius = std::stod(value);
            else if (key == "bg_alpha") bg_alpha = std::stof(value);
            else if (key == "bg_k") bg_k = std::stof(value);
            else if (key == "bg_burn_in") bg_burn_in = std::stoi(value);
            else if (key == "image_width") image_width = std::stoi(value);
            else if (key == "image_height") image_height = std::stoi(value);
            else if (key == "out") out_dir = value;
            else throw ConfigError("unknown config key: " + key);
        } catch (const std::invalid_argument&) {
            throw ConfigError("bad value for " + key + ": " + value);
        } catch (const std::out_of_range&) {
            throw ConfigError("bad value for " + key + ": " + value);
        }
    }

    static RunConfig from_file(const std::string& path) {
        std::ifstream is(path);
        if (!is) throw ConfigError("cannot open config file " + path);
        RunConfig cfg;
        std::string line;
        int lineno = 0;
        while (std::getline(is, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            const auto eq = line.find('=');
            if (eq == std::string::npos) {
                if (line.find_first_not_of(" \t\r") != std::string::npos)
                    throw ConfigError("config line " + std::to_string(lineno) + ": expected key=value");
                continue;
            }
            auto trim = [](std::string s) {
                const auto a = s.find_first_not_of(" \t\r");
                const auto b = s.find_last_not_of(" \t\r");
                return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
            };
            cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
        }
        return cfg;
    }
};

}  // namespace oel
