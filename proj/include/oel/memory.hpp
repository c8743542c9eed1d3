#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "oel/background.hpp"
#include "oel/encoder.hpp"
#include "oel/errors.hpp"
#include "oel/geometry.hpp"
#include "oel/image.hpp"
#include "oel/serial.hpp"

namespace oel {

/// One experienced action: the camera image before, the action, the image
/// after, and (once an encoder exists) the latent codes of both images.
struct Triplet {
    Image pre;
    PushAction action;
    Image post;
    std::optional<Latent> pre_latent;
    std::optional<Latent> post_latent;

    friend bool operator==(const Triplet& a, const Triplet& b) {
        return a.pre == b.pre && a.action == b.action && a.post == b.post &&
               a.pre_latent == b.pre_latent && a.post_latent == b.post_latent;
    }
};

/// Append-only experience log. Recording is only allowed before latents are
/// cached; after encode_all the store is frozen.
class TripletStore {
  public:
    std::size_t record(Image pre, PushAction action, Image post) {
        if (encoded()) throw PhaseError("cannot record into an encoded store");
        // Waypoints are stored as f32 on disk; normalizing on ingest keeps
        // save/load a bit-exact identity.
        for (Vec2& w : action.waypoints) {
            w.x = snap_f32(w.x);
            w.y = snap_f32(w.y);
        }
        triplets_.push_back(Triplet{std::move(pre), std::move(action), std::move(post),
                                    std::nullopt, std::nullopt});
        return triplets_.size() - 1;
    }

    /// Cache encode(foreground(image)) for every pre/post image. Latents are
    /// rounded through f32 so the on-disk representation is lossless.
    void encode_all(const BackgroundModel& background, const Encoder& encoder) {
        const std::uint64_t fp = encoder.fingerprint();
        if (encoder_fingerprint_ && *encoder_fingerprint_ == fp) return;
        for (Triplet& t : triplets_) {
            t.pre_latent = round_f32(encoder.encode(background.foreground(t.pre)));
            t.post_latent = round_f32(encoder.encode(background.foreground(t.post)));
        }
        encoder_fingerprint_ = fp;
        latent_count_ = encoder.latent_count();
    }

    bool encoded() const { return encoder_fingerprint_.has_value(); }
    std::optional<std::uint64_t> encoder_fingerprint() const { return encoder_fingerprint_; }
    std::size_t size() const { return triplets_.size(); }
    bool empty() const { return triplets_.empty(); }
    int latent_count() const { return latent_count_; }
    const Triplet& operator[](std::size_t i) const { return triplets_[i]; }
    const std::vector<Triplet>& triplets() const { return triplets_; }

    friend bool operator==(const TripletStore& a, const TripletStore& b) {
        return a.triplets_ == b.triplets_ && a.encoder_fingerprint_ == b.encoder_fingerprint_;
    }

    void save(std::ostream& os) const {
        serial::write_magic(os, "OELT1");
        const std::uint32_t m = encoded() ? static_cast<std::uint32_t>(latent_count_) : 0;
        serial::write_u32(os, static_cast<std::uint32_t>(triplets_.size()));
        serial::write_u32(os, static_cast<std::uint32_t>(width()));
        serial::write_u32(os, static_cast<std::uint32_t>(height()));
        serial::write_u32(os, m);
        serial::write_u64(os, encoder_fingerprint_.value_or(0));
        for (const Triplet& t : triplets_) {
            serial::write_bytes(os, t.pre.pixels.data(), t.pre.pixels.size() * sizeof(float));
            serial::write_u8(os, static_cast<std::uint8_t>(t.action.waypoints.size()));
            for (Vec2 w : t.action.waypoints) {
                serial::write_f32(os, static_cast<float>(w.x));
                serial::write_f32(os, static_cast<float>(w.y));
            }
            serial::write_bytes(os, t.post.pixels.data(), t.post.pixels.size() * sizeof(float));
            if (m > 0) {
                for (double v : *t.pre_latent) serial::write_f32(os, static_cast<float>(v));
                for (double v : *t.post_latent) serial::write_f32(os, static_cast<float>(v));
            }
        }
    }

    static TripletStore load(std::istream& is) {
        serial::expect_magic(is, "OELT1");
        const std::uint32_t count = serial::read_u32(is);
        const int w = static_cast<int>(serial::read_u32(is));
        const int h = static_cast<int>(serial::read_u32(is));
        const int m = static_cast<int>(serial::read_u32(is));
        const std::uint64_t fp = serial::read_u64(is);
        TripletStore store;
        store.triplets_.reserve(count);
        for (std::uint32_t i = 0; i < count; ++i) {
            Triplet t;
            t.pre = Image(w, h);
            serial::read_bytes(is, t.pre.pixels.data(), t.pre.pixels.size() * sizeof(float));
            const int wp = serial::read_u8(is);
            t.action.waypoints.resize(wp);
            for (Vec2& p : t.action.waypoints) {
                p.x = serial::read_f32(is);
                p.y = serial::read_f32(is);
            }
            t.post = Image(w, h);
            serial::read_bytes(is, t.post.pixels.data(), t.post.pixels.size() * sizeof(float));
            if (m > 0) {
                Latent pre(m), post(m);
                for (double& v : pre) v = serial::read_f32(is);
                for (double& v : post) v = serial::read_f32(is);
                t.pre_latent = std::move(pre);
                t.post_latent = std::move(post);
            }
            store.triplets_.push_back(std::move(t));
        }
        if (m > 0) {
            store.encoder_fingerprint_ = fp;
            store.latent_count_ = m;
        }
        return store;
    }

    void save_file(const std::string& path) const {
        std::ofstream os(path, std::ios::binary);
        if (!os) throw IoError("cannot open " + path);
        save(os);
    }

    static TripletStore load_file(const std::string& path) {
        std::ifstream is(path, std::ios::binary);
        if (!is) throw IoError("cannot open " + path);
        return load(is);
    }

  private:
    int width() const { return triplets_.empty() ? 0 : triplets_.front().pre.width; }
    int height() const { return triplets_.empty() ? 0 : triplets_.front().pre.height; }

    static Latent round_f32(Latent v) {
        for (double& x : v) x = snap_f32(x);
        return v;
    }

    std::vector<Triplet> triplets_;
    std::optional<std::uint64_t> encoder_fingerprint_;
    int latent_count_ = 0;
};

}  // namespace oel
