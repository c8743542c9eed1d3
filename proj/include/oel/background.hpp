#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "oel/errors.hpp"
#include "oel/image.hpp"
#include "oel/serial.hpp"

namespace oel {

/// Running single-Gaussian-per-pixel background model. A pixel is foreground
/// when its squared deviation from the learned mean exceeds k^2 times the
/// learned variance.
class BackgroundModel {
  public:
    BackgroundModel() = default;
    BackgroundModel(int width, int height, float alpha = 0.05f, float k = 4.0f,
                    float variance_floor = 1e-6f, int burn_in = 50)
        : width_(width),
          height_(height),
          alpha_(alpha),
          k_(k),
          variance_floor_(variance_floor),
          burn_in_(burn_in),
          mean_(static_cast<std::size_t>(width) * height, 0.0f),
          variance_(static_cast<std::size_t>(width) * height, variance_floor) {}

    int width() const { return width_; }
    int height() const { return height_; }
    int frames_seen() const { return frames_seen_; }
    int burn_in() const { return burn_in_; }
    bool ready() const { return frames_seen_ >= burn_in_; }
    const std::vector<float>& mean() const { return mean_; }
    const std::vector<float>& variance() const { return variance_; }

    void update(const Image& image) {
        check_shape(image);
        if (frames_seen_ == 0) {
            for (std::size_t i = 0; i < mean_.size(); ++i) mean_[i] = image.pixels[i];
        } else {
            for (std::size_t i = 0; i < mean_.size(); ++i) {
                const float x = image.pixels[i];
                const float old_mean = mean_[i];
                const float dev = x - old_mean;
                mean_[i] = (1.0f - alpha_) * old_mean + alpha_ * x;
                float v = (1.0f - alpha_) * variance_[i] + alpha_ * dev * dev;
                variance_[i] = v < variance_floor_ ? variance_floor_ : v;
            }
        }
        ++frames_seen_;
    }

    Image foreground(const Image& image) const {
        check_shape(image);
        if (!ready())
            throw NotReadyError("background model needs " + std::to_string(burn_in_) +
                                " frames, has " + std::to_string(frames_seen_));
        Image out(width_, height_);
        for (std::size_t i = 0; i < mean_.size(); ++i) {
            const float dev = image.pixels[i] - mean_[i];
            out.pixels[i] = (dev * dev > k_ * k_ * variance_[i]) ? image.pixels[i] : 0.0f;
        }
        return out;
    }

    void save(std::ostream& os) const {
        serial::write_magic(os, "OELB1");
        serial::write_u32(os, static_cast<std::uint32_t>(width_));
        serial::write_u32(os, static_cast<std::uint32_t>(height_));
        serial::write_f32(os, alpha_);
        serial::write_f32(os, k_);
        serial::write_f32(os, variance_floor_);
        serial::write_u32(os, static_cast<std::uint32_t>(burn_in_));
        serial::write_u32(os, static_cast<std::uint32_t>(frames_seen_));
        serial::write_bytes(os, mean_.data(), mean_.size() * sizeof(float));
        serial::write_bytes(os, variance_.data(), variance_.size() * sizeof(float));
    }

    static BackgroundModel load(std::istream& is) {
        serial::expect_magic(is, "OELB1");
        const int w = static_cast<int>(serial::read_u32(is));
        const int h = static_cast<int>(serial::read_u32(is));
        const float alpha = serial::read_f32(is);
        const float k = serial::read_f32(is);
        const float floor = serial::read_f32(is);
        const int burn_in = static_cast<int>(serial::read_u32(is));
        BackgroundModel m(w, h, alpha, k, floor, burn_in);
        m.frames_seen_ = static_cast<int>(serial::read_u32(is));
        serial::read_bytes(is, m.mean_.data(), m.mean_.size() * sizeof(float));
        serial::read_bytes(is, m.variance_.data(), m.variance_.size() * sizeof(float));
        return m;
    }

    void save_file(const std::string& path) const {
        std::ofstream os(path, std::ios::binary);
        if (!os) throw IoError("cannot open " + path);
        save(os);
    }

    static BackgroundModel load_file(const std::string& path) {
        std::ifstream is(path, std::ios::binary);
        if (!is) throw IoError("cannot open " + path);
        return load(is);
    }

  private:
    void check_shape(const Image& image) const {
        if (image.width != width_ || image.height != height_)
            throw ConfigError("image dimensions do not match background model");
    }

    int width_ = 0;
    int height_ = 0;
    float alpha_ = 0.05f;
    float k_ = 4.0f;
    float variance_floor_ = 1e-6f;
    int burn_in_ = 50;
    int frames_seen_ = 0;
    std::vector<float> mean_;
    std::vector<float> variance_;
};

}  // namespace oel
