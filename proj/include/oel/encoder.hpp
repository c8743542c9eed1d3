#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "oel/errors.hpp"
#include "oel/image.hpp"
#include "oel/rng.hpp"
#include "oel/serial.hpp"

namespace oel {

/// Linear latent encoder: projection of the centered image onto the top-m
/// principal directions of the training set. Immutable once fitted; any
/// encoder honoring encode()'s contract can stand in behind the same
/// interface.
class Encoder {
  public:
    Encoder() = default;
    Encoder(int width, int height, std::vector<double> mean_image,
            std::vector<std::vector<double>> components, std::vector<double> explained)
        : width_(width),
          height_(height),
          mean_image_(std::move(mean_image)),
          components_(std::move(components)),
          explained_(std::move(explained)) {}

    int width() const { return width_; }
    int height() const { return height_; }
    int latent_count() const { return static_cast<int>(components_.size()); }
    const std::vector<double>& mean_image() const { return mean_image_; }
    const std::vector<std::vector<double>>& components() const { return components_; }
    const std::vector<double>& explained_variance() const { return explained_; }

    Latent encode(const Image& image) const {
        if (image.width != width_ || image.height != height_)
            throw ConfigError("image dimensions do not match encoder");
        Latent out(components_.size());
        for (std::size_t c = 0; c < components_.size(); ++c) {
            double acc = 0.0;
            const std::vector<double>& comp = components_[c];
            for (std::size_t i = 0; i < comp.size(); ++i)
                acc += comp[i] * (static_cast<double>(image.pixels[i]) - mean_image_[i]);
            out[c] = acc;
        }
        return out;
    }

    /// mean + sum_i values_i * component_i, as a dense pixel vector.
    std::vector<double> decode(const Latent& values) const {
        std::vector<double> out = mean_image_;
        for (std::size_t c = 0; c < components_.size(); ++c)
            for (std::size_t i = 0; i < out.size(); ++i)
                out[i] += values[c] * components_[c][i];
        return out;
    }

    void save(std::ostream& os) const {
        serial::write_magic(os, "OELE1");
        serial::write_u32(os, static_cast<std::uint32_t>(width_));
        serial::write_u32(os, static_cast<std::uint32_t>(height_));
        serial::write_u32(os, static_cast<std::uint32_t>(components_.size()));
        for (double v : mean_image_) serial::write_f32(os, static_cast<float>(v));
        for (const auto& comp : components_)
            for (double v : comp) serial::write_f32(os, static_cast<float>(v));
    }

    static Encoder load(std::istream& is) {
        serial::expect_magic(is, "OELE1");
        const int w = static_cast<int>(serial::read_u32(is));
        const int h = static_cast<int>(serial::read_u32(is));
        const int m = static_cast<int>(serial::read_u32(is));
        const std::size_t dim = static_cast<std::size_t>(w) * h;
        std::vector<double> mean(dim);
        for (double& v : mean) v = serial::read_f32(is);
        std::vector<std::vector<double>> comps(m, std::vector<double>(dim));
        for (auto& comp : comps)
            for (double& v : comp) v = serial::read_f32(is);
        return Encoder(w, h, std::move(mean), std::move(comps), std::vector<double>(m, 0.0));
    }

    void save_file(const std::string& path) const {
        std::ofstream os(path, std::ios::binary);
        if (!os) throw IoError("cannot open " + path);
        save(os);
    }

    static Encoder load_file(const std::string& path) {
        std::ifstream is(path, std::ios::binary);
        if (!is) throw IoError("cannot open " + path);
        return load(is);
    }

    /// Fingerprint of the serialized encoder, used to tag cached latents.
    std::uint64_t fingerprint() const {
        std::uint64_t h = serial::fnv1a(&width_, sizeof(width_));
        h = serial::fnv1a(&height_, sizeof(height_), h);
        for (double d : mean_image_) {
            float f = static_cast<float>(d);
            h = serial::fnv1a(&f, sizeof(f), h);
        }
        for (const auto& comp : components_)
            for (double d : comp) {
                float f = static_cast<float>(d);
                h = serial::fnv1a(&f, sizeof(f), h);
            }
        return h;
    }

  private:
    int width_ = 0;
    int height_ = 0;
    std::vector<double> mean_image_;
    std::vector<std::vector<double>> components_;
    std::vector<double> explained_;
};

/// Top-m principal directions by power iteration with deflation. The
/// covariance product is applied matrix-free; foreground-filtered training
/// images are mostly zero, so each image is visited through its nonzero
/// entries only.
inline Encoder fit_encoder(const std::vector<Image>& images, int m, double tolerance = 1e-8,
                           int max_iterations = 1000) {
    if (m < 1) throw ConfigError("latent count must be >= 1");
    if (images.size() < static_cast<std::size_t>(m))
        throw ConfigError("need at least " + std::to_string(m) + " images, got " +
                          std::to_string(images.size()));
    const int w = images.front().width;
    const int h = images.front().height;
    const std::size_t dim = static_cast<std::size_t>(w) * h;
    const std::size_t n = images.size();
    for (const Image& img : images)
        if (img.width != w || img.height != h) throw ConfigError("image dimensions differ");

    std::vector<double> mean(dim, 0.0);
    for (const Image& img : images)
        for (std::size_t i = 0; i < dim; ++i) mean[i] += img.pixels[i];
    for (double& v : mean) v /= static_cast<double>(n);

    // Sparse (index, value) list per image.
    std::vector<std::vector<std::pair<std::uint32_t, double>>> sparse(n);
    for (std::size_t t = 0; t < n; ++t)
        for (std::size_t i = 0; i < dim; ++i)
            if (images[t].pixels[i] != 0.0f)
                sparse[t].emplace_back(static_cast<std::uint32_t>(i),
                                       static_cast<double>(images[t].pixels[i]));

    std::vector<std::vector<double>> components;
    std::vector<double> explained;
    Rng rng(0x9e3779b97f4a7c15ull);
    std::vector<double> v(dim), cv(dim);

    auto orthogonalize = [&](std::vector<double>& vec) {
        for (const auto& comp : components) {
            double dot = 0.0;
            for (std::size_t i = 0; i < dim; ++i) dot += comp[i] * vec[i];
            for (std::size_t i = 0; i < dim; ++i) vec[i] -= dot * comp[i];
        }
    };
    auto norm_of = [&](const std::vector<double>& vec) {
        double s = 0.0;
        for (double x : vec) s += x * x;
        return std::sqrt(s);
    };
    // cv = (1/n) sum_t (x_t - mean) ((x_t - mean) . v)
    auto apply_cov = [&](const std::vector<double>& vec, std::vector<double>& out) {
        double mean_dot = 0.0;
        for (std::size_t i = 0; i < dim; ++i) mean_dot += mean[i] * vec[i];
        std::fill(out.begin(), out.end(), 0.0);
        double alpha_sum = 0.0;
        for (std::size_t t = 0; t < n; ++t) {
            double dot = -mean_dot;
            for (auto [i, x] : sparse[t]) dot += x * vec[i];
            alpha_sum += dot;
            for (auto [i, x] : sparse[t]) out[i] += dot * x;
        }
        for (std::size_t i = 0; i < dim; ++i)
            out[i] = (out[i] - alpha_sum * mean[i]) / static_cast<double>(n);
    };

    for (int c = 0; c < m; ++c) {
        for (std::size_t i = 0; i < dim; ++i) v[i] = rng.uniform() - 0.5;
        orthogonalize(v);
        double nrm = norm_of(v);
        for (std::size_t i = 0; i < dim; ++i) v[i] /= nrm;

        double eigenvalue = 0.0;
        bool degenerate = false;
        for (int it = 0; it < max_iterations; ++it) {
            apply_cov(v, cv);
            orthogonalize(cv);
            eigenvalue = norm_of(cv);
            if (eigenvalue < 1e-14) {
                degenerate = true;
                break;
            }
            double diff_minus = 0.0, diff_plus = 0.0;
            for (std::size_t i = 0; i < dim; ++i) {
                const double next = cv[i] / eigenvalue;
                const double dm = next - v[i];
                const double dp = next + v[i];
                diff_minus += dm * dm;
                diff_plus += dp * dp;
                v[i] = next;
            }
            if (std::min(diff_minus, diff_plus) < tolerance * tolerance) break;
        }
        if (degenerate) {
            // No variance left: complete with an arbitrary orthonormal vector.
            eigenvalue = 0.0;
            for (std::size_t basis = 0; basis < dim; ++basis) {
                std::fill(v.begin(), v.end(), 0.0);
                v[basis] = 1.0;
                orthogonalize(v);
                const double nb = norm_of(v);
                if (nb > 0.5) {
                    for (std::size_t i = 0; i < dim; ++i) v[i] /= nb;
                    break;
                }
            }
        }
        // Sign convention: largest-magnitude entry positive.
        std::size_t imax = 0;
        for (std::size_t i = 1; i < dim; ++i)
            if (std::abs(v[i]) > std::abs(v[imax])) imax = i;
        if (v[imax] < 0.0)
            for (double& x : v) x = -x;
        components.push_back(v);
        explained.push_back(eigenvalue);
    }
    return Encoder(w, h, std::move(mean), std::move(components), std::move(explained));
}

}  // namespace oel
