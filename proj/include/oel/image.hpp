#pragma once

#include <cstddef>
#include <vector>

namespace oel {

/// Grayscale image, values in [0,1], row-major.
struct Image {
    int width = 0;
    int height = 0;
    std::vector<float> pixels;

    Image() = default;
    Image(int w, int h) : width(w), height(h), pixels(static_cast<std::size_t>(w) * h, 0.0f) {}

    float& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
    float at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }

    std::size_t size() const { return pixels.size(); }

    bool same_shape(const Image& other) const {
        return width == other.width && height == other.height;
    }

    friend bool operator==(const Image& a, const Image& b) {
        return a.width == b.width && a.height == b.height && a.pixels == b.pixels;
    }
};

/// m-dimensional latent encoding of a scene.
using Latent = std::vector<double>;

}  // namespace oel
