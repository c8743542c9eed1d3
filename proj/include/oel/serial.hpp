#pragma once

#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>

#include "oel/errors.hpp"

namespace oel::serial {

// Little-endian binary helpers. Host is assumed little-endian (x86/ARM LE).

inline void write_bytes(std::ostream& os, const void* data, std::size_t n) {
    os.write(static_cast<const char*>(data), static_cast<std::streamsize>(n));
    if (!os) throw IoError("write failed");
}

inline void read_bytes(std::istream& is, void* data, std::size_t n) {
    is.read(static_cast<char*>(data), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(is.gcount()) != n) throw IoError("truncated file");
}

inline void write_u8(std::ostream& os, std::uint8_t v) { write_bytes(os, &v, 1); }
inline void write_u32(std::ostream& os, std::uint32_t v) { write_bytes(os, &v, 4); }
inline void write_u64(std::ostream& os, std::uint64_t v) { write_bytes(os, &v, 8); }
inline void write_f32(std::ostream& os, float v) { write_bytes(os, &v, 4); }
inline void write_f64(std::ostream& os, double v) { write_bytes(os, &v, 8); }

inline std::uint8_t read_u8(std::istream& is) { std::uint8_t v; read_bytes(is, &v, 1); return v; }
inline std::uint32_t read_u32(std::istream& is) { std::uint32_t v; read_bytes(is, &v, 4); return v; }
inline std::uint64_t read_u64(std::istream& is) { std::uint64_t v; read_bytes(is, &v, 8); return v; }
inline float read_f32(std::istream& is) { float v; read_bytes(is, &v, 4); return v; }
inline double read_f64(std::istream& is) { double v; read_bytes(is, &v, 8); return v; }

inline void write_magic(std::ostream& os, const char* magic) {
    write_bytes(os, magic, std::strlen(magic));
}

inline void expect_magic(std::istream& is, const char* magic) {
    std::size_t n = std::strlen(magic);
    std::string got(n, '\0');
    read_bytes(is, got.data(), n);
    if (got != magic) throw IoError("bad magic, expected " + std::string(magic));
}

/// FNV-1a 64-bit, used for config and encoder fingerprints.
inline std::uint64_t fnv1a(const void* data, std::size_t n, std::uint64_t h = 0xcbf29ce484222325ull) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ull;
    }
    return h;
}

}  // namespace oel::serial
