#pragma once

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>

#include "nullwave/grid.hpp"

namespace nullwave {

struct SnapshotError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Writes content to path atomically: a temp file in the same directory is
// renamed into place, so readers never see a truncated artifact.
inline void atomic_write_file(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw SnapshotError("cannot open " + tmp.string() + " for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) throw SnapshotError("write failed: " + tmp.string());
    }
    fs::rename(tmp, path);
}

namespace detail {

inline void put_u64(std::string& buf, std::uint64_t x) {
    char b[8];
    std::memcpy(b, &x, 8);
    buf.append(b, 8);
}

inline void put_f64(std::string& buf, double x) {
    char b[8];
    std::memcpy(b, &x, 8);
    buf.append(b, 8);
}

}  // namespace detail

// NWV1 snapshot: magic "NWV1", u64 n, f64 half_width, f64 t, then w then v
// as little-endian f64 in grid index order.
inline void save_snapshot(const std::filesystem::path& path, const FieldState& s) {
    static_assert(sizeof(double) == 8);
    const Grid3& g = s.grid();
    std::string buf;
    buf.reserve(4 + 8 * (3 + 2 * g.size()));
    buf.append("NWV1", 4);
    detail::put_u64(buf, g.n);
    detail::put_f64(buf, g.half_width);
    detail::put_f64(buf, s.t);
    for (std::size_t i = 0; i < g.size(); ++i) detail::put_f64(buf, s.w[i]);
    for (std::size_t i = 0; i < g.size(); ++i) detail::put_f64(buf, s.v[i]);
    atomic_write_file(path, buf);
}

inline FieldState load_snapshot(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SnapshotError("cannot open snapshot " + path.string());
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "NWV1", 4) != 0)
        throw SnapshotError("bad snapshot magic in " + path.string());

    std::uint64_t n = 0;
    double half_width = 0.0, t = 0.0;
    in.read(reinterpret_cast<char*>(&n), 8);
    in.read(reinterpret_cast<char*>(&half_width), 8);
    in.read(reinterpret_cast<char*>(&t), 8);
    if (!in || n == 0 || n > (1u << 12) || !(half_width > 0.0))
        throw SnapshotError("bad snapshot header in " + path.string());

    Grid3 g(static_cast<std::size_t>(n), half_width);
    FieldState s{ScalarField(g), ScalarField(g), t};
    in.read(reinterpret_cast<char*>(s.w.data()), static_cast<std::streamsize>(8 * g.size()));
    in.read(reinterpret_cast<char*>(s.v.data()), static_cast<std::streamsize>(8 * g.size()));
    if (!in) throw SnapshotError("truncated snapshot " + path.string());
    return s;
}

}  // namespace nullwave
