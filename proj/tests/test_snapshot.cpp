#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "nullwave/snapshot.hpp"

using namespace nullwave;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() : path(fs::temp_directory_path() / "nullwave_snapshot_test") {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST(Snapshot, RoundTripPreservesBits) {
    TempDir tmp;
    const Grid3 g(8, 4.0);
    FieldState s{ScalarField(g), ScalarField(g), 1.375};
    s.w.fill([](double x, double y, double z) { return 0.1 * x + 0.2 * y * z; });
    s.v.fill([](double x, double y, double z) { return x * y - z; });
    const fs::path file = tmp.path / "state.nwv";
    save_snapshot(file, s);
    const FieldState r = load_snapshot(file);
    EXPECT_EQ(r.grid().n, g.n);
    EXPECT_EQ(r.grid().half_width, g.half_width);
    EXPECT_EQ(r.t, s.t);
    for (std::size_t i = 0; i < g.size(); ++i) {
        EXPECT_EQ(r.w[i], s.w[i]);
        EXPECT_EQ(r.v[i], s.v[i]);
    }
}

TEST(Snapshot, NoTempFileLeftBehind) {
    TempDir tmp;
    const Grid3 g(8, 4.0);
    FieldState s{ScalarField(g), ScalarField(g), 0.0};
    save_snapshot(tmp.path / "state.nwv", s);
    EXPECT_TRUE(fs::exists(tmp.path / "state.nwv"));
    EXPECT_FALSE(fs::exists(tmp.path / "state.nwv.tmp"));
}

TEST(Snapshot, RejectsBadMagicAndTruncation) {
    TempDir tmp;
    const fs::path bad = tmp.path / "bad.nwv";
    {
        std::ofstream out(bad, std::ios::binary);
        out << "XXXX garbage";
    }
    EXPECT_THROW(load_snapshot(bad), SnapshotError);

    const Grid3 g(8, 4.0);
    FieldState s{ScalarField(g), ScalarField(g), 0.0};
    const fs::path file = tmp.path / "state.nwv";
    save_snapshot(file, s);
    // truncate mid-payload
    fs::resize_file(file, fs::file_size(file) / 2);
    EXPECT_THROW(load_snapshot(file), SnapshotError);

    EXPECT_THROW(load_snapshot(tmp.path / "missing.nwv"), SnapshotError);
}

TEST(Snapshot, AtomicWriteCreatesParentDirs) {
    TempDir tmp;
    const fs::path nested = tmp.path / "a" / "b" / "file.txt";
    atomic_write_file(nested, "hello\n");
    std::ifstream in(nested);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    EXPECT_EQ(text, "hello\n");
}
