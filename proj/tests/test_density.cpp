#include "doctest.h"

#include "gazeviz/density.hpp"
#include "gazeviz/error.hpp"
#include "gazeviz/png.hpp"
#include "support/oracles.hpp"

#include <numeric>
#include <random>

using namespace gazeviz;

namespace {

GazePoint at(double x, double y) {
    GazePoint p;
    p.fused = {x, y};
    p.valid_fraction = 1.0;
    return p;
}

std::vector<GazePoint> random_points(std::mt19937_64& rng, std::size_t n, double w = 1920, double h = 1080) {
    std::uniform_real_distribution<double> x(0.0, w), y(0.0, h);
    std::vector<GazePoint> pts;
    for (std::size_t i = 0; i < n; ++i) pts.push_back(at(x(rng), y(rng)));
    return pts;
}

}  // namespace

TEST_CASE("grid config") {
    GridConfig c;
    CHECK(c.cols() == 120);
    CHECK(c.rows() == 68);
    c.validate();
    c.cell_size = 0;
    CHECK_THROWS_AS(c.validate(), Error);
    c.cell_size = 16;
    c.sigma = -1;
    CHECK_THROWS_AS(c.validate(), Error);
    c.sigma = 0;
    c.cell_size = 1921;
    CHECK_THROWS_AS(c.validate(), Error);
    c.cell_size = 1920;
    c.validate();
    CHECK(c.cols() == 1);
    CHECK(c.rows() == 1);
}

TEST_CASE("cell_index boundary rule") {
    CHECK(cell_index(0.0, 16, 120) == 0);
    CHECK(cell_index(-4.0, 16, 120) == 0);
    CHECK(cell_index(0.5, 16, 120) == 0);
    CHECK(cell_index(16.0, 16, 120) == 0);
    CHECK(cell_index(16.0001, 16, 120) == 1);
    CHECK(cell_index(32.0, 16, 120) == 1);
    CHECK(cell_index(1920.0, 16, 120) == 119);
    CHECK(cell_index(5000.0, 16, 120) == 119);
    for (double v = 0.0; v < 2000.0; v += 0.25) CHECK(cell_index(v, 16, 120) == oracle::cell_of(v, 16, 120));
}

TEST_CASE("empty input gives an all-zero grid") {
    auto g = accumulate(std::vector<GazePoint>{}, GridConfig{});
    CHECK(g.total_points == 0);
    CHECK(g.peak == 0.0);
    CHECK(std::all_of(g.values.begin(), g.values.end(), [](double v) { return v == 0.0; }));
}

TEST_CASE("identical points normalize to a single 1") {
    GridConfig c;
    c.sigma = 0;
    std::vector<GazePoint> pts(10, at(500, 300));
    auto g = accumulate(pts, c);
    CHECK(g.peak == 10.0);
    CHECK(g.at(cell_index(500, 16, g.cols), cell_index(300, 16, g.rows)) == 1.0);
    CHECK(std::accumulate(g.values.begin(), g.values.end(), 0.0) == 1.0);
}

TEST_CASE("two clusters keep their ratio") {
    GridConfig c;
    c.sigma = 0;
    std::vector<GazePoint> pts(30, at(100, 100));
    for (int i = 0; i < 10; ++i) pts.push_back(at(1500, 900));
    auto g = accumulate(pts, c);
    CHECK(g.at(6, 6) == 1.0);
    CHECK(g.at(93, 56) == doctest::Approx(10.0 / 30.0));
}

TEST_CASE("sigma-0 counting oracle") {
    std::mt19937_64 rng(11);
    for (int round = 0; round < 100; ++round) {
        GridConfig c;
        c.sigma = 0;
        c.cell_size = 4 + static_cast<int>(rng() % 60);
        auto pts = random_points(rng, rng() % 400);
        // Exact boundary hits.
        for (int i = 0; i < 5; ++i) pts.push_back(at(c.cell_size * (1 + rng() % 20), c.cell_size * (1 + rng() % 10)));
        auto counts = count_cells(pts, c);
        std::vector<double> want(counts.size(), 0.0);
        for (auto& p : pts)
            want[oracle::cell_of(p.fused.y, c.cell_size, c.rows()) * c.cols() + oracle::cell_of(p.fused.x, c.cell_size, c.cols())] += 1;
        CHECK(counts == want);
        auto g = accumulate(pts, c);
        const double peak = *std::max_element(want.begin(), want.end());
        CHECK(g.peak == peak);
        for (std::size_t i = 0; i < want.size(); ++i) CHECK(g.values[i] == want[i] / peak);
    }
}

TEST_CASE("translation by one cell shifts the grid") {
    std::mt19937_64 rng(12);
    GridConfig c;
    c.sigma = 0;
    auto pts = random_points(rng, 300, 1800, 1000);
    auto shifted = pts;
    for (auto& p : shifted) p.fused.x += c.cell_size, p.fused.y += c.cell_size;
    auto a = count_cells(pts, c), b = count_cells(shifted, c);
    const int cols = c.cols();
    for (int r = 0; r + 1 < c.rows(); ++r)
        for (int col = 0; col + 1 < cols; ++col) CHECK(a[r * cols + col] == b[(r + 1) * cols + col + 1]);
}

TEST_CASE("smoothing conserves mass, including at the edges") {
    std::mt19937_64 rng(13);
    for (int round = 0; round < 40; ++round) {
        GridConfig c;
        c.cell_size = 8 + static_cast<int>(rng() % 40);
        c.sigma = 2.0 + static_cast<double>(rng() % 80);
        auto pts = random_points(rng, 1 + rng() % 500);
        pts.push_back(at(0, 0));
        pts.push_back(at(1920, 1080));
        auto counts = count_cells(pts, c);
        auto s = smooth(counts, c.cols(), c.rows(), c.sigma / c.cell_size);
        const double mass = std::accumulate(s.begin(), s.end(), 0.0);
        CHECK(std::abs(mass - static_cast<double>(pts.size())) <= 1e-6);
        CHECK(std::all_of(s.begin(), s.end(), [](double v) { return v >= 0.0; }));
    }
}

TEST_CASE("adding a point never lowers its cell") {
    std::mt19937_64 rng(14);
    GridConfig c;
    auto pts = random_points(rng, 200);
    const double sc = c.sigma / c.cell_size;
    auto before = smooth(count_cells(pts, c), c.cols(), c.rows(), sc);
    auto extra = at(777, 333);
    pts.push_back(extra);
    auto after = smooth(count_cells(pts, c), c.cols(), c.rows(), sc);
    const auto idx = static_cast<std::size_t>(cell_index(333, 16, c.rows()) * c.cols() + cell_index(777, 16, c.cols()));
    CHECK(after[idx] > before[idx]);
    for (std::size_t i = 0; i < after.size(); ++i) CHECK(after[i] >= before[i]);
}

TEST_CASE("normalized peak is 1") {
    std::mt19937_64 rng(15);
    auto g = accumulate(random_points(rng, 800), GridConfig{});
    CHECK(*std::max_element(g.values.begin(), g.values.end()) == 1.0);
}

TEST_CASE("color ramp") {
    CHECK(ramp_color(1.0) == Rgba{255, 0, 0, 153});
    CHECK(ramp_color(0.05) == Rgba{0, 255, 0, 153});
    CHECK(ramp_color(0.0) == Rgba{0, 0, 0, 0});
    CHECK(ramp_color(0.049) == Rgba{0, 0, 0, 0});
    const auto mid = ramp_color(0.525);
    CHECK(mid.r == 255);
    CHECK(mid.g == 255);
    CHECK(mid.b == 0);
    // Red never decreases and green never increases along the ramp.
    Rgba prev = ramp_color(0.05);
    for (double v = 0.05; v <= 1.0; v += 0.001) {
        auto c = ramp_color(v);
        CHECK(c.r >= prev.r);
        CHECK(c.g <= prev.g);
        CHECK(c.a == 153);
        prev = c;
    }
    CHECK(ramp_color(0.5, ColorRamp{0.05, 1.0}).a == 255);
}

TEST_CASE("colorize upscales cells to the plane") {
    GridConfig c;
    c.sigma = 0;
    std::vector<GazePoint> pts(5, at(40, 20));
    auto img = colorize(accumulate(pts, c));
    CHECK(img.width == 1920);
    CHECK(img.height == 1080);
    CHECK(img.rgba.size() == 1920u * 1080u * 4u);
    // Cell (2,1) covers x in [32,48), y in [16,32).
    CHECK(img.pixel(32, 16) == Rgba{255, 0, 0, 153});
    CHECK(img.pixel(47, 31) == Rgba{255, 0, 0, 153});
    CHECK(img.pixel(48, 16).a == 0);
    CHECK(img.pixel(1919, 1079).a == 0);
}

TEST_CASE("single-cell grid is fully red") {
    GridConfig c;
    c.sigma = 0;
    c.cell_size = 1920;
    std::mt19937_64 rng(16);
    auto img = colorize(accumulate(random_points(rng, 50), c));
    for (int y = 0; y < 1080; y += 37)
        for (int x = 0; x < 1920; x += 41) CHECK(img.pixel(x, y) == Rgba{255, 0, 0, 153});
}

TEST_CASE("png encoding is deterministic and well-formed") {
    std::mt19937_64 rng(17);
    auto pts = random_points(rng, 300);
    auto a = encode_png(colorize(accumulate(pts, GridConfig{})));
    auto b = encode_png(colorize(accumulate(pts, GridConfig{})));
    CHECK(a == b);
    REQUIRE(a.size() > 8);
    CHECK(a.substr(0, 8) == std::string("\x89PNG\r\n\x1a\n", 8));
    auto info = read_png_info(a);
    CHECK(info.width == 1920);
    CHECK(info.height == 1080);
    CHECK(a.substr(a.size() - 8, 4) == "IEND");
    CHECK_THROWS_AS(read_png_info("not a png"), Error);
}
