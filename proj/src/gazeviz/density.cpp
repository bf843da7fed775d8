#include "gazeviz/density.hpp"

#include "gazeviz/error.hpp"

#include <algorithm>
#include <cmath>

namespace gazeviz {

void GridConfig::validate() const {
    if (cell_size <= 0) throw Error(ErrorCode::parameter, "cell size must be positive");
    if (width <= 0 || height <= 0) throw Error(ErrorCode::parameter, "plane size must be positive");
    if (cell_size > std::max(width, height)) {
        throw Error(ErrorCode::parameter, "cell size exceeds the stimulus plane");
    }
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw Error(ErrorCode::parameter, "sigma must be >= 0");
}

int cell_index(double v, int cell_size, int cell_count) noexcept {
    if (!(v > 0.0)) return 0;
    const double c = std::ceil(v / static_cast<double>(cell_size)) - 1.0;
    if (c >= static_cast<double>(cell_count - 1)) return cell_count - 1;
    return static_cast<int>(c);
}

std::vector<double> count_cells(std::span<const GazePoint> points, const GridConfig& config) {
    config.validate();
    const int cols = config.cols();
    const int rows = config.rows();
    std::vector<double> cells(static_cast<std::size_t>(cols) * rows, 0.0);
    for (const auto& p : points) {
        const int cx = cell_index(p.fused.x, config.cell_size, cols);
        const int cy = cell_index(p.fused.y, config.cell_size, rows);
        cells[static_cast<std::size_t>(cy) * cols + cx] += 1.0;
    }
    return cells;
}

namespace {

std::vector<double> gaussian_weights(double sigma_cells, int radius) {
    std::vector<double> w(2 * radius + 1);
    for (int i = -radius; i <= radius; ++i) {
        w[i + radius] = std::exp(-0.5 * (i * i) / (sigma_cells * sigma_cells));
    }
    return w;
}

// One axis of the scatter. `stride` steps along the axis, `count` is its length,
// `lines`/`line_stride` enumerate the orthogonal lines.
void scatter_axis(const std::vector<double>& in, std::vector<double>& out, int count, std::size_t stride,
                  int lines, std::size_t line_stride, const std::vector<double>& w, int radius) {
    std::fill(out.begin(), out.end(), 0.0);
    for (int line = 0; line < lines; ++line) {
        const std::size_t base = static_cast<std::size_t>(line) * line_stride;
        for (int src = 0; src < count; ++src) {
            const double mass = in[base + src * stride];
            if (mass == 0.0) continue;
            const int lo = std::max(0, src - radius);
            const int hi = std::min(count - 1, src + radius);
            double norm = 0.0;
            for (int dst = lo; dst <= hi; ++dst) norm += w[dst - src + radius];
            for (int dst = lo; dst <= hi; ++dst) {
                out[base + dst * stride] += mass * w[dst - src + radius] / norm;
            }
        }
    }
}

}  // namespace

std::vector<double> smooth(std::span<const double> cells, int cols, int rows, double sigma_cells) {
    std::vector<double> a(cells.begin(), cells.end());
    if (!(sigma_cells > 0.0)) return a;
    const int radius = static_cast<int>(std::ceil(3.0 * sigma_cells));
    if (radius == 0) return a;
    const auto w = gaussian_weights(sigma_cells, radius);
    std::vector<double> b(a.size());
    scatter_axis(a, b, cols, 1, rows, static_cast<std::size_t>(cols), w, radius);
    scatter_axis(b, a, rows, static_cast<std::size_t>(cols), cols, 1, w, radius);
    return a;
}

DensityGrid accumulate(std::span<const GazePoint> points, const GridConfig& config) {
    DensityGrid grid;
    grid.config = config;
    grid.cols = config.cols();
    grid.rows = config.rows();
    grid.total_points = points.size();
    grid.values = count_cells(points, config);
    if (config.sigma > 0.0) {
        grid.values = smooth(grid.values, grid.cols, grid.rows, config.sigma / config.cell_size);
    }
    grid.peak = grid.values.empty() ? 0.0 : *std::max_element(grid.values.begin(), grid.values.end());
    if (grid.peak > 0.0) {
        for (auto& v : grid.values) v /= grid.peak;
    }
    return grid;
}

Rgba ramp_color(double value, const ColorRamp& ramp) noexcept {
    if (!(value >= ramp.threshold) || value <= 0.0) return {};
    const double u = ramp.threshold >= 1.0 ? 1.0
                                           : std::clamp((value - ramp.threshold) / (1.0 - ramp.threshold), 0.0, 1.0);
    // Hue 120 (green) at u=0 down to 0 (red) at u=1, full saturation and value.
    const double hue = 120.0 * (1.0 - u);
    double r = 0.0;
    double g = 0.0;
    if (hue >= 60.0) {
        g = 1.0;
        r = (120.0 - hue) / 60.0;
    } else {
        r = 1.0;
        g = hue / 60.0;
    }
    auto to_byte = [](double c) { return static_cast<std::uint8_t>(std::lround(std::clamp(c, 0.0, 1.0) * 255.0)); };
    return {to_byte(r), to_byte(g), 0, to_byte(ramp.opacity)};
}

Image colorize(const DensityGrid& grid, const ColorRamp& ramp) {
    Image img;
    img.width = grid.config.width;
    img.height = grid.config.height;
    img.rgba.resize(static_cast<std::size_t>(img.width) * img.height * 4);

    std::vector<Rgba> palette(grid.values.size());
    for (std::size_t i = 0; i < grid.values.size(); ++i) palette[i] = ramp_color(grid.values[i], ramp);

    const int cs = grid.config.cell_size;
    for (int y = 0; y < img.height; ++y) {
        const int row = std::min(y / cs, grid.rows - 1);
        auto* out = &img.rgba[static_cast<std::size_t>(y) * img.width * 4];
        for (int x = 0; x < img.width; ++x) {
            const int col = std::min(x / cs, grid.cols - 1);
            const Rgba c = palette[static_cast<std::size_t>(row) * grid.cols + col];
            out[0] = c.r;
            out[1] = c.g;
            out[2] = c.b;
            out[3] = c.a;
            out += 4;
        }
    }
    return img;
}

}  // namespace gazeviz
