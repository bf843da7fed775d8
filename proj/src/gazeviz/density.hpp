#pragma once

#include "gazeviz/resample.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace gazeviz {

struct GridConfig {
    int cell_size = 16;   // pixels per cell
    double sigma = 24.0;  // Gaussian radius in pixels; 0 disables smoothing
    int width = 1920;
    int height = 1080;

    int cols() const noexcept { return (width + cell_size - 1) / cell_size; }
    int rows() const noexcept { return (height + cell_size - 1) / cell_size; }

    /// Throws parameter error for non-positive sizes, negative sigma, or a cell
    /// larger than the plane.
    void validate() const;

    friend bool operator==(const GridConfig&, const GridConfig&) = default;
};

struct DensityGrid {
    GridConfig config;
    int cols = 0;
    int rows = 0;
    std::vector<double> values;  // row-major, max-normalized
    std::size_t total_points = 0;
    double peak = 0.0;           // maximum before normalization

    double at(int col, int row) const { return values[static_cast<std::size_t>(row) * cols + col]; }
};

/// Cell holding pixel coordinate `v`; values on a cell boundary go to the lower cell.
int cell_index(double v, int cell_size, int cell_count) noexcept;

/// Raw per-cell counts of fused gaze positions.
std::vector<double> count_cells(std::span<const GazePoint> points, const GridConfig& config);

/// Truncated (3 sigma) separable Gaussian; each source cell's kernel is
/// renormalized over the cells inside the grid, so total mass is preserved.
std::vector<double> smooth(std::span<const double> cells, int cols, int rows, double sigma_cells);

/// Counting, optional smoothing, then division by the maximum.
DensityGrid accumulate(std::span<const GazePoint> points, const GridConfig& config);

struct ColorRamp {
    double threshold = 0.05;  // below: transparent
    double opacity = 0.6;
};

struct Rgba {
    std::uint8_t r = 0, g = 0, b = 0, a = 0;
    friend bool operator==(const Rgba&, const Rgba&) = default;
};

/// Green (low) through yellow to red (high); transparent below the threshold.
Rgba ramp_color(double value, const ColorRamp& ramp = {}) noexcept;

struct Image {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> rgba;  // width * height * 4

    Rgba pixel(int x, int y) const {
        const auto* p = &rgba[(static_cast<std::size_t>(y) * width + x) * 4];
        return {p[0], p[1], p[2], p[3]};
    }
};

/// Upscales the grid to the plane size, one color per cell.
Image colorize(const DensityGrid& grid, const ColorRamp& ramp = {});

}  // namespace gazeviz
