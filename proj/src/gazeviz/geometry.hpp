#pragma once

#include "gazeviz/resample.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace gazeviz {

enum class LineMode { linear, linear_closed, step, monotone };

inline constexpr LineMode kAllLineModes[] = {LineMode::linear, LineMode::linear_closed, LineMode::step,
                                             LineMode::monotone};
inline constexpr std::size_t kDefaultSamplesPerSegment = 16;

/// "linear", "linear-closed", "step", "monotone".
std::string_view to_string(LineMode mode) noexcept;
std::optional<LineMode> parse_line_mode(std::string_view s);

struct Polyline {
    std::vector<Vec2> vertices;
    /// vertices[knot_indices[k]] is knot k, bit for bit.
    std::vector<std::size_t> knot_indices;

    friend bool operator==(const Polyline&, const Polyline&) = default;
};

/// Builds the drawable path through `knots`.
///
/// - linear: the knots themselves.
/// - linear_closed: the knots followed by a copy of the first one.
/// - step: a corner (x[k+1], y[k]) between consecutive knots, so every segment is
///   axis-aligned (horizontal move first).
/// - monotone: per coordinate, a cubic Hermite spline over the knot index with
///   Fritsch-Carlson limited tangents; every span is sampled `samples_per_segment`
///   times (left knot included) and the final knot closes the path. The curve
///   never leaves the range of the two knots bounding a span.
Polyline interpolate(std::span<const Vec2> knots, LineMode mode,
                     std::size_t samples_per_segment = kDefaultSamplesPerSegment);

std::vector<Vec2> knots_of(const ScanpathSeries& series);

inline Polyline interpolate(const ScanpathSeries& series, LineMode mode,
                            std::size_t samples_per_segment = kDefaultSamplesPerSegment) {
    const auto knots = knots_of(series);
    return interpolate(knots, mode, samples_per_segment);
}

/// Fritsch-Carlson tangents for unit-spaced values.
std::vector<double> monotone_tangents(std::span<const double> values);

double path_length(const Polyline& polyline) noexcept;

}  // namespace gazeviz
