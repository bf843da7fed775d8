#pragma once

#include "gazeviz/segmentation.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gazeviz {

struct PlaneSize {
    double width = 1920.0;
    double height = 1080.0;

    friend bool operator==(const PlaneSize&, const PlaneSize&) = default;
};

enum class Eye { left, right };

struct GazePoint {
    double t = 0.0;  // seconds from segment start
    std::optional<Vec2> l;
    std::optional<Vec2> r;
    Vec2 fused;
    double valid_fraction = 0.0;

    friend bool operator==(const GazePoint&, const GazePoint&) = default;
};

struct ScanpathSeries {
    int participant_id = 0;
    StimulusKind stimulus;
    std::size_t window_len = 1;
    std::vector<GazePoint> points;

    friend bool operator==(const ScanpathSeries&, const ScanpathSeries&) = default;
};

struct ResampleOptions {
    double tick_rate = kDefaultTickRate;
    PlaneSize plane;
};

/// POR is usable when both coordinates are finite and strictly positive;
/// the tracker reports zero or negative values on track loss.
bool is_valid(const RawSample& sample, Eye eye) noexcept;

/// Non-overlapping boxcar averaging over `window_len` consecutive samples. Each
/// eye is averaged over its valid samples only; windows without any valid eye
/// emit nothing. The last window may be shorter.
ScanpathSeries window_average(int participant_id, const StimulusSegment& segment, std::size_t window_len,
                              const ResampleOptions& options = {});

struct WindowPreset {
    std::string label;
    std::size_t window_len;
};

/// Menu presets. Label "150" keeps its menu name but averages 125 samples,
/// which is what two points per second means at 250 Hz.
std::vector<WindowPreset> preset_windows();

/// A preset label or a positive integer.
std::size_t resolve_window(std::string_view token);

/// Comma-separated list of window tokens; result is sorted and de-duplicated.
std::vector<std::size_t> parse_window_list(std::string_view list);

}  // namespace gazeviz
