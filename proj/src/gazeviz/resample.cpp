#include "gazeviz/resample.hpp"

#include "gazeviz/error.hpp"
#include "gazeviz/text.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

namespace gazeviz {

bool is_valid(const RawSample& sample, Eye eye) noexcept {
    const Vec2& p = eye == Eye::left ? sample.l_por : sample.r_por;
    return std::isfinite(p.x) && std::isfinite(p.y) && p.x > 0.0 && p.y > 0.0;
}

namespace {

Vec2 clamp_to(const Vec2& v, const PlaneSize& plane) {
    return {std::clamp(v.x, 0.0, plane.width), std::clamp(v.y, 0.0, plane.height)};
}

// Mean as first value plus mean offset: exact for constant input, and the
// offsets stay small for gaze clustered in a window.
struct EyeAccumulator {
    Vec2 origin;
    Vec2 lo;
    Vec2 hi;
    double dx = 0.0;
    double dy = 0.0;
    std::size_t n = 0;

    void add(const Vec2& p) {
        if (n == 0) origin = lo = hi = p;
        dx += p.x - origin.x;
        dy += p.y - origin.y;
        lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
        hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
        ++n;
    }
    std::optional<Vec2> mean() const {
        if (n == 0) return std::nullopt;
        const double k = static_cast<double>(n);
        return Vec2{std::clamp(origin.x + dx / k, lo.x, hi.x), std::clamp(origin.y + dy / k, lo.y, hi.y)};
    }
};

}  // namespace

ScanpathSeries window_average(int participant_id, const StimulusSegment& segment, std::size_t window_len,
                              const ResampleOptions& options) {
    if (window_len == 0) throw Error(ErrorCode::parameter, "window length must be at least 1");
    if (!(options.tick_rate > 0.0)) throw Error(ErrorCode::parameter, "tick rate must be positive");

    ScanpathSeries series;
    series.participant_id = participant_id;
    series.stimulus = segment.stimulus;
    series.window_len = window_len;

    const auto samples = segment.samples;
    series.points.reserve(samples.size() / window_len + 1);

    for (std::size_t begin = 0; begin < samples.size(); begin += window_len) {
        const std::size_t end = std::min(samples.size(), begin + window_len);
        EyeAccumulator left;
        EyeAccumulator right;
        std::size_t any_valid = 0;
        Ticks offset_sum = 0;
        for (std::size_t i = begin; i < end; ++i) {
            const auto& s = samples[i];
            offset_sum += s.time - segment.start_time;
            const bool lv = is_valid(s, Eye::left);
            const bool rv = is_valid(s, Eye::right);
            if (lv) left.add(s.l_por);
            if (rv) right.add(s.r_por);
            if (lv || rv) ++any_valid;
        }
        if (any_valid == 0) continue;

        const double count = static_cast<double>(end - begin);
        GazePoint p;
        p.t = static_cast<double>(offset_sum) / count / options.tick_rate;
        p.l = left.mean();
        p.r = right.mean();
        if (p.l && p.r) {
            p.fused = {(p.l->x + p.r->x) / 2.0, (p.l->y + p.r->y) / 2.0};
        } else {
            p.fused = p.l ? *p.l : *p.r;
        }
        if (p.l) p.l = clamp_to(*p.l, options.plane);
        if (p.r) p.r = clamp_to(*p.r, options.plane);
        p.fused = clamp_to(p.fused, options.plane);
        p.valid_fraction = static_cast<double>(any_valid) / count;
        series.points.push_back(p);
    }
    return series;
}

std::vector<WindowPreset> preset_windows() {
    return {{"50", 50}, {"150", 125}, {"250", 250}};
}

std::size_t resolve_window(std::string_view token) {
    token = text::trim(token);
    for (const auto& preset : preset_windows()) {
        if (token == preset.label) return preset.window_len;
    }
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size() || value == 0) {
        throw Error(ErrorCode::parameter, "invalid window length '" + std::string(token) + "'");
    }
    return value;
}

std::vector<std::size_t> parse_window_list(std::string_view list) {
    std::vector<std::size_t> out;
    for (auto token : text::split(list, ',')) out.push_back(resolve_window(token));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace gazeviz
