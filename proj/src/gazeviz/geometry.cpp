#include "gazeviz/geometry.hpp"

#include "gazeviz/error.hpp"

#include <algorithm>
#include <cmath>

namespace gazeviz {

std::string_view to_string(LineMode mode) noexcept {
    switch (mode) {
        case LineMode::linear: return "linear";
        case LineMode::linear_closed: return "linear-closed";
        case LineMode::step: return "step";
        case LineMode::monotone: return "monotone";
    }
    return "linear";
}

std::optional<LineMode> parse_line_mode(std::string_view s) {
    for (auto m : kAllLineModes) {
        if (s == to_string(m)) return m;
    }
    return std::nullopt;
}

std::vector<Vec2> knots_of(const ScanpathSeries& series) {
    std::vector<Vec2> knots;
    knots.reserve(series.points.size());
    for (const auto& p : series.points) knots.push_back(p.fused);
    return knots;
}

std::vector<double> monotone_tangents(std::span<const double> values) {
    const std::size_t n = values.size();
    std::vector<double> m(n, 0.0);
    if (n < 2) return m;

    std::vector<double> d(n - 1);
    for (std::size_t k = 0; k + 1 < n; ++k) d[k] = values[k + 1] - values[k];

    m[0] = d[0];
    m[n - 1] = d[n - 2];
    for (std::size_t k = 1; k + 1 < n; ++k) {
        if (d[k - 1] * d[k] <= 0.0) {
            m[k] = 0.0;
            continue;
        }
        const double limit = 3.0 * std::min(std::abs(d[k - 1]), std::abs(d[k]));
        const double avg = (d[k - 1] + d[k]) / 2.0;
        m[k] = std::clamp(avg, -limit, limit);
    }
    return m;
}

namespace {

// Unit-interval cubic Hermite.
double hermite(double p0, double p1, double m0, double m1, double s) {
    const double s2 = s * s;
    const double s3 = s2 * s;
    const double h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
    const double h10 = s3 - 2.0 * s2 + s;
    const double h01 = -2.0 * s3 + 3.0 * s2;
    const double h11 = s3 - s2;
    return h00 * p0 + h10 * m0 + h01 * p1 + h11 * m1;
}

// Samples one coordinate of the spline at `per_span` points per span plus the
// final knot. Values are held inside the span's knot interval and kept ordered in
// the direction of the span; both hold exactly for these tangents and only guard
// against rounding.
std::vector<double> sample_monotone(std::span<const double> values, std::size_t per_span) {
    const auto m = monotone_tangents(values);
    const std::size_t n = values.size();
    std::vector<double> out;
    out.reserve((n - 1) * per_span + 1);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const double p0 = values[k];
        const double p1 = values[k + 1];
        const double lo = std::min(p0, p1);
        const double hi = std::max(p0, p1);
        double prev = p0;
        out.push_back(p0);
        for (std::size_t j = 1; j < per_span; ++j) {
            const double s = static_cast<double>(j) / static_cast<double>(per_span);
            double v = std::clamp(hermite(p0, p1, m[k], m[k + 1], s), lo, hi);
            v = p1 >= p0 ? std::max(v, prev) : std::min(v, prev);
            out.push_back(v);
            prev = v;
        }
    }
    out.push_back(values[n - 1]);
    return out;
}

}  // namespace

Polyline interpolate(std::span<const Vec2> knots, LineMode mode, std::size_t samples_per_segment) {
    if (knots.empty()) throw Error(ErrorCode::empty_input, "cannot interpolate an empty series");
    if (samples_per_segment == 0) throw Error(ErrorCode::parameter, "samples_per_segment must be at least 1");

    Polyline out;
    const std::size_t n = knots.size();
    switch (mode) {
        case LineMode::linear:
        case LineMode::linear_closed:
            out.vertices.assign(knots.begin(), knots.end());
            for (std::size_t k = 0; k < n; ++k) out.knot_indices.push_back(k);
            if (mode == LineMode::linear_closed) out.vertices.push_back(knots.front());
            break;

        case LineMode::step:
            out.vertices.reserve(2 * n - 1);
            for (std::size_t k = 0; k < n; ++k) {
                if (k > 0) out.vertices.push_back({knots[k].x, knots[k - 1].y});
                out.knot_indices.push_back(out.vertices.size());
                out.vertices.push_back(knots[k]);
            }
            break;

        case LineMode::monotone: {
            if (n == 1) {
                out.vertices.push_back(knots.front());
                out.knot_indices.push_back(0);
                break;
            }
            std::vector<double> xs(n);
            std::vector<double> ys(n);
            for (std::size_t k = 0; k < n; ++k) {
                xs[k] = knots[k].x;
                ys[k] = knots[k].y;
            }
            const auto sx = sample_monotone(xs, samples_per_segment);
            const auto sy = sample_monotone(ys, samples_per_segment);
            out.vertices.resize(sx.size());
            for (std::size_t i = 0; i < sx.size(); ++i) out.vertices[i] = {sx[i], sy[i]};
            for (std::size_t k = 0; k < n; ++k) out.knot_indices.push_back(k * samples_per_segment);
            break;
        }
    }
    return out;
}

double path_length(const Polyline& polyline) noexcept {
    double total = 0.0;
    for (std::size_t i = 1; i < polyline.vertices.size(); ++i) {
        const auto& a = polyline.vertices[i - 1];
        const auto& b = polyline.vertices[i];
        total += std::hypot(b.x - a.x, b.y - a.y);
    }
    return total;
}

}  // namespace gazeviz
