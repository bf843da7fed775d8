#pragma once

// Structural checks for the published API response schemas (docs/api.md).
// Returns an empty string when `j` conforms, otherwise the first violation.

#include "json.hpp"

#include <string>

namespace gazeviz::schema {

using nlohmann::json;

namespace detail {

inline std::string need(const json& j, const char* key, json::value_t type, const std::string& where,
                        bool nullable = false) {
    if (!j.is_object()) return where + ": not an object";
    auto it = j.find(key);
    if (it == j.end()) return where + "/" + key + ": missing";
    if (nullable && it->is_null()) return {};
    const bool number = type == json::value_t::number_float;
    const bool ok = number ? it->is_number() : (type == json::value_t::number_unsigned ? it->is_number_integer() : it->type() == type);
    return ok ? std::string() : where + "/" + key + ": wrong type";
}

#define GV_NEED(...)                                        \
    do {                                                    \
        if (auto e = detail::need(__VA_ARGS__); !e.empty()) \
            return e;                                       \
    } while (0)

using T = json::value_t;

inline std::string summary(const json& j, const std::string& w) {
    GV_NEED(j, "id", T::number_unsigned, w);
    GV_NEED(j, "language", T::string, w);
    GV_NEED(j, "languages", T::array, w);
    GV_NEED(j, "stimuli", T::array, w);
    GV_NEED(j, "expertise", T::string, w, true);
    GV_NEED(j, "correctness", T::object, w);
    GV_NEED(j, "metadata_missing", T::boolean, w);
    for (const char* s : {"rectangle", "vehicle"}) {
        const auto& c = j["correctness"];
        if (!c.contains(s) || !(c[s].is_null() || c[s].is_boolean())) return w + "/correctness/" + s + ": bad";
    }
    return {};
}

inline std::string polyline(const json& j, const std::string& w) {
    GV_NEED(j, "participant", T::number_unsigned, w);
    GV_NEED(j, "stimulus", T::string, w);
    GV_NEED(j, "vertices", T::array, w);
    GV_NEED(j, "knot_indices", T::array, w);
    GV_NEED(j, "knot_times", T::array, w);
    GV_NEED(j, "knot_count", T::number_unsigned, w);
    GV_NEED(j, "path_length", T::number_float, w);
    GV_NEED(j, "duration", T::number_float, w);
    GV_NEED(j, "meta", T::object, w);
    for (const auto& v : j["vertices"])
        if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) return w + "/vertices: bad vertex";
    if (j["knot_indices"].size() != j["knot_count"].get<std::size_t>()) return w + "/knot_indices: count mismatch";
    if (j["knot_times"].size() != j["knot_count"].get<std::size_t>()) return w + "/knot_times: count mismatch";
    return summary(j["meta"], w + "/meta");
}

}  // namespace detail

inline std::string capabilities(const json& j) {
    using detail::T;
    GV_NEED(j, "windows", T::array, "");
    GV_NEED(j, "modes", T::array, "");
    GV_NEED(j, "stimuli", T::array, "");
    GV_NEED(j, "languages", T::array, "");
    GV_NEED(j, "eyes", T::array, "");
    GV_NEED(j, "density", T::object, "");
    for (const auto& w : j["windows"]) {
        GV_NEED(w, "label", T::string, "/windows");
        GV_NEED(w, "window", T::number_unsigned, "/windows");
    }
    for (const auto& s : j["stimuli"]) {
        GV_NEED(s, "name", T::string, "/stimuli");
        GV_NEED(s, "width", T::number_unsigned, "/stimuli");
        GV_NEED(s, "height", T::number_unsigned, "/stimuli");
    }
    return {};
}

inline std::string participants(const json& j) {
    if (!j.is_array()) return "/: not an array";
    for (std::size_t i = 0; i < j.size(); ++i)
        if (auto e = detail::summary(j[i], "/" + std::to_string(i)); !e.empty()) return e;
    return {};
}

inline std::string random_pick(const json& j) {
    GV_NEED(j, "id", detail::T::number_unsigned, "");
    return {};
}

inline std::string scanpath(const json& j) {
    using detail::T;
    GV_NEED(j, "participant", T::number_unsigned, "");
    GV_NEED(j, "stimulus", T::string, "");
    GV_NEED(j, "window", T::number_unsigned, "");
    GV_NEED(j, "window_label", T::string, "");
    GV_NEED(j, "mode", T::string, "");
    GV_NEED(j, "eye", T::string, "");
    GV_NEED(j, "plane", T::object, "");
    GV_NEED(j, "self", T::object, "");
    if (auto e = detail::polyline(j["self"], "/self"); !e.empty()) return e;
    if (j.contains("benchmark")) return detail::polyline(j["benchmark"], "/benchmark");
    return {};
}

inline std::string metadata(const json& j) {
    using detail::T;
    GV_NEED(j, "id", T::number_unsigned, "");
    GV_NEED(j, "metadata_missing", T::boolean, "");
    if (j["metadata_missing"].get<bool>()) return {};
    for (const char* k : {"gender", "english_level", "visual_aid", "makeup", "mother_tongue", "expertise",
                          "expertise_level", "trial_order_text", "time_programming_overall",
                          "time_programming_language"})
        GV_NEED(j, k, T::string, "", true);
    GV_NEED(j, "age", T::number_unsigned, "", true);
    GV_NEED(j, "experiment_languages", T::object, "");
    GV_NEED(j, "trial_order", T::array, "");
    GV_NEED(j, "responses", T::object, "");
    GV_NEED(j, "correctness", T::object, "");
    return {};
}

inline std::string question(const json& j) {
    GV_NEED(j, "stimulus", detail::T::string, "");
    if (!j.contains("question")) return "/question: missing";
    return {};
}

inline std::string error(const json& j) {
    using detail::T;
    GV_NEED(j, "error", T::string, "");
    GV_NEED(j, "status", T::number_unsigned, "");
    return {};
}

#undef GV_NEED

}  // namespace gazeviz::schema
