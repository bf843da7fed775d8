#include "gazeviz/segmentation.hpp"

#include "gazeviz/error.hpp"
#include "gazeviz/text.hpp"

#include <algorithm>
#include <regex>
#include <set>

namespace gazeviz {

std::string_view to_string(StimulusName name) noexcept {
    return name == StimulusName::rectangle ? "rectangle" : "vehicle";
}

std::string_view to_string(CodeLanguage language) noexcept {
    return language == CodeLanguage::java ? "java" : "scala";
}

std::optional<StimulusName> parse_stimulus_name(std::string_view s) {
    for (auto n : kAllStimulusNames) {
        if (text::iequals(s, to_string(n))) return n;
    }
    return std::nullopt;
}

std::optional<CodeLanguage> parse_language(std::string_view s) {
    for (auto l : kAllLanguages) {
        if (text::iequals(s, to_string(l))) return l;
    }
    return std::nullopt;
}

std::string StimulusKind::key() const {
    return std::string(to_string(name)) + "_" + std::string(to_string(language));
}

std::optional<StimulusKind> parse_stimulus_key(std::string_view key) {
    auto sep = key.find('_');
    if (sep == std::string_view::npos) return std::nullopt;
    auto name = parse_stimulus_name(key.substr(0, sep));
    auto lang = parse_language(key.substr(sep + 1));
    if (!name || !lang) return std::nullopt;
    return StimulusKind{*name, *lang};
}

MatchRule MatchRule::substring(std::string pattern) {
    MatchRule r;
    r.pattern_ = std::move(pattern);
    return r;
}

MatchRule MatchRule::regex(std::string pattern) {
    MatchRule r;
    try {
        r.compiled_ = std::make_shared<const std::regex>(pattern, std::regex::ECMAScript | std::regex::icase);
    } catch (const std::regex_error& e) {
        throw Error(ErrorCode::parameter, "invalid regex '" + pattern + "': " + e.what());
    }
    r.pattern_ = std::move(pattern);
    r.is_regex_ = true;
    return r;
}

bool MatchRule::matches(std::string_view text) const {
    if (pattern_.empty()) return false;
    if (!is_regex_) return text::icontains(text, pattern_);
    return std::regex_search(text.begin(), text.end(), *compiled_);
}

PatternSet PatternSet::defaults() {
    PatternSet p;
    for (auto n : kAllStimulusNames) p.stimuli[n] = MatchRule::substring(std::string(to_string(n)));
    for (auto l : kAllLanguages) p.languages[l] = MatchRule::substring(std::string(to_string(l)));
    return p;
}

PatternSet parse_patterns(std::string_view contents) {
    PatternSet p = PatternSet::defaults();
    std::size_t line_no = 0;
    for (const auto& raw : text::split_lines(contents)) {
        ++line_no;
        // Only whole-line comments: converter messages themselves start with "# Message".
        auto line = text::trim(std::string_view(raw));
        if (line.empty() || line.starts_with('#')) continue;

        auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw Error(ErrorCode::parameter, "pattern line " + std::to_string(line_no) + ": expected key = pattern");
        }
        auto key = text::trim(line.substr(0, eq));
        auto value = text::trim(line.substr(eq + 1));

        MatchRule rule;
        if (value.starts_with("regex:")) {
            rule = MatchRule::regex(std::string(text::trim(value.substr(6))));
        } else if (value.starts_with("substring:")) {
            rule = MatchRule::substring(std::string(text::trim(value.substr(10))));
        } else {
            rule = MatchRule::substring(std::string(value));
        }
        if (rule.pattern().empty()) {
            throw Error(ErrorCode::parameter, "pattern line " + std::to_string(line_no) + ": empty pattern");
        }

        if (auto name = parse_stimulus_name(key)) {
            p.stimuli[*name] = std::move(rule);
        } else if (auto lang = parse_language(key)) {
            p.languages[*lang] = std::move(rule);
        } else {
            throw Error(ErrorCode::parameter,
                        "pattern line " + std::to_string(line_no) + ": unknown key '" + std::string(key) + "'");
        }
    }
    return p;
}

PatternSet load_pattern_file(const std::string& path) {
    return parse_patterns(text::read_file(path));
}

Segmentation extract_segments(const RawRecording& recording, const PatternSet& patterns) {
    const auto& id = recording.ref.file_name;
    if (patterns.stimuli.empty()) throw Error(ErrorCode::parameter, "no stimulus patterns configured");
    if (recording.messages.empty()) {
        throw Error(ErrorCode::no_stimulus, "recording " + id + " has no messages");
    }
    if (recording.samples.empty()) {
        throw Error(ErrorCode::no_stimulus, "recording " + id + " has no samples");
    }

    Segmentation out;
    std::set<StimulusName> seen;
    const auto& samples = recording.samples;
    const auto& messages = recording.messages;
    auto by_time = [](const RawSample& s, Ticks t) { return s.time < t; };

    for (std::size_t i = 0; i < messages.size(); ++i) {
        const auto& msg = messages[i];

        std::vector<StimulusName> hits;
        for (const auto& [name, rule] : patterns.stimuli) {
            if (rule.matches(msg.text)) hits.push_back(name);
        }
        if (hits.empty()) continue;
        if (hits.size() > 1) {
            out.issues.push_back({msg.time, msg.text, "message matches more than one stimulus"});
            continue;
        }

        std::vector<CodeLanguage> langs;
        for (const auto& [lang, rule] : patterns.languages) {
            if (rule.matches(msg.text)) langs.push_back(lang);
        }
        if (langs.size() != 1) {
            out.issues.push_back({msg.time, msg.text,
                                  langs.empty() ? "no language in stimulus message"
                                                : "ambiguous language in stimulus message"});
            continue;
        }

        const StimulusName name = hits.front();
        if (seen.contains(name)) {
            out.issues.push_back({msg.time, msg.text, "repeated onset for stimulus; first occurrence kept"});
            continue;
        }

        StimulusSegment seg;
        seg.stimulus = {name, langs.front()};
        seg.start_time = msg.time;
        seg.end_time = i + 1 < messages.size() ? messages[i + 1].time : samples.back().time + 1;
        seg.start_index = static_cast<std::size_t>(
            std::lower_bound(samples.begin(), samples.end(), seg.start_time, by_time) - samples.begin());
        seg.end_index = static_cast<std::size_t>(
            std::lower_bound(samples.begin(), samples.end(), seg.end_time, by_time) - samples.begin());
        if (seg.start_index >= seg.end_index) {
            out.issues.push_back({msg.time, msg.text, "stimulus interval contains no samples"});
            continue;
        }
        seg.samples = std::span<const RawSample>(samples).subspan(seg.start_index, seg.end_index - seg.start_index);
        seen.insert(name);
        out.segments.push_back(seg);
    }

    if (out.segments.empty()) {
        throw Error(ErrorCode::no_stimulus, "no stimulus segment found in " + id);
    }
    return out;
}

double segment_duration_seconds(const StimulusSegment& segment, double tick_rate) {
    if (!(tick_rate > 0.0)) throw Error(ErrorCode::parameter, "tick rate must be positive");
    if (segment.end_time <= segment.start_time) return 0.0;
    return static_cast<double>(segment.end_time - segment.start_time) / tick_rate;
}

}  // namespace gazeviz
