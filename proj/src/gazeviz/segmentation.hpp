#pragma once

#include "gazeviz/corpus.hpp"

#include <compare>
#include <memory>
#include <map>
#include <optional>
#include <regex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gazeviz {

enum class StimulusName { rectangle, vehicle };
enum class CodeLanguage { java, scala };

inline constexpr StimulusName kAllStimulusNames[] = {StimulusName::rectangle, StimulusName::vehicle};
inline constexpr CodeLanguage kAllLanguages[] = {CodeLanguage::java, CodeLanguage::scala};

std::string_view to_string(StimulusName name) noexcept;
std::string_view to_string(CodeLanguage language) noexcept;
std::optional<StimulusName> parse_stimulus_name(std::string_view s);
std::optional<CodeLanguage> parse_language(std::string_view s);

struct StimulusKind {
    StimulusName name = StimulusName::rectangle;
    CodeLanguage language = CodeLanguage::java;

    /// "rectangle_java", "vehicle_scala", ...
    std::string key() const;

    friend auto operator<=>(const StimulusKind&, const StimulusKind&) = default;
};

std::optional<StimulusKind> parse_stimulus_key(std::string_view key);

/// Case-insensitive substring, or case-insensitive ECMAScript regex search.
class MatchRule {
public:
    MatchRule() = default;
    static MatchRule substring(std::string pattern);
    static MatchRule regex(std::string pattern);

    bool matches(std::string_view text) const;
    const std::string& pattern() const noexcept { return pattern_; }
    bool is_regex() const noexcept { return is_regex_; }

private:
    std::string pattern_;
    bool is_regex_ = false;
    std::shared_ptr<const std::regex> compiled_;
};

struct PatternSet {
    std::map<StimulusName, MatchRule> stimuli;
    std::map<CodeLanguage, MatchRule> languages;

    static PatternSet defaults();
};

/// Reads `key = [substring:|regex:]pattern` lines; keys are stimulus names or
/// languages, lines starting with '#' are comments. Keys not present keep their default rule.
PatternSet load_pattern_file(const std::string& path);
PatternSet parse_patterns(std::string_view contents);

struct StimulusSegment {
    StimulusKind stimulus;
    std::size_t start_index = 0;  // inclusive
    std::size_t end_index = 0;    // exclusive
    Ticks start_time = 0;
    Ticks end_time = 0;  // exclusive
    std::span<const RawSample> samples;
};

struct SegmentIssue {
    Ticks time = 0;
    std::string message;
    std::string reason;
};

struct Segmentation {
    std::vector<StimulusSegment> segments;
    std::vector<SegmentIssue> issues;
};

/// Cuts per-stimulus sample ranges. A segment opens at a matching onset message
/// and closes at the next message of any kind (or one tick past the last sample).
/// The returned spans view `recording.samples`; keep the recording alive.
/// Throws no_stimulus when nothing matched.
Segmentation extract_segments(const RawRecording& recording, const PatternSet& patterns);

double segment_duration_seconds(const StimulusSegment& segment, double tick_rate = kDefaultTickRate);

}  // namespace gazeviz
