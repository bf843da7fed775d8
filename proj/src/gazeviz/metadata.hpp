#pragma once

#include "gazeviz/segmentation.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gazeviz {

enum class ExpertiseLevel { none, low, medium, high };

std::string_view to_string(ExpertiseLevel level) noexcept;
std::optional<ExpertiseLevel> parse_expertise(std::string_view text);

template <typename T>
struct PerTrial {
    std::optional<T> rectangle;
    std::optional<T> vehicle;

    std::optional<T>& operator[](StimulusName name) { return name == StimulusName::rectangle ? rectangle : vehicle; }
    const std::optional<T>& operator[](StimulusName name) const {
        return name == StimulusName::rectangle ? rectangle : vehicle;
    }

    friend bool operator==(const PerTrial&, const PerTrial&) = default;
};

/// One metadata row. Text fields keep the recorded value verbatim; std::nullopt
/// means the cell was blank or unusable.
struct ParticipantMetadata {
    int id = 0;
    std::optional<int> age;
    std::optional<std::string> gender;
    std::optional<std::string> english_level;
    std::optional<std::string> visual_aid;
    std::optional<std::string> makeup;
    std::optional<std::string> mother_tongue;
    std::optional<std::string> expertise;
    PerTrial<CodeLanguage> experiment_languages;
    std::optional<std::string> trial_order_text;
    std::vector<StimulusName> trial_order;
    std::optional<std::string> time_programming_overall;
    std::optional<std::string> time_programming_language;
    PerTrial<std::string> responses;
    PerTrial<bool> correctness;

    std::optional<ExpertiseLevel> expertise_level() const;
    /// Leading number of the recorded text, when there is one.
    std::optional<double> years_programming_overall() const;
    std::optional<double> years_programming_language() const;

    friend bool operator==(const ParticipantMetadata&, const ParticipantMetadata&) = default;
};

using MetadataTable = std::map<int, ParticipantMetadata>;

enum class MetadataField {
    id,
    age,
    gender,
    english_level,
    visual_aid,
    makeup,
    mother_tongue,
    expertise,
    language,
    rectangle_language,
    vehicle_language,
    trial_order,
    time_programming_overall,
    time_programming_language,
    rectangle_response,
    vehicle_response,
    rectangle_correct,
    vehicle_correct,
};

std::string_view canonical_name(MetadataField field) noexcept;

/// Header aliases per field; matching is case-insensitive and whitespace-trimmed.
using AliasMap = std::map<MetadataField, std::vector<std::string>>;
AliasMap default_aliases();

struct MetadataIssue {
    std::size_t row = 0;  // 1-based line number in the file
    std::optional<int> id;
    std::string reason;
};

struct LoadedMetadata {
    MetadataTable table;
    std::vector<MetadataIssue> issues;
};

LoadedMetadata parse_metadata(std::string_view contents, const AliasMap& aliases = default_aliases());
LoadedMetadata load_metadata(const std::string& path, const AliasMap& aliases = default_aliases());

/// Comma-separated, canonical column names, quoted where needed.
std::string serialize_metadata(const MetadataTable& table);

const ParticipantMetadata& join(int id, const MetadataTable& table);

/// Splits one delimited line; double quotes group fields and "" escapes a quote.
std::vector<std::string> split_delimited(std::string_view line, char delim);

}  // namespace gazeviz
