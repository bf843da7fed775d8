#include "gazeviz/metadata.hpp"

#include "gazeviz/error.hpp"
#include "gazeviz/text.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>

namespace gazeviz {

std::string_view to_string(ExpertiseLevel level) noexcept {
    switch (level) {
        case ExpertiseLevel::none: return "none";
        case ExpertiseLevel::low: return "low";
        case ExpertiseLevel::medium: return "medium";
        case ExpertiseLevel::high: return "high";
    }
    return "none";
}

std::optional<ExpertiseLevel> parse_expertise(std::string_view text) {
    const auto t = text::to_lower(text::trim(text));
    if (t == "none" || t == "no") return ExpertiseLevel::none;
    if (t == "low" || t == "beginner" || t == "novice") return ExpertiseLevel::low;
    if (t == "medium" || t == "intermediate") return ExpertiseLevel::medium;
    if (t == "high" || t == "expert" || t == "advanced") return ExpertiseLevel::high;
    return std::nullopt;
}

namespace {

std::optional<double> leading_number(const std::optional<std::string>& s) {
    if (!s) return std::nullopt;
    auto t = text::trim(*s);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || ptr == t.data()) return std::nullopt;
    return v;
}

}  // namespace

std::optional<ExpertiseLevel> ParticipantMetadata::expertise_level() const {
    return expertise ? parse_expertise(*expertise) : std::nullopt;
}

std::optional<double> ParticipantMetadata::years_programming_overall() const {
    return leading_number(time_programming_overall);
}

std::optional<double> ParticipantMetadata::years_programming_language() const {
    return leading_number(time_programming_language);
}

std::string_view canonical_name(MetadataField field) noexcept {
    switch (field) {
        case MetadataField::id: return "id";
        case MetadataField::age: return "age";
        case MetadataField::gender: return "gender";
        case MetadataField::english_level: return "english_level";
        case MetadataField::visual_aid: return "visual_aid";
        case MetadataField::makeup: return "makeup";
        case MetadataField::mother_tongue: return "mother_tongue";
        case MetadataField::expertise: return "expertise";
        case MetadataField::language: return "language";
        case MetadataField::rectangle_language: return "rectangle_language";
        case MetadataField::vehicle_language: return "vehicle_language";
        case MetadataField::trial_order: return "trial_order";
        case MetadataField::time_programming_overall: return "time_programming_overall";
        case MetadataField::time_programming_language: return "time_programming_language";
        case MetadataField::rectangle_response: return "rectangle_response";
        case MetadataField::vehicle_response: return "vehicle_response";
        case MetadataField::rectangle_correct: return "rectangle_correct";
        case MetadataField::vehicle_correct: return "vehicle_correct";
    }
    return "";
}

AliasMap default_aliases() {
    using F = MetadataField;
    AliasMap m{
        {F::id, {"participant_id", "participant", "subject", "subject_id"}},
        {F::gender, {"sex"}},
        {F::english_level, {"english", "le_english", "english level"}},
        {F::visual_aid, {"visual aid", "glasses"}},
        {F::makeup, {"make_up", "eye_makeup"}},
        {F::mother_tongue, {"native_language", "mother tongue"}},
        {F::expertise, {"expertise_programming", "programming_expertise", "expertise_level"}},
        {F::language, {"experiment_language", "stimulus_language"}},
        {F::trial_order, {"order", "stimulus_order"}},
        {F::time_programming_overall, {"years_programming", "time_programming"}},
        {F::time_programming_language, {"years_language"}},
        {F::rectangle_response, {"response_rectangle", "answer_rectangle"}},
        {F::vehicle_response, {"response_vehicle", "answer_vehicle"}},
        {F::rectangle_correct, {"correct_rectangle", "result_rectangle"}},
        {F::vehicle_correct, {"correct_vehicle", "result_vehicle"}},
    };
    for (int f = static_cast<int>(F::id); f <= static_cast<int>(F::vehicle_correct); ++f) {
        auto field = static_cast<F>(f);
        m[field].insert(m[field].begin(), std::string(canonical_name(field)));
    }
    return m;
}

std::vector<std::string> split_delimited(std::string_view line, char delim) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == delim) {
            out.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(std::move(cur));
    return out;
}

namespace {

std::optional<std::string> cell_text(std::string_view raw) {
    auto t = text::trim(raw);
    if (t.empty() || text::iequals(t, "NA") || text::iequals(t, "N/A")) return std::nullopt;
    return std::string(t);
}

std::optional<bool> parse_bool(std::string_view s) {
    const auto t = text::to_lower(text::trim(s));
    if (t == "1" || t == "true" || t == "yes" || t == "y" || t == "correct") return true;
    if (t == "0" || t == "false" || t == "no" || t == "n" || t == "incorrect" || t == "wrong") return false;
    return std::nullopt;
}

std::vector<StimulusName> parse_order(std::string_view s) {
    std::vector<StimulusName> order;
    std::string token;
    auto flush = [&] {
        if (token.empty()) return;
        auto lower = text::to_lower(token);
        for (auto n : kAllStimulusNames) {
            if (lower.find(to_string(n)) != std::string::npos) order.push_back(n);
        }
        token.clear();
    };
    for (char c : s) {
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
            token.push_back(c);
        } else {
            flush();
        }
    }
    flush();
    return order;
}

}  // namespace

LoadedMetadata parse_metadata(std::string_view contents, const AliasMap& aliases) {
    const auto lines = text::split_lines(contents);
    auto header_it = std::find_if(lines.begin(), lines.end(),
                                  [](const std::string& l) { return !text::trim(l).empty(); });
    if (header_it == lines.end()) throw Error(ErrorCode::schema, "metadata file has no header row");

    const auto& header_line = *header_it;
    const auto tabs = std::count(header_line.begin(), header_line.end(), '\t');
    const auto commas = std::count(header_line.begin(), header_line.end(), ',');
    const char delim = tabs > 0 && tabs >= commas ? '\t' : ',';

    const auto header = split_delimited(header_line, delim);
    std::map<MetadataField, std::size_t> column_of;
    for (const auto& [field, names] : aliases) {
        for (std::size_t c = 0; c < header.size() && !column_of.contains(field); ++c) {
            for (const auto& alias : names) {
                if (text::iequals(text::trim(header[c]), text::trim(alias))) {
                    column_of[field] = c;
                    break;
                }
            }
        }
    }
    if (!column_of.contains(MetadataField::id)) throw Error(ErrorCode::schema, "metadata is missing the id column");

    LoadedMetadata out;
    const std::size_t first_row = static_cast<std::size_t>(header_it - lines.begin()) + 1;
    for (std::size_t li = first_row; li < lines.size(); ++li) {
        if (text::trim(lines[li]).empty()) continue;
        const std::size_t row = li + 1;
        const auto cells = split_delimited(lines[li], delim);
        auto get = [&](MetadataField f) -> std::optional<std::string> {
            auto it = column_of.find(f);
            if (it == column_of.end() || it->second >= cells.size()) return std::nullopt;
            return cell_text(cells[it->second]);
        };

        ParticipantMetadata md;
        {
            auto id_text = get(MetadataField::id);
            int id = 0;
            bool ok = false;
            if (id_text) {
                auto [ptr, ec] = std::from_chars(id_text->data(), id_text->data() + id_text->size(), id);
                ok = ec == std::errc{} && ptr == id_text->data() + id_text->size() && id > 0;
            }
            if (!ok) {
                out.issues.push_back({row, std::nullopt, "missing or invalid id '" + id_text.value_or("") + "'"});
                continue;
            }
            md.id = id;
        }
        if (out.table.contains(md.id)) {
            out.issues.push_back({row, md.id, "duplicate id; earlier row kept"});
            continue;
        }
        if (auto age = get(MetadataField::age)) {
            int v = 0;
            auto [ptr, ec] = std::from_chars(age->data(), age->data() + age->size(), v);
            if (ec == std::errc{} && ptr == age->data() + age->size() && v >= 0) {
                md.age = v;
            } else {
                out.issues.push_back({row, md.id, "unparseable age '" + *age + "' treated as unknown"});
            }
        }
        md.gender = get(MetadataField::gender);
        md.english_level = get(MetadataField::english_level);
        md.visual_aid = get(MetadataField::visual_aid);
        md.makeup = get(MetadataField::makeup);
        md.mother_tongue = get(MetadataField::mother_tongue);
        md.expertise = get(MetadataField::expertise);
        md.time_programming_overall = get(MetadataField::time_programming_overall);
        md.time_programming_language = get(MetadataField::time_programming_language);
        md.trial_order_text = get(MetadataField::trial_order);
        if (md.trial_order_text) md.trial_order = parse_order(*md.trial_order_text);

        const auto shared_language = get(MetadataField::language);
        for (auto name : kAllStimulusNames) {
            const bool rect = name == StimulusName::rectangle;
            auto lang_text = get(rect ? MetadataField::rectangle_language : MetadataField::vehicle_language);
            if (!lang_text) lang_text = shared_language;
            if (lang_text) {
                if (auto lang = parse_language(*lang_text)) {
                    md.experiment_languages[name] = *lang;
                } else {
                    out.issues.push_back({row, md.id, "unknown language '" + *lang_text + "'"});
                }
            }
            md.responses[name] = get(rect ? MetadataField::rectangle_response : MetadataField::vehicle_response);
            auto correct_text = get(rect ? MetadataField::rectangle_correct : MetadataField::vehicle_correct);
            if (correct_text) {
                auto b = parse_bool(*correct_text);
                if (!b) {
                    out.issues.push_back({row, md.id, "unparseable correctness '" + *correct_text + "'"});
                } else if (!md.responses[name]) {
                    out.issues.push_back({row, md.id,
                                          "correctness without a response for " + std::string(to_string(name))});
                } else {
                    md.correctness[name] = *b;
                }
            }
        }
        out.table.emplace(md.id, std::move(md));
    }
    return out;
}

LoadedMetadata load_metadata(const std::string& path, const AliasMap& aliases) {
    return parse_metadata(text::read_file(path), aliases);
}

namespace {

std::string quote_csv(std::string_view v) {
    if (v.find_first_of(",\"\t") == std::string_view::npos && text::trim(v) == v) return std::string(v);
    std::string out = "\"";
    for (char c : v) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

}  // namespace

std::string serialize_metadata(const MetadataTable& table) {
    using F = MetadataField;
    const F order[] = {F::id,
                       F::age,
                       F::gender,
                       F::english_level,
                       F::visual_aid,
                       F::makeup,
                       F::mother_tongue,
                       F::expertise,
                       F::rectangle_language,
                       F::vehicle_language,
                       F::trial_order,
                       F::time_programming_overall,
                       F::time_programming_language,
                       F::rectangle_response,
                       F::vehicle_response,
                       F::rectangle_correct,
                       F::vehicle_correct};
    std::string out;
    for (std::size_t i = 0; i < std::size(order); ++i) {
        if (i) out.push_back(',');
        out.append(canonical_name(order[i]));
    }
    out.push_back('\n');

    auto opt = [](const std::optional<std::string>& s) { return s ? quote_csv(*s) : std::string(); };
    for (const auto& [id, md] : table) {
        std::vector<std::string> cells{
            std::to_string(id),
            md.age ? std::to_string(*md.age) : std::string(),
            opt(md.gender),
            opt(md.english_level),
            opt(md.visual_aid),
            opt(md.makeup),
            opt(md.mother_tongue),
            opt(md.expertise),
            md.experiment_languages.rectangle ? std::string(to_string(*md.experiment_languages.rectangle)) : "",
            md.experiment_languages.vehicle ? std::string(to_string(*md.experiment_languages.vehicle)) : "",
            opt(md.trial_order_text),
            opt(md.time_programming_overall),
            opt(md.time_programming_language),
            opt(md.responses.rectangle),
            opt(md.responses.vehicle),
            md.correctness.rectangle ? (*md.correctness.rectangle ? "true" : "false") : "",
            md.correctness.vehicle ? (*md.correctness.vehicle ? "true" : "false") : "",
        };
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out.push_back(',');
            out.append(cells[i]);
        }
        out.push_back('\n');
    }
    return out;
}

const ParticipantMetadata& join(int id, const MetadataTable& table) {
    auto it = table.find(id);
    if (it == table.end()) throw Error(ErrorCode::not_found, "no metadata for participant " + std::to_string(id));
    return it->second;
}

}  // namespace gazeviz
