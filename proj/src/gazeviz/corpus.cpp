#include "gazeviz/corpus.hpp"

#include "gazeviz/error.hpp"
#include "gazeviz/text.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <optional>
#include <system_error>

namespace fs = std::filesystem;

namespace gazeviz {

namespace {

constexpr std::string_view kCommentSigil = "##";

std::optional<double> parse_double(std::string_view field) {
    field = text::trim(field);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size() || !std::isfinite(value)) {
        return std::nullopt;
    }
    return value;
}

std::optional<Ticks> parse_ticks(std::string_view field) {
    field = text::trim(field);
    Ticks value = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size()) return std::nullopt;
    return value;
}

void append_number(std::string& out, double v) {
    std::array<char, 32> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    out.append(buf.data(), ptr);
}

bool is_sample_type(std::string_view t) { return t == "SMP" || t == "SAMPLE"; }
bool is_message_type(std::string_view t) { return t == "MSG" || t == "MESSAGE"; }

// "## Key: value" or "## Key:\tvalue"
void parse_header_field(std::string_view line, std::map<std::string, std::string>& out) {
    line.remove_prefix(kCommentSigil.size());
    auto colon = line.find(':');
    if (colon == std::string_view::npos) return;
    auto key = text::trim(line.substr(0, colon));
    auto value = text::trim(line.substr(colon + 1));
    if (key.empty()) return;
    out.emplace(std::string(key), std::string(value));
}

}  // namespace

int extract_participant_id(std::string_view file_name) {
    std::size_t n = 0;
    while (n < file_name.size() && std::isdigit(static_cast<unsigned char>(file_name[n]))) ++n;
    if (n == 0) {
        throw Error(ErrorCode::malformed_filename,
                    "file name has no leading participant id: '" + std::string(file_name) + "'");
    }
    int id = 0;
    auto [ptr, ec] = std::from_chars(file_name.data(), file_name.data() + n, id);
    if (ec != std::errc{}) {
        throw Error(ErrorCode::malformed_filename,
                    "participant id out of range in '" + std::string(file_name) + "'");
    }
    if (id <= 0) {
        throw Error(ErrorCode::malformed_filename,
                    "participant id must be positive in '" + std::string(file_name) + "'");
    }
    return id;
}

RecordingRef make_ref(const fs::path& path) {
    RecordingRef ref;
    ref.path = path;
    ref.file_name = path.filename().string();
    ref.participant_id = extract_participant_id(ref.file_name);
    return ref;
}

Discovery discover_recordings(const fs::path& root, std::string_view extension) {
    std::error_code ec;
    if (!fs::is_directory(root, ec)) {
        throw Error(ErrorCode::corpus, "corpus directory not found or unreadable: " + root.string());
    }

    Discovery result;
    fs::recursive_directory_iterator it(root, fs::directory_options::skip_permission_denied, ec);
    if (ec) throw Error(ErrorCode::corpus, "cannot read corpus directory " + root.string() + ": " + ec.message());

    for (const auto& entry : it) {
        if (!entry.is_regular_file(ec)) continue;
        const auto name = entry.path().filename().string();
        if (!text::iends_with(name, extension)) {
            result.skipped.push_back({entry.path(), "extension is not " + std::string(extension)});
            continue;
        }
        try {
            result.refs.push_back(make_ref(entry.path()));
        } catch (const Error& e) {
            result.skipped.push_back({entry.path(), e.what()});
        }
    }

    std::sort(result.refs.begin(), result.refs.end(), [](const RecordingRef& a, const RecordingRef& b) {
        if (a.participant_id != b.participant_id) return a.participant_id < b.participant_id;
        return a.path < b.path;
    });
    std::sort(result.skipped.begin(), result.skipped.end(),
              [](const SkippedFile& a, const SkippedFile& b) { return a.path < b.path; });
    return result;
}

StrippedBody strip_header(std::span<const std::string> lines) {
    auto is_column_header = [](const std::string& line) {
        auto first = line.substr(0, line.find('\t'));
        return text::trim(first) == columns::time;
    };
    auto header = std::find_if(lines.begin(), lines.end(), is_column_header);
    if (header == lines.end()) {
        throw Error(ErrorCode::unparseable_recording, "no column-header row starting with 'Time'");
    }

    StrippedBody out;
    for (auto it = lines.begin(); it != header; ++it) {
        if (it->starts_with(kCommentSigil)) parse_header_field(*it, out.header_fields);
        ++out.removed_count;
    }
    for (auto it = header; it != lines.end(); ++it) {
        if (it->starts_with(kCommentSigil)) {
            parse_header_field(*it, out.header_fields);
            ++out.removed_count;
            continue;
        }
        out.body.push_back(*it);
    }
    return out;
}

RawRecording parse_recording(const RecordingRef& ref, std::span<const std::string> body) {
    if (body.empty()) throw Error(ErrorCode::unparseable_recording, "empty body in " + ref.file_name);

    const auto header = text::split(body.front(), '\t');
    auto find_column = [&](std::string_view name) -> std::optional<std::size_t> {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (text::trim(header[i]) == name) return i;
        }
        return std::nullopt;
    };
    auto require_column = [&](std::string_view name) {
        auto idx = find_column(name);
        if (!idx) {
            throw Error(ErrorCode::schema,
                        "missing required column '" + std::string(name) + "' in " + ref.file_name);
        }
        return *idx;
    };

    const std::size_t time_col = require_column(columns::time);
    const std::size_t type_col = require_column(columns::type);

    // Destination for each coordinate column, in sample order.
    struct CoordColumn {
        std::string_view name;
        std::optional<std::size_t> index;
        Vec2 RawSample::*eye;
        double Vec2::*axis;
    };
    std::array<CoordColumn, 8> coords{{
        {columns::l_por_x, require_column(columns::l_por_x), &RawSample::l_por, &Vec2::x},
        {columns::l_por_y, require_column(columns::l_por_y), &RawSample::l_por, &Vec2::y},
        {columns::r_por_x, require_column(columns::r_por_x), &RawSample::r_por, &Vec2::x},
        {columns::r_por_y, require_column(columns::r_por_y), &RawSample::r_por, &Vec2::y},
        {columns::l_raw_x, find_column(columns::l_raw_x), &RawSample::l_raw, &Vec2::x},
        {columns::l_raw_y, find_column(columns::l_raw_y), &RawSample::l_raw, &Vec2::y},
        {columns::r_raw_x, find_column(columns::r_raw_x), &RawSample::r_raw, &Vec2::x},
        {columns::r_raw_y, find_column(columns::r_raw_y), &RawSample::r_raw, &Vec2::y},
    }};

    RawRecording rec;
    rec.ref = ref;

    for (std::size_t i = 1; i < body.size(); ++i) {
        const std::string& line = body[i];
        if (text::trim(line).empty()) continue;
        ++rec.data_rows;
        const std::size_t row = i + 1;
        const auto fields = text::split(line, '\t');
        auto skip = [&](std::string_view column, std::string reason) {
            rec.skipped_rows.push_back({row, std::string(column), std::move(reason)});
        };

        if (type_col >= fields.size() || time_col >= fields.size()) {
            skip(columns::type, "row has too few fields");
            continue;
        }
        const auto type = text::trim(fields[type_col]);
        auto time = parse_ticks(fields[time_col]);
        if (!time) {
            skip(columns::time, "non-integer timestamp '" + std::string(fields[time_col]) + "'");
            continue;
        }

        if (is_message_type(type)) {
            std::string payload;
            std::size_t last_nonempty = type_col;
            for (std::size_t f = type_col + 1; f < fields.size(); ++f) {
                if (!text::trim(fields[f]).empty()) last_nonempty = f;
            }
            for (std::size_t f = type_col + 1; f <= last_nonempty; ++f) {
                if (f > type_col + 1) payload.push_back('\t');
                payload.append(fields[f]);
            }
            if (text::trim(payload).empty()) {
                skip(columns::type, "message row without text");
                continue;
            }
            if (!rec.messages.empty() && *time < rec.messages.back().time) {
                skip(columns::time, "message timestamp goes backwards");
                continue;
            }
            rec.messages.push_back({*time, std::move(payload)});
        } else if (is_sample_type(type)) {
            RawSample s;
            s.time = *time;
            bool ok = true;
            for (const auto& c : coords) {
                if (!c.index) continue;
                if (*c.index >= fields.size()) {
                    skip(c.name, "missing value");
                    ok = false;
                    break;
                }
                auto v = parse_double(fields[*c.index]);
                if (!v) {
                    skip(c.name, "non-numeric value '" + std::string(fields[*c.index]) + "'");
                    ok = false;
                    break;
                }
                (s.*c.eye).*c.axis = *v;
            }
            if (!ok) continue;
            if (!rec.samples.empty() && s.time < rec.samples.back().time) {
                skip(columns::time, "sample timestamp goes backwards");
                continue;
            }
            rec.samples.push_back(s);
        } else {
            skip(columns::type, "unknown row type '" + std::string(type) + "'");
        }
    }
    return rec;
}

RawRecording load_recording(const RecordingRef& ref) {
    const auto lines = text::split_lines(text::read_file(ref.path.string()));
    if (lines.empty()) throw Error(ErrorCode::unparseable_recording, "empty file " + ref.file_name);
    auto stripped = strip_header(lines);
    auto rec = parse_recording(ref, stripped.body);
    rec.header_lines_removed = stripped.removed_count;
    rec.header_fields = std::move(stripped.header_fields);
    return rec;
}

std::string write_tsv(const RawRecording& recording) {
    std::string out;
    out.reserve(64 + recording.samples.size() * 96);
    out.append(columns::time).append("\t").append(columns::type);
    for (auto name : {columns::l_raw_x, columns::l_raw_y, columns::r_raw_x, columns::r_raw_y,
                      columns::l_por_x, columns::l_por_y, columns::r_por_x, columns::r_por_y}) {
        out.push_back('\t');
        out.append(name);
    }
    out.push_back('\n');

    auto write_sample = [&](const RawSample& s) {
        out.append(std::to_string(s.time)).append("\tSMP");
        for (double v : {s.l_raw.x, s.l_raw.y, s.r_raw.x, s.r_raw.y, s.l_por.x, s.l_por.y, s.r_por.x, s.r_por.y}) {
            out.push_back('\t');
            append_number(out, v);
        }
        out.push_back('\n');
    };
    auto write_message = [&](const MessageEvent& m) {
        out.append(std::to_string(m.time)).append("\tMSG\t").append(m.text).push_back('\n');
    };

    std::size_t si = 0;
    std::size_t mi = 0;
    while (si < recording.samples.size() || mi < recording.messages.size()) {
        bool take_message = mi < recording.messages.size() &&
                            (si == recording.samples.size() ||
                             recording.messages[mi].time <= recording.samples[si].time);
        if (take_message) {
            write_message(recording.messages[mi++]);
        } else {
            write_sample(recording.samples[si++]);
        }
    }
    return out;
}

}  // namespace gazeviz
