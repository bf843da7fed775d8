#pragma once

// Raw eye-tracker corpus ingestion: file discovery, converter header removal
// and typed parsing of the tab-separated sample/message body.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gazeviz {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Vec2&, const Vec2&) = default;
};

/// Tracker clock ticks; the SMI converter writes microseconds.
using Ticks = std::int64_t;

inline constexpr double kDefaultTickRate = 1e6;
inline constexpr std::string_view kDefaultExtension = ".tsv";

struct RecordingRef {
    std::filesystem::path path;
    std::string file_name;
    int participant_id = 0;

    friend bool operator==(const RecordingRef&, const RecordingRef&) = default;
};

struct RawSample {
    Ticks time = 0;
    Vec2 l_raw;
    Vec2 r_raw;
    Vec2 l_por;
    Vec2 r_por;

    friend bool operator==(const RawSample&, const RawSample&) = default;
};

struct MessageEvent {
    Ticks time = 0;
    std::string text;

    friend bool operator==(const MessageEvent&, const MessageEvent&) = default;
};

/// A body row that could not be turned into a sample or message.
/// `row` is the 1-based line number within the body (the column header is row 1).
struct RowIssue {
    std::size_t row = 0;
    std::string column;
    std::string reason;

    friend bool operator==(const RowIssue&, const RowIssue&) = default;
};

struct RawRecording {
    RecordingRef ref;
    std::vector<RawSample> samples;
    std::vector<MessageEvent> messages;
    std::size_t header_lines_removed = 0;
    std::size_t data_rows = 0;
    std::vector<RowIssue> skipped_rows;
    /// Converter header entries ("## Key: value"), parsed opportunistically.
    std::map<std::string, std::string> header_fields;

    friend bool operator==(const RawRecording&, const RawRecording&) = default;
};

struct SkippedFile {
    std::filesystem::path path;
    std::string reason;
};

struct Discovery {
    std::vector<RecordingRef> refs;
    std::vector<SkippedFile> skipped;
};

/// Recursively finds recordings under `root`, sorted by participant id then file name.
/// Files that do not carry the extension or a leading id are listed in `skipped`.
Discovery discover_recordings(const std::filesystem::path& root,
                              std::string_view extension = kDefaultExtension);

/// Leading run of decimal digits of `file_name`.
int extract_participant_id(std::string_view file_name);

RecordingRef make_ref(const std::filesystem::path& path);

struct StrippedBody {
    std::size_t removed_count = 0;
    std::vector<std::string> body;
    std::map<std::string, std::string> header_fields;
};

/// Drops everything before the first line whose first field is "Time", and any
/// later "##" comment line.
StrippedBody strip_header(std::span<const std::string> lines);

/// Parses a body whose first line is the column header. Bad rows are skipped and
/// recorded in `skipped_rows`; a missing required column throws a schema error.
RawRecording parse_recording(const RecordingRef& ref, std::span<const std::string> body);

/// Reads, strips and parses one recording file.
RawRecording load_recording(const RecordingRef& ref);

/// Serializes samples and messages back to converter-style TSV (column header + rows).
std::string write_tsv(const RawRecording& recording);

namespace columns {
inline constexpr std::string_view time = "Time";
inline constexpr std::string_view type = "Type";
inline constexpr std::string_view l_raw_x = "L Raw X [px]";
inline constexpr std::string_view l_raw_y = "L Raw Y [px]";
inline constexpr std::string_view r_raw_x = "R Raw X [px]";
inline constexpr std::string_view r_raw_y = "R Raw Y [px]";
inline constexpr std::string_view l_por_x = "L POR X [px]";
inline constexpr std::string_view l_por_y = "L POR Y [px]";
inline constexpr std::string_view r_por_x = "R POR X [px]";
inline constexpr std::string_view r_por_y = "R POR Y [px]";
}  // namespace columns

}  // namespace gazeviz
