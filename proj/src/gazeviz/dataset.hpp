#pragma once

// The compact serving dataset: every participant's resampled scanpaths at all
// configured windows plus metadata, encoded as one JSON document.

#include "gazeviz/corpus.hpp"
#include "gazeviz/metadata.hpp"
#include "gazeviz/resample.hpp"
#include "gazeviz/segmentation.hpp"

#include "json.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gazeviz {

inline constexpr std::string_view kDatasetVersion = "gazeviz-dataset/1";
inline constexpr std::string_view kDatasetExtension = ".gaze.json";

struct StimulusImage {
    std::string image;
    int width = 1920;
    int height = 1080;

    friend bool operator==(const StimulusImage&, const StimulusImage&) = default;
};

struct TrialData {
    StimulusKind stimulus;
    Ticks start_time = 0;
    Ticks end_time = 0;
    std::size_t sample_count = 0;
    double duration = 0.0;  // seconds
    std::map<std::size_t, ScanpathSeries> series;  // keyed by window length

    friend bool operator==(const TrialData&, const TrialData&) = default;
};

struct ParticipantEntry {
    int id = 0;
    std::optional<ParticipantMetadata> metadata;  // nullopt: metadata missing
    std::map<std::string, TrialData> trials;      // keyed by StimulusKind::key()

    friend bool operator==(const ParticipantEntry&, const ParticipantEntry&) = default;
};

struct BuildIssue {
    std::string file;
    std::optional<int> participant;
    std::string stage;  // discover, parse, segment, metadata, ...
    std::string reason;

    friend bool operator==(const BuildIssue&, const BuildIssue&) = default;
};

struct BuildReport {
    std::size_t files_considered = 0;
    std::size_t participants_ok = 0;
    std::size_t series_count = 0;
    std::size_t rows_skipped = 0;
    std::size_t header_lines_removed = 0;
    std::uint64_t raw_bytes = 0;
    std::vector<BuildIssue> skipped_files;
    std::vector<BuildIssue> segment_issues;
    std::vector<BuildIssue> metadata_issues;
    std::vector<int> metadata_missing;  // recording present, no metadata row
    std::vector<int> incomplete;        // metadata row present, no usable recording

    friend bool operator==(const BuildReport&, const BuildReport&) = default;
};

struct CompactDataset {
    std::string version = std::string(kDatasetVersion);
    std::vector<std::size_t> windows;
    std::map<std::string, StimulusImage> stimuli;
    std::map<int, ParticipantEntry> participants;
    BuildReport build_report;

    friend bool operator==(const CompactDataset&, const CompactDataset&) = default;
};

struct BuildOptions {
    std::vector<std::size_t> windows = {50, 125, 250};
    PatternSet patterns = PatternSet::defaults();
    ResampleOptions resample;
    std::string image_extension = ".png";
    unsigned threads = 0;  // 0: hardware concurrency
};

/// Rounds to `decimals` places; applied to stored values before encoding so a
/// decoded dataset equals the built one exactly.
double quantize(double value, int decimals) noexcept;

/// Loads, segments and resamples every recording. Failures land in the build
/// report. Throws empty_corpus when no participant survives.
CompactDataset build_dataset(std::span<const RecordingRef> recordings, const MetadataTable& metadata,
                             const BuildOptions& options = {});

/// Same as build_dataset for recordings that are already parsed.
CompactDataset build_dataset_from(std::span<const RawRecording> recordings, const MetadataTable& metadata,
                                  const BuildOptions& options = {});

struct PreprocessRequest {
    std::string input_dir;
    std::string metadata_path;  // empty: no metadata
    std::string extension = std::string(kDefaultExtension);
    BuildOptions build;
};

/// discover + load metadata + build, with discovery and metadata problems merged
/// into the build report.
CompactDataset preprocess_corpus(const PreprocessRequest& request);

std::string encode(const CompactDataset& dataset);
/// Throws format errors carrying the JSON path of the offending node.
CompactDataset decode(std::string_view bytes);

/// Writes the dataset, plus a gzip sibling (`path` + ".gz") when requested.
/// Returns the number of bytes of the plain encoding.
std::size_t write_dataset(const std::string& path, const CompactDataset& dataset, bool gzip_sibling = false);
/// Reads a plain or gzip-compressed dataset file.
CompactDataset read_dataset(const std::string& path);

nlohmann::json build_report_to_json(const BuildReport& report);
nlohmann::json metadata_to_json(const ParticipantMetadata& metadata);
ParticipantMetadata metadata_from_json(const nlohmann::json& j, const std::string& path = "/metadata");

/// Participant counts, per-stimulus duration summaries and a size report.
nlohmann::json dataset_stats(const CompactDataset& dataset, std::optional<std::size_t> encoded_bytes = {});

}  // namespace gazeviz
