#pragma once

// Synthetic corpus generator for tests. Emits recordings in the SMI converter
// TSV layout ("##" header block, column header, SMP/MSG rows) and matching
// metadata tables.

#include "gazeviz/corpus.hpp"
#include "gazeviz/dataset.hpp"
#include "gazeviz/metadata.hpp"
#include "gazeviz/segmentation.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace gazeviz::fixture {

struct Trial {
    StimulusName name = StimulusName::rectangle;
    CodeLanguage language = CodeLanguage::java;
    double seconds = 10.0;
};

struct RecordingSpec {
    int participant_id = 1;
    std::vector<Trial> trials;
    double lead_in_seconds = 2.0;   // calibration screen before the first trial
    double question_seconds = 3.0;  // question screen after each trial
    double sample_rate = 250.0;
    double blink_rate = 0.2;        // blinks per second
    double single_eye_loss = 0.02;  // per-sample probability of losing one eye
    bool full_smi_columns = true;   // all converter columns, not just the parsed ones
    std::uint64_t seed = 1;
    Ticks start_tick = 1'000'000'000;
};

/// Two trials of `seconds` each in the same language, rectangle first.
RecordingSpec standard_spec(int id, CodeLanguage language, double seconds = 10.0, std::uint64_t seed = 0);

std::string recording_tsv(const RecordingSpec& spec);

/// Sample/message content equal to parsing recording_tsv(spec).
RawRecording recording(const RecordingSpec& spec);

std::string metadata_csv(const std::vector<RecordingSpec>& specs);

/// Writes `N_fixture.tsv` per spec into `dir` and returns the paths.
std::vector<std::filesystem::path> write_corpus(const std::filesystem::path& dir,
                                                const std::vector<RecordingSpec>& specs);

/// A file with a header block but no column-header row.
std::string headerless_tsv();
/// A parsable recording whose messages never name a stimulus.
std::string stimulus_free_tsv(int participant_id);

/// In-memory build of `specs`, with a metadata row for every id in `with_metadata`.
CompactDataset build(const std::vector<RecordingSpec>& specs, const std::vector<int>& with_metadata);

/// Writes a blank PNG per stimulus key into `dir`.
void write_stimulus_images(const std::filesystem::path& dir);
std::string questions_json();

void write_text(const std::filesystem::path& path, const std::string& contents);

/// Fresh empty directory under the system temp dir.
std::filesystem::path temp_dir(const std::string& tag);

}  // namespace gazeviz::fixture
