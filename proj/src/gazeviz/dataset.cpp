#include "gazeviz/dataset.hpp"

#include "gazeviz/error.hpp"
#include "gazeviz/text.hpp"

#include <zlib.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <thread>

namespace gazeviz {

using nlohmann::json;

namespace {

constexpr int kPixelDecimals = 2;
constexpr int kSecondDecimals = 3;
constexpr int kFractionDecimals = 3;
constexpr std::size_t kMaxRowIssuesPerFile = 100;

struct Outcome {
    std::optional<ParticipantEntry> entry;
    std::vector<BuildIssue> issues;
    std::optional<BuildIssue> failure;
    std::size_t rows_skipped = 0;
    std::size_t header_lines = 0;
    std::uint64_t bytes = 0;
};

Vec2 quantize_point(const Vec2& v) { return {quantize(v.x, kPixelDecimals), quantize(v.y, kPixelDecimals)}; }

void quantize_series(ScanpathSeries& s) {
    for (auto& p : s.points) {
        p.t = quantize(p.t, kSecondDecimals);
        if (p.l) p.l = quantize_point(*p.l);
        if (p.r) p.r = quantize_point(*p.r);
        p.fused = quantize_point(p.fused);
        p.valid_fraction = quantize(p.valid_fraction, kFractionDecimals);
    }
}

Outcome process_recording(const RawRecording& rec, const BuildOptions& options) {
    Outcome out;
    const int id = rec.ref.participant_id;
    const std::string file = rec.ref.file_name;
    out.rows_skipped = rec.skipped_rows.size();
    out.header_lines = rec.header_lines_removed;
    for (std::size_t i = 0; i < rec.skipped_rows.size() && i < kMaxRowIssuesPerFile; ++i) {
        const auto& r = rec.skipped_rows[i];
        out.issues.push_back({file, id, "parse-row", "row " + std::to_string(r.row) + " (" + r.column + "): " + r.reason});
    }

    if (rec.samples.empty()) {
        out.failure = BuildIssue{file, id, "parse", "recording has no samples"};
        return out;
    }

    Segmentation seg;
    try {
        seg = extract_segments(rec, options.patterns);
    } catch (const Error& e) {
        out.failure = BuildIssue{file, id, "segment", e.what()};
        return out;
    }
    for (const auto& issue : seg.issues) {
        out.issues.push_back({file, id, "segment",
                              issue.reason + " at t=" + std::to_string(issue.time) + " ('" + issue.message + "')"});
    }

    ParticipantEntry entry;
    entry.id = id;
    for (const auto& s : seg.segments) {
        TrialData trial;
        trial.stimulus = s.stimulus;
        trial.start_time = s.start_time;
        trial.end_time = s.end_time;
        trial.sample_count = s.samples.size();
        trial.duration = quantize(segment_duration_seconds(s, options.resample.tick_rate), kSecondDecimals);
        for (auto w : options.windows) {
            auto series = window_average(id, s, w, options.resample);
            quantize_series(series);
            trial.series.emplace(w, std::move(series));
        }
        entry.trials.emplace(s.stimulus.key(), std::move(trial));
    }
    out.entry = std::move(entry);
    return out;
}

template <typename Job>
std::vector<Outcome> run_parallel(std::size_t count, unsigned threads, Job job) {
    std::vector<Outcome> results(count);
    unsigned n = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
    n = static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(count, 1)));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) results[i] = job(i);
    };
    if (n <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
    }
    return results;
}

CompactDataset merge(std::vector<Outcome> outcomes, const MetadataTable& metadata, const BuildOptions& options) {
    CompactDataset ds;
    ds.windows = options.windows;
    std::sort(ds.windows.begin(), ds.windows.end());
    ds.windows.erase(std::unique(ds.windows.begin(), ds.windows.end()), ds.windows.end());
    auto& report = ds.build_report;
    report.files_considered = outcomes.size();

    // Outcomes arrive in input order; sort by participant for a stable merge.
    std::stable_sort(outcomes.begin(), outcomes.end(), [](const Outcome& a, const Outcome& b) {
        auto key = [](const Outcome& o) {
            if (o.entry) return o.entry->id;
            return o.failure && o.failure->participant ? *o.failure->participant : 0;
        };
        return key(a) < key(b);
    });

    for (auto& o : outcomes) {
        report.rows_skipped += o.rows_skipped;
        report.header_lines_removed += o.header_lines;
        report.raw_bytes += o.bytes;
        for (auto& i : o.issues) report.segment_issues.push_back(std::move(i));
        if (o.failure) {
            report.skipped_files.push_back(std::move(*o.failure));
            continue;
        }
        if (!o.entry) continue;
        auto& entry = *o.entry;
        if (ds.participants.contains(entry.id)) {
            report.skipped_files.push_back(
                {"", entry.id, "merge", "duplicate recording for participant; first file kept"});
            continue;
        }
        if (auto it = metadata.find(entry.id); it != metadata.end()) {
            entry.metadata = it->second;
        } else {
            report.metadata_missing.push_back(entry.id);
        }
        for (const auto& [key, trial] : entry.trials) {
            report.series_count += trial.series.size();
            ds.stimuli.try_emplace(key, StimulusImage{key + options.image_extension,
                                                      static_cast<int>(options.resample.plane.width),
                                                      static_cast<int>(options.resample.plane.height)});
        }
        ds.participants.emplace(entry.id, std::move(entry));
    }
    for (const auto& [id, md] : metadata) {
        if (!ds.participants.contains(id)) report.incomplete.push_back(id);
    }
    report.participants_ok = ds.participants.size();
    if (ds.participants.empty()) {
        throw Error(ErrorCode::empty_corpus, "no participant could be processed (" +
                                                 std::to_string(report.skipped_files.size()) + " files rejected)");
    }
    return ds;
}

void validate_options(const BuildOptions& options) {
    if (options.windows.empty()) throw Error(ErrorCode::parameter, "at least one window length is required");
    for (auto w : options.windows) {
        if (w == 0) throw Error(ErrorCode::parameter, "window length must be at least 1");
    }
}

}  // namespace

double quantize(double value, int decimals) noexcept {
    const double scale = std::pow(10.0, decimals);
    const double q = std::round(value * scale) / scale;
    return q == 0.0 ? 0.0 : q;  // no negative zero
}

CompactDataset build_dataset(std::span<const RecordingRef> recordings, const MetadataTable& metadata,
                             const BuildOptions& options) {
    validate_options(options);
    if (recordings.empty()) throw Error(ErrorCode::empty_corpus, "no recordings to build from");
    auto outcomes = run_parallel(recordings.size(), options.threads, [&](std::size_t i) {
        const auto& ref = recordings[i];
        Outcome out;
        std::error_code ec;
        auto size = std::filesystem::file_size(ref.path, ec);
        try {
            out = process_recording(load_recording(ref), options);
        } catch (const Error& e) {
            out.failure = BuildIssue{ref.file_name, ref.participant_id, "parse", e.what()};
        }
        out.bytes = ec ? 0 : size;
        return out;
    });
    return merge(std::move(outcomes), metadata, options);
}

CompactDataset build_dataset_from(std::span<const RawRecording> recordings, const MetadataTable& metadata,
                                  const BuildOptions& options) {
    validate_options(options);
    if (recordings.empty()) throw Error(ErrorCode::empty_corpus, "no recordings to build from");
    auto outcomes = run_parallel(recordings.size(), options.threads,
                                 [&](std::size_t i) { return process_recording(recordings[i], options); });
    return merge(std::move(outcomes), metadata, options);
}

CompactDataset preprocess_corpus(const PreprocessRequest& request) {
    auto discovery = discover_recordings(request.input_dir, request.extension);
    LoadedMetadata md;
    if (!request.metadata_path.empty()) md = load_metadata(request.metadata_path);

    CompactDataset ds;
    if (discovery.refs.empty()) {
        throw Error(ErrorCode::empty_corpus, "no recordings found under " + request.input_dir);
    }
    ds = build_dataset(discovery.refs, md.table, request.build);
    auto& report = ds.build_report;
    std::vector<BuildIssue> discovered;
    for (const auto& s : discovery.skipped) {
        discovered.push_back({s.path.filename().string(), std::nullopt, "discover", s.reason});
    }
    report.skipped_files.insert(report.skipped_files.begin(), discovered.begin(), discovered.end());
    for (const auto& issue : md.issues) {
        report.metadata_issues.push_back({request.metadata_path, issue.id, "metadata",
                                          "row " + std::to_string(issue.row) + ": " + issue.reason});
    }
    return ds;
}

// ---------------------------------------------------------------------------
// JSON encoding

namespace {

json opt_text(const std::optional<std::string>& s) { return s ? json(*s) : json(nullptr); }

json encode_series(const ScanpathSeries& s) {
    json t = json::array(), x = json::array(), y = json::array();
    json lx = json::array(), ly = json::array(), rx = json::array(), ry = json::array();
    json valid = json::array();
    bool any_l = false, any_r = false, all_valid = true;
    for (const auto& p : s.points) {
        t.push_back(p.t);
        x.push_back(p.fused.x);
        y.push_back(p.fused.y);
        if (p.l) {
            any_l = true;
            lx.push_back(p.l->x);
            ly.push_back(p.l->y);
        } else {
            lx.push_back(nullptr);
            ly.push_back(nullptr);
        }
        if (p.r) {
            any_r = true;
            rx.push_back(p.r->x);
            ry.push_back(p.r->y);
        } else {
            rx.push_back(nullptr);
            ry.push_back(nullptr);
        }
        if (p.valid_fraction != 1.0) all_valid = false;
        valid.push_back(p.valid_fraction);
    }
    json j{{"window", s.window_len}, {"t", std::move(t)}, {"x", std::move(x)}, {"y", std::move(y)}};
    if (any_l) {
        j["lx"] = std::move(lx);
        j["ly"] = std::move(ly);
    }
    if (any_r) {
        j["rx"] = std::move(rx);
        j["ry"] = std::move(ry);
    }
    if (!all_valid) j["valid"] = std::move(valid);
    return j;
}

json encode_issue(const BuildIssue& i) {
    return {{"file", i.file},
            {"participant", i.participant ? json(*i.participant) : json(nullptr)},
            {"stage", i.stage},
            {"reason", i.reason}};
}

json encode_issues(const std::vector<BuildIssue>& v) {
    json a = json::array();
    for (const auto& i : v) a.push_back(encode_issue(i));
    return a;
}

json encode_report(const BuildReport& r) {
    return {{"files_considered", r.files_considered},
            {"participants_ok", r.participants_ok},
            {"series_count", r.series_count},
            {"rows_skipped", r.rows_skipped},
            {"header_lines_removed", r.header_lines_removed},
            {"raw_bytes", r.raw_bytes},
            {"skipped_files", encode_issues(r.skipped_files)},
            {"segment_issues", encode_issues(r.segment_issues)},
            {"metadata_issues", encode_issues(r.metadata_issues)},
            {"metadata_missing", r.metadata_missing},
            {"incomplete", r.incomplete}};
}

}  // namespace

json build_report_to_json(const BuildReport& report) { return encode_report(report); }

json metadata_to_json(const ParticipantMetadata& md) {
    auto per_trial_lang = [&] {
        json j = json::object();
        for (auto n : kAllStimulusNames) {
            const auto& l = md.experiment_languages[n];
            j[std::string(to_string(n))] = l ? json(std::string(to_string(*l))) : json(nullptr);
        }
        return j;
    };
    json responses = json::object();
    json correctness = json::object();
    for (auto n : kAllStimulusNames) {
        responses[std::string(to_string(n))] = opt_text(md.responses[n]);
        const auto& c = md.correctness[n];
        correctness[std::string(to_string(n))] = c ? json(*c) : json(nullptr);
    }
    json order = json::array();
    for (auto n : md.trial_order) order.push_back(std::string(to_string(n)));
    const auto level = md.expertise_level();
    return {{"id", md.id},
            {"age", md.age ? json(*md.age) : json(nullptr)},
            {"gender", opt_text(md.gender)},
            {"english_level", opt_text(md.english_level)},
            {"visual_aid", opt_text(md.visual_aid)},
            {"makeup", opt_text(md.makeup)},
            {"mother_tongue", opt_text(md.mother_tongue)},
            {"expertise", opt_text(md.expertise)},
            {"expertise_level", level ? json(std::string(to_string(*level))) : json(nullptr)},
            {"experiment_languages", per_trial_lang()},
            {"trial_order_text", opt_text(md.trial_order_text)},
            {"trial_order", std::move(order)},
            {"time_programming_overall", opt_text(md.time_programming_overall)},
            {"time_programming_language", opt_text(md.time_programming_language)},
            {"responses", std::move(responses)},
            {"correctness", std::move(correctness)}};
}

std::string encode(const CompactDataset& ds) {
    json stimuli = json::object();
    for (const auto& [key, img] : ds.stimuli) {
        stimuli[key] = {{"image", img.image}, {"width", img.width}, {"height", img.height}};
    }
    json participants = json::object();
    for (const auto& [id, entry] : ds.participants) {
        json trials = json::object();
        for (const auto& [key, trial] : entry.trials) {
            json series = json::object();
            for (const auto& [w, s] : trial.series) series[std::to_string(w)] = encode_series(s);
            trials[key] = {{"start_time", trial.start_time},
                           {"end_time", trial.end_time},
                           {"samples", trial.sample_count},
                           {"duration", trial.duration},
                           {"series", std::move(series)}};
        }
        participants[std::to_string(id)] = {
            {"metadata", entry.metadata ? metadata_to_json(*entry.metadata) : json(nullptr)},
            {"trials", std::move(trials)}};
    }
    json doc{{"version", ds.version},
             {"windows", ds.windows},
             {"stimuli", std::move(stimuli)},
             {"participants", std::move(participants)},
             {"build_report", encode_report(ds.build_report)}};
    return doc.dump();
}

// ---------------------------------------------------------------------------
// JSON decoding with path-carrying errors

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw Error(ErrorCode::format, (path.empty() ? std::string("/") : path) + ": " + what);
}

const json& member(const json& obj, const char* key, const std::string& path) {
    if (!obj.is_object()) fail(path, "expected object");
    auto it = obj.find(key);
    if (it == obj.end()) fail(path + "/" + key, "missing");
    return *it;
}

const json* optional_member(const json& obj, const char* key) {
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

double as_number(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected number");
    return j.get<double>();
}

std::int64_t as_integer(const json& j, const std::string& path) {
    if (!j.is_number_integer()) fail(path, "expected integer");
    return j.get<std::int64_t>();
}

std::size_t as_count(const json& j, const std::string& path) {
    auto v = as_integer(j, path);
    if (v < 0) fail(path, "expected non-negative integer");
    return static_cast<std::size_t>(v);
}

std::string as_string(const json& j, const std::string& path) {
    if (!j.is_string()) fail(path, "expected string");
    return j.get<std::string>();
}

std::optional<std::string> as_opt_string(const json& j, const std::string& path) {
    if (j.is_null()) return std::nullopt;
    return as_string(j, path);
}

const json& as_array(const json& j, const std::string& path) {
    if (!j.is_array()) fail(path, "expected array");
    return j;
}

const json& as_object(const json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "expected object");
    return j;
}

int parse_id_key(const std::string& key, const std::string& path) {
    int id = 0;
    try {
        std::size_t used = 0;
        id = std::stoi(key, &used);
        if (used != key.size() || id <= 0) fail(path, "participant key must be a positive integer");
    } catch (const std::logic_error&) {
        fail(path, "participant key must be a positive integer");
    }
    return id;
}

ScanpathSeries decode_series(const json& j, int id, const StimulusKind& kind, std::size_t window_key,
                             const std::string& path) {
    ScanpathSeries s;
    s.participant_id = id;
    s.stimulus = kind;
    s.window_len = as_count(member(j, "window", path), path + "/window");
    if (s.window_len != window_key) fail(path + "/window", "does not match its key");

    const auto& t = as_array(member(j, "t", path), path + "/t");
    const auto& x = as_array(member(j, "x", path), path + "/x");
    const auto& y = as_array(member(j, "y", path), path + "/y");
    const std::size_t n = t.size();
    auto check_len = [&](const json& a, const char* name) {
        if (a.size() != n) fail(path + "/" + name, "length differs from t");
    };
    check_len(x, "x");
    check_len(y, "y");

    auto eye_arrays = [&](const char* xn, const char* yn) -> std::pair<const json*, const json*> {
        const json* ax = optional_member(j, xn);
        const json* ay = optional_member(j, yn);
        if (!ax && !ay) return {nullptr, nullptr};
        if (!ax || !ay) fail(path, std::string("eye arrays ") + xn + "/" + yn + " must appear together");
        as_array(*ax, path + "/" + xn);
        as_array(*ay, path + "/" + yn);
        check_len(*ax, xn);
        check_len(*ay, yn);
        return {ax, ay};
    };
    const auto [lx, ly] = eye_arrays("lx", "ly");
    const auto [rx, ry] = eye_arrays("rx", "ry");
    const json* valid = optional_member(j, "valid");
    if (valid) {
        as_array(*valid, path + "/valid");
        check_len(*valid, "valid");
    }

    auto eye_at = [&](const json* ax, const json* ay, const char* xn, const char* yn,
                      std::size_t i) -> std::optional<Vec2> {
        if (!ax) return std::nullopt;
        const auto& vx = (*ax)[i];
        const auto& vy = (*ay)[i];
        if (vx.is_null() != vy.is_null()) fail(path + "/" + xn + "/" + std::to_string(i), "null mismatch");
        if (vx.is_null()) return std::nullopt;
        return Vec2{as_number(vx, path + "/" + xn + "/" + std::to_string(i)),
                    as_number(vy, path + "/" + yn + "/" + std::to_string(i))};
    };

    s.points.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto idx = "/" + std::to_string(i);
        GazePoint p;
        p.t = as_number(t[i], path + "/t" + idx);
        p.fused = {as_number(x[i], path + "/x" + idx), as_number(y[i], path + "/y" + idx)};
        p.l = eye_at(lx, ly, "lx", "ly", i);
        p.r = eye_at(rx, ry, "rx", "ry", i);
        p.valid_fraction = valid ? as_number((*valid)[i], path + "/valid" + idx) : 1.0;
        if (!(p.valid_fraction > 0.0 && p.valid_fraction <= 1.0)) fail(path + "/valid" + idx, "out of (0,1]");
        if (i > 0 && !(p.t > s.points.back().t)) fail(path + "/t" + idx, "times must increase");
        s.points.push_back(p);
    }
    return s;
}

BuildIssue decode_issue(const json& j, const std::string& path) {
    BuildIssue i;
    i.file = as_string(member(j, "file", path), path + "/file");
    const auto& p = member(j, "participant", path);
    if (!p.is_null()) i.participant = static_cast<int>(as_integer(p, path + "/participant"));
    i.stage = as_string(member(j, "stage", path), path + "/stage");
    i.reason = as_string(member(j, "reason", path), path + "/reason");
    return i;
}

std::vector<BuildIssue> decode_issues(const json& j, const std::string& path) {
    std::vector<BuildIssue> out;
    const auto& a = as_array(j, path);
    for (std::size_t i = 0; i < a.size(); ++i) out.push_back(decode_issue(a[i], path + "/" + std::to_string(i)));
    return out;
}

std::vector<int> decode_ids(const json& j, const std::string& path) {
    std::vector<int> out;
    const auto& a = as_array(j, path);
    for (std::size_t i = 0; i < a.size(); ++i) {
        out.push_back(static_cast<int>(as_integer(a[i], path + "/" + std::to_string(i))));
    }
    return out;
}

BuildReport decode_report(const json& j, const std::string& path) {
    BuildReport r;
    auto count = [&](const char* key) { return as_count(member(j, key, path), path + "/" + key); };
    r.files_considered = count("files_considered");
    r.participants_ok = count("participants_ok");
    r.series_count = count("series_count");
    r.rows_skipped = count("rows_skipped");
    r.header_lines_removed = count("header_lines_removed");
    r.raw_bytes = count("raw_bytes");
    r.skipped_files = decode_issues(member(j, "skipped_files", path), path + "/skipped_files");
    r.segment_issues = decode_issues(member(j, "segment_issues", path), path + "/segment_issues");
    r.metadata_issues = decode_issues(member(j, "metadata_issues", path), path + "/metadata_issues");
    r.metadata_missing = decode_ids(member(j, "metadata_missing", path), path + "/metadata_missing");
    r.incomplete = decode_ids(member(j, "incomplete", path), path + "/incomplete");
    return r;
}

}  // namespace

ParticipantMetadata metadata_from_json(const json& j, const std::string& path) {
    as_object(j, path);
    ParticipantMetadata md;
    md.id = static_cast<int>(as_integer(member(j, "id", path), path + "/id"));
    const auto& age = member(j, "age", path);
    if (!age.is_null()) md.age = static_cast<int>(as_integer(age, path + "/age"));
    auto text_field = [&](const char* key) { return as_opt_string(member(j, key, path), path + "/" + key); };
    md.gender = text_field("gender");
    md.english_level = text_field("english_level");
    md.visual_aid = text_field("visual_aid");
    md.makeup = text_field("makeup");
    md.mother_tongue = text_field("mother_tongue");
    md.expertise = text_field("expertise");
    md.trial_order_text = text_field("trial_order_text");
    md.time_programming_overall = text_field("time_programming_overall");
    md.time_programming_language = text_field("time_programming_language");

    const auto& order = as_array(member(j, "trial_order", path), path + "/trial_order");
    for (std::size_t i = 0; i < order.size(); ++i) {
        const auto p = path + "/trial_order/" + std::to_string(i);
        auto name = parse_stimulus_name(as_string(order[i], p));
        if (!name) fail(p, "unknown stimulus");
        md.trial_order.push_back(*name);
    }

    const auto lp = path + "/experiment_languages";
    const auto rp = path + "/responses";
    const auto cp = path + "/correctness";
    const auto& langs = as_object(member(j, "experiment_languages", path), lp);
    const auto& responses = as_object(member(j, "responses", path), rp);
    const auto& correctness = as_object(member(j, "correctness", path), cp);
    for (auto n : kAllStimulusNames) {
        const auto key = std::string(to_string(n));
        const auto& l = member(langs, key.c_str(), lp);
        if (!l.is_null()) {
            auto lang = parse_language(as_string(l, lp + "/" + key));
            if (!lang) fail(lp + "/" + key, "unknown language");
            md.experiment_languages[n] = *lang;
        }
        md.responses[n] = as_opt_string(member(responses, key.c_str(), rp), rp + "/" + key);
        const auto& c = member(correctness, key.c_str(), cp);
        if (!c.is_null()) {
            if (!c.is_boolean()) fail(cp + "/" + key, "expected boolean");
            if (!md.responses[n]) fail(cp + "/" + key, "correctness without response");
            md.correctness[n] = c.get<bool>();
        }
    }
    return md;
}

CompactDataset decode(std::string_view bytes) {
    json doc;
    try {
        doc = json::parse(bytes.begin(), bytes.end());
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::format, std::string("/: invalid JSON: ") + e.what());
    }
    as_object(doc, "");
    CompactDataset ds;
    ds.version = as_string(member(doc, "version", ""), "/version");
    if (ds.version != kDatasetVersion) {
        fail("/version", "unsupported format version '" + ds.version + "', expected '" + std::string(kDatasetVersion) + "'");
    }

    const auto& windows = as_array(member(doc, "windows", ""), "/windows");
    for (std::size_t i = 0; i < windows.size(); ++i) {
        auto w = as_count(windows[i], "/windows/" + std::to_string(i));
        if (w == 0) fail("/windows/" + std::to_string(i), "window must be positive");
        ds.windows.push_back(w);
    }
    const std::set<std::size_t> window_set(ds.windows.begin(), ds.windows.end());

    for (const auto& [key, img] : as_object(member(doc, "stimuli", ""), "/stimuli").items()) {
        const auto p = "/stimuli/" + key;
        if (!parse_stimulus_key(key)) fail(p, "unknown stimulus key");
        StimulusImage si;
        si.image = as_string(member(img, "image", p), p + "/image");
        si.width = static_cast<int>(as_integer(member(img, "width", p), p + "/width"));
        si.height = static_cast<int>(as_integer(member(img, "height", p), p + "/height"));
        ds.stimuli.emplace(key, si);
    }

    for (const auto& [key, pj] : as_object(member(doc, "participants", ""), "/participants").items()) {
        const auto p = "/participants/" + key;
        ParticipantEntry entry;
        entry.id = parse_id_key(key, p);
        const auto& mj = member(pj, "metadata", p);
        if (!mj.is_null()) {
            entry.metadata = metadata_from_json(mj, p + "/metadata");
            if (entry.metadata->id != entry.id) fail(p + "/metadata/id", "does not match participant key");
        }
        for (const auto& [skey, tj] : as_object(member(pj, "trials", p), p + "/trials").items()) {
            const auto tp = p + "/trials/" + skey;
            auto kind = parse_stimulus_key(skey);
            if (!kind) fail(tp, "unknown stimulus key");
            if (!ds.stimuli.contains(skey)) fail(tp, "stimulus not declared in /stimuli");
            TrialData trial;
            trial.stimulus = *kind;
            trial.start_time = as_integer(member(tj, "start_time", tp), tp + "/start_time");
            trial.end_time = as_integer(member(tj, "end_time", tp), tp + "/end_time");
            trial.sample_count = as_count(member(tj, "samples", tp), tp + "/samples");
            trial.duration = as_number(member(tj, "duration", tp), tp + "/duration");
            for (const auto& [wkey, sj] : as_object(member(tj, "series", tp), tp + "/series").items()) {
                const auto sp = tp + "/series/" + wkey;
                std::size_t w = 0;
                try {
                    w = static_cast<std::size_t>(std::stoul(wkey));
                } catch (const std::logic_error&) {
                    fail(sp, "window key must be an integer");
                }
                if (!window_set.contains(w)) fail(sp, "window not listed in /windows");
                trial.series.emplace(w, decode_series(sj, entry.id, *kind, w, sp));
            }
            entry.trials.emplace(skey, std::move(trial));
        }
        ds.participants.emplace(entry.id, std::move(entry));
    }
    ds.build_report = decode_report(member(doc, "build_report", ""), "/build_report");
    return ds;
}

std::size_t write_dataset(const std::string& path, const CompactDataset& dataset, bool gzip_sibling) {
    const auto bytes = encode(dataset);
    {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCode::io, "cannot write " + path);
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out) throw Error(ErrorCode::io, "write failed for " + path);
    }
    if (gzip_sibling) {
        const auto gz_path = path + ".gz";
        gzFile gz = gzopen(gz_path.c_str(), "wb9");
        if (!gz) throw Error(ErrorCode::io, "cannot write " + gz_path);
        const int written = gzwrite(gz, bytes.data(), static_cast<unsigned>(bytes.size()));
        const int closed = gzclose(gz);
        if (written != static_cast<int>(bytes.size()) || closed != Z_OK) {
            throw Error(ErrorCode::io, "gzip write failed for " + gz_path);
        }
    }
    return bytes.size();
}

CompactDataset read_dataset(const std::string& path) {
    auto raw = text::read_file(path);
    if (raw.size() >= 2 && static_cast<unsigned char>(raw[0]) == 0x1f && static_cast<unsigned char>(raw[1]) == 0x8b) {
        gzFile gz = gzopen(path.c_str(), "rb");
        if (!gz) throw Error(ErrorCode::io, "cannot open " + path);
        std::string plain;
        char buf[1 << 16];
        int n = 0;
        while ((n = gzread(gz, buf, sizeof buf)) > 0) plain.append(buf, static_cast<std::size_t>(n));
        const bool failed = n < 0;
        gzclose(gz);
        if (failed) throw Error(ErrorCode::format, "/: corrupt gzip stream in " + path);
        raw = std::move(plain);
    }
    return decode(raw);
}

json dataset_stats(const CompactDataset& ds, std::optional<std::size_t> encoded_bytes) {
    struct Acc {
        std::size_t participants = 0;
        double sum = 0.0, min = 0.0, max = 0.0;
        std::size_t samples = 0;
    };
    std::map<std::string, Acc> per_stimulus;
    std::map<std::string, std::size_t> per_language;
    std::size_t points = 0;
    for (const auto& [id, entry] : ds.participants) {
        std::set<std::string> langs;
        for (const auto& [key, trial] : entry.trials) {
            auto& a = per_stimulus[key];
            if (a.participants == 0) {
                a.min = a.max = trial.duration;
            } else {
                a.min = std::min(a.min, trial.duration);
                a.max = std::max(a.max, trial.duration);
            }
            ++a.participants;
            a.sum += trial.duration;
            a.samples += trial.sample_count;
            langs.insert(std::string(to_string(trial.stimulus.language)));
            for (const auto& [w, s] : trial.series) points += s.points.size();
        }
        for (const auto& l : langs) ++per_language[l];
    }
    json stimuli = json::object();
    for (const auto& [key, a] : per_stimulus) {
        stimuli[key] = {{"participants", a.participants},
                        {"raw_samples", a.samples},
                        {"duration_seconds",
                         {{"mean", a.sum / static_cast<double>(a.participants)}, {"min", a.min}, {"max", a.max}}}};
    }
    json size{{"raw_bytes", ds.build_report.raw_bytes}};
    const auto enc = encoded_bytes ? *encoded_bytes : encode(ds).size();
    size["encoded_bytes"] = enc;
    size["ratio"] = ds.build_report.raw_bytes
                        ? json(static_cast<double>(enc) / static_cast<double>(ds.build_report.raw_bytes))
                        : json(nullptr);
    return {{"version", ds.version},
            {"participants", ds.participants.size()},
            {"windows", ds.windows},
            {"series", ds.build_report.series_count},
            {"points", points},
            {"languages", per_language},
            {"stimuli", std::move(stimuli)},
            {"metadata_missing", ds.build_report.metadata_missing.size()},
            {"incomplete", ds.build_report.incomplete.size()},
            {"skipped_files", ds.build_report.skipped_files.size()},
            {"rows_skipped", ds.build_report.rows_skipped},
            {"size", std::move(size)}};
}

}  // namespace gazeviz
