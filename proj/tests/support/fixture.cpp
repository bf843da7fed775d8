#include "fixture.hpp"

#include "gazeviz/density.hpp"
#include "gazeviz/png.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <unistd.h>

namespace fs = std::filesystem;

namespace gazeviz::fixture {

namespace {

const char* kFullColumns[] = {
    "Time", "Type", "Trial", "L Raw X [px]", "L Raw Y [px]", "R Raw X [px]", "R Raw Y [px]",
    "L Dia X [px]", "L Dia Y [px]", "L Mapped Diameter [mm]", "R Dia X [px]", "R Dia Y [px]",
    "R Mapped Diameter [mm]", "L CR1 X [px]", "L CR1 Y [px]", "L CR2 X [px]", "L CR2 Y [px]",
    "R CR1 X [px]", "R CR1 Y [px]", "R CR2 X [px]", "R CR2 Y [px]", "L POR X [px]", "L POR Y [px]",
    "R POR X [px]", "R POR Y [px]", "Timing", "L Validity", "R Validity", "Pupil Confidence",
    "L Plane", "R Plane", "L EPOS X", "L EPOS Y", "L EPOS Z", "R EPOS X", "R EPOS Y", "R EPOS Z",
    "L GVEC X", "L GVEC Y", "L GVEC Z", "R GVEC X", "R GVEC Y", "R GVEC Z", "Frame", "Aux1"};

const char* kShortColumns[] = {"Time", "Type", "Trial", "L Raw X [px]", "L Raw Y [px]", "R Raw X [px]",
                               "R Raw Y [px]", "L POR X [px]", "L POR Y [px]", "R POR X [px]", "R POR Y [px]"};

struct Event {
    Ticks time;
    bool is_message;
    std::string text;
    RawSample sample;
};

std::string fmt2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

// Rounds like the %.2f text the file carries, so in-memory and parsed values agree.
double round2(double v) { return std::stod(fmt2(v)); }

std::vector<Event> generate(const RecordingSpec& spec) {
    std::mt19937_64 rng(spec.seed * 7919 + static_cast<std::uint64_t>(spec.participant_id));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> jitter(0.0, 4.0);

    const auto step = static_cast<Ticks>(std::llround(1e6 / spec.sample_rate));
    auto ticks_for = [&](double seconds) { return static_cast<Ticks>(std::llround(seconds * spec.sample_rate)) * step; };

    std::vector<std::pair<Ticks, std::string>> messages;
    Ticks cursor = spec.start_tick;
    messages.emplace_back(cursor, "# Message: calibration_validation");
    cursor += ticks_for(spec.lead_in_seconds);
    for (const auto& t : spec.trials) {
        const std::string key = std::string(to_string(t.name)) + "_" + std::string(to_string(t.language));
        messages.emplace_back(cursor, "# Message: " + key + ".jpg");
        cursor += ticks_for(t.seconds);
        messages.emplace_back(cursor, "# Message: question_screen_" + std::to_string(&t - spec.trials.data() + 1) + ".jpg");
        cursor += ticks_for(spec.question_seconds);
    }
    const Ticks end = cursor;

    std::vector<Event> events;
    std::size_t next_msg = 0;

    // Fixation/saccade walk over the code area.
    Vec2 target{600, 400};
    int dwell = 0;
    int blink_left = 0;
    const double blink_p = spec.blink_rate / spec.sample_rate;
    for (Ticks t = spec.start_tick; t < end; t += step) {
        while (next_msg < messages.size() && messages[next_msg].first <= t) {
            events.push_back({messages[next_msg].first, true, messages[next_msg].second, {}});
            ++next_msg;
        }
        if (dwell <= 0) {
            target = {150.0 + unit(rng) * 1500.0, 100.0 + unit(rng) * 850.0};
            dwell = 40 + static_cast<int>(unit(rng) * 110.0);
        }
        --dwell;
        if (blink_left == 0 && unit(rng) < blink_p) blink_left = 20 + static_cast<int>(unit(rng) * 30.0);

        RawSample s;
        s.time = t;
        auto clamp_plane = [](Vec2 v) { return Vec2{std::clamp(v.x, 1.0, 1919.0), std::clamp(v.y, 1.0, 1079.0)}; };
        Vec2 l = clamp_plane({target.x - 4.0 + jitter(rng), target.y + jitter(rng)});
        Vec2 r = clamp_plane({target.x + 4.0 + jitter(rng), target.y + 2.0 + jitter(rng)});
        if (blink_left > 0) {
            --blink_left;
            l = r = {0.0, 0.0};
        } else if (unit(rng) < spec.single_eye_loss) {
            (unit(rng) < 0.5 ? l : r) = {0.0, 0.0};
        }
        s.l_por = {round2(l.x), round2(l.y)};
        s.r_por = {round2(r.x), round2(r.y)};
        s.l_raw = {round2(300.0 + l.x / 20.0), round2(250.0 + l.y / 20.0)};
        s.r_raw = {round2(420.0 + r.x / 20.0), round2(252.0 + r.y / 20.0)};
        events.push_back({t, false, {}, s});
    }
    while (next_msg < messages.size()) {
        events.push_back({messages[next_msg].first, true, messages[next_msg].second, {}});
        ++next_msg;
    }
    return events;
}

std::string header_block(const RecordingSpec& spec, std::size_t samples) {
    std::ostringstream h;
    h << "## [BeGaze]\n"
      << "## Converted from:\tC:\\EMIP\\" << spec.participant_id << "_ET.idf\n"
      << "## Date:\t03.06.2019 10:14:22\n"
      << "## Version:\tIDF Converter 3.0.20\n"
      << "## IDF Version:\t9\n"
      << "## Sample Rate:\t" << static_cast<int>(spec.sample_rate) << "\n"
      << "## Separator Type:\tMsg\n"
      << "## Trial Count:\t1\n"
      << "## Uses Plane File:\tFalse\n"
      << "## Number of Samples:\t" << samples << "\n"
      << "## Reversed:\tnone\n"
      << "## [Run]\n"
      << "## Subject:\t" << spec.participant_id << "\n"
      << "## Description:\tEMIP\n"
      << "## [Calibration]\n"
      << "## Calibration Area:\t1920\t1080\n"
      << "## Calibration Point 0:\tPosition(960;540)\n"
      << "## Calibration Point 1:\tPosition(192;108)\n"
      << "## Calibration Point 2:\tPosition(1728;108)\n"
      << "## Calibration Point 3:\tPosition(192;972)\n"
      << "## Calibration Point 4:\tPosition(1728;972)\n"
      << "## [Geometry]\n"
      << "## Stimulus Dimension [mm]:\t340\t190\n"
      << "## Head Distance [mm]:\t700\n"
      << "## \n";
    return h.str();
}

}  // namespace

RecordingSpec standard_spec(int id, CodeLanguage language, double seconds, std::uint64_t seed) {
    RecordingSpec s;
    s.participant_id = id;
    s.seed = seed ? seed : static_cast<std::uint64_t>(id) * 31 + 7;
    s.trials = {{StimulusName::rectangle, language, seconds}, {StimulusName::vehicle, language, seconds}};
    return s;
}

std::string recording_tsv(const RecordingSpec& spec) {
    const auto events = generate(spec);
    const std::size_t n_samples =
        static_cast<std::size_t>(std::count_if(events.begin(), events.end(), [](const Event& e) { return !e.is_message; }));

    std::string out = header_block(spec, n_samples);
    const auto& cols = spec.full_smi_columns ? std::vector<std::string>(std::begin(kFullColumns), std::end(kFullColumns))
                                             : std::vector<std::string>(std::begin(kShortColumns), std::end(kShortColumns));
    for (std::size_t i = 0; i < cols.size(); ++i) {
        if (i) out.push_back('\t');
        out += cols[i];
    }
    out.push_back('\n');

    std::mt19937_64 aux(spec.seed + 99);
    std::uniform_real_distribution<double> noise(-1.0, 1.0);
    std::size_t frame = 0;
    for (const auto& e : events) {
        if (e.is_message) {
            out += std::to_string(e.time) + "\tMSG\t1\t" + e.text + "\n";
            continue;
        }
        const auto& s = e.sample;
        const bool lv = s.l_por.x > 0;
        const bool rv = s.r_por.x > 0;
        std::string row = std::to_string(s.time) + "\tSMP\t1\t" + fmt2(s.l_raw.x) + "\t" + fmt2(s.l_raw.y) + "\t" +
                          fmt2(s.r_raw.x) + "\t" + fmt2(s.r_raw.y);
        if (spec.full_smi_columns) {
            const double ld = lv ? 14.0 + noise(aux) : 0.0;
            const double rd = rv ? 14.2 + noise(aux) : 0.0;
            for (double v : {ld, ld, ld / 4.0, rd, rd, rd / 4.0}) row += "\t" + fmt2(v);
            for (int k = 0; k < 8; ++k) row += "\t" + fmt2(k < 4 ? s.l_raw.x + 12.0 + noise(aux) : s.r_raw.x - 12.0 + noise(aux));
        }
        row += "\t" + fmt2(s.l_por.x) + "\t" + fmt2(s.l_por.y) + "\t" + fmt2(s.r_por.x) + "\t" + fmt2(s.r_por.y);
        if (spec.full_smi_columns) {
            row += "\t" + std::to_string(frame % 3 == 0 ? 2 : 1);
            row += std::string("\t") + (lv ? "1" : "0") + "\t" + (rv ? "1" : "0") + "\t1\t-1\t-1";
            for (double v : {-31.5, 12.2, 652.0, 31.9, 12.4, 651.3}) row += "\t" + fmt2(v + noise(aux));
            for (double v : {0.05, 0.12, 0.99, -0.04, 0.12, 0.99}) row += "\t" + fmt2(v + noise(aux) / 100.0);
            row += "\t" + std::to_string(frame / 15 / 60 / 60) + ":" + std::to_string(frame / 15 / 60 % 60) + ":" +
                   std::to_string(frame / 15 % 60) + ":" + std::to_string(frame % 15) + "\t0";
        }
        ++frame;
        out += row;
        out.push_back('\n');
    }
    return out;
}

RawRecording recording(const RecordingSpec& spec) {
    RawRecording rec;
    rec.ref.participant_id = spec.participant_id;
    rec.ref.file_name = std::to_string(spec.participant_id) + "_fixture.tsv";
    rec.ref.path = rec.ref.file_name;
    for (auto& e : generate(spec)) {
        if (e.is_message) {
            rec.messages.push_back({e.time, "1\t" + e.text});
        } else {
            rec.samples.push_back(e.sample);
        }
        ++rec.data_rows;
    }
    return rec;
}

std::string metadata_csv(const std::vector<RecordingSpec>& specs) {
    std::string out =
        "id,age,gender,english_level,visual_aid,makeup,mother_tongue,expertise,language,order,"
        "time_programming_overall,time_programming_language,rectangle_response,vehicle_response,"
        "rectangle_correct,vehicle_correct\n";
    const char* genders[] = {"female", "male", "other"};
    const char* levels[] = {"none", "low", "medium", "high"};
    for (const auto& s : specs) {
        const int id = s.participant_id;
        const auto lang = s.trials.empty() ? CodeLanguage::java : s.trials.front().language;
        std::string order;
        for (const auto& t : s.trials) order += (order.empty() ? "" : ";") + std::string(to_string(t.name));
        out += std::to_string(id) + "," + std::to_string(20 + id % 25) + "," + genders[id % 3] + "," +
               (id % 2 ? "fluent" : "intermediate") + "," + (id % 4 == 0 ? "glasses" : "none") + "," +
               (id % 5 == 0 ? "yes" : "no") + "," + (id % 3 == 0 ? "German" : "English") + "," + levels[id % 4] +
               "," + std::string(to_string(lang)) + ",\"" + order + "\"," + std::to_string(1 + id % 10) + " years," +
               std::to_string(id % 6) + "," + "A" + "," + (id % 2 ? "B" : "C") + "," + "true" + "," +
               (id % 3 == 0 ? "true" : "false") + "\n";
    }
    return out;
}

void write_text(const fs::path& path, const std::string& contents) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << contents;
}

std::vector<fs::path> write_corpus(const fs::path& dir, const std::vector<RecordingSpec>& specs) {
    std::vector<fs::path> paths;
    for (const auto& s : specs) {
        auto p = dir / (std::to_string(s.participant_id) + "_fixture.tsv");
        write_text(p, recording_tsv(s));
        paths.push_back(p);
    }
    return paths;
}

std::string headerless_tsv() {
    return "## [BeGaze]\n## Version:\tIDF Converter 3.0.20\n## Sample Rate:\t250\n";
}

std::string stimulus_free_tsv(int participant_id) {
    RecordingSpec s;
    s.participant_id = participant_id;
    s.trials = {};
    s.lead_in_seconds = 5.0;
    return recording_tsv(s);
}

CompactDataset build(const std::vector<RecordingSpec>& specs, const std::vector<int>& with_metadata) {
    std::vector<RawRecording> recs;
    std::vector<RecordingSpec> md_specs;
    for (const auto& s : specs) {
        recs.push_back(recording(s));
        if (std::find(with_metadata.begin(), with_metadata.end(), s.participant_id) != with_metadata.end())
            md_specs.push_back(s);
    }
    const auto table = parse_metadata(metadata_csv(md_specs)).table;
    return build_dataset_from(recs, table, {});
}

void write_stimulus_images(const fs::path& dir) {
    Image img{1920, 1080, std::vector<std::uint8_t>(1920u * 1080u * 4u, 255)};
    const auto bytes = encode_png(img);
    for (auto n : kAllStimulusNames)
        for (auto l : kAllLanguages) write_text(dir / (StimulusKind{n, l}.key() + ".png"), bytes);
}

std::string questions_json() {
    return R"({"rectangle": {"text": "What does the program print?", "options": ["A", "B", "C", "D"]},)"
           R"( "vehicle": {"text": "Which statement about the program is true?", "options": ["A", "B", "C", "D"]}})";
}

fs::path temp_dir(const std::string& tag) {
    static std::atomic<int> counter{0};
    auto dir = fs::temp_directory_path() /
               ("gazeviz_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace gazeviz::fixture
