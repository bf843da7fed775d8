#include "gazeviz/service.hpp"

#include "gazeviz/error.hpp"
#include "gazeviz/png.hpp"
#include "gazeviz/text.hpp"

#include "httplib.h"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <list>
#include <mutex>
#include <random>
#include <set>
#include <unordered_map>

namespace fs = std::filesystem;

namespace gazeviz {

using nlohmann::json;

QueryParams parse_query(std::string_view query) {
    auto decode = [](std::string_view s) {
        std::string out;
        out.reserve(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] == '+') {
                out.push_back(' ');
            } else if (s[i] == '%' && i + 2 < s.size()) {
                int v = 0;
                auto [p, ec] = std::from_chars(s.data() + i + 1, s.data() + i + 3, v, 16);
                if (ec == std::errc{} && p == s.data() + i + 3) {
                    out.push_back(static_cast<char>(v));
                    i += 2;
                } else {
                    out.push_back('%');
                }
            } else {
                out.push_back(s[i]);
            }
        }
        return out;
    };
    QueryParams params;
    if (query.empty()) return params;
    for (auto part : text::split(query, '&')) {
        if (part.empty()) continue;
        auto eq = part.find('=');
        if (eq == std::string_view::npos) {
            params.emplace(decode(part), "");
        } else {
            params.emplace(decode(part.substr(0, eq)), decode(part.substr(eq + 1)));
        }
    }
    return params;
}

namespace {

struct HttpError {
    int status;
    std::string message;
    std::string parameter;
};

[[noreturn]] void bad_request(const std::string& parameter, const std::string& message) {
    throw HttpError{400, message, parameter};
}

[[noreturn]] void not_found(const std::string& message) { throw HttpError{404, message, {}}; }

HttpResponse json_response(const json& j, int status = 200) {
    HttpResponse r;
    r.status = status;
    r.body = j.dump();
    return r;
}

std::optional<std::string> param(const QueryParams& q, const std::string& key) {
    auto it = q.find(key);
    if (it == q.end() || it->second.empty()) return std::nullopt;
    return it->second;
}

std::optional<bool> parse_bool_param(const QueryParams& q, const std::string& key) {
    auto v = param(q, key);
    if (!v) return std::nullopt;
    if (*v == "true" || *v == "1") return true;
    if (*v == "false" || *v == "0") return false;
    bad_request(key, "expected true or false");
}

template <typename T>
std::optional<T> parse_number_param(const QueryParams& q, const std::string& key) {
    auto v = param(q, key);
    if (!v) return std::nullopt;
    T out{};
    auto [p, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
    if (ec != std::errc{} || p != v->data() + v->size()) bad_request(key, "expected a number");
    return out;
}

std::string window_label(std::size_t w) {
    for (const auto& p : preset_windows()) {
        if (p.window_len == w) return p.label;
    }
    return std::to_string(w);
}

std::string content_type_for(const fs::path& p) {
    const auto ext = text::to_lower(p.extension().string());
    if (ext == ".png") return "image/png";
    if (ext == ".jpg" || ext == ".jpeg") return "image/jpeg";
    if (ext == ".gif") return "image/gif";
    if (ext == ".svg") return "image/svg+xml";
    return "application/octet-stream";
}

struct ParticipantFilter {
    std::optional<CodeLanguage> language;
    std::optional<std::string> expertise;
    PerTrial<bool> correctness;
};

ParticipantFilter parse_filter(const QueryParams& q) {
    ParticipantFilter f;
    if (auto l = param(q, "language")) {
        f.language = parse_language(*l);
        if (!f.language) bad_request("language", "language must be java or scala");
    }
    f.expertise = param(q, "expertise");
    f.correctness.rectangle = parse_bool_param(q, "correct_rectangle");
    f.correctness.vehicle = parse_bool_param(q, "correct_vehicle");
    return f;
}

bool matches(const ParticipantEntry& e, const ParticipantFilter& f) {
    if (f.language) {
        bool any = std::any_of(e.trials.begin(), e.trials.end(),
                               [&](const auto& t) { return t.second.stimulus.language == *f.language; });
        if (!any) return false;
    }
    if (f.expertise) {
        if (!e.metadata || !e.metadata->expertise) return false;
        auto level = e.metadata->expertise_level();
        if (!text::iequals(*e.metadata->expertise, *f.expertise) &&
            !(level && text::iequals(to_string(*level), *f.expertise))) {
            return false;
        }
    }
    for (auto n : kAllStimulusNames) {
        if (!f.correctness[n]) continue;
        if (!e.metadata || !e.metadata->correctness[n] || *e.metadata->correctness[n] != *f.correctness[n]) {
            return false;
        }
    }
    return true;
}

json summary(const ParticipantEntry& e) {
    std::set<std::string> langs;
    json stimuli = json::array();
    for (const auto& [key, t] : e.trials) {
        langs.insert(std::string(to_string(t.stimulus.language)));
        stimuli.push_back(key);
    }
    json language = langs.size() == 1 ? json(*langs.begin()) : json("mixed");
    json correctness = json::object();
    for (auto n : kAllStimulusNames) {
        const auto c = e.metadata ? e.metadata->correctness[n] : std::nullopt;
        correctness[std::string(to_string(n))] = c ? json(*c) : json(nullptr);
    }
    return {{"id", e.id},
            {"language", std::move(language)},
            {"languages", langs},
            {"stimuli", std::move(stimuli)},
            {"expertise", e.metadata && e.metadata->expertise ? json(*e.metadata->expertise) : json(nullptr)},
            {"correctness", std::move(correctness)},
            {"metadata_missing", !e.metadata.has_value()}};
}

class DensityCache {
public:
    explicit DensityCache(std::size_t capacity) : capacity_(capacity) {}

    std::optional<std::string> get(const std::string& key) {
        std::lock_guard lock(mu_);
        auto it = index_.find(key);
        if (it == index_.end()) return std::nullopt;
        order_.splice(order_.begin(), order_, it->second);
        return it->second->second;
    }

    void put(const std::string& key, std::string value) {
        if (capacity_ == 0) return;
        std::lock_guard lock(mu_);
        if (auto it = index_.find(key); it != index_.end()) {
            order_.splice(order_.begin(), order_, it->second);
            return;
        }
        order_.emplace_front(key, std::move(value));
        index_[key] = order_.begin();
        while (order_.size() > capacity_) {
            index_.erase(order_.back().first);
            order_.pop_back();
        }
    }

private:
    std::size_t capacity_;
    std::mutex mu_;
    std::list<std::pair<std::string, std::string>> order_;
    std::unordered_map<std::string, std::list<std::pair<std::string, std::string>>::iterator> index_;
};

}  // namespace

struct Service::Impl {
    ServiceOptions options;
    json questions = json::object();
    mutable std::mutex rng_mu;
    mutable std::mt19937_64 rng;
    mutable DensityCache cache;
    httplib::Server server;
    std::mutex run_mu;
    bool running = false;
    bool stop_requested = false;

    explicit Impl(ServiceOptions opts)
        : options(std::move(opts)), rng(options.seed ? *options.seed : std::random_device{}()),
          cache(options.density_cache_entries) {}
};

Service::Service(std::shared_ptr<const CompactDataset> dataset, ServiceOptions options)
    : dataset_(std::move(dataset)), impl_(std::make_unique<Impl>(std::move(options))) {
    if (!dataset_) throw Error(ErrorCode::parameter, "service needs a dataset");
    impl_->options.density.validate();
    if (impl_->options.samples_per_segment == 0) throw Error(ErrorCode::parameter, "samples_per_segment must be >= 1");
    if (!impl_->options.questions_path.empty()) {
        try {
            impl_->questions = json::parse(text::read_file(impl_->options.questions_path));
        } catch (const json::exception& e) {
            throw Error(ErrorCode::format, "questions file is not valid JSON: " + std::string(e.what()));
        }
        if (!impl_->questions.is_object()) throw Error(ErrorCode::format, "questions file must hold a JSON object");
    }
}

Service::~Service() = default;

namespace {

const ParticipantEntry& find_participant(const CompactDataset& ds, std::string_view id_text) {
    int id = 0;
    auto [p, ec] = std::from_chars(id_text.data(), id_text.data() + id_text.size(), id);
    if (ec != std::errc{} || p != id_text.data() + id_text.size()) {
        not_found("unknown participant '" + std::string(id_text) + "'");
    }
    auto it = ds.participants.find(id);
    if (it == ds.participants.end()) not_found("unknown participant " + std::to_string(id));
    return it->second;
}

// `token` is either a full stimulus key or a bare stimulus name.
const TrialData& find_trial(const ParticipantEntry& e, std::string_view token) {
    if (auto it = e.trials.find(std::string(token)); it != e.trials.end()) return it->second;
    if (auto name = parse_stimulus_name(token)) {
        for (const auto& [key, t] : e.trials) {
            if (t.stimulus.name == *name) return t;
        }
    }
    not_found("participant " + std::to_string(e.id) + " has no stimulus '" + std::string(token) + "'");
}

std::size_t pick_window(const CompactDataset& ds, const QueryParams& q) {
    auto v = param(q, "window");
    if (!v) {
        if (ds.windows.empty()) not_found("dataset has no windows");
        return ds.windows.front();
    }
    std::size_t w = 0;
    try {
        w = resolve_window(*v);
    } catch (const Error&) {
        bad_request("window", "invalid window '" + *v + "'");
    }
    if (std::find(ds.windows.begin(), ds.windows.end(), w) == ds.windows.end()) {
        bad_request("window", "window " + *v + " was not built");
    }
    return w;
}

struct Knots {
    std::vector<Vec2> points;
    std::vector<double> times;
};

Knots select_knots(const ScanpathSeries& s, std::string_view eye) {
    Knots k;
    for (const auto& p : s.points) {
        std::optional<Vec2> v;
        if (eye == "fused") {
            v = p.fused;
        } else if (eye == "left") {
            v = p.l;
        } else {
            v = p.r;
        }
        if (!v) continue;
        k.points.push_back(*v);
        k.times.push_back(p.t);
    }
    return k;
}

json polyline_payload(const ParticipantEntry& e, const TrialData& trial, std::size_t window, LineMode mode,
                      std::size_t samples, std::string_view eye) {
    const auto& series = trial.series.at(window);
    const auto knots = select_knots(series, eye);
    Polyline line;
    if (!knots.points.empty()) line = interpolate(knots.points, mode, samples);
    json vertices = json::array();
    for (const auto& v : line.vertices) vertices.push_back({v.x, v.y});
    return {{"participant", e.id},
            {"stimulus", trial.stimulus.key()},
            {"vertices", std::move(vertices)},
            {"knot_indices", line.knot_indices},
            {"knot_times", knots.times},
            {"knot_count", knots.points.size()},
            {"path_length", path_length(line)},
            {"duration", trial.duration},
            {"meta", summary(e)}};
}

}  // namespace

HttpResponse Service::handle(std::string_view method, std::string_view target) const {
    auto q = target.find('?');
    if (q == std::string_view::npos) return handle(method, target, QueryParams{});
    return handle(method, target.substr(0, q), parse_query(target.substr(q + 1)));
}

HttpResponse Service::handle(std::string_view method, std::string_view path, const QueryParams& query) const {
    const auto& ds = *dataset_;
    const auto& opts = impl_->options;
    try {
        if (method != "GET" && method != "HEAD") {
            return json_response({{"error", "method not allowed"}, {"status", 405}}, 405);
        }
        auto parts = text::split(path, '/');
        // "/api/x/y" splits to {"", "api", "x", "y"}
        parts.erase(std::remove_if(parts.begin(), parts.end(), [](std::string_view s) { return s.empty(); }),
                    parts.end());
        if (parts.empty() || parts[0] != "api") not_found("no such endpoint");
        parts.erase(parts.begin());
        if (parts.empty()) not_found("no such endpoint");

        const auto& head = parts[0];

        if (head == "capabilities" && parts.size() == 1) {
            json windows = json::array();
            for (auto w : ds.windows) windows.push_back({{"label", window_label(w)}, {"window", w}});
            json modes = json::array();
            for (auto m : kAllLineModes) modes.push_back(std::string(to_string(m)));
            json stimuli = json::array();
            for (const auto& [key, img] : ds.stimuli) {
                stimuli.push_back({{"name", key}, {"width", img.width}, {"height", img.height}});
            }
            return json_response({{"windows", std::move(windows)},
                                  {"modes", std::move(modes)},
                                  {"stimuli", std::move(stimuli)},
                                  {"languages", {"java", "scala"}},
                                  {"eyes", {"fused", "left", "right"}},
                                  {"density", {{"cell", opts.density.cell_size}, {"sigma", opts.density.sigma}}},
                                  {"samples_per_segment", opts.samples_per_segment}});
        }

        if (head == "participants" && (parts.size() == 1 || (parts.size() == 2 && parts[1] == "random"))) {
            const auto filter = parse_filter(query);
            std::vector<const ParticipantEntry*> hits;
            for (const auto& [id, e] : ds.participants) {
                if (matches(e, filter)) hits.push_back(&e);
            }
            if (parts.size() == 1) {
                json out = json::array();
                for (const auto* e : hits) out.push_back(summary(*e));
                return json_response(out);
            }
            if (hits.empty()) not_found("no participant matches the filter");
            std::size_t pick = 0;
            {
                std::lock_guard lock(impl_->rng_mu);
                pick = std::uniform_int_distribution<std::size_t>(0, hits.size() - 1)(impl_->rng);
            }
            return json_response({{"id", hits[pick]->id}});
        }

        if (head == "scanpath" && parts.size() == 3) {
            const auto& self = find_participant(ds, parts[1]);
            const auto& trial = find_trial(self, parts[2]);
            const auto window = pick_window(ds, query);
            LineMode mode = LineMode::linear;
            if (auto m = param(query, "mode")) {
                auto parsed = parse_line_mode(*m);
                if (!parsed) bad_request("mode", "unknown line mode '" + *m + "'");
                mode = *parsed;
            }
            std::size_t samples = opts.samples_per_segment;
            if (auto s = parse_number_param<long long>(query, "samples")) {
                if (*s < 1 || *s > 1000) bad_request("samples", "samples must be in [1, 1000]");
                samples = static_cast<std::size_t>(*s);
            }
            std::string eye = param(query, "eye").value_or("fused");
            if (eye != "fused" && eye != "left" && eye != "right") bad_request("eye", "eye must be fused, left or right");

            json out{{"participant", self.id},
                     {"stimulus", trial.stimulus.key()},
                     {"window", window},
                     {"window_label", window_label(window)},
                     {"mode", std::string(to_string(mode))},
                     {"eye", eye},
                     {"self", polyline_payload(self, trial, window, mode, samples, eye)}};
            if (auto it = ds.stimuli.find(trial.stimulus.key()); it != ds.stimuli.end()) {
                out["plane"] = {{"width", it->second.width}, {"height", it->second.height}};
            }
            if (auto b = param(query, "benchmark")) {
                const auto& bench = find_participant(ds, *b);
                const auto& btrial = find_trial(bench, parts[2]);
                if (btrial.stimulus.name != trial.stimulus.name) {
                    not_found("benchmark has no stimulus '" + std::string(parts[2]) + "'");
                }
                out["benchmark"] = polyline_payload(bench, btrial, window, mode, samples, eye);
            }
            return json_response(out);
        }

        if (head == "density" && parts.size() == 3) {
            const auto& self = find_participant(ds, parts[1]);
            const auto& trial = find_trial(self, parts[2]);
            const auto window = pick_window(ds, query);
            GridConfig cfg = opts.density;
            if (auto it = ds.stimuli.find(trial.stimulus.key()); it != ds.stimuli.end()) {
                cfg.width = it->second.width;
                cfg.height = it->second.height;
            }
            if (auto c = parse_number_param<int>(query, "cell")) cfg.cell_size = *c;
            if (auto s = parse_number_param<double>(query, "sigma")) cfg.sigma = *s;
            try {
                cfg.validate();
            } catch (const Error& e) {
                bad_request(param(query, "sigma") && cfg.sigma < 0 ? "sigma" : "cell", e.what());
            }

            std::string key = std::to_string(self.id) + "|" + trial.stimulus.key() + "|" + std::to_string(window) + "|" +
                              std::to_string(cfg.cell_size) + "|" + json(cfg.sigma).dump() + "|" +
                              std::to_string(cfg.width) + "x" + std::to_string(cfg.height);
            auto png = impl_->cache.get(key);
            if (!png) {
                const auto& points = trial.series.at(window).points;
                png = encode_png(colorize(accumulate(points, cfg)));
                impl_->cache.put(key, *png);
            }
            HttpResponse r;
            r.content_type = "image/png";
            r.body = std::move(*png);
            r.headers = {{"X-Plane-Width", std::to_string(cfg.width)}, {"X-Plane-Height", std::to_string(cfg.height)}};
            return r;
        }

        if (head == "metadata" && parts.size() == 2) {
            const auto& e = find_participant(ds, parts[1]);
            if (!e.metadata) return json_response({{"id", e.id}, {"metadata_missing", true}});
            auto j = metadata_to_json(*e.metadata);
            j["metadata_missing"] = false;
            return json_response(j);
        }

        if (head == "stimuli" && parts.size() == 3) {
            const std::string name(parts[1]);
            auto it = ds.stimuli.find(name);
            if (it == ds.stimuli.end()) not_found("unknown stimulus '" + name + "'");
            const auto& img = it->second;

            if (parts[2] == "question") {
                for (const auto& k : {name, std::string(to_string(parse_stimulus_key(name)->name))}) {
                    if (auto q = impl_->questions.find(k); q != impl_->questions.end() && !q->is_null()) {
                        return json_response({{"stimulus", name}, {"question", *q}});
                    }
                }
                not_found("no question text for '" + name + "'");
            }
            if (parts[2] != "image") not_found("no such endpoint");
            if (opts.stimuli_dir.empty()) not_found("no stimulus directory configured");

            fs::path file = fs::path(opts.stimuli_dir) / img.image;
            std::error_code ec;
            if (!fs::is_regular_file(file, ec)) {
                file.clear();
                for (const char* ext : {".png", ".jpg", ".jpeg", ".gif", ".svg"}) {
                    auto candidate = fs::path(opts.stimuli_dir) / (name + ext);
                    if (fs::is_regular_file(candidate, ec)) {
                        file = candidate;
                        break;
                    }
                }
            }
            if (file.empty()) not_found("image for '" + name + "' not found");
            HttpResponse r;
            r.content_type = content_type_for(file);
            r.body = text::read_file(file.string());
            r.headers = {{"X-Plane-Width", std::to_string(img.width)},
                         {"X-Plane-Height", std::to_string(img.height)}};
            return r;
        }

        not_found("no such endpoint");
    } catch (const HttpError& e) {
        json body{{"error", e.message}, {"status", e.status}};
        if (!e.parameter.empty()) body["parameter"] = e.parameter;
        return json_response(body, e.status);
    } catch (const Error& e) {
        const int status = e.code() == ErrorCode::not_found ? 404 : e.code() == ErrorCode::parameter ? 400 : 500;
        return json_response({{"error", e.what()}, {"status", status}}, status);
    } catch (const std::exception& e) {
        return json_response({{"error", e.what()}, {"status", 500}}, 500);
    }
}

int Service::bind(const std::string& host, int port) {
    auto& server = impl_->server;
    // Small JSON replies on keep-alive connections otherwise stall on delayed ACKs.
    server.set_tcp_nodelay(true);
    server.Get("/api/.*", [this](const httplib::Request& req, httplib::Response& res) {
        QueryParams q(req.params.begin(), req.params.end());
        auto r = handle("GET", req.path, q);
        res.status = r.status;
        for (const auto& [k, v] : r.headers) res.set_header(k, v);
        res.set_content(std::move(r.body), r.content_type);
    });
    if (!impl_->options.static_dir.empty()) {
        if (!server.set_mount_point("/", impl_->options.static_dir)) {
            throw Error(ErrorCode::io, "cannot serve static directory " + impl_->options.static_dir);
        }
    }
    int bound = port;
    if (port == 0) {
        bound = server.bind_to_any_port(host);
    } else if (!server.bind_to_port(host, port)) {
        bound = -1;
    }
    if (bound < 0) throw Error(ErrorCode::io, "cannot bind " + host + ":" + std::to_string(port));
    return bound;
}

void Service::run() {
    {
        std::lock_guard lock(impl_->run_mu);
        if (impl_->stop_requested) return;
        impl_->running = true;
    }
    if (!impl_->server.listen_after_bind()) {
        throw Error(ErrorCode::io, "server stopped with an error");
    }
}

// httplib ignores stop() until its accept loop is up, so wait for it when run()
// has been entered.
void Service::stop() {
    {
        std::lock_guard lock(impl_->run_mu);
        impl_->stop_requested = true;
        if (!impl_->running) return;
    }
    impl_->server.wait_until_ready();
    impl_->server.stop();
}

}  // namespace gazeviz
