#include "gazeviz/gazeviz.h"

#include "gazeviz/dataset.hpp"
#include "gazeviz/error.hpp"
#include "gazeviz/service.hpp"
#include "gazeviz/text.hpp"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <memory>
#include <new>
#include <optional>
#include <string>

struct gv_dataset {
    std::shared_ptr<const gazeviz::CompactDataset> data;
    std::optional<std::size_t> encoded_bytes;
};

struct gv_service {
    std::unique_ptr<gazeviz::Service> service;
};

struct gv_response {
    gazeviz::HttpResponse response;
};

namespace {

thread_local std::string last_error;

gv_status to_status(gazeviz::ErrorCode code) {
    using gazeviz::ErrorCode;
    switch (code) {
        case ErrorCode::io: return GV_ERR_IO;
        case ErrorCode::corpus: return GV_ERR_CORPUS;
        case ErrorCode::malformed_filename: return GV_ERR_MALFORMED_FILENAME;
        case ErrorCode::unparseable_recording: return GV_ERR_UNPARSEABLE_RECORDING;
        case ErrorCode::schema: return GV_ERR_SCHEMA;
        case ErrorCode::parameter: return GV_ERR_INVALID_ARGUMENT;
        case ErrorCode::no_stimulus: return GV_ERR_NO_STIMULUS;
        case ErrorCode::empty_input: return GV_ERR_EMPTY_INPUT;
        case ErrorCode::empty_corpus: return GV_ERR_EMPTY_CORPUS;
        case ErrorCode::format: return GV_ERR_FORMAT;
        case ErrorCode::not_found: return GV_ERR_NOT_FOUND;
    }
    return GV_ERR_INTERNAL;
}

gv_status fail(gv_status status, std::string message) {
    last_error = std::move(message);
    return status;
}

template <typename F>
gv_status guarded(F&& body) {
    try {
        last_error.clear();
        return body();
    } catch (const gazeviz::Error& e) {
        return fail(to_status(e.code()), e.what());
    } catch (const std::bad_alloc&) {
        return fail(GV_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(GV_ERR_INTERNAL, e.what());
    }
}

char* dup_string(const std::string& s) {
    auto* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

bool has_text(const char* s) { return s != nullptr && *s != '\0'; }

}  // namespace

extern "C" {

const char* gv_version(void) { return "1.0.0"; }

const char* gv_status_name(gv_status status) {
    switch (status) {
        case GV_OK: return "ok";
        case GV_ERR_INVALID_ARGUMENT: return "invalid-argument";
        case GV_ERR_IO: return "io";
        case GV_ERR_CORPUS: return "corpus";
        case GV_ERR_MALFORMED_FILENAME: return "malformed-filename";
        case GV_ERR_UNPARSEABLE_RECORDING: return "unparseable-recording";
        case GV_ERR_SCHEMA: return "schema";
        case GV_ERR_NO_STIMULUS: return "no-stimulus";
        case GV_ERR_EMPTY_INPUT: return "empty-input";
        case GV_ERR_EMPTY_CORPUS: return "empty-corpus";
        case GV_ERR_FORMAT: return "format";
        case GV_ERR_NOT_FOUND: return "not-found";
        case GV_ERR_INTERNAL: return "internal";
    }
    return "unknown";
}

const char* gv_last_error(void) { return last_error.c_str(); }

void gv_string_free(char* s) { std::free(s); }

void gv_preprocess_options_init(gv_preprocess_options* options) {
    if (!options) return;
    *options = gv_preprocess_options{};
    options->windows = "50,125,250";
    options->extension = ".tsv";
}

gv_status gv_preprocess(const gv_preprocess_options* options, char** report_json) {
    return guarded([&] {
        if (!options || !has_text(options->input_dir) || !has_text(options->output_path)) {
            return fail(GV_ERR_INVALID_ARGUMENT, "input_dir and output_path are required");
        }
        gazeviz::PreprocessRequest req;
        req.input_dir = options->input_dir;
        if (has_text(options->metadata_path)) req.metadata_path = options->metadata_path;
        if (has_text(options->extension)) req.extension = options->extension;
        if (has_text(options->windows)) req.build.windows = gazeviz::parse_window_list(options->windows);
        if (has_text(options->patterns_path)) req.build.patterns = gazeviz::load_pattern_file(options->patterns_path);
        req.build.threads = options->threads;

        const auto ds = gazeviz::preprocess_corpus(req);
        const auto bytes = gazeviz::write_dataset(options->output_path, ds, options->gzip_sibling != 0);
        if (report_json) {
            auto j = gazeviz::dataset_stats(ds, bytes);
            j["output"] = options->output_path;
            j["build_report"] = gazeviz::build_report_to_json(ds.build_report);
            *report_json = dup_string(j.dump(2));
        }
        return GV_OK;
    });
}

gv_status gv_dataset_open(const char* path, gv_dataset** out) {
    return guarded([&] {
        if (!has_text(path) || !out) return fail(GV_ERR_INVALID_ARGUMENT, "path and out are required");
        auto ds = std::make_shared<const gazeviz::CompactDataset>(gazeviz::read_dataset(path));
        auto handle = std::make_unique<gv_dataset>();
        handle->data = std::move(ds);
        if (!gazeviz::text::iends_with(path, ".gz")) {
            std::error_code ec;
            auto size = std::filesystem::file_size(path, ec);
            if (!ec) handle->encoded_bytes = size;
        }
        *out = handle.release();
        return GV_OK;
    });
}

void gv_dataset_close(gv_dataset* dataset) { delete dataset; }

gv_status gv_dataset_participant_count(const gv_dataset* dataset, size_t* out) {
    if (!dataset || !out) return fail(GV_ERR_INVALID_ARGUMENT, "dataset and out are required");
    *out = dataset->data->participants.size();
    return GV_OK;
}

gv_status gv_dataset_stats(const gv_dataset* dataset, char** json_out) {
    return guarded([&] {
        if (!dataset || !json_out) return fail(GV_ERR_INVALID_ARGUMENT, "dataset and json_out are required");
        *json_out = dup_string(gazeviz::dataset_stats(*dataset->data, dataset->encoded_bytes).dump(2));
        return GV_OK;
    });
}

void gv_service_options_init(gv_service_options* options) {
    if (!options) return;
    *options = gv_service_options{};
    const gazeviz::GridConfig defaults;
    options->density_cell = defaults.cell_size;
    options->density_sigma = defaults.sigma;
}

gv_status gv_service_create(const gv_dataset* dataset, const gv_service_options* options, gv_service** out) {
    return guarded([&] {
        if (!dataset || !out) return fail(GV_ERR_INVALID_ARGUMENT, "dataset and out are required");
        gazeviz::ServiceOptions so;
        if (options) {
            if (has_text(options->stimuli_dir)) so.stimuli_dir = options->stimuli_dir;
            if (has_text(options->static_dir)) so.static_dir = options->static_dir;
            if (has_text(options->questions_path)) so.questions_path = options->questions_path;
            if (options->has_seed) so.seed = options->seed;
            if (options->density_cell > 0) so.density.cell_size = options->density_cell;
            so.density.sigma = options->density_sigma;
        }
        auto handle = std::make_unique<gv_service>();
        handle->service = std::make_unique<gazeviz::Service>(dataset->data, std::move(so));
        *out = handle.release();
        return GV_OK;
    });
}

void gv_service_destroy(gv_service* service) { delete service; }

gv_status gv_service_request(const gv_service* service, const char* target, gv_response** out) {
    return guarded([&] {
        if (!service || !target || !out) return fail(GV_ERR_INVALID_ARGUMENT, "service, target and out are required");
        auto r = std::make_unique<gv_response>();
        r->response = service->service->handle("GET", target);
        *out = r.release();
        return GV_OK;
    });
}

int gv_response_status(const gv_response* response) { return response ? response->response.status : 0; }

const char* gv_response_content_type(const gv_response* response) {
    return response ? response->response.content_type.c_str() : "";
}

const char* gv_response_body(const gv_response* response, size_t* length) {
    if (!response) {
        if (length) *length = 0;
        return "";
    }
    if (length) *length = response->response.body.size();
    return response->response.body.data();
}

const char* gv_response_header(const gv_response* response, const char* name) {
    if (!response || !name) return nullptr;
    for (const auto& [k, v] : response->response.headers) {
        if (gazeviz::text::iequals(k, name)) return v.c_str();
    }
    return nullptr;
}

void gv_response_free(gv_response* response) { delete response; }

gv_status gv_service_bind(gv_service* service, const char* host, int port, int* bound_port) {
    return guarded([&] {
        if (!service) return fail(GV_ERR_INVALID_ARGUMENT, "service is required");
        const int p = service->service->bind(has_text(host) ? host : "127.0.0.1", port);
        if (bound_port) *bound_port = p;
        return GV_OK;
    });
}

gv_status gv_service_run(gv_service* service) {
    return guarded([&] {
        if (!service) return fail(GV_ERR_INVALID_ARGUMENT, "service is required");
        service->service->run();
        return GV_OK;
    });
}

void gv_service_stop(gv_service* service) {
    if (service) service->service->stop();
}

}  // extern "C"
