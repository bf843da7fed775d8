// Command-line front end: preprocess a raw corpus, inspect a dataset, or serve it.

#include "gazeviz/gazeviz.h"

#include "CLI11.hpp"

#include <csignal>
#include <cstdio>
#include <iostream>
#include <pthread.h>
#include <string>
#include <thread>

namespace {

int report_failure(const char* what, gv_status status) {
    std::cerr << "gazeviz: " << what << " failed (" << gv_status_name(status) << "): " << gv_last_error() << "\n";
    return 1;
}

struct PreprocessArgs {
    std::string input;
    std::string metadata;
    std::string output;
    std::string windows = "50,125,250";
    std::string patterns;
    std::string extension = ".tsv";
    unsigned threads = 0;
    bool gzip = false;
};

int run_preprocess(const PreprocessArgs& a) {
    gv_preprocess_options opts;
    gv_preprocess_options_init(&opts);
    opts.input_dir = a.input.c_str();
    opts.metadata_path = a.metadata.empty() ? nullptr : a.metadata.c_str();
    opts.output_path = a.output.c_str();
    opts.windows = a.windows.c_str();
    opts.patterns_path = a.patterns.empty() ? nullptr : a.patterns.c_str();
    opts.extension = a.extension.c_str();
    opts.threads = a.threads;
    opts.gzip_sibling = a.gzip ? 1 : 0;

    char* report = nullptr;
    if (auto st = gv_preprocess(&opts, &report); st != GV_OK) return report_failure("preprocess", st);
    std::cout << report << "\n";
    gv_string_free(report);
    return 0;
}

int run_stats(const std::string& path) {
    gv_dataset* ds = nullptr;
    if (auto st = gv_dataset_open(path.c_str(), &ds); st != GV_OK) return report_failure("open dataset", st);
    char* stats = nullptr;
    auto st = gv_dataset_stats(ds, &stats);
    gv_dataset_close(ds);
    if (st != GV_OK) return report_failure("stats", st);
    std::cout << stats << "\n";
    gv_string_free(stats);
    return 0;
}

struct ServeArgs {
    std::string dataset;
    std::string stimuli;
    std::string static_dir;
    std::string questions;
    std::string host = "127.0.0.1";
    int port = 8080;
    long long seed = -1;
    int cell = 16;
    double sigma = 24.0;
};

int run_serve(const ServeArgs& a) {
    gv_dataset* ds = nullptr;
    if (auto st = gv_dataset_open(a.dataset.c_str(), &ds); st != GV_OK) return report_failure("open dataset", st);

    gv_service_options so;
    gv_service_options_init(&so);
    so.stimuli_dir = a.stimuli.empty() ? nullptr : a.stimuli.c_str();
    so.static_dir = a.static_dir.empty() ? nullptr : a.static_dir.c_str();
    so.questions_path = a.questions.empty() ? nullptr : a.questions.c_str();
    if (a.seed >= 0) {
        so.has_seed = 1;
        so.seed = static_cast<uint64_t>(a.seed);
    }
    so.density_cell = a.cell;
    so.density_sigma = a.sigma;

    gv_service* svc = nullptr;
    auto st = gv_service_create(ds, &so, &svc);
    gv_dataset_close(ds);
    if (st != GV_OK) return report_failure("create service", st);

    int bound = 0;
    if (st = gv_service_bind(svc, a.host.c_str(), a.port, &bound); st != GV_OK) {
        gv_service_destroy(svc);
        return report_failure("bind", st);
    }

    // SIGINT/SIGTERM are blocked here and collected by a watcher thread, which
    // stops the server from an ordinary thread context.
    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);
    std::thread watcher([&] {
        int sig = 0;
        sigwait(&signals, &sig);
        gv_service_stop(svc);
    });

    std::cerr << "gazeviz: serving " << a.dataset << " on http://" << a.host << ":" << bound << "\n";
    st = gv_service_run(svc);
    pthread_kill(watcher.native_handle(), SIGTERM);
    watcher.join();
    gv_service_destroy(svc);
    if (st != GV_OK) return report_failure("serve", st);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Eye-movement scanpath analytics for code-reading studies"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(gv_version()));

    PreprocessArgs pre;
    auto* preprocess = app.add_subcommand("preprocess", "Build a compact dataset from a raw TSV corpus");
    preprocess->add_option("--input", pre.input, "Corpus directory (searched recursively)")->required();
    preprocess->add_option("--metadata", pre.metadata, "Participant metadata table (CSV or TSV)");
    preprocess->add_option("--output", pre.output, "Output dataset, e.g. corpus.gaze.json")->required();
    preprocess->add_option("--windows", pre.windows, "Window lengths or presets 50/150/250")->capture_default_str();
    preprocess->add_option("--patterns", pre.patterns, "Stimulus pattern file");
    preprocess->add_option("--extension", pre.extension, "Recording file extension")->capture_default_str();
    preprocess->add_option("--threads", pre.threads, "Worker threads (0 = all cores)")->capture_default_str();
    preprocess->add_flag("--gzip", pre.gzip, "Also write a .gz sibling");

    ServeArgs srv;
    auto* serve = app.add_subcommand("serve", "Serve a dataset over HTTP");
    serve->add_option("--dataset", srv.dataset, "Dataset file")->envname("GAZEVIZ_DATASET")->required();
    serve->add_option("--stimuli", srv.stimuli, "Directory of stimulus images");
    serve->add_option("--static", srv.static_dir, "Dashboard bundle to serve at /");
    serve->add_option("--questions", srv.questions, "JSON file of comprehension questions per stimulus");
    serve->add_option("--host", srv.host, "Listen address")->capture_default_str();
    serve->add_option("--port", srv.port, "Listen port (0 = any free port)")->capture_default_str()->envname("GAZEVIZ_PORT");
    serve->add_option("--seed", srv.seed, "Seed for /api/participants/random");
    serve->add_option("--cell", srv.cell, "Default density cell size in px")->capture_default_str();
    serve->add_option("--sigma", srv.sigma, "Default density smoothing sigma in px")->capture_default_str();

    std::string stats_path;
    auto* stats = app.add_subcommand("stats", "Print participant counts, durations and size report");
    stats->add_option("--dataset", stats_path, "Dataset file")->envname("GAZEVIZ_DATASET")->required();

    CLI11_PARSE(app, argc, argv);

    if (*preprocess) return run_preprocess(pre);
    if (*serve) return run_serve(srv);
    if (*stats) return run_stats(stats_path);
    return 1;
}
