#pragma once

#include "gazeviz/dataset.hpp"
#include "gazeviz/density.hpp"
#include "gazeviz/geometry.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gazeviz {

struct HttpResponse {
    int status = 200;
    std::string content_type = "application/json";
    std::string body;
    std::vector<std::pair<std::string, std::string>> headers;
};

using QueryParams = std::multimap<std::string, std::string>;

/// Splits "a=1&b=x%20y" into decoded pairs.
QueryParams parse_query(std::string_view query);

struct ServiceOptions {
    std::string stimuli_dir;
    std::string static_dir;      // dashboard bundle mounted at "/", optional
    std::string questions_path;  // JSON object keyed by stimulus key or name, optional
    std::optional<std::uint64_t> seed;
    GridConfig density;  // default cell and sigma; plane dims come from the dataset
    std::size_t samples_per_segment = kDefaultSamplesPerSegment;
    std::size_t density_cache_entries = 64;
};

/// Read-only HTTP API over a decoded dataset. handle() is safe to call from any
/// number of threads.
class Service {
public:
    Service(std::shared_ptr<const CompactDataset> dataset, ServiceOptions options);
    ~Service();

    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    HttpResponse handle(std::string_view method, std::string_view path, const QueryParams& query) const;
    /// `target` is a path with an optional "?query".
    HttpResponse handle(std::string_view method, std::string_view target) const;

    /// Binds the listening socket; port 0 picks a free port. Returns the bound port.
    int bind(const std::string& host, int port);
    /// Serves until stop(); requires bind().
    void run();
    /// Safe from any thread; a stop() before run() makes run() return at once.
    void stop();

    const CompactDataset& dataset() const noexcept { return *dataset_; }

private:
    struct Impl;
    std::shared_ptr<const CompactDataset> dataset_;
    std::unique_ptr<Impl> impl_;
};

}  // namespace gazeviz
