#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gazeviz {

enum class ErrorCode {
    io,
    corpus,
    malformed_filename,
    unparseable_recording,
    schema,
    parameter,
    no_stimulus,
    empty_input,
    empty_corpus,
    format,
    not_found,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace gazeviz
