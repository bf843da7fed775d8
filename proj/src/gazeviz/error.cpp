#include "gazeviz/error.hpp"

namespace gazeviz {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::io: return "io";
        case ErrorCode::corpus: return "corpus";
        case ErrorCode::malformed_filename: return "malformed-filename";
        case ErrorCode::unparseable_recording: return "unparseable-recording";
        case ErrorCode::schema: return "schema";
        case ErrorCode::parameter: return "parameter";
        case ErrorCode::no_stimulus: return "no-stimulus";
        case ErrorCode::empty_input: return "empty-input";
        case ErrorCode::empty_corpus: return "empty-corpus";
        case ErrorCode::format: return "format";
        case ErrorCode::not_found: return "not-found";
    }
    return "unknown";
}

}  // namespace gazeviz
