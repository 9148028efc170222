#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pdd {

// Every failure the toolkit reports carries one of these kinds so callers
// (tests, the CLI exit-code mapping) can branch without parsing messages.
enum class ErrorKind {
    UnknownToken,
    EmptyVocabulary,
    CountOverflow,
    VocabMismatch,
    TokenOutOfRange,
    CorruptTable,
    SchemaError,
    InconsistentVocabSize,
    Transport,
    AuthFailure,
    TruncatedResponse,
    EmptyRecord,
    NotApplicable,
    EmptyText,
    LengthMismatch,
    DegenerateLabels,
    ExampleSetMismatch,
    JoinMismatch,
    Io,
    Config,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace pdd
