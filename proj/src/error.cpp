#include "pdd/error.hpp"

namespace pdd {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::UnknownToken: return "UnknownToken";
        case ErrorKind::EmptyVocabulary: return "EmptyVocabulary";
        case ErrorKind::CountOverflow: return "CountOverflow";
        case ErrorKind::VocabMismatch: return "VocabMismatch";
        case ErrorKind::TokenOutOfRange: return "TokenOutOfRange";
        case ErrorKind::CorruptTable: return "CorruptTable";
        case ErrorKind::SchemaError: return "SchemaError";
        case ErrorKind::InconsistentVocabSize: return "InconsistentVocabSize";
        case ErrorKind::Transport: return "Transport";
        case ErrorKind::AuthFailure: return "AuthFailure";
        case ErrorKind::TruncatedResponse: return "TruncatedResponse";
        case ErrorKind::EmptyRecord: return "EmptyRecord";
        case ErrorKind::NotApplicable: return "NotApplicable";
        case ErrorKind::EmptyText: return "EmptyText";
        case ErrorKind::LengthMismatch: return "LengthMismatch";
        case ErrorKind::DegenerateLabels: return "DegenerateLabels";
        case ErrorKind::ExampleSetMismatch: return "ExampleSetMismatch";
        case ErrorKind::JoinMismatch: return "JoinMismatch";
        case ErrorKind::Io: return "Io";
        case ErrorKind::Config: return "Config";
    }
    return "Unknown";
}

}  // namespace pdd
