#include "siq/error.hpp"

namespace siq {

namespace {

std::string decorate(const std::string& message, std::optional<std::size_t> line,
                     std::optional<std::size_t> column) {
    if (!line && !column) return message;
    std::string where;
    if (line) where += "line " + std::to_string(*line);
    if (column) {
        if (!where.empty()) where += ", ";
        where += "column " + std::to_string(*column);
    }
    return where + ": " + message;
}

} // namespace

std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::UnknownAtom: return "UnknownAtom";
    case ErrorCode::IndentError: return "IndentError";
    case ErrorCode::NameError: return "NameError";
    case ErrorCode::EmptyLink: return "EmptyLink";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::FormatError: return "FormatError";
    case ErrorCode::GeometryError: return "GeometryError";
    case ErrorCode::RangeError: return "RangeError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::IllFormed: return "IllFormed";
    case ErrorCode::NotNumeric: return "NotNumeric";
    case ErrorCode::UnknownRelation: return "UnknownRelation";
    case ErrorCode::AliasClassMismatch: return "AliasClassMismatch";
    case ErrorCode::EmptyQuery: return "EmptyQuery";
    case ErrorCode::FixpointLimit: return "FixpointLimit";
    case ErrorCode::CyclicRules: return "CyclicRules";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message, std::optional<std::size_t> line,
             std::optional<std::size_t> column)
    : std::runtime_error(decorate(message, line, column)), code_(code), line_(line),
      column_(column) {}

} // namespace siq
