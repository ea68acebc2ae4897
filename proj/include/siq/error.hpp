#ifndef SIQ_ERROR_HPP
#define SIQ_ERROR_HPP

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace siq {

enum class ErrorCode {
    InvalidArgument,
    UnknownAtom,
    // atomese
    IndentError,
    NameError,
    EmptyLink,
    SyntaxError,
    // ingest
    FormatError,
    GeometryError,
    RangeError,
    IoError,
    // matcher
    IllFormed,
    NotNumeric,
    // query compiler / parser
    UnknownRelation,
    AliasClassMismatch,
    EmptyQuery,
    // chainer
    FixpointLimit,
    CyclicRules,
};

std::string_view to_string(ErrorCode code);

/// Every failure in the library surfaces as this exception. Parsers fill in
/// `line` and/or `column` (1-based) when the position is known.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message,
          std::optional<std::size_t> line = std::nullopt,
          std::optional<std::size_t> column = std::nullopt);

    ErrorCode code() const noexcept { return code_; }
    std::optional<std::size_t> line() const noexcept { return line_; }
    std::optional<std::size_t> column() const noexcept { return column_; }

private:
    ErrorCode code_;
    std::optional<std::size_t> line_;
    std::optional<std::size_t> column_;
};

} // namespace siq

#endif // SIQ_ERROR_HPP
