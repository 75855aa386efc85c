#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dsq {

enum class ErrorKind {
    Validation,
    IllegalMove,
    Parse,
    PartitionMismatch,
    MissingPartition,
    Io,
    Usage,
    Verification,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

// Carries the character offset of the first offending input character.
class ParseError : public Error {
public:
    ParseError(std::size_t offset, const std::string& what)
        : Error(ErrorKind::Parse, what + " (at offset " + std::to_string(offset) + ")"), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

}  // namespace dsq
