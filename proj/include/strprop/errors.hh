#ifndef STRPROP_ERRORS_HH
#define STRPROP_ERRORS_HH

#include <cstddef>
#include <stdexcept>
#include <string>

namespace strprop {

    class Error : public std::runtime_error {
    public:
        using std::runtime_error::runtime_error;
    };

    /// Malformed input text. `offset` is the byte offset into the source.
    class ParseError : public Error {
    public:
        ParseError(const std::string& msg, std::size_t offset)
            : Error(msg + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}
        std::size_t offset() const { return offset_; }
    private:
        std::size_t offset_;
    };

    /// Well-formed input that falls outside the supported fragment.
    class UnsupportedError : public Error {
    public:
        using Error::Error;
    };

    /// A budget was exhausted: transition cap, deadline, or a size cap on the input.
    class ResourceError : public Error {
    public:
        using Error::Error;
    };

    /// A broken internal invariant. Always a bug in this library.
    class InternalError : public Error {
    public:
        using Error::Error;
    };

} // namespace strprop

#endif
