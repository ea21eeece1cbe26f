#ifndef SCANSION_ERROR_HPP
#define SCANSION_ERROR_HPP

#include <stdexcept>
#include <string>

namespace scansion {

// All recoverable data/usage failures are reported through this exception.
// `kind` is a stable machine-readable tag (e.g. "MalformedRow", "IndexGap",
// "UnknownSymbol", "ParseError", "EmptySequence", ...); `what()` carries the
// human-readable detail.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& message)
        : std::runtime_error(kind + ": " + message), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

} // namespace scansion

#endif
