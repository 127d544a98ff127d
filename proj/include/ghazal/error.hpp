#pragma once

#include <stdexcept>
#include <string>

namespace ghazal {

/// Broad failure class; maps one-to-one onto CLI exit codes.
enum class ErrorKind {
    Usage = 1,    // bad arguments or configuration
    Data = 2,     // unreadable or malformed input
    Numeric = 3,  // divergence or non-finite values
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }
    int exit_code() const noexcept { return static_cast<int>(kind_); }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail_usage(const std::string& msg) { throw Error(ErrorKind::Usage, msg); }
[[noreturn]] inline void fail_data(const std::string& msg) { throw Error(ErrorKind::Data, msg); }
[[noreturn]] inline void fail_numeric(const std::string& msg) { throw Error(ErrorKind::Numeric, msg); }

}  // namespace ghazal
