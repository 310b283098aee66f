#pragma once

#include <stdexcept>
#include <string>

namespace heathaze {

enum class ErrorKind {
    parameter,          // bad argument to an operation
    config,             // scenario config invalid
    solver_instability, // density solve diverged
    validation,         // a validation scenario failed its gate
    io,                 // file read/write failure
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

// Process exit codes used by the CLI; tests assert on these.
inline int exit_code(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::parameter: return 2;
        case ErrorKind::config: return 2;
        case ErrorKind::solver_instability: return 3;
        case ErrorKind::validation: return 4;
        case ErrorKind::io: return 5;
    }
    return 1;
}

[[noreturn]] inline void throw_parameter(const std::string& msg) {
    throw Error(ErrorKind::parameter, msg);
}
[[noreturn]] inline void throw_config(const std::string& msg) {
    throw Error(ErrorKind::config, msg);
}
[[noreturn]] inline void throw_solver(const std::string& msg) {
    throw Error(ErrorKind::solver_instability, msg);
}
[[noreturn]] inline void throw_validation(const std::string& msg) {
    throw Error(ErrorKind::validation, msg);
}
[[noreturn]] inline void throw_io(const std::string& msg) {
    throw Error(ErrorKind::io, msg);
}

}  // namespace heathaze
