#pragma once

#include <stdexcept>
#include <string>

namespace billab {

// Status codes shared with the C API (see include/billab.h).
enum class Status : int {
    ok = 0,
    invalid_argument = 1,
    domain_error = 2,
    regularity_error = 3,
    degeneracy_error = 4,
    resolution_error = 5,
    solver_error = 6,
    io_error = 7,
    insufficient_data = 8,
    config_error = 9,
    internal_error = 10,
};

class Error : public std::runtime_error {
public:
    Error(Status code, const std::string& what) : std::runtime_error(what), code_(code) {}
    Status code() const noexcept { return code_; }

private:
    Status code_;
};

[[noreturn]] inline void fail(Status code, const std::string& msg) { throw Error(code, msg); }

} // namespace billab
