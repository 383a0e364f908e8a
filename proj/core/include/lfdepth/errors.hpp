#pragma once

#include <stdexcept>
#include <string>

namespace lfdepth {

// Unreadable/unwritable files, malformed image payloads. CLI maps this to
// exit code 3.
class io_error : public std::runtime_error {
public:
    explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

// Bad configuration or command-line input. CLI maps this to exit code 2.
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace lfdepth
