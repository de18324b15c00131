#pragma once

#include <stdexcept>
#include <string>

namespace stereosafe {

// Disparity 0 means infinite depth; such pixels cannot be reprojected and are
// excluded from every constraint set.
struct ZeroDisparityError : std::domain_error {
    explicit ZeroDisparityError(const std::string& what) : std::domain_error(what) {}
};

struct DimensionMismatchError : std::invalid_argument {
    explicit DimensionMismatchError(const std::string& what) : std::invalid_argument(what) {}
};

struct NoValidPixelsError : std::runtime_error {
    explicit NoValidPixelsError(const std::string& what) : std::runtime_error(what) {}
};

struct EmptyPixelSetError : std::invalid_argument {
    explicit EmptyPixelSetError(const std::string& what) : std::invalid_argument(what) {}
};

struct EmptyUncertaintySetError : std::runtime_error {
    explicit EmptyUncertaintySetError(const std::string& what) : std::runtime_error(what) {}
};

struct InvalidInstanceError : std::invalid_argument {
    explicit InvalidInstanceError(const std::string& what) : std::invalid_argument(what) {}
};

// Config / IO problems carry the offending file and field so the CLI can
// report them and exit with the dedicated status code.
struct ConfigError : std::runtime_error {
    ConfigError(const std::string& file, const std::string& field, const std::string& what)
        : std::runtime_error(file + ": " + field + ": " + what), file_(file), field_(field) {}

    const std::string& file() const { return file_; }
    const std::string& field() const { return field_; }

private:
    std::string file_;
    std::string field_;
};

struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace stereosafe
