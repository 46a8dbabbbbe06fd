#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fairgroup {

// Base class for everything thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : Error {
    using Error::Error;
};

// ---- dataset ----

struct MissingColumn : Error {
    explicit MissingColumn(const std::string& name)
        : Error("missing column: " + name), column(name) {}
    std::string column;
};

struct UnexpectedColumn : Error {
    explicit UnexpectedColumn(const std::string& name)
        : Error("unexpected column: " + name), column(name) {}
    std::string column;
};

struct ParseError : Error {
    ParseError(std::size_t row, const std::string& column, const std::string& what)
        : Error("row " + std::to_string(row) + ", column '" + column + "': " + what),
          row(row), column(column) {}
    std::size_t row;
    std::string column;
};

struct EmptyFile : Error {
    explicit EmptyFile(const std::string& path) : Error("empty file: " + path) {}
};

struct NonBinaryValue : Error {
    NonBinaryValue(const std::string& column, std::size_t row)
        : Error("non-binary value in column '" + column + "' at row " + std::to_string(row)),
          column(column), row(row) {}
    std::string column;
    std::size_t row;
};

struct UnknownFeature : Error {
    explicit UnknownFeature(const std::string& name)
        : Error("unknown feature: " + name), feature(name) {}
    std::string feature;
};

struct AlreadyBinary : Error {
    explicit AlreadyBinary(const std::string& name)
        : Error("feature already binary: " + name), feature(name) {}
    std::string feature;
};

struct InvalidConfig : Error {
    explicit InvalidConfig(const std::string& what) : Error("invalid config: " + what) {}
};

// ---- classifiers ----

struct DegenerateData : Error {
    using Error::Error;
};

struct NonFiniteLoss : Error {
    using Error::Error;
};

struct SchemaMismatch : Error {
    using Error::Error;
};

// ---- importance / clustering ----

struct LengthMismatch : Error {
    using Error::Error;
};

struct TooFewPoints : Error {
    using Error::Error;
};

struct BadK : Error {
    using Error::Error;
};

// ---- fairgroups / pipeline ----

struct ZeroPart : Error {
    using Error::Error;
};

struct EmptyPlan : Error {
    using Error::Error;
};

struct EmptyGroup : Error {
    using Error::Error;
};

// ---- cli ----

struct MissingArtifact : Error {
    explicit MissingArtifact(const std::string& path)
        : Error("missing run artifact: " + path) {}
};

}  // namespace fairgroup
