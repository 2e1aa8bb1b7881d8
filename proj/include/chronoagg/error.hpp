#pragma once

#include <stdexcept>
#include <string>

namespace chronoagg {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad parameters: target counts, resolutions, configuration values.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Malformed or inconsistent data: parse failures, dimension mismatches,
/// non-consecutive snapshots.
class DataError : public Error {
public:
    using Error::Error;
};

/// A numerical regime the methods cannot handle (tau too large, an
/// integration step that leaves [0, 1]).
class RangeError : public Error {
public:
    using Error::Error;
};

} // namespace chronoagg
