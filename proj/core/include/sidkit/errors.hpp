#pragma once

#include <stdexcept>
#include <string>

namespace sidkit {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// File could not be opened, read or written.
class IoError : public Error {
public:
    using Error::Error;
};

/// On-disk data is malformed: bad magic, truncated payload, oversized dims.
class FormatError : public Error {
public:
    using Error::Error;
};

/// Two maps that must share a grid do not.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// A value violates an invariant (range, normalization, unknown config key).
class ValueError : public Error {
public:
    using Error::Error;
};

/// The offset field contains no fixed point at all.
class EmptyCentroids : public Error {
public:
    using Error::Error;
};

} // namespace sidkit
