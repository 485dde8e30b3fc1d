// Copyright (C) 2026 The sablock Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace sablock {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input bytes are not well-formed JSON (or not the expected JSON shape).
class ParseError : public Error {
public:
    using Error::Error;
};

/// A data invariant is violated. `path()` names the first offending location,
/// e.g. "attention[0][1][2]" or "num_heads".
class ValidationError : public Error {
public:
    ValidationError(std::string path, const std::string& what)
        : Error(path + ": " + what), m_path(std::move(path)) {}

    const std::string& path() const noexcept { return m_path; }

private:
    std::string m_path;
};

/// Synthetic trace specification is inconsistent.
class SpecError : public Error {
public:
    using Error::Error;
};

/// Policy or search configuration is out of range.
class ConfigError : public Error {
public:
    using Error::Error;
};

class IndexError : public Error {
public:
    using Error::Error;
};

class MetricError : public Error {
public:
    using Error::Error;
};

/// Filesystem read/write failure.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace sablock
