/*
 * Copyright 2026 The valfram Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef VALFRAM_ERRORS_HPP
#define VALFRAM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace valfram {

/// Base class for every error raised by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define VALFRAM_DEFINE_ERROR(NAME)          \
    class NAME : public Error {             \
    public:                                 \
        using Error::Error;                 \
    }

// Argument and invariant violations.
VALFRAM_DEFINE_ERROR(InvalidArgument);
VALFRAM_DEFINE_ERROR(InvariantViolation);

// schedule model
VALFRAM_DEFINE_ERROR(EmptyDataset);
VALFRAM_DEFINE_ERROR(MixedLocationPresence);

// stat kernels
VALFRAM_DEFINE_ERROR(EmptySample);
VALFRAM_DEFINE_ERROR(DegenerateValidation);
VALFRAM_DEFINE_ERROR(DegenerateModel);
VALFRAM_DEFINE_ERROR(DegenerateBounds);
VALFRAM_DEFINE_ERROR(EmptyPoints);
VALFRAM_DEFINE_ERROR(TooFewPoints);
VALFRAM_DEFINE_ERROR(ShapeMismatch);
VALFRAM_DEFINE_ERROR(EmptyInput);
VALFRAM_DEFINE_ERROR(NoOverlap);

// O-D comparison
VALFRAM_DEFINE_ERROR(EmptyTargetZones);
VALFRAM_DEFINE_ERROR(ZeroMatrix);
VALFRAM_DEFINE_ERROR(ZoneMismatch);
VALFRAM_DEFINE_ERROR(EmptySupport);

// validation steps
VALFRAM_DEFINE_ERROR(NoCommonVocabulary);
VALFRAM_DEFINE_ERROR(MissingLocations);

// synthetic generator
VALFRAM_DEFINE_ERROR(InvalidSpec);
VALFRAM_DEFINE_ERROR(UnknownKind);

// I/O
VALFRAM_DEFINE_ERROR(IoError);
VALFRAM_DEFINE_ERROR(ConfigError);

#undef VALFRAM_DEFINE_ERROR

/// Position of an offending row in an input file.
struct SourceLocation {
    std::string file;
    int line = 1;
};

/// Raised for malformed rows; always carries the file and line.
class ParseError : public Error {
public:
    ParseError(SourceLocation where, const std::string& reason)
        : Error(where.file + ":" + std::to_string(where.line) + ": " + reason),
          where_(std::move(where)),
          reason_(reason) {}

    const SourceLocation& where() const { return where_; }
    const std::string& reason() const { return reason_; }

private:
    SourceLocation where_;
    std::string reason_;
};

class UnknownZone : public ParseError {
public:
    using ParseError::ParseError;
};

class NegativeCount : public ParseError {
public:
    using ParseError::ParseError;
};

}  // namespace valfram

#endif  // VALFRAM_ERRORS_HPP
