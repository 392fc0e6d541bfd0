// Copyright 2026 The emocolor Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace emocolor {

// Base class for every error raised by the library. The CLI maps the
// subclasses onto distinct exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed configuration: membership breakpoints, partition files,
// mapping tables.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A value fell outside the domain an operation accepts.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Undecodable or otherwise unusable input data (images, trial files).
class InputError : public Error {
 public:
  using Error::Error;
};

// Tabular input is missing a required column.
class SchemaError : public InputError {
 public:
  using InputError::InputError;
};

class AnalysisError : public Error {
 public:
  using Error::Error;
};

class BuildError : public Error {
 public:
  using Error::Error;
};

class QueryError : public Error {
 public:
  QueryError(const std::string& message, std::string token)
      : Error(message), token_(std::move(token)) {}
  const std::string& token() const { return token_; }

 private:
  std::string token_;
};

// Knowledge-base file problems.
class KbError : public Error {
 public:
  enum class Kind { kMalformed, kVersion, kFingerprint };
  KbError(Kind kind, const std::string& message) : Error(message), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

class FingerprintMismatch : public KbError {
 public:
  FingerprintMismatch(std::string expected, std::string actual)
      : KbError(Kind::kFingerprint,
                "knowledge base fingerprint " + actual +
                    " does not match active color configuration " + expected +
                    "; rebuild the knowledge base with the current partitions "
                    "and mapping table"),
        expected_(std::move(expected)),
        actual_(std::move(actual)) {}
  const std::string& expected() const { return expected_; }
  const std::string& actual() const { return actual_; }

 private:
  std::string expected_;
  std::string actual_;
};

}  // namespace emocolor
