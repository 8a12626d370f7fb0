// Copyright 2026 The MENID Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace menid {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input files, configs, or parameters. The CLI maps
// these to exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class ParseError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class InvalidParameter : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

// Rule engine.
class AmbiguousDeictic : public Error {
 public:
  using Error::Error;
};

class OverlappingRules : public Error {
 public:
  using Error::Error;
};

class IndexOutOfRange : public Error {
 public:
  using Error::Error;
};

class NoiseNotApplicable : public Error {
 public:
  using Error::Error;
};

// Estimation.
class EmptySample : public Error {
 public:
  using Error::Error;
};

class NonPositiveAlpha : public Error {
 public:
  using Error::Error;
};

class LengthMismatch : public Error {
 public:
  using Error::Error;
};

// Environments and planning.
class NoRuleTriggers : public Error {
 public:
  using Error::Error;
};

class NoApplicableAction : public Error {
 public:
  using Error::Error;
};

class StateSpaceExplosion : public Error {
 public:
  using Error::Error;
};

}  // namespace menid
