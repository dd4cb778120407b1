/*
 * Copyright (C) 2026 The hetpop Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace hetpop {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A document (trace, mapping, scenario, event timeline) could not be decoded.
// `path()` is a JSON-pointer-like location of the offending element, or empty
// when the document itself is not well-formed JSON.
class ParseError : public Error {
 public:
  ParseError(std::string path, const std::string& what)
      : Error(path.empty() ? what : path + ": " + what), path_(std::move(path)) {}

  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

// An interval with start > end was passed to the interval algebra.
class MalformedInterval : public Error {
 public:
  MalformedInterval(std::size_t index, const std::string& what)
      : Error(what), index_(index) {}

  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

// A duration sum or timestamp conversion left the 64-bit range.
class ArithmeticOverflow : public Error {
 public:
  using Error::Error;
};

// A scenario program violates the generator's rules.
class ScenarioError : public Error {
 public:
  using Error::Error;
};

// An event timeline contained events that no mapping rule claimed while the
// mapping's default policy is "error".
class ImportError : public Error {
 public:
  ImportError(const std::string& what, std::vector<std::string> offenders)
      : Error(what), offenders_(std::move(offenders)) {}

  const std::vector<std::string>& offenders() const { return offenders_; }

 private:
  std::vector<std::string> offenders_;
};

}  // namespace hetpop
