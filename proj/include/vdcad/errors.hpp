/*
Copyright 2026 The vdcad Authors. All rights reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vdcad {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class RangeError : public Error {
 public:
  using Error::Error;
};

// A caller broke a documented precondition.
class ContractError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " (at " + std::to_string(position) + ")"), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class UnsupportedCommandError : public Error {
 public:
  explicit UnsupportedCommandError(char letter)
      : Error(std::string("unsupported path command '") + letter + "'"), letter_(letter) {}
  char letter() const { return letter_; }

 private:
  char letter_;
};

class LengthExceededError : public Error {
 public:
  LengthExceededError(std::size_t length, std::size_t limit)
      : Error("sequence length " + std::to_string(length) + " exceeds limit " +
              std::to_string(limit)),
        length_(length) {}
  std::size_t length() const { return length_; }

 private:
  std::size_t length_;
};

class GeometryError : public Error {
 public:
  using Error::Error;
};

class SchemaError : public Error {
 public:
  using Error::Error;
};

class InputError : public Error {
 public:
  using Error::Error;
};

}  // namespace vdcad
