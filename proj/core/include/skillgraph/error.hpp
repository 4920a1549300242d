// Copyright 2026 The SkillGraph Authors
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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace skillgraph {

/// Base of every exception thrown by the library. `kind()` is a stable
/// machine-readable tag that the CLI prints alongside the message.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

class EmptyDataset : public Error {
 public:
  explicit EmptyDataset(const std::string& message = "dataset is empty")
      : Error("EmptyDataset", message) {}
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : Error("ParseError", "line " + std::to_string(line) + ": " + message),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& message)
      : Error("InvalidArgument", message) {}
};

class FormatError : public Error {
 public:
  explicit FormatError(const std::string& message)
      : Error("FormatError", message) {}
};

class IntegrityError : public Error {
 public:
  explicit IntegrityError(const std::string& message)
      : Error("IntegrityError", message) {}
};

class MissingLabel : public Error {
 public:
  explicit MissingLabel(const std::string& tool)
      : Error("MissingLabel", "no category label for tool '" + tool + "'"),
        tool_(tool) {}

  const std::string& tool() const noexcept { return tool_; }

 private:
  std::string tool_;
};

class MissingEmbedding : public Error {
 public:
  explicit MissingEmbedding(const std::string& tool)
      : Error("MissingEmbedding", "no embedding for tool '" + tool + "'"),
        tool_(tool) {}

  const std::string& tool() const noexcept { return tool_; }

 private:
  std::string tool_;
};

class EmptyLibrary : public Error {
 public:
  explicit EmptyLibrary(const std::string& message = "tool library is empty")
      : Error("EmptyLibrary", message) {}
};

class InsufficientData : public Error {
 public:
  explicit InsufficientData(const std::string& message)
      : Error("InsufficientData", message) {}
};

}  // namespace skillgraph
