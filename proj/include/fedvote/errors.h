// Copyright 2026 The FedVote Simulator Authors. All Rights Reserved.
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
// =============================================================================

#ifndef FEDVOTE_ERRORS_H_
#define FEDVOTE_ERRORS_H_

#include <stdexcept>
#include <string>
#include <vector>

namespace fedvote {

// Argument violates an operation's precondition (shape, length, range).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Value lies outside the mathematical domain of a function.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Reputation state where every credibility is zero.
class DegenerateState : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Experiment configuration is unusable. Carries every violation found.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> violations);
  explicit ConfigError(const std::string& violation)
      : ConfigError(std::vector<std::string>{violation}) {}

  const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

// File could not be opened, created or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or truncated file. `offset` is the byte position where parsing
// failed.
class FormatError : public std::runtime_error {
 public:
  FormatError(const std::string& what, std::size_t offset);

  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace fedvote

#endif  // FEDVOTE_ERRORS_H_
