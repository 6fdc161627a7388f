// Copyright 2026 The faplearn Authors. All Rights Reserved.
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

#ifndef FAPLEARN_ERROR_HPP
#define FAPLEARN_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace faplearn {

// Input data could not be used: malformed files, unknown tokens, bad
// configuration values. The CLI maps these to exit code 2.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MalformedLine : public DataError {
 public:
  MalformedLine(std::size_t line, const std::string& why);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class DuplicateId : public DataError {
 public:
  explicit DuplicateId(const std::string& id);
};

class CorpusTooSmall : public DataError {
 public:
  CorpusTooSmall(std::size_t have, std::size_t need);
};

class MissingVocabToken : public DataError {
 public:
  explicit MissingVocabToken(const std::string& token);
};

class UnknownFapId : public DataError {
 public:
  explicit UnknownFapId(const std::string& id);
};

class IndexOutOfVocab : public DataError {
 public:
  IndexOutOfVocab(std::size_t index, std::size_t size);
};

// Programming or numerical contract violations inside the tensor core.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ShapeMismatch : public NumericError {
 public:
  using NumericError::NumericError;
};

class NonFiniteValue : public NumericError {
 public:
  using NumericError::NumericError;
};
// Raised by softmax on NaN/Inf logits.
using NonFiniteInput = NonFiniteValue;

class InvalidDistribution : public NumericError {
 public:
  using NumericError::NumericError;
};

class NonScalarLoss : public NumericError {
 public:
  using NumericError::NumericError;
};

// Training produced a NaN/Inf loss. Exit code 3 at the CLI.
class DivergedLoss : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace faplearn

#endif  // FAPLEARN_ERROR_HPP
