// Copyright 2026 The hetpred Authors
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

#ifndef HETPRED_ERRORS_HPP_
#define HETPRED_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace hetpred
{

class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

// Shape or length disagreement between operands.
class DimensionError : public Error
{
public:
  using Error::Error;
};

// Input outside an operation's mathematical domain, or a non-finite result.
class NumericDomainError : public Error
{
public:
  using Error::Error;
};

// API misuse: wrong call order, empty inputs where data is required.
class UsageError : public Error
{
public:
  using Error::Error;
};

class ConfigError : public Error
{
public:
  using Error::Error;
};

class ParseError : public Error
{
public:
  ParseError(const std::string & what, std::size_t line)
  : Error("line " + std::to_string(line) + ": " + what), line_(line)
  {
  }

  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

class ValidationError : public Error
{
public:
  using Error::Error;
};

class IoError : public Error
{
public:
  using Error::Error;
};

// Training produced a non-finite loss or gradient.
class TrainingError : public Error
{
public:
  using Error::Error;
};

}  // namespace hetpred

#endif  // HETPRED_ERRORS_HPP_
