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

#ifndef HETPRED_KEYVALUE_HPP_
#define HETPRED_KEYVALUE_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <set>
#include <string>

namespace hetpred
{

/// Flat `key = value` text. `#` starts a comment; blank lines are ignored.
/// Repeated keys raise ParseError.
class KeyValues
{
public:
  KeyValues() = default;
  explicit KeyValues(std::map<std::string, std::string> values) : values_(std::move(values)) {}

  static KeyValues parse(std::istream & in);
  static KeyValues load(const std::filesystem::path & path);

  bool has(const std::string & key) const { return values_.count(key) != 0; }
  void set(const std::string & key, const std::string & value) { values_[key] = value; }
  const std::map<std::string, std::string> & values() const { return values_; }

  /// Typed getters mark the key as used and raise ConfigError on bad values.
  std::string get_string(const std::string & key, const std::string & fallback) const;
  double get_double(const std::string & key, double fallback) const;
  std::int64_t get_int(const std::string & key, std::int64_t fallback) const;
  std::uint64_t get_uint(const std::string & key, std::uint64_t fallback) const;
  bool get_bool(const std::string & key, bool fallback) const;

  /// Keys present but never read through a getter.
  std::set<std::string> unused() const;

private:
  std::map<std::string, std::string> values_;
  mutable std::set<std::string> used_;
};

}  // namespace hetpred

#endif  // HETPRED_KEYVALUE_HPP_
