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

#include "hetpred/keyvalue.hpp"

#include "hetpred/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <string_view>

namespace hetpred
{
namespace
{

std::string trim(std::string_view s)
{
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) {
    return {};
  }
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

template <class T>
T convert(const std::string & key, const std::string & text)
{
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw ConfigError("bad value for '" + key + "': '" + text + "'");
  }
  return value;
}

}  // namespace

KeyValues KeyValues::parse(std::istream & in)
{
  KeyValues kv;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) {
      line.resize(hash);
    }
    const std::string body = trim(line);
    if (body.empty()) {
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ParseError("expected key = value", line_no);
    }
    std::string key = trim(std::string_view(body).substr(0, eq));
    std::string value = trim(std::string_view(body).substr(eq + 1));
    if (key.empty()) {
      throw ParseError("empty key", line_no);
    }
    if (!kv.values_.emplace(key, value).second) {
      throw ParseError("repeated key '" + key + "'", line_no);
    }
  }
  return kv;
}

KeyValues KeyValues::load(const std::filesystem::path & path)
{
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open " + path.string());
  }
  return parse(in);
}

std::string KeyValues::get_string(const std::string & key, const std::string & fallback) const
{
  const auto it = values_.find(key);
  if (it == values_.end()) {
    return fallback;
  }
  used_.insert(key);
  return it->second;
}

double KeyValues::get_double(const std::string & key, double fallback) const
{
  const auto it = values_.find(key);
  if (it == values_.end()) {
    return fallback;
  }
  used_.insert(key);
  const double v = convert<double>(key, it->second);
  if (!std::isfinite(v)) {
    throw ConfigError("non-finite value for '" + key + "'");
  }
  return v;
}

std::int64_t KeyValues::get_int(const std::string & key, std::int64_t fallback) const
{
  const auto it = values_.find(key);
  if (it == values_.end()) {
    return fallback;
  }
  used_.insert(key);
  return convert<std::int64_t>(key, it->second);
}

std::uint64_t KeyValues::get_uint(const std::string & key, std::uint64_t fallback) const
{
  const auto it = values_.find(key);
  if (it == values_.end()) {
    return fallback;
  }
  used_.insert(key);
  return convert<std::uint64_t>(key, it->second);
}

bool KeyValues::get_bool(const std::string & key, bool fallback) const
{
  const auto it = values_.find(key);
  if (it == values_.end()) {
    return fallback;
  }
  used_.insert(key);
  const std::string & v = it->second;
  if (v == "true" || v == "1" || v == "yes") {
    return true;
  }
  if (v == "false" || v == "0" || v == "no") {
    return false;
  }
  throw ConfigError("bad boolean for '" + key + "': '" + v + "'");
}

std::set<std::string> KeyValues::unused() const
{
  std::set<std::string> out;
  for (const auto & [k, v] : values_) {
    if (!used_.count(k)) {
      out.insert(k);
    }
  }
  return out;
}

}  // namespace hetpred
