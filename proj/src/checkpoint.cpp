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

#include "hetpred/checkpoint.hpp"

#include "hetpred/errors.hpp"

#include <bit>
#include <cstring>
#include <fstream>

namespace hetpred::nn
{
namespace
{

static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes little-endian");

constexpr char kMagic[8] = {'H', 'P', 'C', 'K', 'P', 'T', '\0', '\0'};

template <class T>
void put(std::ostream & os, T v)
{
  os.write(reinterpret_cast<const char *>(&v), sizeof(T));
}

void put_string(std::ostream & os, const std::string & s)
{
  put<std::uint32_t>(os, static_cast<std::uint32_t>(s.size()));
  os.write(s.data(), static_cast<std::streamsize>(s.size()));
}

class Reader
{
public:
  Reader(std::istream & is, std::string path) : is_(is), path_(std::move(path)) {}

  template <class T>
  T get()
  {
    T v{};
    bytes(reinterpret_cast<char *>(&v), sizeof(T));
    return v;
  }

  std::string get_string()
  {
    const auto n = get<std::uint32_t>();
    std::string s(n, '\0');
    bytes(s.data(), n);
    return s;
  }

  void bytes(char * dst, std::size_t n)
  {
    is_.read(dst, static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(is_.gcount()) != n) {
      throw IoError("truncated checkpoint " + path_);
    }
  }

private:
  std::istream & is_;
  std::string path_;
};

}  // namespace

const ad::Tensor * Checkpoint::find(const std::string & name) const
{
  for (const auto & [n, t] : tensors) {
    if (n == name) {
      return &t;
    }
  }
  return nullptr;
}

void save_checkpoint(const std::filesystem::path & path, const Checkpoint & ckpt)
{
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) {
    throw IoError("cannot open " + path.string() + " for writing");
  }
  os.write(kMagic, sizeof(kMagic));
  put<std::uint32_t>(os, kCheckpointVersion);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(ckpt.metadata.size()));
  for (const auto & [k, v] : ckpt.metadata) {
    put_string(os, k);
    put_string(os, v);
  }
  put<std::uint32_t>(os, static_cast<std::uint32_t>(ckpt.tensors.size()));
  for (const auto & [name, t] : ckpt.tensors) {
    put_string(os, name);
    put<std::uint32_t>(os, static_cast<std::uint32_t>(t.rank()));
    for (std::size_t d : t.shape()) {
      put<std::uint64_t>(os, d);
    }
    os.write(reinterpret_cast<const char *>(t.data()), static_cast<std::streamsize>(t.size() * sizeof(double)));
  }
  if (!os) {
    throw IoError("failed writing " + path.string());
  }
}

Checkpoint load_checkpoint(const std::filesystem::path & path)
{
  std::ifstream is(path, std::ios::binary);
  if (!is) {
    throw IoError("cannot open checkpoint " + path.string());
  }
  Reader in(is, path.string());
  char magic[8];
  in.bytes(magic, sizeof(magic));
  if (std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw IoError(path.string() + " is not a checkpoint file");
  }
  const auto version = in.get<std::uint32_t>();
  if (version != kCheckpointVersion) {
    throw IoError("unsupported checkpoint version " + std::to_string(version));
  }
  Checkpoint ckpt;
  const auto n_meta = in.get<std::uint32_t>();
  for (std::uint32_t i = 0; i < n_meta; ++i) {
    std::string k = in.get_string();
    ckpt.metadata[k] = in.get_string();
  }
  const auto n_tensors = in.get<std::uint32_t>();
  for (std::uint32_t i = 0; i < n_tensors; ++i) {
    std::string name = in.get_string();
    const auto rank = in.get<std::uint32_t>();
    ad::Shape shape(rank);
    for (auto & d : shape) {
      d = in.get<std::uint64_t>();
    }
    std::vector<double> values(ad::shape_size(shape));
    in.bytes(reinterpret_cast<char *>(values.data()), values.size() * sizeof(double));
    ckpt.tensors.emplace_back(std::move(name), ad::Tensor(std::move(shape), std::move(values)));
  }
  return ckpt;
}

void append_parameters(Checkpoint & ckpt, const ParameterStore & store, const std::string & prefix)
{
  for (std::size_t i = 0; i < store.size(); ++i) {
    ckpt.tensors.emplace_back(prefix + store.name(i), store.value(i));
  }
}

void restore_parameters(const Checkpoint & ckpt, ParameterStore & store, const std::string & prefix)
{
  for (std::size_t i = 0; i < store.size(); ++i) {
    const std::string name = prefix + store.name(i);
    const ad::Tensor * t = ckpt.find(name);
    if (!t) {
      throw ConfigError("checkpoint has no tensor '" + name + "'");
    }
    if (t->shape() != store.value(i).shape()) {
      throw ConfigError(
        "checkpoint tensor '" + name + "' has shape " + ad::shape_string(t->shape()) +
        ", model expects " + ad::shape_string(store.value(i).shape()));
    }
    store.value(i) = *t;
  }
}

}  // namespace hetpred::nn
