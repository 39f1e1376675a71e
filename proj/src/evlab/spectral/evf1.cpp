// Copyright 2026 The evlab Authors
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

#include "evlab/spectral/evf1.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include "evlab/common/error.hpp"

namespace evlab {

namespace {

constexpr char kMagic[4] = {'E', 'V', 'F', '1'};
constexpr std::size_t kHeaderBytes = 4 + 4 + 4 + 8 + 8;

template <typename T>
void put(std::string& out, T value) {
  static_assert(std::endian::native == std::endian::little,
                "EVF1 encoder assumes a little-endian host");
  char raw[sizeof(T)];
  std::memcpy(raw, &value, sizeof(T));
  out.append(raw, sizeof(T));
}

template <typename T>
T get(const std::string& in, std::size_t& pos) {
  T value;
  std::memcpy(&value, in.data() + pos, sizeof(T));
  pos += sizeof(T);
  return value;
}

}  // namespace

std::string encode_evf1(const Snapshot& snap) {
  const GridSpec& g = snap.field.grid();
  const PhysicalField phys = to_physical(snap.field);
  std::string out;
  out.reserve(kHeaderBytes + phys.data().size() * 8);
  out.append(kMagic, 4);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(g.dim));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(g.n));
  put<double>(out, snap.viscosity);
  put<double>(out, snap.time);
  for (double v : phys.data()) put<double>(out, v);
  return out;
}

Snapshot decode_evf1(const std::string& bytes) {
  if (bytes.size() < kHeaderBytes) throw FormatError("EVF1: truncated header");
  if (std::memcmp(bytes.data(), kMagic, 4) != 0) throw FormatError("EVF1: bad magic");
  std::size_t pos = 4;
  const auto dim = get<std::uint32_t>(bytes, pos);
  const auto n = get<std::uint32_t>(bytes, pos);
  if (n % 2 != 0) throw FormatError("EVF1: odd points per dimension");
  GridSpec grid{static_cast<int>(dim), static_cast<int>(n)};
  try {
    grid.validate();
  } catch (const ConfigError& e) {
    throw FormatError(std::string("EVF1: ") + e.what());
  }
  Snapshot snap;
  snap.viscosity = get<double>(bytes, pos);
  snap.time = get<double>(bytes, pos);
  const std::size_t count = grid.points() * dim;
  if (bytes.size() != kHeaderBytes + count * 8) {
    throw FormatError("EVF1: payload size mismatch (expected " +
                      std::to_string(count) + " values)");
  }
  PhysicalField phys(grid, static_cast<int>(dim));
  for (double& v : phys.data()) v = get<double>(bytes, pos);
  snap.field = to_spectral(phys);
  return snap;
}

void write_evf1(const std::filesystem::path& path, const Snapshot& snap) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw FormatError("cannot open " + path.string() + " for writing");
  const std::string bytes = encode_evf1(snap);
  os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!os) throw FormatError("short write to " + path.string());
}

Snapshot read_evf1(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw FormatError("cannot open " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  try {
    return decode_evf1(bytes);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

}  // namespace evlab
