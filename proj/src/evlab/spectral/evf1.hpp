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

#pragma once

#include <filesystem>
#include <string>

#include "evlab/spectral/field.hpp"

namespace evlab {

// One "EVF1" velocity snapshot: magic, u32 dim, u32 n, f64 viscosity,
// f64 time, then dim * n^dim f64 collocation values (component-major,
// x-fastest). All little-endian.
struct Snapshot {
  double viscosity = 0.0;
  double time = 0.0;
  SpectralField field;
};

std::string encode_evf1(const Snapshot& snap);
Snapshot decode_evf1(const std::string& bytes);

void write_evf1(const std::filesystem::path& path, const Snapshot& snap);
// Throws FormatError naming the file on wrong magic, odd n, or truncation.
Snapshot read_evf1(const std::filesystem::path& path);

}  // namespace evlab
