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

#include "evlab/solver/galerkin.hpp"

namespace evlab {

inline constexpr int kTrajectoryFormatVersion = 1;

// Directory layout: manifest.json plus snap_NNNNNN.evf files (EVF1).
// The manifest echoes the solver configuration, the snapshot times, the
// seed and the format versions.
void save_trajectory(const std::filesystem::path& dir, const Trajectory& traj);
// Throws FormatError naming the offending file.
Trajectory load_trajectory(const std::filesystem::path& dir);

}  // namespace evlab
