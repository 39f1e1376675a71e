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

#include "evlab/solver/trajectory_io.hpp"

#include <cstdio>
#include <fstream>

#include "evlab/common/error.hpp"
#include "evlab/spectral/evf1.hpp"
#include "json.hpp"

namespace evlab {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string snapshot_name(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "snap_%06zu.evf", i);
  return buf;
}

}  // namespace

void save_trajectory(const fs::path& dir, const Trajectory& traj) {
  fs::create_directories(dir);
  json manifest;
  manifest["format"] = "evlab-trajectory";
  manifest["format_version"] = kTrajectoryFormatVersion;
  manifest["snapshot_format"] = "EVF1";
  manifest["config"] = to_config_map(traj.config);
  manifest["seed"] = traj.config.seed;
  manifest["times"] = traj.times;
  json files = json::array();
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const std::string name = snapshot_name(i);
    write_evf1(dir / name, Snapshot{traj.config.nu, traj.times[i], traj.snapshots[i]});
    files.push_back(name);
  }
  manifest["snapshots"] = files;
  std::ofstream os(dir / "manifest.json");
  if (!os) throw FormatError("cannot write " + (dir / "manifest.json").string());
  os << manifest.dump(2) << "\n";
}

Trajectory load_trajectory(const fs::path& dir) {
  const fs::path mpath = dir / "manifest.json";
  std::ifstream is(mpath);
  if (!is) throw FormatError("missing trajectory manifest " + mpath.string());
  json manifest;
  try {
    is >> manifest;
  } catch (const json::exception& e) {
    throw FormatError(mpath.string() + ": " + e.what());
  }
  Trajectory traj;
  try {
    if (manifest.at("format_version").get<int>() != kTrajectoryFormatVersion) {
      throw FormatError(mpath.string() + ": unsupported format_version");
    }
    std::string text;
    for (const auto& [k, v] : manifest.at("config").items()) {
      text += k + "=" + v.get<std::string>() + "\n";
    }
    traj.config = parse_solver_config(text);
    traj.times = manifest.at("times").get<std::vector<double>>();
    const auto files = manifest.at("snapshots").get<std::vector<std::string>>();
    if (files.size() != traj.times.size() || files.empty()) {
      throw FormatError(mpath.string() + ": snapshot list does not match times");
    }
    for (std::size_t i = 0; i < files.size(); ++i) {
      Snapshot snap = read_evf1(dir / files[i]);
      if (!(snap.field.grid() == traj.config.grid)) {
        throw FormatError((dir / files[i]).string() + ": grid differs from manifest");
      }
      traj.snapshots.push_back(std::move(snap.field));
    }
  } catch (const json::exception& e) {
    throw FormatError(mpath.string() + ": " + e.what());
  } catch (const ConfigError& e) {
    throw FormatError(mpath.string() + ": " + e.what());
  }
  for (std::size_t i = 1; i < traj.times.size(); ++i) {
    if (!(traj.times[i] > traj.times[i - 1])) {
      throw FormatError(mpath.string() + ": snapshot times not strictly increasing");
    }
  }
  return traj;
}

}  // namespace evlab
