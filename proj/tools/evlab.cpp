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


#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "evlab/evlab.h"

namespace {

using nlohmann::json;

struct Options {
  std::string config_file;
  std::vector<std::string> overrides;
  std::string traj, candidates, out;
  std::vector<std::string> forms;
  std::string weight = "lipschitz";
  double tol_scale = 1.0;
  std::vector<double> nus, eps;
  std::vector<int> ns;
  bool no_forcing_perturbation = false;
  std::size_t nodes = 5;
  bool quiet = false;
};

int usage_error(const std::string& msg) {
  std::cerr << "evlab: error: " << msg << "\n";
  return 2;
}

bool read_file(const std::string& path, std::string& text) {
  std::ifstream is(path);
  if (!is) return false;
  std::stringstream ss;
  ss << is.rdbuf();
  text = ss.str();
  return true;
}

int run(const json& spec, bool quiet) {
  char* report = nullptr;
  int code = 0;
  const std::string text = spec.dump();
  const evlab_status st = evlab_run_experiment(text.c_str(), &report, &code);
  if (st != EVLAB_OK) {
    std::cerr << "evlab: error: " << evlab_last_error() << "\n";
    return evlab_exit_code(st);
  }
  if (!quiet) std::cout << report;
  evlab_string_free(report);
  switch (code) {
    case 0: break;
    case 4: std::cerr << "evlab: candidate set is incomparable\n"; break;
    default: std::cerr << "evlab: verification failed\n"; break;
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"evlab: spectral Navier-Stokes runs and energy-variational certificates"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(evlab_version()));
  Options o;
  app.add_flag("-q,--quiet", o.quiet, "Do not print the JSON report");

  auto add_config = [&](CLI::App* sub) {
    sub->add_option("--config", o.config_file, "Solver configuration (key=value lines)")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--set", o.overrides, "Override one configuration key (key=value)");
    sub->add_option("--out", o.out, "Output directory");
  };

  auto* sim = app.add_subcommand("simulate", "Integrate one run and write its trajectory");
  add_config(sim);
  sim->get_option("--out")->required();

  auto* ver = app.add_subcommand("verify", "Run the certificate battery on a trajectory");
  ver->add_option("--traj", o.traj, "Trajectory or candidate directory")->required();
  ver->add_option("--forms", o.forms, "Residual forms: interval,local,reduced")->delimiter(',');
  ver->add_option("--tol-scale", o.tol_scale, "Tolerance multiplier")->check(CLI::PositiveNumber);
  ver->add_option("--weight", o.weight, "Regularity weight: zero | lipschitz[:f] | serrin:r:s:c");
  ver->add_option("--nodes", o.nodes, "Snapshot nodes used for interval pairs");
  ver->add_option("--out", o.out, "Directory for report.json");

  auto* snu = app.add_subcommand("sweep-nu", "Vanishing-viscosity sweep");
  add_config(snu);
  snu->add_option("--nus", o.nus, "Viscosities, strictly decreasing")->delimiter(',')->required();
  snu->add_option("--nodes", o.nodes, "Snapshot nodes used for interval pairs");

  auto* sn = app.add_subcommand("sweep-n", "Galerkin truncation sweep");
  add_config(sn);
  sn->add_option("--ns", o.ns, "Cutoffs, strictly increasing")->delimiter(',')->required();

  auto* per = app.add_subcommand("perturb", "Continuous dependence on the data");
  add_config(per);
  per->add_option("--eps", o.eps, "Perturbation amplitudes, strictly decreasing")
      ->delimiter(',')
      ->required();
  per->add_flag("--no-forcing-perturbation", o.no_forcing_perturbation,
                "Perturb the initial data only");

  auto* sel = app.add_subcommand("select", "Minimal-energy selection over candidates");
  sel->add_option("--candidates", o.candidates, "Directory of candidate directories")->required();
  sel->add_option("--out", o.out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  json spec;
  if (!o.config_file.empty()) {
    std::string text;
    if (!read_file(o.config_file, text)) return usage_error("cannot read " + o.config_file);
    for (const auto& kv : o.overrides) {
      if (kv.find('=') == std::string::npos) return usage_error("--set expects key=value");
      text += "\n" + kv;
    }
    spec["config_text"] = text;
  }
  if (!o.out.empty()) spec["out"] = o.out;

  CLI::App* cmd = app.get_subcommands().front();
  const std::string name = cmd->get_name();
  spec["kind"] = name;
  if (name == "verify") {
    spec["input"] = o.traj;
    if (!o.forms.empty()) spec["forms"] = o.forms;
    spec["tol_scale"] = o.tol_scale;
    spec["weight"] = o.weight;
    spec["interval_nodes"] = o.nodes;
  } else if (name == "sweep-nu") {
    spec["values"] = o.nus;
    spec["interval_nodes"] = o.nodes;
  } else if (name == "sweep-n") {
    spec["cutoffs"] = o.ns;
  } else if (name == "perturb") {
    spec["values"] = o.eps;
    spec["perturb_forcing"] = !o.no_forcing_perturbation;
  } else if (name == "select") {
    spec["input"] = o.candidates;
  }
  return run(spec, o.quiet);
}
