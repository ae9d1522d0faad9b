#pragma once

// Command-line front end. Exit codes: 0 success, 2 invalid input or config,
// 3 solver blow-up (partial outputs are written and flagged), 4 resource cap.

#include <string>
#include <vector>

#include "crd/carleman.hpp"
#include "crd/config.hpp"
#include "crd/integrators.hpp"
#include "crd/models.hpp"

namespace crd {

enum ExitCode { kExitOk = 0, kExitInvalid = 2, kExitBlowup = 3, kExitResource = 4 };

struct InitialCondition {
  std::string mode = "fig2";  // fig2 | constant
  std::vector<double> values;  // per species for constant
};

/// Everything a config file can describe; sections are optional per command.
struct RunConfig {
  std::string model = "gm";  // gm | gm-rescaled | custom
  GMParams gm;
  int species = 2;
  std::vector<Reaction> reactions;
  std::vector<double> source;
  std::vector<double> diffusion;
  SpatialGrid grid{50, 1};
  SolverConfig solver;
  std::vector<int> k_orders{2, 3};
  Representation repr = Representation::grouped;
  CarlemanLimits limits;
  InitialCondition initial;
  bool has_sweep = false;
  SweepSpec sweep;
  std::vector<std::string> echo;

  DiscretizedSystem system() const;
  std::vector<double> initial_state() const;
};

/// Validates the schema (unknown sections or keys are errors).
RunConfig load_run_config(const Config& cfg);

/// Entry point shared by the tool and the tests; args exclude the program
/// name.
int run_cli(const std::vector<std::string>& args);

}  // namespace crd
