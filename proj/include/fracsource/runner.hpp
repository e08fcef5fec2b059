#pragma once
// Configuration-driven experiment runner: parses a strict JSON description
// (unknown keys are errors naming the key), executes one task, and writes
// deterministic artifacts — CSV data, a JSON report, and a run manifest
// recording every internally resolved default. Outputs are byte-identical
// across runs and thread caps.
//
// Tasks: forward | expand | invert-x | invert-t | kappa | ml | eigen.

#include <stdexcept>
#include <string>
#include <vector>

namespace fracsource {

// invalid configuration: CLI exit code 1
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// diagnosed runtime failure (untrusted conditioning, blind spot, ...):
// CLI exit code 2, diagnostic serialized next to the outputs
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunOverrides {
  std::string out_prefix;     // empty: keep the config's "output"
  int n_modes = 0;            // 0: keep the config's operator.n_modes
  double quad_rel_tol = 0.0;  // 0: keep the solver default
};

void run_experiment(const std::string& config_path, const RunOverrides& o = {});

const std::vector<std::string>& demo_names();

// Curated end-to-end scenarios (each reuses the experiment runner and adds a
// human-readable summary). Artifacts land under <out_root>/<name>_*.
void run_demo(const std::string& name, const std::string& out_root);

}  // namespace fracsource
