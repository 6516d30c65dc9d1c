#pragma once

#include "dendro/io.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace dendro::suites {

struct SuiteResult {
  std::string name;
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  bool passed = false;
  std::vector<std::string> failures;  // violating instances, serialized
  std::vector<std::string> notes;     // monitored observations
  io::Json details;                   // per-suite counters

  io::Json to_json() const;
};

// Each suite pins its own thresholds; `trials` raises (never lowers) the
// pinned minimum. Names double as CLI suite names.
SuiteResult run_example41();
SuiteResult run_branching_theorem(std::uint64_t seed, std::size_t trials = 0);
SuiteResult run_metric_axioms(std::uint64_t seed, std::size_t trials = 0);
SuiteResult run_quantization(std::uint64_t seed, std::size_t trials = 0);
SuiteResult run_pseudo_discreteness();
SuiteResult run_lemma_soundness(std::uint64_t seed, std::size_t trials = 0);
SuiteResult run_root_change(std::uint64_t seed, std::size_t trials = 0);
SuiteResult run_branching_decision(std::uint64_t seed, std::size_t trials = 0);
SuiteResult run_determinism(std::uint64_t seed);

std::vector<std::string> suite_names();
SuiteResult run_suite(const std::string& name, std::uint64_t seed,
                      std::size_t trials = 0);

}  // namespace dendro::suites
