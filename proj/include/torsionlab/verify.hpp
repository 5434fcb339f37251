#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "torsionlab/exactla.hpp"
#include "torsionlab/torsion.hpp"

namespace torsionlab {

struct PropertyResult {
  std::string name;
  bool passed = true;
  std::uint64_t checked = 0;
  std::uint64_t violations = 0;
  std::string note;
};

struct VerifyConfig {
  std::size_t n = 8;  // vertex count / matrix rows for the structural suites
  std::size_t k = 3;
  std::uint64_t seed = 1;
  std::size_t samples = 200;  // random vectors per (k, n, q) cell
  EnumerationBudget budget;
  SmithKernel smith = default_smith_kernel();
};

/// Suite names: claim6, lemma7, lemma8, lemma10, all.
const std::vector<std::string>& verify_suite_names();

std::vector<PropertyResult> run_verify_suite(std::string_view suite, const VerifyConfig& config);

nlohmann::json verify_report_json(std::string_view suite, const std::vector<PropertyResult>& results);

/// The admissible epsilon fixed for the coisoperimetry suites: half of
/// (k-1)!/k^k.
mpq_class suite_epsilon(std::size_t k);

/// Fault injection for exercising the harness: the default kernel with the
/// last invariant factor doubled.
SmithKernel mutated_smith_kernel();

}  // namespace torsionlab
