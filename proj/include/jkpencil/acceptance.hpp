#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace jkp {

struct AcceptanceOptions {
  std::uint64_t seed = 1;
  std::size_t roundtrip_cases = 200;
  std::size_t roundtrip_max_dim = 12;
  std::size_t trials = 200;
  std::size_t lattice_max_dim = 16;
  std::size_t violating_max_dim = 12;
  std::size_t quadratic_cases = 20;
  std::size_t quadratic_max_dim = 8;
  std::size_t signature_max_n = 3;
  std::size_t signature_max_k = 3;
  std::size_t flat_cases = 10;
  std::size_t product_cases = 5;
  std::size_t property_cases = 50;

  // Reduced sizes for a fast smoke run of every criterion.
  static AcceptanceOptions quick(std::uint64_t seed);
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double wall_seconds = 0;
  // Summed over all worker threads, so it bounds single-core runtime.
  double cpu_seconds = 0;
  double limit_seconds = 0;  // 0 when the criterion has no time budget
};

// Criteria 1..9; an empty selection runs all of them.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt, const std::vector<int>& which = {});

std::string format_result(const CriterionResult& r);

}  // namespace jkp
