#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "glpwb/formula.hpp"
#include "glpwb/ordinal.hpp"

namespace glpwb {

struct SuiteResult {
  std::string name;
  bool pass = true;
  int checks = 0;
  std::vector<std::string> failures;  // capped at a few entries
};

struct SelftestOptions {
  uint64_t seed = 1;
  int samples = 200;
  bool quick = false;  // smaller enumeration limits
};

/// Runs every invariant suite; one result per suite.
std::vector<SuiteResult> runSelftest(const SelftestOptions& opts = {});

/// Random formula with at most maxNodes nodes over the given variables.
FormulaRef randomFormula(std::mt19937_64& rng, int maxNodes, int maxModality,
                         const std::vector<std::string>& vars);

/// Random ordinal below w^(w^w): exponents below w^w, small coefficients.
Ordinal randomSmallOrdinal(std::mt19937_64& rng);

}  // namespace glpwb
