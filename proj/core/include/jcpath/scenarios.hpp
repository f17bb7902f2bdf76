#pragma once

#include "jcpath/config.hpp"

#include <string>
#include <vector>

namespace jcpath {

inline constexpr const char* kToolVersion = "0.1.0";

// A dispersive scenario was asked to run outside its validity window and
// force_regime was not set. Carries the validate_regime message.
class RegimeRefusal : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// The analytic/simulated cross-check exceeded its tolerance.
class OracleCheckFailure : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;  // rectangular, finite values
  std::vector<std::string> provenance;    // emitted as '# ' comment lines
};

// Evaluate a scenario over its parameter grid. Sweep axes iterate row-major
// in declaration order; rows land at fixed indices, so the result does not
// depend on threads. Throws ConfigError for semantic config problems,
// RegimeRefusal for dispersive regime violations.
ResultTable run_scenario(const ScenarioConfig& config, int threads = 1);

// UTF-8, '.' decimal separator, shortest clean 17-significant-digit numbers.
std::string to_csv(const ResultTable& table);

// For oracle_check tables: max over the dev_* columns must stay within
// tolerance, else OracleCheckFailure.
void enforce_oracle_tolerance(const ResultTable& table, double tolerance);

}  // namespace jcpath
