#pragma once

#include <optional>
#include <string>
#include <vector>

#include "accmm/hyperparams.hpp"

namespace accmm {

enum class Algorithm { AccZom, AccZomda, AccSemiZomda, AccMda, ZoSgd, Sgda };

Algorithm algorithm_from_name(const std::string& name);
std::string algorithm_name(Algorithm algo);

struct TheoryConstants {
  std::optional<double> lipschitz;     // L (mini)
  std::optional<double> lipschitz_lf;  // L_f (minimax)
  std::optional<double> tau;
  int d = 0;   // mini dimension
  int d1 = 0;  // minimax dimensions
  int d2 = 0;
};

enum class CheckStatus { Pass, Fail, Unknown };

struct TheoryRow {
  std::string condition;
  std::optional<double> lhs;
  std::optional<double> rhs;
  CheckStatus status = CheckStatus::Unknown;
  std::string note;
};

struct TheoryReport {
  std::vector<TheoryRow> rows;
  std::vector<std::string> notes;

  bool has_failure() const;
  const TheoryRow* find(const std::string& condition) const;
  std::string to_text() const;
};

// Evaluates the step-size/momentum side conditions of the convergence
// guarantees for the given algorithm: each inequality is reported with both
// sides and PASS/FAIL/UNKNOWN (UNKNOWN when a needed constant is absent).
// Reporting only; never blocks a run. Baselines produce an empty report.
TheoryReport check_theory_conditions(const HyperParams& hp, const TheoryConstants& constants,
                                     Algorithm algo);

}  // namespace accmm
