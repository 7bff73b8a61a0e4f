#pragma once

#include "chorefair/divisible.hpp"
#include "chorefair/fairness.hpp"
#include "chorefair/instance.hpp"
#include "chorefair/solver.hpp"

#include <optional>
#include <string>
#include <vector>

namespace chorefair {

// An instance plus the presentation details the on-disk format carries:
// display names and whether chores may be split. Names are unique and
// non-empty; "housekeeper" is reserved. When names are omitted from a
// document they default to a1, a2, ... and c1, c2, ...
struct InstanceDoc {
  Instance instance;
  std::vector<std::string> agent_names;
  std::vector<std::string> chore_names;
  bool divisible = false;
};

InstanceDoc parse_instance_text(const std::string& text);
std::string instance_to_text(const InstanceDoc& doc);
InstanceDoc read_instance_file(const std::string& path);
void write_instance_file(const std::string& path, const InstanceDoc& doc);

struct ResultCertificate {
  EnvyCriterion criterion;
  EnvyReport report;
};

struct ResultDoc {
  std::string algorithm;
  std::optional<Allocation> allocation;           // indivisible runs
  std::optional<FractionalAllocation> fractions;  // divisible runs
  std::vector<ResultCertificate> certificates;
  std::optional<DensityCutoffs> cutoffs;  // divisible runs
  long iterations = 0;
  double elapsed_ms = 0.0;
  std::vector<std::string> special_cases;
  std::string guarantee;  // criterion label the algorithm promises
};

std::string result_to_text(const ResultDoc& result, const InstanceDoc& doc);
ResultDoc parse_result_text(const std::string& text, const InstanceDoc& doc);
void write_result_file(const std::string& path, const ResultDoc& result,
                       const InstanceDoc& doc);
ResultDoc read_result_file(const std::string& path, const InstanceDoc& doc);

// Criterion labels: "ef", "ef1", "ef2", "efx", and "efk:K" for K >= 1.
EnvyCriterion parse_criterion(const std::string& label);
std::string criterion_label(const EnvyCriterion& criterion);

// Labels of the raised flags, in declaration order: "identically-valued",
// "binary-disutility", "identically-sized", "identically-dense",
// "identical-budgets", "two-agents".
std::vector<std::string> special_case_labels(const SpecialCase& flags);

}  // namespace chorefair
