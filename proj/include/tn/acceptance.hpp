#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "tn/sampling.hpp"

namespace tn {

enum class Comparator { AtMost, AtLeast };

std::string to_string(Comparator c);  // "<=" or ">="

/// One measured quantity compared against a threshold.
struct Check {
  std::string name;           // key[fixture]
  std::string key;            // tolerance key, overridable from the command line
  double value = 0.0;         // NaN when the measurement raised
  double tolerance = 0.0;
  Comparator comparator = Comparator::AtMost;
  bool pass = false;
  std::string note;           // error text when the measurement raised
};

struct CriterionResult {
  int id = 0;
  std::string title;
  std::vector<Check> checks;
  bool pass() const;
  /// The check furthest from passing (or the first one when all pass).
  const Check* worst() const;
};

struct AcceptanceOptions {
  int samples = 64;
  std::uint64_t seed = kDefaultSeed;
  std::map<std::string, double> tolerances;  // overrides keyed by Check::key
};

/// Default thresholds keyed by Check::key.
const std::map<std::string, double>& default_tolerances();

/// Throws std::invalid_argument for unknown keys or non-positive values.
void validate_tolerances(const std::map<std::string, double>& overrides);

/// Collects checks and resolves thresholds from the options.
class CheckList {
 public:
  explicit CheckList(const AcceptanceOptions& opts) : opts_(&opts) {}

  double tolerance(const std::string& key) const;
  /// Runs measure(); exceptions become a failing check that carries the message.
  void add(const std::string& key, const std::string& fixture, Comparator cmp, const std::function<double()>& measure);
  void add_value(const std::string& key, const std::string& fixture, Comparator cmp, double value);

  std::vector<Check> take() { return std::move(checks_); }

 private:
  const AcceptanceOptions* opts_;
  std::vector<Check> checks_;
};

inline constexpr int kCriterionCount = 15;

CriterionResult run_criterion(int id, const AcceptanceOptions& opts);
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts);

/// "PASS [3] title: name = value <= tol" style line.
std::string format_criterion(const CriterionResult& r);

}  // namespace tn
