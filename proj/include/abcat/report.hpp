#pragma once

#include <cstddef>
#include <deque>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace abcat {

using json = nlohmann::json;

/// Version tag carried by every serialized report.
inline constexpr const char* kReportSchema = "abcat/1";

/// One checked property: how many instances were examined and which failed.
struct Section {
  std::string axiom;
  std::size_t checked = 0;
  std::vector<json> failures;

  bool passed() const { return failures.empty(); }
  void fail(json what) { failures.push_back(std::move(what)); }
};

/// Outcome of a verification run. Value type; sections keep insertion order.
struct Report {
  std::string name;
  /// Deque so that references returned by section() survive later appends.
  std::deque<Section> sections;
  /// Free-form summary data (counts, verdicts), serialized under "details".
  json details = json::object();

  bool passed() const;
  std::size_t checked() const;
  std::size_t failure_count() const;

  /// Returns the section with this name, appending an empty one if absent.
  Section& section(const std::string& axiom);
  const Section* find(const std::string& axiom) const;

  json to_json() const;
  std::string to_text() const;
};

/// Thrown when an enumeration would exceed the configured cap.
class EnumerationLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Cap on the exponent of any brute-force enumeration (2^cap candidates).
/// Defaults to 16; overridden by the ABCAT_MAX_ENUM environment variable.
std::size_t max_enum_exponent();

/// Throws EnumerationLimitError when `exponent` exceeds max_enum_exponent().
void require_enumerable(std::size_t exponent, const std::string& what);

}  // namespace abcat
