#include "abcat/report.hpp"

#include <cstdlib>
#include <sstream>

namespace abcat {

bool Report::passed() const { return failure_count() == 0; }

std::size_t Report::checked() const {
  std::size_t n = 0;
  for (const auto& s : sections) n += s.checked;
  return n;
}

std::size_t Report::failure_count() const {
  std::size_t n = 0;
  for (const auto& s : sections) n += s.failures.size();
  return n;
}

Section& Report::section(const std::string& axiom) {
  for (auto& s : sections)
    if (s.axiom == axiom) return s;
  sections.push_back(Section{axiom, 0, {}});
  return sections.back();
}

const Section* Report::find(const std::string& axiom) const {
  for (const auto& s : sections)
    if (s.axiom == axiom) return &s;
  return nullptr;
}

json Report::to_json() const {
  json j;
  j["schema"] = kReportSchema;
  j["report"] = name;
  j["passed"] = passed();
  j["sections"] = json::array();
  for (const auto& s : sections) {
    j["sections"].push_back({{"axiom", s.axiom}, {"checked", s.checked}, {"failures", s.failures}});
  }
  j["details"] = details;
  return j;
}

std::string Report::to_text() const {
  std::ostringstream out;
  out << name << ": " << (passed() ? "PASS" : "FAIL") << '\n';
  for (const auto& s : sections) {
    out << "  [" << (s.passed() ? "pass" : "FAIL") << "] " << s.axiom << " (" << s.checked
        << " checked, " << s.failures.size() << " failures)\n";
    for (const auto& f : s.failures) out << "      - " << f.dump() << '\n';
  }
  if (!details.empty()) {
    for (const auto& [key, value] : details.items()) out << "  " << key << ": " << value.dump() << '\n';
  }
  return out.str();
}

std::size_t max_enum_exponent() {
  if (const char* env = std::getenv("ABCAT_MAX_ENUM")) {
    char* end = nullptr;
    unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0') return static_cast<std::size_t>(v);
  }
  return 16;
}

void require_enumerable(std::size_t exponent, const std::string& what) {
  std::size_t cap = max_enum_exponent();
  if (exponent > cap) {
    throw EnumerationLimitError(what + ": enumeration of 2^" + std::to_string(exponent) +
                                " candidates exceeds the cap 2^" + std::to_string(cap) +
                                " (ABCAT_MAX_ENUM)");
  }
}

}  // namespace abcat
