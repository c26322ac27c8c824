#pragma once

#include <string>
#include <vector>

namespace klr {

/// One verified instance: what was checked, where, and the outcome.
struct CheckLine {
  std::string check;
  std::string instance;
  std::string expected;
  std::string got;
  bool pass = true;
};

struct Report {
  std::string name;
  std::vector<CheckLine> lines;

  void add(std::string check, std::string instance, std::string expected, std::string got, bool pass) {
    lines.push_back({std::move(check), std::move(instance), std::move(expected), std::move(got), pass});
  }
  void add(CheckLine l) { lines.push_back(std::move(l)); }
  void append(const Report& o) { lines.insert(lines.end(), o.lines.begin(), o.lines.end()); }
  bool pass() const {
    for (const auto& l : lines)
      if (!l.pass) return false;
    return true;
  }
  std::size_t failures() const {
    std::size_t n = 0;
    for (const auto& l : lines) n += l.pass ? 0 : 1;
    return n;
  }
  std::string to_text(bool only_failures = false) const;
  std::string to_json() const;
};

}  // namespace klr
