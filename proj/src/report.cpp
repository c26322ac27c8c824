#include "klr/report.hpp"

#include <sstream>

#include "json.hpp"

namespace klr {

std::string Report::to_text(bool only_failures) const {
  std::ostringstream os;
  for (const auto& l : lines) {
    if (only_failures && l.pass) continue;
    os << (l.pass ? "ok   " : "FAIL ") << l.check << " [" << l.instance << "]";
    if (!l.pass || !l.got.empty()) os << " expected " << l.expected << ", got " << l.got;
    os << '\n';
  }
  os << name << ": " << (pass() ? "pass" : "FAIL") << " (" << lines.size() - failures() << "/" << lines.size() << ")\n";
  return os.str();
}

std::string Report::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& l : lines)
    arr.push_back({{"check", l.check}, {"instance", l.instance}, {"expected", l.expected}, {"got", l.got}, {"pass", l.pass}});
  return arr.dump(2);
}

}  // namespace klr
