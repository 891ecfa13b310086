#pragma once

#include <string>
#include <vector>

namespace wpl {

/// Outcome of a verification: ok, or a list of the identities that failed.
struct Report {
  std::vector<std::string> failures;

  bool ok() const { return failures.empty(); }
  explicit operator bool() const { return ok(); }

  void fail(std::string what) { failures.push_back(std::move(what)); }
  void require(bool cond, const std::string& what) {
    if (!cond) fail(what);
  }
  void merge(const Report& other, const std::string& prefix = {}) {
    for (const auto& f : other.failures) failures.push_back(prefix + f);
  }

  std::string summary() const {
    if (ok()) return "ok";
    std::string s;
    for (const auto& f : failures) s += (s.empty() ? "" : "; ") + f;
    return s;
  }
};

}  // namespace wpl
