#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace perfiso {

inline constexpr const char *kArtifactVersion = "perfiso 1.0.0";

/// JSON-lines run report: one verdict object per line plus a trailing
/// summary.  Deterministic by construction; wall times are attached only
/// when explicitly enabled so that default reports are byte-identical
/// across runs.
class RunReport {
public:
  RunReport(std::string command, nlohmann::json parameters);

  void add(const std::string &name, bool pass,
           nlohmann::json details = nlohmann::json::object(),
           double elapsed_s = -1.0);

  bool overall_pass() const { return overall_; }
  void emit(std::ostream &os, bool with_timings) const;

private:
  std::string command_;
  nlohmann::json parameters_;
  struct Line {
    std::string name;
    bool pass;
    nlohmann::json details;
    double elapsed_s;
  };
  std::vector<Line> lines_;
  bool overall_ = true;
};

} // namespace perfiso
