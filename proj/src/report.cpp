#include "perfiso/report.hpp"

namespace perfiso {

using json = nlohmann::json;

RunReport::RunReport(std::string command, json parameters)
    : command_(std::move(command)), parameters_(std::move(parameters)) {}

void RunReport::add(const std::string &name, bool pass, json details,
                    double elapsed_s) {
  lines_.push_back(Line{name, pass, std::move(details), elapsed_s});
  overall_ = overall_ && pass;
}

void RunReport::emit(std::ostream &os, bool with_timings) const {
  for (const auto &l : lines_) {
    json j{{"verdict", l.name}, {"pass", l.pass}};
    if (!l.details.empty()) j["details"] = l.details;
    if (with_timings && l.elapsed_s >= 0) j["seconds"] = l.elapsed_s;
    os << j.dump() << "\n";
  }
  json summary{{"summary",
                json{{"command", command_},
                     {"parameters", parameters_},
                     {"artifact_version", kArtifactVersion},
                     {"overall_pass", overall_}}}};
  os << summary.dump() << "\n";
}

} // namespace perfiso
