#pragma once

// Command-line experiment runner. run() is the whole program minus process
// plumbing so tests can drive it in-process.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace betagap::cli {

struct RunRecord {
  std::string command;
  nlohmann::json params = nlohmann::json::object();
  nlohmann::json result;
  std::optional<std::uint64_t> seed;
  std::string timestamp;
  std::string version;
  double wall_seconds = 0.0;

  bool operator==(const RunRecord&) const = default;
};

void to_json(nlohmann::json& j, const RunRecord& r);
void from_json(const nlohmann::json& j, RunRecord& r);

/// Exit status: 0 success, 1 domain or numerical error, 2 usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace betagap::cli
