#pragma once

#include <ostream>
#include <string>

#include <json.hpp>

namespace soliton::cli {

enum Status { kOk = 0, kFailure = 1, kBadConfig = 2, kIoError = 3 };

// Resolved run configuration: flags first, then the --config file merged on top.
nlohmann::json resolve_config(int argc, const char* const* argv, std::ostream& out, std::ostream& err,
                              int* status);

// Executes a resolved config; CSV goes to config["out"] or to `out`.
int execute(const nlohmann::json& config, std::ostream& out, std::ostream& err);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace soliton::cli
