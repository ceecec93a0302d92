#pragma once

#include <map>
#include <string>
#include <vector>

namespace lipspace {

/// One named invocation of a library operation. `params` is the
/// command-specific JSON object; `out_dir` empty suppresses artifact
/// files. Equal configs produce byte-identical report JSON; wall-clock
/// metadata goes to a separate file.
struct RunConfig {
  std::string command;
  std::string params_json = "{}";
  std::string out_dir;
};

struct RunOutcome {
  int exit_status = 0;  // 0 passed, 1 failed check or error, 2 unknown command
  std::string report_json;
  std::string failure;  // named failing check or error, empty when passing
  // Extra artifact files (CSV tables, SVG plots) keyed by filename.
  std::map<std::string, std::string> artifacts;
};

/// Dispatches the command, evaluates its asserted checks, and (when
/// out_dir is set) writes report.json, metadata.json and the artifacts.
RunOutcome run(const RunConfig& config);

struct CommandRow {
  std::string command;      // CLI invocation
  std::string operation;    // library entry point
  std::string description;  // one line, plain words
};

/// Static table: every public library operation appears exactly once.
const std::vector<CommandRow>& list_commands();

}  // namespace lipspace
