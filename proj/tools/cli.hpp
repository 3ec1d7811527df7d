#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dfh::cli {

/// Runs the `dfh` command line; returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int cmd_run(const std::string& config_path, std::ostream& out, std::ostream& err);
int cmd_rates(const std::string& csv_path, int tail, std::ostream& out, std::ostream& err);
int cmd_export(const std::string& snapshot_path, const std::string& vtk_path, std::ostream& out, std::ostream& err);

}  // namespace dfh::cli
