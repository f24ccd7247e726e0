// qpnls <config-file> [--out DIR]
//
// Runs one experiment described by a config file and writes its CSV outputs.
// Exit codes: 0 success, 1 config error, 2 numeric error, 3 I/O error.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "qpnls/qpnls.hpp"

namespace {

int usage() {
  std::cerr << "usage: qpnls <config-file> [--out DIR]\n";
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  std::string config_path;
  std::string out_override;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--out") {
      if (i + 1 >= argc) return usage();
      out_override = argv[++i];
    } else if (!arg.empty() && arg[0] == '-') {
      return usage();
    } else if (config_path.empty()) {
      config_path = arg;
    } else {
      return usage();
    }
  }
  if (config_path.empty()) return usage();

  std::ifstream in(config_path);
  if (!in) {
    std::cerr << "qpnls: cannot read config file " << config_path << "\n";
    return 3;
  }
  std::ostringstream text;
  text << in.rdbuf();

  try {
    qpnls::RunConfig cfg = qpnls::parse_config(text.str());
    if (!out_override.empty()) cfg.out_dir = out_override;
    return qpnls::run(cfg);
  } catch (const std::exception& e) {
    std::cerr << "qpnls: " << e.what() << "\n";
    return qpnls::exit_code_for(e);
  }
}
