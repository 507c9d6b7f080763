#pragma once

#include <string>

#include "colonpose/config.hpp"

namespace colonpose {

// Subcommand bodies; each consumes its keys from cfg, rejects unknown ones,
// writes its outputs plus a run_manifest.txt under out_dir, and throws
// Config/Io/NumericError on failure.
void cmd_generate(const KeyValueConfig& cfg, const std::string& out_dir);
void cmd_train(const KeyValueConfig& cfg, const std::string& out_dir);
void cmd_predict(const KeyValueConfig& cfg, const std::string& out_dir);
void cmd_eval(const KeyValueConfig& cfg, const std::string& out_dir);
void cmd_warp_study(const KeyValueConfig& cfg, const std::string& out_dir);

// Full argv entry point; returns the process exit code
// (0 ok, 2 config error, 3 I/O error, 4 numeric error).
int run_cli(int argc, const char* const* argv);

}  // namespace colonpose
