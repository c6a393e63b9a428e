#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "khess/io.hpp"

namespace khess::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { ok = 0, usage = 1, numerical = 2 };

struct RunManifest {
    std::string command;
    Json parameters = Json::object();
    std::string config_hash;
    std::string version = kVersion;
    std::vector<std::string> outputs;
    double wall_seconds = 0.0;

    Json to_json() const;
};

// FNV-1a 64-bit of the canonical dump of `params`, as 16 hex digits.
std::string config_hash(const Json& params);

// key=value lines (# comments, blank lines allowed) into a flat object.
// Values that parse as numbers or true/false are stored typed.
Json parse_config_text(const std::string& text);

// Runs the tool with argv[1..] (program name excluded). Never throws.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace khess::cli
