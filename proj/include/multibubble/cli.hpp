// Command-line surface: subcommand dispatch and deterministic JSON/CSV
// rendering (insertion-ordered keys, every float printed with 9 significant
// digits so identical runs emit identical bytes).
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

namespace multibubble::cli {

// Two-space-indented JSON with floats formatted via "%.9g".
std::string render_json(const nlohmann::ordered_json& doc);

// Flat CSV with one row per leaf: the first column is the JSON pointer of
// the leaf, the second its JSON literal. parse_csv inverts render_csv.
std::string render_csv(const nlohmann::ordered_json& doc);
nlohmann::ordered_json parse_csv(const std::string& text);

// Runs a full command line (without the program name). Exit codes: 0 ok,
// 1 failed check or computation, 2 usage/schema error, 3 domain error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace multibubble::cli
