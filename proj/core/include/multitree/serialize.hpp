#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "multitree/graph.hpp"

namespace multitree {

// Line-based text format:
//   N M K
//   id cap          (one line per node)
//   color parent child   (one line per link; server feeds are implicit)
// Links are emitted sorted by (color, parent, child) so equal states produce
// byte-identical text.
std::string to_text(const GraphState& state);

struct ParseError : std::runtime_error {
  ParseError(std::size_t line_, const std::string& what_)
      : std::runtime_error("line " + std::to_string(line_) + ": " + what_),
        line(line_) {}
  std::size_t line;
};

// Inverse of to_text. Bad input throws ParseError (with the 1-based line
// number); buffered depths are rebuilt from the loaded links.
GraphState from_text(const std::string& text);

// Atomic file IO: write to a sibling temp file, then rename into place.
void save_text(const GraphState& state, const std::filesystem::path& path);
GraphState load_text(const std::filesystem::path& path);

}  // namespace multitree
