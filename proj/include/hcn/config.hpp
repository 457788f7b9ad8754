#pragma once

// Manifold configuration files. Grammar (one statement per line):
//
//   line      := ws (statement)? ws ('#' any*)?
//   statement := 'name'    '=' string
//              | 'dim'     '=' integer
//              | 'g' '[' i ']' '[' j ']' '=' string      metric g_ij
//              | 'J' '[' i ']' '[' j ']' '=' string      J^i_j (row i, column j)
//              | 'samples' '=' '[' point (',' point)* ']'
//   point     := '[' number (',' number)* ']'
//   string    := '"' [^"]* '"'
//
// Indices are 1-based. Missing g and J entries are 0; a g entry given only
// above or below the diagonal is mirrored. `dim` must precede any g, J or
// samples line. A `samples` list may span several lines.

#include "hcn/geometry.hpp"

#include <filesystem>
#include <stdexcept>
#include <string>

namespace hcn {

class ConfigError : public std::runtime_error {
public:
  ConfigError(const std::string& message, int line)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
        line_(line) {}
  int line() const noexcept { return line_; }

private:
  int line_;
};

ChartManifold parse_manifold_config(const std::string& text);
ChartManifold load_manifold_file(const std::filesystem::path& path);

/// Directory holding the built-in configs: $HCN_MANIFOLD_DIR if set,
/// otherwise the path baked in at build time.
std::filesystem::path manifold_directory();

/// Resolve a manifold by built-in name (file stem in manifold_directory())
/// or by path.
ChartManifold resolve_manifold(const std::string& name_or_path);

} // namespace hcn
