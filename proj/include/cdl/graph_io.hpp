#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "cdl/format_error.hpp"
#include "cdl/graph.hpp"

namespace cdl {

// Edge-list text: one edge per line, `parent -> child` (directed) or `a -- b`
// (undirected); a bare name declares an isolated node; `#` starts a comment.

[[nodiscard]] Pdag parse_edge_list(std::string_view text);
/// Throws FormatError if the list has undirected edges; GraphError if cyclic.
[[nodiscard]] Dag parse_dag(std::string_view text);
[[nodiscard]] std::string format_edge_list(const Pdag& g);
[[nodiscard]] std::string format_edge_list(const Dag& g);

// Constraint text: `indep X Y [| Z1, Z2]` or `dep X Y [| ...]`; `| *` expands to
// every subset of the other variables. Variables default to those mentioned.
[[nodiscard]] IndependenceSet parse_constraints(std::string_view text,
                                                const VariableSet& vars = {});
[[nodiscard]] std::string format_constraints(const IndependenceSet& set);

[[nodiscard]] std::string read_text_file(const std::filesystem::path& path);

}  // namespace cdl
