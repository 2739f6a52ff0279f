#pragma once

#include <string>
#include <string_view>

#include "proxytally/graph.hpp"
#include "proxytally/preprocess.hpp"

namespace proxytally {

enum class InputFormat { Json, EdgeList };

/// Parses without validating the graph. Throws Error(ParseError) with a
/// line (EDGELIST) or byte offset (JSON) in the message.
///
/// JSON:     {"nodes":[{"id":"A","votes":true}],
///            "delegations":[{"from":"A","to":"B","weight":0.5}]}
/// EDGELIST: `voter <id>`, `node <id>`, `<from> -> <to> [weight]`, `#` comments.
GraphSpec parse_spec(std::string_view bytes, InputFormat format);

/// parse_spec followed by build_graph.
DelegationGraph parse_input(std::string_view bytes, InputFormat format);

/// JSON when the text starts with '{' (after whitespace/BOM), else EDGELIST.
InputFormat detect_format(std::string_view bytes) noexcept;

/// Serializes so that parse_input(emit_graph(g, f), f) == g. Equal-split
/// graphs are written without weights.
std::string emit_graph(const DelegationGraph &graph, InputFormat format);

/// Graphviz rendering of a simplified graph: voters filled green, others blue.
std::string to_dot(const SimplifiedGraph &sg);

} // namespace proxytally
