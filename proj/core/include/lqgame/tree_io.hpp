#pragma once

#include <string>

#include "lqgame/strategy_tree.hpp"

namespace lqgame {

/**
 * JSON form of a strategy tree: header fields, the stage-0 record, the node
 * table (P row-major), and the on-path ids.  Numbers are written with enough
 * digits to round-trip, so parse_tree(serialize_tree(t)) reproduces t
 * exactly.
 */
std::string serialize_tree(const StrategyTree& tree);

/** Inverse of serialize_tree; throws SolverError on malformed input. */
StrategyTree parse_tree(const std::string& text);

void save_tree(const StrategyTree& tree, const std::string& path);
StrategyTree load_tree(const std::string& path);

}  // namespace lqgame
