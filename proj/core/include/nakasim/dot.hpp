#pragma once

#include <iosfwd>
#include <span>

#include "nakasim/chain.hpp"

namespace nakasim {

/// Graphviz rendering of the whole block tree. Nodes are labelled
/// "miner@round"; honest blocks are filled light blue, corrupt ones
/// salmon, genesis grey. Tips listed in `highlight` get a bold border.
void write_dot(std::ostream& os, const BlockStore& store, std::span<const BlockId> highlight = {});

}  // namespace nakasim
