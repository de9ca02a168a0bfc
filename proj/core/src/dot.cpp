#include "nakasim/dot.hpp"

#include <algorithm>
#include <ostream>

namespace nakasim {

void write_dot(std::ostream& os, const BlockStore& store, std::span<const BlockId> highlight) {
  os << "digraph blocks {\n  rankdir=LR;\n  node [shape=box, style=filled, fontname=\"Helvetica\"];\n";
  for (const Block& b : store.blocks()) {
    os << "  b" << b.id.value << " [label=\"";
    if (!b.parent) {
      os << "genesis\", fillcolor=\"gray80\"";
    } else {
      os << b.miner << '@' << b.round << "\", fillcolor=\"" << (b.honest ? "lightblue" : "salmon") << '"';
    }
    if (std::find(highlight.begin(), highlight.end(), b.id) != highlight.end()) os << ", penwidth=3";
    os << "];\n";
  }
  for (const Block& b : store.blocks()) {
    if (b.parent) os << "  b" << b.id.value << " -> b" << b.parent->value << ";\n";
  }
  os << "}\n";
}

}  // namespace nakasim
