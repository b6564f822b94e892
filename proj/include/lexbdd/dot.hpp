#pragma once

#include <lexbdd/store.hpp>

#include <functional>
#include <ostream>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

namespace lexbdd {

/// Writes the BDDs below `roots` in Graphviz format. Then-edges are solid,
/// Else-edges dashed, and complemented edges end in a dot.
inline void write_dot(std::ostream &os, const NodeStore &store, std::span<const Edge> roots,
                      const std::function<std::string(var_t)> &var_name = {}) {
  const auto name = [&](var_t v) {
    return var_name ? var_name(v) : "x" + std::to_string(v);
  };
  const auto edge_attrs = [](Edge e, bool dashed) {
    std::string a;
    if (dashed)
      a += "style=dashed";
    if (e.complemented())
      a += std::string(a.empty() ? "" : ",") + "arrowhead=dot";
    return a;
  };

  os << "digraph bdd {\n";
  os << "  n1 [shape=box,label=\"1\"];\n";
  std::unordered_set<std::uint32_t> seen{1};
  std::vector<std::uint32_t> stack;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    os << "  r" << i << " [shape=plaintext,label=\"f" << i << "\"];\n";
    os << "  r" << i << " -> n" << roots[i].slot() << " [" << edge_attrs(roots[i], false)
       << "];\n";
    stack.push_back(roots[i].slot());
  }
  while (!stack.empty()) {
    const std::uint32_t s = stack.back();
    stack.pop_back();
    if (!seen.insert(s).second)
      continue;
    const Node &n = store.node(Edge(static_cast<std::int32_t>(s)));
    os << "  n" << s << " [shape=circle,label=\"" << name(n.var) << "\\n#" << s << "\"];\n";
    os << "  n" << s << " -> n" << n.then_edge.slot() << " [" << edge_attrs(n.then_edge, false)
       << "];\n";
    os << "  n" << s << " -> n" << n.else_edge.slot() << " [" << edge_attrs(n.else_edge, true)
       << "];\n";
    stack.push_back(n.then_edge.slot());
    stack.push_back(n.else_edge.slot());
  }
  os << "}\n";
}

} // namespace lexbdd
