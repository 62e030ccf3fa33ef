#include "plap/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "plap/text.hpp"

namespace plap {

Graph::Graph(Index num_nodes, std::vector<Edge> edges) : n_(num_nodes), edges_(std::move(edges)) {
  if (n_ < 0) throw GraphError("negative node count");
  for (Edge& e : edges_) {
    if (e.k1 < 0 || e.k2 < 0 || e.k1 >= n_ || e.k2 >= n_) {
      throw GraphError("edge (" + std::to_string(e.k1) + "," + std::to_string(e.k2) +
                       ") references a node outside 0.." + std::to_string(n_ - 1));
    }
    if (e.k1 == e.k2) throw GraphError("self-loop at node " + std::to_string(e.k1));
    if (!(e.w > 0.0) || !std::isfinite(e.w)) {
      throw GraphError("edge (" + std::to_string(e.k1) + "," + std::to_string(e.k2) +
                       ") has non-positive or non-finite weight");
    }
    if (e.k1 > e.k2) std::swap(e.k1, e.k2);
  }
  std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
    return a.k1 != b.k1 ? a.k1 < b.k1 : a.k2 < b.k2;
  });
  for (std::size_t k = 1; k < edges_.size(); ++k) {
    if (edges_[k].k1 == edges_[k - 1].k1 && edges_[k].k2 == edges_[k - 1].k2) {
      throw GraphError("duplicate edge (" + std::to_string(edges_[k].k1) + "," +
                       std::to_string(edges_[k].k2) + ")");
    }
  }

  // CSR adjacency; iterating edges in lexical order keeps each row sorted.
  std::vector<std::size_t> counts(static_cast<std::size_t>(n_), 0);
  for (const Edge& e : edges_) {
    ++counts[static_cast<std::size_t>(e.k1)];
    ++counts[static_cast<std::size_t>(e.k2)];
  }
  adj_offsets_.assign(static_cast<std::size_t>(n_) + 1, 0);
  std::partial_sum(counts.begin(), counts.end(), adj_offsets_.begin() + 1);
  adjacency_.resize(adj_offsets_.back());
  std::vector<std::size_t> cursor(adj_offsets_.begin(), adj_offsets_.end() - 1);
  // Lower neighbors first (edges with k2 == i), then higher ones; both passes
  // visit them in ascending order.
  for (const Edge& e : edges_) {
    adjacency_[cursor[static_cast<std::size_t>(e.k2)]++] = {e.k1, e.w};
  }
  for (const Edge& e : edges_) {
    adjacency_[cursor[static_cast<std::size_t>(e.k1)]++] = {e.k2, e.w};
  }
}

std::vector<Index> connected_components(const Graph& g) {
  const Index n = g.num_nodes();
  std::vector<Index> comp(static_cast<std::size_t>(n), -1);
  std::vector<Index> stack;
  Index next = 0;
  for (Index s = 0; s < n; ++s) {
    if (comp[static_cast<std::size_t>(s)] >= 0) continue;
    comp[static_cast<std::size_t>(s)] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      const Index u = stack.back();
      stack.pop_back();
      for (const Neighbor& nb : g.neighbors(u)) {
        auto& c = comp[static_cast<std::size_t>(nb.node)];
        if (c < 0) {
          c = next;
          stack.push_back(nb.node);
        }
      }
    }
    ++next;
  }
  return comp;
}

bool is_connected(const Graph& g) {
  if (g.num_nodes() == 0) return false;
  const auto comp = connected_components(g);
  return std::all_of(comp.begin(), comp.end(), [](Index c) { return c == 0; });
}

Graph read_edge_list(std::istream& in) {
  std::vector<Edge> edges;
  Index declared_nodes = -1;
  Index max_index = -1;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (line[first] == '#') {
      std::istringstream hs(line.substr(first + 1));
      std::string key;
      long long count = 0;
      if (hs >> key && key == "nodes") {
        if (!(hs >> count) || count < 0) {
          throw GraphError("line " + std::to_string(line_no) + ": malformed #nodes header");
        }
        declared_nodes = static_cast<Index>(count);
      }
      continue;
    }
    std::istringstream ls(line);
    long long a = 0;
    long long b = 0;
    std::string wtext;
    std::string extra;
    double w = 0.0;
    if (!(ls >> a >> b >> wtext) || (ls >> extra) || !parse_double(wtext, w)) {
      throw GraphError("line " + std::to_string(line_no) + ": expected `<k1> <k2> <w>`");
    }
    if (a < 0 || b < 0) {
      throw GraphError("line " + std::to_string(line_no) + ": negative node index");
    }
    edges.push_back({static_cast<Index>(a), static_cast<Index>(b), w});
    max_index = std::max({max_index, static_cast<Index>(a), static_cast<Index>(b)});
  }
  if (declared_nodes >= 0 && max_index >= declared_nodes) {
    throw GraphError("edge index " + std::to_string(max_index) + " exceeds #nodes " +
                     std::to_string(declared_nodes));
  }
  const Index n = declared_nodes >= 0 ? declared_nodes : max_index + 1;
  return Graph(n, std::move(edges));
}

Graph read_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_edge_list(in);
}

void write_edge_list(std::ostream& out, const Graph& g) {
  out << "#nodes " << g.num_nodes() << '\n';
  for (const Edge& e : g.edges()) {
    out << e.k1 << ' ' << e.k2 << ' ' << format_double(e.w) << '\n';
  }
}

void write_edge_list_file(const std::string& path, const Graph& g) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  write_edge_list(out, g);
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace plap
