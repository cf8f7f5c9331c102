#pragma once

#include <algorithm>
#include <array>
#include <fstream>
#include <optional>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace covermeans {

// Finite connected multigraph. Loops and parallel edges are allowed.
// Edge e = (u, v) owns two directed edges: 2e runs u->v, 2e+1 runs v->u.
// A loop at v contributes 2 to degree(v) (both directions start at v).
struct Multigraph {
    int n = 0;
    std::vector<std::pair<int, int>> edges;
    std::vector<std::vector<int>> out;  // out[v] = directed edges with tail v

    Multigraph() = default;
    Multigraph(int n_vertices, std::vector<std::pair<int, int>> edge_list)
        : n(n_vertices), edges(std::move(edge_list)) {
        if (n <= 0) throw std::invalid_argument("graph must have at least one vertex");
        for (auto [u, v] : edges)
            if (u < 0 || v < 0 || u >= n || v >= n)
                throw std::invalid_argument("edge endpoint out of range");
        out.assign(n, {});
        for (int e = 0; e < n_edges(); ++e) {
            out[edges[e].first].push_back(2 * e);
            out[edges[e].second].push_back(2 * e + 1);
        }
    }

    int n_edges() const { return static_cast<int>(edges.size()); }
    int n_dirs() const { return 2 * n_edges(); }

    static int edge_of(int d) { return d / 2; }
    static int rev(int d) { return d ^ 1; }
    int tail(int d) const { return (d & 1) ? edges[d / 2].second : edges[d / 2].first; }
    int head(int d) const { return (d & 1) ? edges[d / 2].first : edges[d / 2].second; }

    int degree(int v) const { return static_cast<int>(out[v].size()); }

    bool is_simple() const {
        std::set<std::pair<int, int>> seen;
        for (auto [u, v] : edges) {
            if (u == v) return false;
            auto key = std::minmax(u, v);
            if (!seen.insert(key).second) return false;
        }
        return true;
    }

    bool is_connected() const {
        if (n == 0) return false;
        std::vector<char> vis(n, 0);
        std::queue<int> q;
        q.push(0);
        vis[0] = 1;
        int reached = 1;
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            for (int d : out[v]) {
                int w = head(d);
                if (!vis[w]) {
                    vis[w] = 1;
                    ++reached;
                    q.push(w);
                }
            }
        }
        return reached == n;
    }

    // Two-coloring; nullopt if there is an odd cycle (loops included).
    std::optional<std::vector<int>> bipartite_coloring() const {
        std::vector<int> color(n, -1);
        for (int s = 0; s < n; ++s) {
            if (color[s] != -1) continue;
            color[s] = 0;
            std::queue<int> q;
            q.push(s);
            while (!q.empty()) {
                int v = q.front();
                q.pop();
                for (int d : out[v]) {
                    int w = head(d);
                    if (color[w] == -1) {
                        color[w] = 1 - color[v];
                        q.push(w);
                    } else if (color[w] == color[v]) {
                        return std::nullopt;
                    }
                }
            }
        }
        return color;
    }

    std::optional<std::array<std::vector<int>, 2>> bipartite_parts() const {
        auto color = bipartite_coloring();
        if (!color) return std::nullopt;
        std::array<std::vector<int>, 2> parts;
        for (int v = 0; v < n; ++v) parts[(*color)[v]].push_back(v);
        return parts;
    }
};

// Classification record. `ramanujan` is filled by the spectral layer
// (see spectral.hpp: classify); classify_structure leaves it unset.
struct GraphClass {
    std::optional<int> regular_q;                              // degree = q+1
    std::optional<std::pair<int, int>> semiregular_pq;         // p <= q
    std::optional<std::array<std::vector<int>, 2>> bipartite_parts;
    bool simple = false;
    std::optional<bool> ramanujan;

    bool bipartite() const { return bipartite_parts.has_value(); }
};

inline GraphClass classify_structure(const Multigraph& g) {
    GraphClass c;
    c.simple = g.is_simple();
    c.bipartite_parts = g.bipartite_parts();

    bool regular = true;
    for (int v = 1; v < g.n; ++v)
        if (g.degree(v) != g.degree(0)) { regular = false; break; }
    if (regular) c.regular_q = g.degree(0) - 1;

    if (c.bipartite_parts) {
        // Semiregular: every edge joins a degree-(p+1) vertex to a
        // degree-(q+1) vertex. Normalized so that p <= q.
        bool semi = g.n_edges() > 0;
        auto pair_of = [&](int e) -> std::pair<int, int> {
            auto [u, v] = g.edges[e];
            return std::minmax(g.degree(u), g.degree(v));
        };
        auto first = semi ? pair_of(0) : std::pair<int, int>{0, 0};
        for (int e = 1; semi && e < g.n_edges(); ++e)
            if (pair_of(e) != first) semi = false;
        if (semi && first.first >= 1)
            c.semiregular_pq = std::make_pair(first.first - 1, first.second - 1);
    }
    return c;
}

// d'(e) for simple graphs: edges meeting e in either endpoint.
inline int edge_degree(const Multigraph& g, int e) {
    if (!g.is_simple()) throw std::invalid_argument("edge_degree requires a simple graph");
    auto [u, v] = g.edges[e];
    return (g.degree(u) - 1) + (g.degree(v) - 1);
}

// L(G): vertices are the edges of g, adjacency is a shared endpoint.
inline Multigraph line_graph(const Multigraph& g) {
    if (!g.is_simple()) throw std::invalid_argument("line_graph requires a simple graph");
    std::vector<std::pair<int, int>> le;
    for (int v = 0; v < g.n; ++v) {
        const auto& inc = g.out[v];
        for (size_t i = 0; i < inc.size(); ++i)
            for (size_t j = i + 1; j < inc.size(); ++j)
                le.emplace_back(Multigraph::edge_of(inc[i]), Multigraph::edge_of(inc[j]));
    }
    return Multigraph(std::max(g.n_edges(), 1), std::move(le));
}

struct SquaredGraph {
    Multigraph graph;
    std::vector<int> vertex_ids;  // new id -> original vertex id
};

// G' on one bipartition part: one edge per non-backtracking path of
// length two (x-m-y and y-m-x collapse to the same edge). Parallel edges
// at the middle vertex can produce loops in G'; they are kept.
inline SquaredGraph squared_graph(const Multigraph& g, int part) {
    if (part != 1 && part != 2) throw std::invalid_argument("part must be 1 or 2");
    auto parts = g.bipartite_parts();
    if (!parts) throw std::invalid_argument("squared_graph requires a bipartite graph");
    const auto& chosen = (*parts)[part - 1];
    const auto& middle = (*parts)[2 - part];
    std::vector<int> remap(g.n, -1);
    for (size_t i = 0; i < chosen.size(); ++i) remap[chosen[i]] = static_cast<int>(i);

    std::vector<std::pair<int, int>> se;
    for (int m : middle) {
        const auto& inc = g.out[m];
        for (size_t i = 0; i < inc.size(); ++i)
            for (size_t j = i + 1; j < inc.size(); ++j) {
                int x = g.head(inc[i]);
                int y = g.head(inc[j]);
                se.emplace_back(remap[x], remap[y]);
            }
    }
    return {Multigraph(static_cast<int>(chosen.size()), std::move(se)), chosen};
}

// Edge-list text: one "u v" per line, '#' comments, n = max id + 1.
inline Multigraph parse_graph(const std::string& text) {
    std::vector<std::pair<int, int>> edges;
    int max_id = -1;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        long long u, v;
        if (!(ls >> u)) continue;  // blank line
        std::string trailing;
        if (!(ls >> v) || (ls >> trailing)) {
            throw std::runtime_error("parse error at line " + std::to_string(lineno) +
                                     ": expected \"u v\"");
        }
        if (u < 0 || v < 0)
            throw std::runtime_error("parse error at line " + std::to_string(lineno) +
                                     ": negative vertex id");
        edges.emplace_back(static_cast<int>(u), static_cast<int>(v));
        max_id = std::max(max_id, static_cast<int>(std::max(u, v)));
    }
    if (edges.empty()) throw std::runtime_error("empty graph");
    Multigraph g(max_id + 1, std::move(edges));
    if (!g.is_connected()) throw std::runtime_error("disconnected graph");
    return g;
}

inline Multigraph load_graph(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open graph file: " + path);
    std::stringstream buf;
    buf << f.rdbuf();
    return parse_graph(buf.str());
}

inline std::string to_edge_list(const Multigraph& g) {
    std::ostringstream os;
    for (auto [u, v] : g.edges) os << u << ' ' << v << '\n';
    return os.str();
}

}  // namespace covermeans
