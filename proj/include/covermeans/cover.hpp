#pragma once

#include <cstdint>
#include <limits>
#include <set>

#include "multigraph.hpp"

namespace covermeans {

// The universal covering tree is never materialized. Vertices of the
// cover are non-backtracking paths from a root; path counts over cover
// regions are computed by iterating a transfer relation on directed-edge
// count vectors. Counts are exact 64-bit integers with overflow checks.

using Count = std::uint64_t;

inline Count checked_add(Count a, Count b) {
    Count s;
    if (__builtin_add_overflow(a, b, &s))
        throw std::overflow_error("path count exceeds 64-bit range");
    return s;
}

// A vertex of the cover: a non-backtracking path of directed edges from
// a root vertex of g. The empty path is the root itself.
struct CoverPath {
    int root = 0;
    std::vector<int> steps;  // directed edge indices

    int length() const { return static_cast<int>(steps.size()); }

    int terminal(const Multigraph& g) const {
        return steps.empty() ? root : g.head(steps.back());
    }

    bool valid(const Multigraph& g) const {
        int at = root;
        for (size_t i = 0; i < steps.size(); ++i) {
            int d = steps[i];
            if (d < 0 || d >= g.n_dirs() || g.tail(d) != at) return false;
            if (i > 0 && d == Multigraph::rev(steps[i - 1])) return false;
            at = g.head(d);
        }
        return true;
    }

    CoverPath parent() const {
        CoverPath p{root, steps};
        p.steps.pop_back();
        return p;
    }

    CoverPath child(int d) const {
        CoverPath c{root, steps};
        c.steps.push_back(d);
        return c;
    }

    auto operator<=>(const CoverPath&) const = default;
};

// A geodesic ray in the cover: an optional finite non-backtracking prefix
// followed by a non-backtracking closed walk traversed periodically. Both
// are given as vertex sequences in g; edges are resolved greedily.
struct RaySpec {
    std::vector<int> prefix;  // vertices, may be empty
    std::vector<int> cycle;   // vertices of the closed walk, size >= 1
};

// Directed edges d_1..d_k of the ray (v_0 -> v_1 -> ... -> v_k).
inline std::vector<int> ray_steps(const Multigraph& g, const RaySpec& ray, int k) {
    if (ray.cycle.empty()) throw std::invalid_argument("ray needs a nonempty cycle");
    auto vertex_at = [&](size_t i) -> int {
        if (i < ray.prefix.size()) return ray.prefix[i];
        return ray.cycle[(i - ray.prefix.size()) % ray.cycle.size()];
    };
    std::vector<int> steps;
    steps.reserve(k);
    int prev = -1;
    for (int i = 0; i < k; ++i) {
        int a = vertex_at(i), b = vertex_at(i + 1);
        int pick = -1;
        for (int d : g.out[a]) {
            if (g.head(d) != b) continue;
            if (prev != -1 && d == Multigraph::rev(prev)) continue;
            pick = d;
            break;
        }
        if (pick == -1)
            throw std::invalid_argument("ray is not a non-backtracking walk at step " +
                                        std::to_string(i));
        steps.push_back(pick);
        prev = pick;
    }
    return steps;
}

struct Region {
    enum class Kind { Sphere, EdgeSphere, Arc, Tube, Horocycle };
    Kind kind = Kind::Sphere;
    int radius = 0;
    int base_vertex = -1;      // Sphere, EdgeSphere
    int base_dir = -1;         // Arc: directed edge (w' -> w), based at its head
    std::vector<CoverPath> X;  // Tube
    RaySpec ray;               // Horocycle

    static Region sphere(int v0, int r) { return {Kind::Sphere, r, v0, -1, {}, {}}; }
    static Region edge_sphere(int v0, int r) { return {Kind::EdgeSphere, r, v0, -1, {}, {}}; }
    static Region arc(int dir, int r) { return {Kind::Arc, r, -1, dir, {}, {}}; }
    static Region tube(std::vector<CoverPath> x, int r) {
        return {Kind::Tube, r, -1, -1, std::move(x), {}};
    }
    static Region horocycle(RaySpec ray, int r) {
        return {Kind::Horocycle, r, -1, -1, {}, std::move(ray)};
    }

    bool on_edges() const { return kind == Kind::EdgeSphere; }
};

// One non-backtracking step: counts on directed edges advance one level.
// next[d] = sum of c[d'] over d' with head(d') = tail(d), d' != rev(d).
inline std::vector<Count> transfer_step(const Multigraph& g, const std::vector<Count>& c) {
    std::vector<Count> in_sum(g.n, 0);
    for (int d = 0; d < g.n_dirs(); ++d)
        if (c[d]) in_sum[g.head(d)] = checked_add(in_sum[g.head(d)], c[d]);
    std::vector<Count> next(g.n_dirs(), 0);
    for (int d = 0; d < g.n_dirs(); ++d)
        next[d] = in_sum[g.tail(d)] - c[Multigraph::rev(d)];
    return next;
}

inline std::vector<Count> aggregate_by_head(const Multigraph& g, const std::vector<Count>& c) {
    std::vector<Count> counts(g.n, 0);
    for (int d = 0; d < g.n_dirs(); ++d)
        if (c[d]) counts[g.head(d)] = checked_add(counts[g.head(d)], c[d]);
    return counts;
}

inline std::vector<Count> aggregate_by_edge(const Multigraph& g, const std::vector<Count>& c) {
    std::vector<Count> counts(g.n_edges(), 0);
    for (int d = 0; d < g.n_dirs(); ++d)
        if (c[d]) {
            int e = Multigraph::edge_of(d);
            counts[e] = checked_add(counts[e], c[d]);
        }
    return counts;
}

// Seed vector for paths of length one out of v0.
inline std::vector<Count> seed_at_vertex(const Multigraph& g, int v0) {
    if (v0 < 0 || v0 >= g.n) throw std::invalid_argument("base vertex out of range");
    std::vector<Count> c(g.n_dirs(), 0);
    for (int d : g.out[v0]) c[d] = 1;
    return c;
}

// |S_r(v0) intersect fiber over v| for each v.
inline std::vector<Count> sphere_counts(const Multigraph& g, int v0, int r) {
    if (r < 0) throw std::invalid_argument("radius must be nonnegative");
    if (r == 0) {
        std::vector<Count> counts(g.n, 0);
        if (v0 < 0 || v0 >= g.n) throw std::invalid_argument("base vertex out of range");
        counts[v0] = 1;
        return counts;
    }
    auto c = seed_at_vertex(g, v0);
    for (int i = 1; i < r; ++i) c = transfer_step(g, c);
    return aggregate_by_head(g, c);
}

// Cover edges at minimum distance r from v0, by fiber over each edge of g.
// These are the final steps of non-backtracking paths of length r+1.
inline std::vector<Count> edge_sphere_counts(const Multigraph& g, int v0, int r) {
    if (r < 0) throw std::invalid_argument("radius must be nonnegative");
    auto c = seed_at_vertex(g, v0);
    for (int i = 0; i < r; ++i) c = transfer_step(g, c);
    return aggregate_by_edge(g, c);
}

// Arc A_r(e) for directed edge e = (w' -> w): paths of length r from w
// whose first step does not return along e.
inline std::vector<Count> arc_counts(const Multigraph& g, int dir, int r) {
    if (dir < 0 || dir >= g.n_dirs()) throw std::invalid_argument("bad directed edge");
    if (r < 0) throw std::invalid_argument("radius must be nonnegative");
    int w = g.head(dir);
    if (r == 0) {
        std::vector<Count> counts(g.n, 0);
        counts[w] = 1;
        return counts;
    }
    auto c = seed_at_vertex(g, w);
    c[Multigraph::rev(dir)] = 0;
    for (int i = 1; i < r; ++i) c = transfer_step(g, c);
    return aggregate_by_head(g, c);
}

namespace detail {

inline void validate_tube_set(const Multigraph& g, const std::vector<CoverPath>& X) {
    if (X.empty()) throw std::invalid_argument("tube set X is empty");
    std::set<CoverPath> members(X.begin(), X.end());
    int root = X.front().root;
    int tops = 0;
    for (const auto& x : X) {
        if (x.root != root) throw std::invalid_argument("tube set must share one root");
        if (!x.valid(g)) throw std::invalid_argument("tube set contains an invalid cover path");
        if (x.steps.empty() || !members.count(x.parent())) ++tops;
    }
    // A set of tree vertices is connected iff exactly one member has its
    // parent outside the set.
    if (tops != 1) throw std::invalid_argument("tube set X is disconnected");
}

}  // namespace detail

// Directed edges of g corresponding to the cover edges leaving V(X);
// the tube of radius r decomposes into arcs of radius r-1 over these.
inline std::vector<int> tube_boundary_dirs(const Multigraph& g, const std::vector<CoverPath>& X) {
    detail::validate_tube_set(g, X);
    std::set<CoverPath> members(X.begin(), X.end());
    std::vector<int> dirs;
    for (const auto& x : X) {
        if (!x.steps.empty() && !members.count(x.parent()))
            dirs.push_back(Multigraph::rev(x.steps.back()));
        int at = x.terminal(g);
        for (int d : g.out[at]) {
            if (!x.steps.empty() && d == Multigraph::rev(x.steps.back())) continue;
            if (!members.count(x.child(d))) dirs.push_back(d);
        }
    }
    return dirs;
}

inline std::vector<Count> tube_counts(const Multigraph& g, const std::vector<CoverPath>& X,
                                      int r) {
    if (r < 1) throw std::invalid_argument("tube radius must be >= 1");
    std::vector<Count> counts(g.n, 0);
    for (int d : tube_boundary_dirs(g, X)) {
        auto part = arc_counts(g, d, r - 1);
        for (int v = 0; v < g.n; ++v)
            if (part[v]) counts[v] = checked_add(counts[v], part[v]);
    }
    return counts;
}

// Horocycle subset H_{gamma,r}(v0) = H_0 intersect S_r(v_r), which equals
// the arc based at v_r in the direction away from v_{r+1}.
inline std::vector<Count> horocycle_counts(const Multigraph& g, const RaySpec& ray, int r) {
    if (r < 0) throw std::invalid_argument("radius must be nonnegative");
    auto steps = ray_steps(g, ray, r + 1);
    return arc_counts(g, Multigraph::rev(steps[r]), r);
}

struct RegionCounts {
    bool on_edges = false;
    std::vector<Count> counts;  // indexed by vertex id or edge id
};

inline RegionCounts region_counts(const Multigraph& g, const Region& region) {
    switch (region.kind) {
        case Region::Kind::Sphere:
            return {false, sphere_counts(g, region.base_vertex, region.radius)};
        case Region::Kind::EdgeSphere:
            return {true, edge_sphere_counts(g, region.base_vertex, region.radius)};
        case Region::Kind::Arc:
            return {false, arc_counts(g, region.base_dir, region.radius)};
        case Region::Kind::Tube:
            return {false, tube_counts(g, region.X, region.radius)};
        case Region::Kind::Horocycle:
            return {false, horocycle_counts(g, region.ray, region.radius)};
    }
    throw std::logic_error("unreachable");
}

}  // namespace covermeans
