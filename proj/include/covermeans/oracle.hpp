#pragma once

#include "cover.hpp"

namespace covermeans {

// Brute-force region enumeration. Exhaustively lists the cover points
// (as explicit non-backtracking paths) of a region; the projection
// multiset is the independent check for the transfer-operator counts.
// Deliberately shares no code with the counting path.

inline constexpr std::size_t kOracleGuard = 1000000;

namespace oracle_detail {

inline void guard(std::size_t sz) {
    if (sz > kOracleGuard) throw std::runtime_error("oracle region size guard exceeded");
}

// All NB paths of exactly `len` continuing `base` (DFS).
inline void extend_paths(const Multigraph& g, const CoverPath& base, int len,
                         std::vector<CoverPath>& out) {
    if (len == 0) {
        out.push_back(base);
        guard(out.size());
        return;
    }
    int at = base.terminal(g);
    for (int d : g.out[at]) {
        if (!base.steps.empty() && d == Multigraph::rev(base.steps.back())) continue;
        extend_paths(g, base.child(d), len - 1, out);
    }
}

// Cover vertices at tree distance exactly `len` from `from` (walks that
// never immediately undo a step; in a tree those realize the distance).
inline void tree_walks(const Multigraph& g, const CoverPath& cur,
                       const std::optional<CoverPath>& prev, int len,
                       std::vector<CoverPath>& out) {
    if (len == 0) {
        out.push_back(cur);
        guard(out.size());
        return;
    }
    if (!cur.steps.empty()) {
        auto up = cur.parent();
        if (!prev || up != *prev) tree_walks(g, up, cur, len - 1, out);
    }
    int at = cur.terminal(g);
    for (int d : g.out[at]) {
        if (!cur.steps.empty() && d == Multigraph::rev(cur.steps.back())) continue;
        auto down = cur.child(d);
        if (prev && down == *prev) continue;
        tree_walks(g, down, cur, len - 1, out);
    }
}

}  // namespace oracle_detail

inline std::vector<CoverPath> enumerate_region(const Multigraph& g, const Region& region) {
    using oracle_detail::extend_paths;
    std::vector<CoverPath> out;
    switch (region.kind) {
        case Region::Kind::Sphere:
            extend_paths(g, CoverPath{region.base_vertex, {}}, region.radius, out);
            return out;
        case Region::Kind::EdgeSphere:
            // A cover edge in S'_r is the final step of an NB path of
            // length r+1; list those paths.
            extend_paths(g, CoverPath{region.base_vertex, {}}, region.radius + 1, out);
            return out;
        case Region::Kind::Arc: {
            int w = g.head(region.base_dir);
            if (region.radius == 0) {
                out.push_back(CoverPath{w, {}});
                return out;
            }
            for (int d : g.out[w]) {
                if (d == Multigraph::rev(region.base_dir)) continue;
                extend_paths(g, CoverPath{w, {d}}, region.radius - 1, out);
            }
            return out;
        }
        case Region::Kind::Tube: {
            detail::validate_tube_set(g, region.X);
            if (region.radius < 1) throw std::invalid_argument("tube radius must be >= 1");
            // Plain BFS over cover vertices, layer by layer from V(X).
            std::set<CoverPath> seen(region.X.begin(), region.X.end());
            std::vector<CoverPath> layer(region.X.begin(), region.X.end());
            for (int depth = 1; depth <= region.radius; ++depth) {
                std::vector<CoverPath> next;
                for (const auto& x : layer) {
                    auto visit = [&](const CoverPath& y) {
                        if (seen.insert(y).second) {
                            next.push_back(y);
                            oracle_detail::guard(seen.size());
                        }
                    };
                    if (!x.steps.empty()) visit(x.parent());
                    int at = x.terminal(g);
                    for (int d : g.out[at]) {
                        if (!x.steps.empty() && d == Multigraph::rev(x.steps.back())) continue;
                        visit(x.child(d));
                    }
                }
                layer = std::move(next);
            }
            return layer;
        }
        case Region::Kind::Horocycle: {
            int r = region.radius;
            // Ray vertices are the prefix paths of the ray; the Busemann
            // function of a cover vertex w is |w| - 2*lcp(w, ray).
            auto rsteps = ray_steps(g, region.ray, 2 * r + 2);
            int root = region.ray.prefix.empty() ? region.ray.cycle[0] : region.ray.prefix[0];
            CoverPath vr{root, std::vector<int>(rsteps.begin(), rsteps.begin() + r)};
            std::vector<CoverPath> sphere;
            oracle_detail::tree_walks(g, vr, std::nullopt, r, sphere);
            for (const auto& w : sphere) {
                size_t lcp = 0;
                while (lcp < w.steps.size() && lcp < rsteps.size() &&
                       w.steps[lcp] == rsteps[lcp])
                    ++lcp;
                long long busemann = static_cast<long long>(w.steps.size()) -
                                     2 * static_cast<long long>(lcp);
                if (busemann == 0) out.push_back(w);
            }
            return out;
        }
    }
    throw std::logic_error("unreachable");
}

// Projection multiset of an enumerated region, in the same index space
// as region_counts.
inline RegionCounts project_region(const Multigraph& g, const Region& region,
                                   const std::vector<CoverPath>& paths) {
    if (region.on_edges()) {
        std::vector<Count> counts(g.n_edges(), 0);
        for (const auto& p : paths) {
            if (p.steps.empty()) throw std::logic_error("edge region path without steps");
            ++counts[Multigraph::edge_of(p.steps.back())];
        }
        return {true, counts};
    }
    std::vector<Count> counts(g.n, 0);
    for (const auto& p : paths) ++counts[p.terminal(g)];
    return {false, counts};
}

inline RegionCounts region_counts_oracle(const Multigraph& g, const Region& region) {
    return project_region(g, region, enumerate_region(g, region));
}

}  // namespace covermeans
