#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "covermeans/generate.hpp"
#include "covermeans/oracle.hpp"

using namespace covermeans;

namespace {

Count total(const std::vector<Count>& c) {
    Count t = 0;
    for (Count x : c) t = checked_add(t, x);
    return t;
}

// A short non-backtracking closed walk through vertex 0, by BFS.
RaySpec some_ray(const Multigraph& g) {
    // find the shortest cycle through some vertex via BFS over directed edges
    for (int s = 0; s < g.n; ++s) {
        std::vector<int> dist(g.n, -1), via(g.n, -1);
        std::vector<int> parent(g.n, -1);
        std::queue<int> q;
        dist[s] = 0;
        q.push(s);
        int best = -1, meet_a = -1, meet_b = -1;
        while (!q.empty() && best == -1) {
            int v = q.front();
            q.pop();
            for (int d : g.out[v]) {
                int w = g.head(d);
                if (dist[w] == -1) {
                    dist[w] = dist[v] + 1;
                    via[w] = Multigraph::edge_of(d);
                    parent[w] = v;
                    q.push(w);
                } else if (via[v] != Multigraph::edge_of(d)) {
                    best = dist[v] + dist[w] + 1;
                    meet_a = v;
                    meet_b = w;
                    break;
                }
            }
        }
        if (best == -1) continue;
        std::vector<int> left, right;
        for (int v = meet_a; v != -1; v = parent[v]) left.push_back(v);
        for (int v = meet_b; v != -1; v = parent[v]) right.push_back(v);
        // both chains end at s; merge into a cycle
        std::reverse(left.begin(), left.end());
        std::vector<int> cyc(left);
        for (size_t i = 0; i + 1 < right.size(); ++i) cyc.push_back(right[i]);
        RaySpec ray{{}, cyc};
        try {
            ray_steps(g, ray, 3 * static_cast<int>(cyc.size()));
            return ray;
        } catch (const std::invalid_argument&) {
            continue;  // found a closed walk that backtracks at the seam
        }
    }
    throw std::runtime_error("no cycle found");
}

CoverPath two_step_path(const Multigraph& g, int root) {
    int d1 = g.out[root][0];
    for (int d2 : g.out[g.head(d1)])
        if (d2 != Multigraph::rev(d1)) return CoverPath{root, {d1, d2}};
    throw std::runtime_error("no extension");
}

}  // namespace

TEST_CASE("sphere r = 0 is the base vertex") {
    auto g = petersen();
    auto c = sphere_counts(g, 3, 0);
    CHECK(c[3] == 1);
    CHECK(total(c) == 1);
}

TEST_CASE("regular sphere totals are (q+1) q^(r-1)") {
    for (const auto& g : {complete(4), petersen(), barbell()}) {
        for (int r = 1; r <= 10; ++r) {
            Count expect = 3;
            for (int i = 1; i < r; ++i) expect *= 2;
            CHECK(total(sphere_counts(g, 0, r)) == expect);
        }
    }
}

TEST_CASE("K4 sphere r = 2 counts") {
    auto c = sphere_counts(complete(4), 0, 2);
    CHECK(c[0] == 0);
    CHECK(c[1] == 2);
    CHECK(c[2] == 2);
    CHECK(c[3] == 2);
}

TEST_CASE("biregular sphere growth ratio is pq") {
    auto g = complete_bipartite(3, 4);  // p = 2, q = 3
    for (int v0 : {0, 3}) {
        std::vector<Count> sizes;
        for (int r = 0; r <= 8; ++r) sizes.push_back(total(sphere_counts(g, v0, r)));
        for (int k = 2; 2 * k < static_cast<int>(sizes.size()); ++k)
            CHECK(sizes[2 * k] == 6 * sizes[2 * k - 2]);
    }
}

TEST_CASE("edge sphere r = 0 is the incident multiset") {
    auto k4 = complete(4);
    auto c = edge_sphere_counts(k4, 0, 0);
    CHECK(total(c) == 3);
    for (int e = 0; e < 6; ++e) {
        bool incident = k4.edges[e].first == 0 || k4.edges[e].second == 0;
        CHECK(c[e] == (incident ? 1 : 0));
    }
    // a loop is incident twice
    auto lg = parse_graph("0 0\n0 1\n");
    auto lc = edge_sphere_counts(lg, 0, 0);
    CHECK(lc[0] == 2);
    CHECK(lc[1] == 1);
}

TEST_CASE("regular edge sphere totals are (q+1) q^r") {
    auto g = petersen();
    Count expect = 3;
    for (int r = 0; r <= 9; ++r, expect *= 2) CHECK(total(edge_sphere_counts(g, 7, r)) == expect);
}

TEST_CASE("K23 edge sphere totals from the 2-part") {
    // Levels below a degree-3 root alternate branching 1, 2 on the
    // (2,3)-biregular tree: totals 3, 3, 6, 6, 12, ...
    auto g = complete_bipartite(2, 3);
    std::vector<Count> expect{3, 3, 6, 6, 12, 12};
    for (int r = 0; r < 6; ++r) CHECK(total(edge_sphere_counts(g, 0, r)) == expect[r]);
}

TEST_CASE("arc basics") {
    auto k4 = complete(4);
    // directed edge 1 -> 0 is edge {0,1} = id 0, reversed orientation
    int dir = 1;
    REQUIRE(k4.tail(dir) == 1);
    REQUIRE(k4.head(dir) == 0);
    auto c0 = arc_counts(k4, dir, 0);
    CHECK(c0[0] == 1);
    CHECK(total(c0) == 1);
    auto c1 = arc_counts(k4, dir, 1);
    CHECK(c1[1] == 0);
    CHECK(c1[2] == 1);
    CHECK(c1[3] == 1);
    // regular arcs grow as q^r
    for (int r = 0; r <= 10; ++r) CHECK(total(arc_counts(k4, dir, r)) == (1ULL << r));
}

TEST_CASE("sphere decomposes into arcs shifted one level") {
    for (const auto& g : {petersen(), complete_bipartite(2, 3), parse_graph("0 0\n0 1\n1 2\n2 0\n")}) {
        int v0 = 0;
        for (int r = 1; r <= 6; ++r) {
            auto sphere = sphere_counts(g, v0, r);
            std::vector<Count> assembled(g.n, 0);
            for (int d : g.out[v0]) {
                auto arc = arc_counts(g, d, r - 1);
                for (int v = 0; v < g.n; ++v) assembled[v] += arc[v];
            }
            CHECK(sphere == assembled);
        }
    }
}

TEST_CASE("tube around the root equals the sphere") {
    auto g = petersen();
    std::vector<CoverPath> X{CoverPath{4, {}}};
    for (int r = 1; r <= 6; ++r) CHECK(tube_counts(g, X, r) == sphere_counts(g, 4, r));
}

TEST_CASE("tube around one cover edge totals 2 q^r") {
    auto g = petersen();
    int d = g.out[0][0];
    std::vector<CoverPath> X{CoverPath{0, {}}, CoverPath{0, {d}}};
    for (int r = 1; r <= 8; ++r) CHECK(total(tube_counts(g, X, r)) == (2ULL << r));
}

TEST_CASE("K4 tube around a cover edge at r = 1") {
    auto k4 = complete(4);
    // cover path 0 -> 1 (edge {0,1} is id 0, direction 0)
    std::vector<CoverPath> X{CoverPath{0, {}}, CoverPath{0, {0}}};
    auto c = tube_counts(k4, X, 1);
    CHECK(c[0] == 0);
    CHECK(c[1] == 0);
    CHECK(c[2] == 2);
    CHECK(c[3] == 2);
}

TEST_CASE("tube input validation") {
    auto g = petersen();
    CHECK_THROWS_AS(tube_counts(g, {}, 1), std::invalid_argument);
    // two disjoint cover vertices
    std::vector<CoverPath> bad{CoverPath{0, {}}, two_step_path(g, 0)};
    CHECK_THROWS_AS(tube_counts(g, bad, 1), std::invalid_argument);
    std::vector<CoverPath> mixed{CoverPath{0, {}}, CoverPath{1, {}}};
    CHECK_THROWS_AS(tube_counts(g, mixed, 1), std::invalid_argument);
}

TEST_CASE("horocycle counts match arcs and q^r totals") {
    auto g = petersen();
    RaySpec ray{{}, {0, 1, 2, 3, 4}};
    CHECK(total(horocycle_counts(g, ray, 0)) == 1);
    auto c0 = horocycle_counts(g, ray, 0);
    CHECK(c0[0] == 1);
    for (int r = 0; r <= 8; ++r) {
        auto counts = horocycle_counts(g, ray, r);
        CHECK(total(counts) == (1ULL << r));
        auto steps = ray_steps(g, ray, r + 1);
        CHECK(counts == arc_counts(g, Multigraph::rev(steps[r]), r));
    }
}

TEST_CASE("ray validation") {
    auto g = petersen();
    CHECK_THROWS_AS(ray_steps(g, RaySpec{{}, {}}, 3), std::invalid_argument);
    CHECK_THROWS_AS(ray_steps(g, RaySpec{{}, {0, 7}}, 2), std::invalid_argument);  // not adjacent
    // a prefix joining the outer cycle
    RaySpec with_prefix{{7}, {2, 3, 4, 0, 1}};
    auto steps = ray_steps(g, with_prefix, 6);
    CHECK(static_cast<int>(steps.size()) == 6);
    for (size_t i = 1; i < steps.size(); ++i) CHECK(steps[i] != Multigraph::rev(steps[i - 1]));
    // backtracking "cycle" of length 2 on a simple graph is rejected
    CHECK_THROWS_AS(ray_steps(g, RaySpec{{}, {0, 1}}, 4), std::invalid_argument);
}

TEST_CASE("loops re-traversed in the same sense are non-backtracking") {
    auto g = parse_graph("0 0\n0 1\n");
    // from the loop vertex: degree 3, so |S_1| = 3; each subsequent level
    // branches d(v) - 1
    CHECK(total(sphere_counts(g, 0, 1)) == 3);
    auto c2 = sphere_counts(g, 0, 2);
    // continuations: loop->loop same sense (at 0), loop->edge (at 1) twice,
    // edge 1->0 has no continuation at 1 (degree 1)
    CHECK(total(c2) == 4);
    CHECK(c2[0] == 2);
    CHECK(c2[1] == 2);
}

TEST_CASE("counts overflow throws instead of wrapping") {
    CHECK_THROWS_AS(sphere_counts(complete(4), 0, 80), std::overflow_error);
}

TEST_CASE("oracle equivalence across graphs and region types") {
    std::vector<Multigraph> graphs{complete(4),
                                   petersen(),
                                   cycle(6),
                                   complete_bipartite(3, 4),
                                   complete_bipartite(2, 3),
                                   barbell(),
                                   random_regular(20, 3, 7)};
    for (const auto& g : graphs) {
        auto ray = some_ray(g);
        std::vector<CoverPath> X{CoverPath{0, {}}, CoverPath{0, {g.out[0][0]}}};
        for (int r = 0; r <= 5; ++r) {
            std::vector<Region> regions{
                Region::sphere(1 % g.n, r),
                Region::edge_sphere(1 % g.n, r),
                Region::arc(g.out[0][0], r),
                Region::horocycle(ray, r),
            };
            if (r >= 1) regions.push_back(Region::tube(X, r));
            for (const auto& region : regions) {
                auto fast = region_counts(g, region);
                auto slow = region_counts_oracle(g, region);
                CHECK(fast.on_edges == slow.on_edges);
                CHECK(fast.counts == slow.counts);
            }
        }
    }
}

TEST_CASE("K4 sphere oracle r = 2: six paths projecting to {1,1,2,2,3,3}") {
    auto paths = enumerate_region(complete(4), Region::sphere(0, 2));
    CHECK(paths.size() == 6);
    auto counts = project_region(complete(4), Region::sphere(0, 2), paths);
    CHECK(counts.counts == std::vector<Count>{0, 2, 2, 2});
}

TEST_CASE("sphere r = 0 oracle is a single empty path") {
    auto paths = enumerate_region(petersen(), Region::sphere(2, 0));
    REQUIRE(paths.size() == 1);
    CHECK(paths[0].steps.empty());
    CHECK(paths[0].root == 2);
}

TEST_CASE("K23 sphere r = 3 from the 2-part has 6 paths") {
    auto paths = enumerate_region(complete_bipartite(2, 3), Region::sphere(0, 3));
    CHECK(paths.size() == 6);
}

TEST_CASE("oracle size guard") {
    CHECK_THROWS_AS(enumerate_region(petersen(), Region::sphere(0, 25)), std::runtime_error);
}
