#pragma once

#include <random>
#include <string>

#include "multigraph.hpp"

namespace covermeans {

inline Multigraph complete(int n) {
    if (n < 2) throw std::invalid_argument("complete: need n >= 2");
    std::vector<std::pair<int, int>> e;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) e.emplace_back(u, v);
    return Multigraph(n, std::move(e));
}

inline Multigraph complete_bipartite(int m, int n) {
    if (m < 1 || n < 1) throw std::invalid_argument("complete-bipartite: need m,n >= 1");
    std::vector<std::pair<int, int>> e;
    for (int u = 0; u < m; ++u)
        for (int v = 0; v < n; ++v) e.emplace_back(u, m + v);
    return Multigraph(m + n, std::move(e));
}

inline Multigraph cycle(int n) {
    if (n < 3) throw std::invalid_argument("cycle: need n >= 3");
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
    return Multigraph(n, std::move(e));
}

inline Multigraph petersen() {
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i < 5; ++i) e.emplace_back(i, (i + 1) % 5);          // outer cycle
    for (int i = 0; i < 5; ++i) e.emplace_back(5 + i, 5 + (i + 2) % 5);  // pentagram
    for (int i = 0; i < 5; ++i) e.emplace_back(i, i + 5);                // spokes
    return Multigraph(10, std::move(e));
}

// 3-regular barbell: two lobes, each a K4-minus-an-edge whose missing edge
// is rerouted through an apex, connected by bridges through a middle
// diamond. Has a small cut, so lambda_2 > 2*sqrt(2) and it is not Ramanujan.
inline Multigraph barbell() {
    std::vector<std::pair<int, int>> e;
    auto lobe = [&](int o) {
        e.emplace_back(o + 0, o + 1);
        e.emplace_back(o + 0, o + 2);
        e.emplace_back(o + 0, o + 3);
        e.emplace_back(o + 1, o + 2);
        e.emplace_back(o + 1, o + 3);
        e.emplace_back(o + 2, o + 4);
        e.emplace_back(o + 3, o + 4);
    };
    lobe(0);
    lobe(5);
    // middle diamond on 10..13 with degree-2 vertices 12, 13
    e.emplace_back(10, 11);
    e.emplace_back(10, 12);
    e.emplace_back(10, 13);
    e.emplace_back(11, 12);
    e.emplace_back(11, 13);
    e.emplace_back(4, 12);   // bridge
    e.emplace_back(9, 13);   // bridge
    return Multigraph(14, std::move(e));
}

// Configuration model with rejection until simple and connected.
inline Multigraph random_regular(int n, int d, std::uint64_t seed, int max_tries = 2000) {
    if (n < d + 1 || (static_cast<long long>(n) * d) % 2 != 0)
        throw std::invalid_argument("random-regular: invalid (n, d)");
    std::mt19937_64 rng(seed);
    for (int attempt = 0; attempt < max_tries; ++attempt) {
        std::vector<int> stubs;
        stubs.reserve(static_cast<size_t>(n) * d);
        for (int v = 0; v < n; ++v)
            for (int k = 0; k < d; ++k) stubs.push_back(v);
        std::shuffle(stubs.begin(), stubs.end(), rng);
        std::vector<std::pair<int, int>> e;
        bool ok = true;
        std::set<std::pair<int, int>> seen;
        for (size_t i = 0; ok && i < stubs.size(); i += 2) {
            int u = stubs[i], v = stubs[i + 1];
            if (u == v || !seen.insert(std::minmax(u, v)).second) ok = false;
            else e.emplace_back(u, v);
        }
        if (!ok) continue;
        Multigraph g(n, std::move(e));
        if (g.is_connected()) return g;
    }
    throw std::runtime_error("random-regular: generation failed after bounded retries");
}

// Replace each edge by a path of length two through a new vertex.
inline Multigraph subdivision(const Multigraph& g) {
    std::vector<std::pair<int, int>> e;
    int next = g.n;
    for (auto [u, v] : g.edges) {
        e.emplace_back(u, next);
        e.emplace_back(next, v);
        ++next;
    }
    return Multigraph(next, std::move(e));
}

// "name" or "name:a,b,c", e.g. "complete:4", "random-regular:20,3,42",
// "subdivision-of:cycle:6".
inline Multigraph generate_by_name(const std::string& spec) {
    std::string name = spec;
    std::vector<long long> params;
    auto colon = spec.find(':');
    if (colon != std::string::npos) {
        name = spec.substr(0, colon);
        if (name == "subdivision-of") return subdivision(generate_by_name(spec.substr(colon + 1)));
        std::istringstream ps(spec.substr(colon + 1));
        std::string tok;
        while (std::getline(ps, tok, ',')) {
            try {
                params.push_back(std::stoll(tok));
            } catch (const std::exception&) {
                throw std::invalid_argument("bad generator parameter: " + tok);
            }
        }
    }
    auto want = [&](size_t k) {
        if (params.size() != k)
            throw std::invalid_argument("generator " + name + " expects " +
                                        std::to_string(k) + " parameter(s)");
    };
    if (name == "complete") { want(1); return complete(static_cast<int>(params[0])); }
    if (name == "complete-bipartite") {
        want(2);
        return complete_bipartite(static_cast<int>(params[0]), static_cast<int>(params[1]));
    }
    if (name == "cycle") { want(1); return cycle(static_cast<int>(params[0])); }
    if (name == "petersen") { want(0); return petersen(); }
    if (name == "barbell") { want(0); return barbell(); }
    if (name == "random-regular") {
        want(3);
        return random_regular(static_cast<int>(params[0]), static_cast<int>(params[1]),
                              static_cast<std::uint64_t>(params[2]));
    }
    throw std::invalid_argument("unknown generator: " + name);
}

}  // namespace covermeans
