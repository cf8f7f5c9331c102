#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include "cover.hpp"
#include "spectral.hpp"

namespace covermeans {

// Exact scalar for oracle-grade mean computations.
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(double x) { return x; }
inline double to_double(const Rational& x) { return x.convert_to<double>(); }

namespace means_detail {

// cpp_int's string constructor treats leading zeros as octal; parse
// decimal digit strings explicitly instead.
inline boost::multiprecision::cpp_int parse_digits(const std::string& s) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
        throw std::invalid_argument("not an exact numeral: " + s);
    boost::multiprecision::cpp_int n = 0;
    for (char c : s) n = n * 10 + (c - '0');
    return n;
}

inline boost::multiprecision::cpp_int parse_signed(std::string s) {
    bool neg = false;
    if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
        neg = s[0] == '-';
        s.erase(0, 1);
    }
    auto n = parse_digits(s);
    return neg ? -n : n;
}

}  // namespace means_detail

// Parse "1", "-0.25", "3/4" exactly; doubles go through strtod.
inline Rational parse_rational(const std::string& s) {
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        return Rational(means_detail::parse_signed(s.substr(0, slash)),
                        means_detail::parse_signed(s.substr(slash + 1)));
    }
    std::string t = s;
    bool neg = false;
    if (!t.empty() && (t[0] == '+' || t[0] == '-')) {
        neg = t[0] == '-';
        t.erase(0, 1);
    }
    auto dot = t.find('.');
    std::string digits = t;
    size_t frac_len = 0;
    if (dot != std::string::npos) {
        frac_len = t.size() - dot - 1;
        digits = t.substr(0, dot) + t.substr(dot + 1);
    }
    auto num = means_detail::parse_digits(digits);
    boost::multiprecision::cpp_int den = 1;
    for (size_t i = 0; i < frac_len; ++i) den *= 10;
    Rational r(num, den);
    return neg ? -r : r;
}

template <class S>
S parse_scalar(const std::string& s);
template <>
inline double parse_scalar<double>(const std::string& s) {
    size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("not a number: " + s);
    return v;
}
template <>
inline Rational parse_scalar<Rational>(const std::string& s) {
    return parse_rational(s);
}

// Weighted mean of f over a region, weights = cover path counts.
template <class S>
S region_mean(const Multigraph& g, const std::vector<S>& f, const Region& region) {
    auto rc = region_counts(g, region);
    size_t expect = rc.on_edges ? static_cast<size_t>(g.n_edges()) : static_cast<size_t>(g.n);
    if (f.size() != expect)
        throw std::invalid_argument("function length does not match the region's index space");
    S num = S(0);
    Count total = 0;
    for (size_t i = 0; i < rc.counts.size(); ++i) {
        if (!rc.counts[i]) continue;
        num += f[i] * S(rc.counts[i]);
        total = checked_add(total, rc.counts[i]);
    }
    if (total == 0) throw std::runtime_error("empty region");
    return num / S(total);
}

template <class S>
struct MeanSeries {
    Region family;          // radius field gives R
    bool on_edges = false;
    std::vector<S> values;  // M_r for r = 0..R
    S target = S(0);        // graph average

    S error_at(int r) const {
        S e = values[r] - target;
        return e < S(0) ? S(-e) : e;
    }
};

namespace means_detail {

template <class S>
S weighted_mean(const std::vector<S>& f, const std::vector<Count>& counts) {
    S num = S(0);
    Count total = 0;
    for (size_t i = 0; i < counts.size(); ++i) {
        if (!counts[i]) continue;
        num += f[i] * S(counts[i]);
        total = checked_add(total, counts[i]);
    }
    if (total == 0) throw std::runtime_error("empty region");
    return num / S(total);
}

template <class S>
S plain_average(const std::vector<S>& f) {
    S sum = S(0);
    for (const auto& v : f) sum += v;
    return sum / S(f.size());
}

}  // namespace means_detail

// M_r for r = 0..R in one incremental transfer sweep (horocycles shift
// their arc base with r and are recomputed per radius).
template <class S>
MeanSeries<S> mean_series(const Multigraph& g, const std::vector<S>& f, const Region& family,
                          int R) {
    if (R < 0) throw std::invalid_argument("R must be nonnegative");
    MeanSeries<S> out;
    out.family = family;
    out.family.radius = R;
    out.on_edges = family.on_edges();
    size_t expect = out.on_edges ? static_cast<size_t>(g.n_edges()) : static_cast<size_t>(g.n);
    if (f.size() != expect)
        throw std::invalid_argument("function length does not match the region's index space");
    out.target = means_detail::plain_average(f);
    out.values.reserve(R + 1);

    using K = Region::Kind;
    switch (family.kind) {
        case K::Sphere: {
            out.values.push_back(f.at(family.base_vertex));
            if (R == 0) break;
            auto c = seed_at_vertex(g, family.base_vertex);
            for (int r = 1; r <= R; ++r) {
                out.values.push_back(means_detail::weighted_mean(f, aggregate_by_head(g, c)));
                if (r < R) c = transfer_step(g, c);
            }
            break;
        }
        case K::EdgeSphere: {
            auto c = seed_at_vertex(g, family.base_vertex);
            for (int r = 0; r <= R; ++r) {
                out.values.push_back(means_detail::weighted_mean(f, aggregate_by_edge(g, c)));
                if (r < R) c = transfer_step(g, c);
            }
            break;
        }
        case K::Arc: {
            out.values.push_back(f.at(g.head(family.base_dir)));
            if (R == 0) break;
            auto c = seed_at_vertex(g, g.head(family.base_dir));
            c[Multigraph::rev(family.base_dir)] = 0;
            for (int r = 1; r <= R; ++r) {
                out.values.push_back(means_detail::weighted_mean(f, aggregate_by_head(g, c)));
                if (r < R) c = transfer_step(g, c);
            }
            break;
        }
        case K::Tube: {
            // r = 0 is the set X itself.
            std::vector<Count> base(g.n, 0);
            detail::validate_tube_set(g, family.X);
            for (const auto& x : family.X) ++base[x.terminal(g)];
            out.values.push_back(means_detail::weighted_mean(f, base));
            if (R == 0) break;
            std::vector<Count> c(g.n_dirs(), 0);
            for (int d : tube_boundary_dirs(g, family.X)) c[d] = checked_add(c[d], 1);
            for (int r = 1; r <= R; ++r) {
                out.values.push_back(means_detail::weighted_mean(f, aggregate_by_head(g, c)));
                if (r < R) c = transfer_step(g, c);
            }
            break;
        }
        case K::Horocycle: {
            for (int r = 0; r <= R; ++r)
                out.values.push_back(
                    means_detail::weighted_mean(f, horocycle_counts(g, family.ray, r)));
            break;
        }
    }
    return out;
}

inline void require_eigenfunction(const Eigen::MatrixXd& laplacian, const Eigen::VectorXd& phi,
                                  double mu, double tol = 1e-8) {
    double residual = (laplacian * phi - mu * phi).cwiseAbs().maxCoeff();
    if (residual > tol) throw std::invalid_argument("phi is not an eigenfunction");
}

struct RadializationSeries {
    std::vector<double> by_sphere;     // sphere means of the lifted eigenfunction
    std::vector<double> by_recursion;  // closed recursion from F(0), F(1)

    double max_residual() const {
        double m = 0.0;
        for (size_t i = 0; i < by_sphere.size(); ++i)
            m = std::max(m, std::abs(by_sphere[i] - by_recursion[i]));
        return m;
    }
};

// F(n) for a vertex-Laplacian eigenfunction on a regular graph:
// F(n+2) = ((q+1)/q) mu F(n+1) - (1/q) F(n).
inline RadializationSeries radialization_vertex(const Multigraph& g,
                                                const std::vector<double>& phi, double mu,
                                                int v0, int N) {
    auto cls = classify_structure(g);
    if (!cls.regular_q || *cls.regular_q < 1)
        throw std::invalid_argument("vertex radialization recursion requires a regular graph");
    double q = *cls.regular_q;
    RadializationSeries rs;
    rs.by_sphere = mean_series<double>(g, phi, Region::sphere(v0, 0), N).values;
    rs.by_recursion.resize(N + 1);
    rs.by_recursion[0] = rs.by_sphere[0];
    if (N >= 1) rs.by_recursion[1] = rs.by_sphere[1];
    for (int n = 0; n + 2 <= N; ++n)
        rs.by_recursion[n + 2] =
            (q + 1.0) / q * mu * rs.by_recursion[n + 1] - rs.by_recursion[n] / q;
    return rs;
}

// F(n) for an edge-Laplacian eigenfunction on a simple regular graph:
// F(n+1) = -((q-1-2 mu q)/q) F(n) - (1/q) F(n-1).
inline RadializationSeries radialization_edge_regular(const Multigraph& g,
                                                      const std::vector<double>& phi, double mu,
                                                      int v0, int N) {
    auto cls = classify_structure(g);
    if (!cls.regular_q || !cls.simple)
        throw std::invalid_argument("edge radialization recursion requires a simple regular graph");
    double q = *cls.regular_q;
    RadializationSeries rs;
    rs.by_sphere = mean_series<double>(g, phi, Region::edge_sphere(v0, 0), N).values;
    rs.by_recursion.resize(N + 1);
    rs.by_recursion[0] = rs.by_sphere[0];
    if (N >= 1) rs.by_recursion[1] = rs.by_sphere[1];
    for (int n = 1; n + 1 <= N; ++n)
        rs.by_recursion[n + 1] =
            -(q - 1.0 - 2.0 * mu * q) / q * rs.by_recursion[n] - rs.by_recursion[n - 1] / q;
    return rs;
}

// F(n) for an edge-Laplacian eigenfunction on a simple semiregular graph,
// via the 2x2 step on (F(2k+1), F(2k)). The step below is stated for a
// base vertex of degree p+1; basing on the other part swaps p and q.
inline RadializationSeries radialization_edge_semiregular(const Multigraph& g,
                                                          const std::vector<double>& phi,
                                                          double mu, int v0, int N) {
    auto cls = classify_structure(g);
    if (!cls.semiregular_pq || !cls.simple)
        throw std::invalid_argument(
            "semiregular radialization requires a simple semiregular graph");
    auto [p, q] = *cls.semiregular_pq;
    if (g.degree(v0) == q + 1 && p != q) std::swap(p, q);
    if (g.degree(v0) != p + 1) throw std::logic_error("base degree does not match either part");

    RadializationSeries rs;
    rs.by_sphere = mean_series<double>(g, phi, Region::edge_sphere(v0, 0), N).values;
    rs.by_recursion.resize(N + 1);
    rs.by_recursion[0] = rs.by_sphere[0];
    if (N >= 1) rs.by_recursion[1] = rs.by_sphere[1];
    double s = mu * (p + q);
    double a11 = ((p - 1.0 - s) * (q - 1.0 - s) - p) / (p * q);
    double a12 = (p - 1.0 - s) / (p * q);
    double a21 = -(q - 1.0 - s) / p;
    double a22 = -1.0 / p;
    for (int k = 1; 2 * k <= N; ++k) {
        double hi = rs.by_recursion[2 * k - 1];
        double lo = rs.by_recursion[2 * k - 2];
        double next_hi = a11 * hi + a12 * lo;  // F(2k+1)
        double next_lo = a21 * hi + a22 * lo;  // F(2k)
        rs.by_recursion[2 * k] = next_lo;
        if (2 * k + 1 <= N) rs.by_recursion[2 * k + 1] = next_hi;
    }
    return rs;
}

// Even-radius limits of vertex spherical means on a bipartite graph:
// the part averages, reached through the squared graph G'.
template <class S>
std::pair<S, S> bipartite_even_limits(const Multigraph& g, const std::vector<S>& f) {
    auto parts = g.bipartite_parts();
    if (!parts) throw std::invalid_argument("bipartite_even_limits requires a bipartite graph");
    std::pair<S, S> limits{S(0), S(0)};
    for (int side = 0; side < 2; ++side) {
        S sum = S(0);
        for (int v : (*parts)[side]) sum += f.at(v);
        (side == 0 ? limits.first : limits.second) = sum / S((*parts)[side].size());
    }
    return limits;
}

}  // namespace covermeans
