#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <limits>

#include "multigraph.hpp"

namespace covermeans {

// Tolerances for the spectral case analysis. |D| below kDiscTol is
// treated as the D = 0 case so eigensolver noise cannot flip the sign
// near the Ramanujan threshold.
inline constexpr double kDiscTol = 1e-9;
inline constexpr double kConstTol = 1e-9;
inline constexpr double kEigMergeTol = 1e-8;
inline constexpr double kEigResidualTol = 1e-9;
inline constexpr double kDefaultEpsilon = 0.01;

inline Eigen::MatrixXd adjacency_matrix(const Multigraph& g) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(g.n, g.n);
    for (auto [u, v] : g.edges) {
        if (u == v) {
            a(u, u) += 2;
        } else {
            a(u, v) += 1;
            a(v, u) += 1;
        }
    }
    return a;
}

// L = A / d(v) row-wise; for constant degree this is symmetric.
inline Eigen::MatrixXd vertex_laplacian(const Multigraph& g) {
    Eigen::MatrixXd l = adjacency_matrix(g);
    for (int v = 0; v < g.n; ++v) {
        if (g.degree(v) == 0) throw std::invalid_argument("isolated vertex");
        l.row(v) /= static_cast<double>(g.degree(v));
    }
    return l;
}

inline Eigen::MatrixXd edge_laplacian(const Multigraph& g) {
    return vertex_laplacian(line_graph(g));
}

struct EigenSystem {
    Eigen::VectorXd values;   // descending
    Eigen::MatrixXd vectors;  // column i pairs with values[i]
};

inline EigenSystem symmetric_eigensystem(const Eigen::MatrixXd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
    if (solver.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
    EigenSystem sys;
    sys.values = solver.eigenvalues().reverse();
    sys.vectors = solver.eigenvectors().rowwise().reverse();
    double residual =
        (m - sys.vectors * sys.values.asDiagonal() * sys.vectors.transpose())
            .cwiseAbs()
            .maxCoeff();
    if (residual > kEigResidualTol)
        throw std::runtime_error("eigendecomposition residual too large");
    return sys;
}

inline std::vector<double> sorted_eigenvalues(const Eigen::MatrixXd& m) {
    auto sys = symmetric_eigensystem(m);
    return {sys.values.data(), sys.values.data() + sys.values.size()};
}

// Eigensystem of the row-normalized Laplacian. For irregular graphs L is
// not symmetric; conjugating by D^(1/2) gives the symmetric, similar
// matrix D^(-1/2) A D^(-1/2), whose eigenvectors pull back to those of L.
inline EigenSystem laplacian_eigensystem(const Multigraph& g) {
    Eigen::VectorXd dsqrt(g.n);
    for (int v = 0; v < g.n; ++v) {
        if (g.degree(v) == 0) throw std::invalid_argument("isolated vertex");
        dsqrt[v] = std::sqrt(static_cast<double>(g.degree(v)));
    }
    Eigen::MatrixXd nsym = adjacency_matrix(g);
    nsym = dsqrt.cwiseInverse().asDiagonal() * nsym * dsqrt.cwiseInverse().asDiagonal();
    auto sys = symmetric_eigensystem(nsym);
    sys.vectors = dsqrt.cwiseInverse().asDiagonal() * sys.vectors;
    return sys;
}

inline std::vector<double> laplacian_eigenvalues(const Multigraph& g) {
    auto sys = laplacian_eigensystem(g);
    return {sys.values.data(), sys.values.data() + sys.values.size()};
}

// Distinct eigenvalues with multiplicities, merged at kEigMergeTol.
inline std::vector<std::pair<double, int>> merged_spectrum(const std::vector<double>& mus) {
    std::vector<std::pair<double, int>> out;
    for (double mu : mus) {
        if (!out.empty() && std::abs(out.back().first - mu) < kEigMergeTol)
            ++out.back().second;
        else
            out.emplace_back(mu, 1);
    }
    return out;
}

enum class EigCase { Constant, Dneg, Dzero, Dpos, DegenerateExcluded };

inline const char* eig_case_name(EigCase c) {
    switch (c) {
        case EigCase::Constant: return "constant";
        case EigCase::Dneg: return "Dneg";
        case EigCase::Dzero: return "Dzero";
        case EigCase::Dpos: return "Dpos";
        case EigCase::DegenerateExcluded: return "degenerate-excluded";
    }
    return "?";
}

struct EigRecord {
    double mu = 0.0;
    int multiplicity = 1;
    double discriminant = 0.0;
    EigCase tag = EigCase::Constant;
    double rate = 0.0;  // beta_i; meaningful for Dneg/Dzero/Dpos only
};

struct SpectralReport {
    bool on_edges = false;
    std::vector<double> eigenvalues;  // sorted descending, with multiplicities
    std::vector<EigRecord> records;   // one per distinct eigenvalue
    double beta = 0.0;                // max rate over included eigenvalues
    double epsilon = kDefaultEpsilon;
    double spectral_gap = 0.0;        // 1 - max |mu| over nonconstant mus
    std::optional<std::pair<double, double>> forbidden_interval;  // semiregular only
};

namespace spectral_detail {

inline void finish_report(SpectralReport& rep) {
    rep.beta = 0.0;
    double max_mod = 0.0;
    for (const auto& r : rep.records) {
        if (r.tag == EigCase::Dneg || r.tag == EigCase::Dzero || r.tag == EigCase::Dpos)
            rep.beta = std::max(rep.beta, r.rate);
        if (r.tag != EigCase::Constant) max_mod = std::max(max_mod, std::abs(r.mu));
    }
    rep.spectral_gap = 1.0 - max_mod;
}

}  // namespace spectral_detail

// Theorem-1 rate: vertex Laplacian of a nonbipartite regular graph,
// degree q+1. D = (q+1)^2 mu^2 - 4q; alpha_pm = ((q+1) mu +- sqrt(D)) / (2q).
inline SpectralReport beta_vertex_regular(const std::vector<double>& mus, int q,
                                          double epsilon = kDefaultEpsilon) {
    if (q < 2) throw std::invalid_argument("beta_vertex_regular requires q >= 2");
    SpectralReport rep;
    rep.on_edges = false;
    rep.eigenvalues = mus;
    rep.epsilon = epsilon;
    for (auto [mu, mult] : merged_spectrum(mus)) {
        if (std::abs(mu + 1.0) < kConstTol)
            throw std::invalid_argument("bipartite spectrum: eigenvalue -1 present; "
                                        "route through the squared graph");
        EigRecord r;
        r.mu = mu;
        r.multiplicity = mult;
        r.discriminant = (q + 1.0) * (q + 1.0) * mu * mu - 4.0 * q;
        if (std::abs(mu - 1.0) < kConstTol) {
            r.tag = EigCase::Constant;
        } else if (std::abs(r.discriminant) < kDiscTol) {
            r.tag = EigCase::Dzero;
            r.rate = std::pow(q, -0.5 + epsilon);
        } else if (r.discriminant < 0) {
            r.tag = EigCase::Dneg;
            r.rate = 1.0 / std::sqrt(q);
        } else {
            r.tag = EigCase::Dpos;
            double s = std::sqrt(r.discriminant);
            double ap = ((q + 1.0) * mu + s) / (2.0 * q);
            double am = ((q + 1.0) * mu - s) / (2.0 * q);
            r.rate = std::max(std::abs(ap), std::abs(am));
        }
        rep.records.push_back(r);
    }
    spectral_detail::finish_report(rep);
    return rep;
}

// Theorem-2 rate: edge Laplacian of a simple regular graph, d' = 2q.
// D = (q-1-2 mu q)^2 - 4q; alpha_pm = mu - (q-1)/(2q) +- sqrt(D)/(2q).
// mu = -1/q is excluded: its radialization vanishes identically.
inline SpectralReport beta_edge_regular(const std::vector<double>& mus, int q,
                                        double epsilon = kDefaultEpsilon) {
    if (q < 2) throw std::invalid_argument("beta_edge_regular requires q >= 2");
    SpectralReport rep;
    rep.on_edges = true;
    rep.eigenvalues = mus;
    rep.epsilon = epsilon;
    for (auto [mu, mult] : merged_spectrum(mus)) {
        EigRecord r;
        r.mu = mu;
        r.multiplicity = mult;
        double t = q - 1.0 - 2.0 * mu * q;
        r.discriminant = t * t - 4.0 * q;
        if (std::abs(mu - 1.0) < kConstTol) {
            r.tag = EigCase::Constant;
        } else if (std::abs(mu + 1.0 / q) < kConstTol) {
            r.tag = EigCase::DegenerateExcluded;
        } else if (std::abs(r.discriminant) < kDiscTol) {
            r.tag = EigCase::Dzero;
            r.rate = std::pow(q, -0.5 + epsilon);
        } else if (r.discriminant < 0) {
            r.tag = EigCase::Dneg;
            r.rate = 1.0 / std::sqrt(q);
        } else {
            r.tag = EigCase::Dpos;
            double s = std::sqrt(r.discriminant);
            double ap = mu - (q - 1.0) / (2.0 * q) + s / (2.0 * q);
            double am = mu - (q - 1.0) / (2.0 * q) - s / (2.0 * q);
            r.rate = std::max(std::abs(ap), std::abs(am));
        }
        rep.records.push_back(r);
    }
    spectral_detail::finish_report(rep);
    return rep;
}

// Theorem-3 transfer-matrix eigenvalues for the semiregular edge case.
inline std::pair<std::complex<double>, std::complex<double>> semiregular_t(double mu, int p,
                                                                           int q) {
    double a = p - 1.0 - mu * (p + q);
    double b = q - 1.0 - mu * (p + q);
    double trace = a * b - p - q;
    double disc = trace * trace - 4.0 * p * q;
    std::complex<double> s = std::sqrt(std::complex<double>(disc, 0.0));
    return {(trace + s) / (2.0 * p * q), (trace - s) / (2.0 * p * q)};
}

// Theorem-3 rate per unit radius: the matrix advances two radii per
// application, so the D > 0 rate is max(|t+|, |t-|)^(1/2).
inline SpectralReport beta_edge_semiregular(const std::vector<double>& mus, int p, int q,
                                            double epsilon = kDefaultEpsilon) {
    if (p < 2 || q < 2)
        throw std::invalid_argument("beta_edge_semiregular requires p, q >= 2");
    SpectralReport rep;
    rep.on_edges = true;
    rep.eigenvalues = mus;
    rep.epsilon = epsilon;
    int lo = std::min(p, q), hi = std::max(p, q);
    rep.forbidden_interval = {{(lo - 1.0) / (p + q), (hi - 1.0) / (p + q)}};
    for (auto [mu, mult] : merged_spectrum(mus)) {
        EigRecord r;
        r.mu = mu;
        r.multiplicity = mult;
        double a = p - 1.0 - mu * (p + q);
        double b = q - 1.0 - mu * (p + q);
        double trace = a * b - p - q;
        r.discriminant = trace * trace - 4.0 * p * q;
        if (std::abs(mu - 1.0) < kConstTol) {
            r.tag = EigCase::Constant;
        } else if (std::abs(mu + 2.0 / (p + q)) < kConstTol) {
            r.tag = EigCase::DegenerateExcluded;
        } else if (mu > rep.forbidden_interval->first + kEigMergeTol &&
                   mu < rep.forbidden_interval->second - kEigMergeTol) {
            // Lemma: these cannot occur for semiregular graphs.
            throw std::runtime_error("eigenvalue inside the forbidden interval");
        } else if (std::abs(r.discriminant) < kDiscTol) {
            r.tag = EigCase::Dzero;
            r.rate = std::pow(static_cast<double>(p) * q, -0.25 + epsilon);
        } else if (r.discriminant < 0) {
            r.tag = EigCase::Dneg;
            r.rate = std::pow(static_cast<double>(p) * q, -0.25);
        } else {
            r.tag = EigCase::Dpos;
            auto [tp, tm] = semiregular_t(mu, p, q);
            r.rate = std::sqrt(std::max(std::abs(tp), std::abs(tm)));
        }
        rep.records.push_back(r);
    }
    spectral_detail::finish_report(rep);
    return rep;
}

// True iff all nontrivial adjacency eigenvalues satisfy |lambda| <= 2 sqrt(q).
inline bool is_ramanujan(const Multigraph& g) {
    auto cls = classify_structure(g);
    if (!cls.regular_q) throw std::invalid_argument("is_ramanujan requires a regular graph");
    int q = *cls.regular_q;
    double bound = 2.0 * std::sqrt(static_cast<double>(q)) + kEigMergeTol;
    for (double lam : sorted_eigenvalues(adjacency_matrix(g))) {
        if (std::abs(std::abs(lam) - (q + 1.0)) < kEigMergeTol) continue;  // trivial
        if (std::abs(lam) > bound) return false;
    }
    return true;
}

inline GraphClass classify(const Multigraph& g) {
    GraphClass c = classify_structure(g);
    if (c.regular_q && *c.regular_q >= 1) c.ramanujan = is_ramanujan(g);
    return c;
}

struct CharPolyCheck {
    int n1 = 0, n2 = 0;  // part sizes: n1 vertices of degree p+1
    int m = 0;           // |E| - |V|
    std::pair<double, double> forbidden_interval{0.0, 0.0};
};

struct GapLemmaResult {
    bool holds = false;
    std::vector<double> offending;  // edge-Laplacian eigenvalues inside the interval
    CharPolyCheck details;
    double max_cvetkovic_residual = 0.0;
};

// Lemma check: no edge-Laplacian eigenvalue strictly inside
// ((p-1)/(p+q), (q-1)/(p+q)), plus the Cvetkovic characteristic
// polynomial identity residual at every computed L(G) eigenvalue.
inline GapLemmaResult check_gap_lemma(const Multigraph& g, double interval_tol = 1e-8,
                                      double residual_tol = 1e-6) {
    auto cls = classify_structure(g);
    if (!cls.semiregular_pq || !cls.simple)
        throw std::invalid_argument("check_gap_lemma requires a simple semiregular graph");
    auto [p, q] = *cls.semiregular_pq;
    if (p == q && !cls.regular_q)
        throw std::logic_error("inconsistent classification");

    GapLemmaResult res;
    res.details.m = g.n_edges() - g.n;
    res.details.forbidden_interval = {(p - 1.0) / (p + q), (q - 1.0) / (p + q)};
    for (int v = 0; v < g.n; ++v)
        (g.degree(v) == p + 1 ? res.details.n1 : res.details.n2) += 1;

    auto g_eigs = sorted_eigenvalues(adjacency_matrix(g));
    auto lg_eigs = sorted_eigenvalues(adjacency_matrix(line_graph(g)));

    res.holds = true;
    for (double lam : lg_eigs) {
        double mu = lam / (p + q);
        if (mu > res.details.forbidden_interval.first + interval_tol &&
            mu < res.details.forbidden_interval.second - interval_tol) {
            res.holds = false;
            res.offending.push_back(mu);
        }
        // Each root lambda of P_{L(G)} must come from the (lambda+2)^m
        // factor, the (-alpha_1/alpha_2)^(n1-n2) factor, or satisfy
        // alpha_1(lambda) alpha_2(lambda) = lambda_i^2 for a G eigenvalue.
        double a1 = lam - p + 1.0;
        double a2 = lam - q + 1.0;
        double best = std::abs(lam + 2.0);  // m > 0 for connected graphs with a cycle
        if (res.details.m <= 0) best = std::numeric_limits<double>::infinity();
        if (res.details.n1 > res.details.n2) best = std::min(best, std::abs(a1));
        double prod = a1 * a2;
        for (double li : g_eigs) {
            double scale = std::max({1.0, li * li, std::abs(prod)});
            best = std::min(best, std::abs(li * li - prod) / scale);
        }
        res.max_cvetkovic_residual = std::max(res.max_cvetkovic_residual, best);
        if (best > residual_tol) res.holds = false;
    }
    return res;
}

// Full spectral report for a graph: vertex or edge operator, with the
// applicable theorem's rate analysis.
inline SpectralReport spectrum_report(const Multigraph& g, bool on_edges,
                                      double epsilon = kDefaultEpsilon) {
    auto cls = classify_structure(g);
    if (!on_edges) {
        auto mus = laplacian_eigenvalues(g);
        if (cls.regular_q && *cls.regular_q >= 2 && !cls.bipartite())
            return beta_vertex_regular(mus, *cls.regular_q, epsilon);
        SpectralReport rep;
        rep.on_edges = false;
        rep.eigenvalues = mus;
        rep.epsilon = epsilon;
        return rep;  // no rate analysis applies (bipartite or irregular)
    }
    auto mus = laplacian_eigenvalues(line_graph(g));
    if (cls.regular_q && *cls.regular_q >= 2)
        return beta_edge_regular(mus, *cls.regular_q, epsilon);
    if (cls.semiregular_pq && cls.semiregular_pq->first >= 2)
        return beta_edge_semiregular(mus, cls.semiregular_pq->first,
                                     cls.semiregular_pq->second, epsilon);
    SpectralReport rep;
    rep.on_edges = true;
    rep.eigenvalues = mus;
    rep.epsilon = epsilon;
    return rep;
}

}  // namespace covermeans
