#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"

#include "covermeans/generate.hpp"
#include "covermeans/oracle.hpp"
#include "covermeans/verify.hpp"

using namespace covermeans;
using Json = nlohmann::ordered_json;

namespace {

// --graph accepts a file path or a generator name ("petersen",
// "complete:4", "random-regular:20,3,42").
Multigraph resolve_graph(const std::string& source) {
    if (std::filesystem::exists(source)) return load_graph(source);
    try {
        return generate_by_name(source);
    } catch (const std::invalid_argument&) {
        throw std::runtime_error("graph source is neither a file nor a known generator: " +
                                 source);
    }
}

// Relative --out paths land in $COVERMEANS_OUT when it is set.
std::filesystem::path resolve_out(const std::string& out) {
    std::filesystem::path p(out);
    const char* base = std::getenv("COVERMEANS_OUT");
    if (p.is_relative() && base && *base) p = std::filesystem::path(base) / p;
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    return p;
}

void emit(const std::string& out, const std::string& text) {
    if (out.empty()) {
        std::cout << text;
        return;
    }
    auto path = resolve_out(out);
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open output file: " + path.string());
    f << text;
}

// "u,v" -> the smallest directed edge running u -> v.
int parse_dir(const Multigraph& g, const std::string& base) {
    auto comma = base.find(',');
    if (comma == std::string::npos)
        throw std::runtime_error("arc base must be \"u,v\"");
    int u = std::stoi(base.substr(0, comma));
    int v = std::stoi(base.substr(comma + 1));
    if (u < 0 || u >= g.n || v < 0 || v >= g.n)
        throw std::runtime_error("arc base vertex out of range");
    for (int d : g.out[u])
        if (g.head(d) == v) return d;
    throw std::runtime_error("no edge from " + std::to_string(u) + " to " + std::to_string(v));
}

std::vector<std::vector<int>> parse_walk_lines(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open file: " + path);
    std::vector<std::vector<int>> lines;
    std::string line;
    while (std::getline(f, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::vector<int> row;
        int v;
        while (ls >> v) row.push_back(v);
        if (!row.empty()) lines.push_back(std::move(row));
    }
    return lines;
}

// Ray file: a "cycle v0 v1 ..." line and an optional "prefix v0 v1 ..."
// line; '#' starts a comment.
RaySpec load_rayfile(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open ray file: " + path);
    RaySpec ray;
    bool have_cycle = false;
    std::string line;
    while (std::getline(f, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key)) continue;
        std::vector<int> vals;
        int v;
        while (ls >> v) vals.push_back(v);
        if (key == "prefix") {
            ray.prefix = std::move(vals);
        } else if (key == "cycle") {
            ray.cycle = std::move(vals);
            have_cycle = true;
        } else {
            throw std::runtime_error("ray file lines must start with prefix/cycle");
        }
    }
    if (!have_cycle || ray.cycle.empty())
        throw std::runtime_error("ray file needs a nonempty cycle line");
    return ray;
}

// X file: one vertex walk per line, all starting at the same root; each
// walk is converted to the cover path that follows the listed vertices.
std::vector<CoverPath> load_xfile(const Multigraph& g, const std::string& path) {
    auto lines = parse_walk_lines(path);
    if (lines.empty()) throw std::runtime_error("X file has no walks");
    std::vector<CoverPath> x;
    for (const auto& walk : lines) {
        CoverPath p{walk[0], {}};
        for (size_t i = 1; i < walk.size(); ++i) {
            int chosen = -1;
            int prev = p.steps.empty() ? -1 : Multigraph::rev(p.steps.back());
            for (int d : g.out[walk[i - 1]])
                if (g.head(d) == walk[i] && d != prev) { chosen = d; break; }
            if (chosen < 0)
                throw std::runtime_error("walk has no non-backtracking step from " +
                                         std::to_string(walk[i - 1]) + " to " +
                                         std::to_string(walk[i]));
            p.steps.push_back(chosen);
        }
        if (!p.valid(g)) throw std::runtime_error("walk is not non-backtracking");
        if (p.root != lines[0][0])
            throw std::runtime_error("all walks must share the same root");
        x.push_back(std::move(p));
    }
    return x;
}

Region build_region(const Multigraph& g, const std::string& type, const std::string& base,
                    int r, bool on_edges) {
    if (type == "sphere") {
        int v0 = std::stoi(base);
        return on_edges ? Region::edge_sphere(v0, r) : Region::sphere(v0, r);
    }
    if (type == "edgesphere") return Region::edge_sphere(std::stoi(base), r);
    if (type == "arc") return Region::arc(parse_dir(g, base), r);
    if (type == "tube") return Region::tube(load_xfile(g, base), r);
    if (type == "horocycle") return Region::horocycle(load_rayfile(base), r);
    throw std::runtime_error("unknown region type: " + type);
}

Json spectral_json(const SpectralReport& rep, std::optional<bool> ramanujan) {
    Json j;
    j["operator"] = rep.on_edges ? "edge" : "vertex";
    j["eigenvalues"] = rep.eigenvalues;
    Json recs = Json::array();
    for (const auto& r : rep.records) {
        Json rec;
        rec["mu"] = r.mu;
        rec["multiplicity"] = r.multiplicity;
        rec["discriminant"] = r.discriminant;
        rec["case"] = eig_case_name(r.tag);
        rec["rate"] = r.rate;
        recs.push_back(rec);
    }
    j["records"] = recs;
    j["beta"] = rep.beta;
    j["epsilon"] = rep.epsilon;
    j["spectral_gap"] = rep.spectral_gap;
    if (ramanujan) j["ramanujan"] = *ramanujan;
    if (rep.forbidden_interval)
        j["forbidden_interval"] = {rep.forbidden_interval->first, rep.forbidden_interval->second};
    return j;
}

template <class S>
std::vector<S> load_function(const std::string& path, size_t expect) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open function file: " + path);
    std::vector<S> vals(expect, S(0));
    std::vector<char> seen(expect, 0);
    std::string line;
    int lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error("function file line " + std::to_string(lineno) +
                                     ": expected \"id,value\"");
        std::string id_str = line.substr(0, comma);
        if (id_str == "id") continue;  // tolerate a header row
        int id = std::stoi(id_str);
        std::string val = line.substr(comma + 1);
        while (!val.empty() && (val.back() == '\r' || val.back() == ' ')) val.pop_back();
        while (!val.empty() && val.front() == ' ') val.erase(0, 1);
        if (id < 0 || static_cast<size_t>(id) >= expect || seen[id])
            throw std::runtime_error("function file line " + std::to_string(lineno) +
                                     ": bad or duplicate id");
        vals[id] = parse_scalar<S>(val);
        seen[id] = 1;
    }
    for (size_t i = 0; i < expect; ++i)
        if (!seen[i]) throw std::runtime_error("function file misses id " + std::to_string(i));
    return vals;
}

template <class S>
std::string mean_csv(const Multigraph& g, const std::string& fn_path, const Region& family,
                     int rmax) {
    size_t expect = family.on_edges() ? static_cast<size_t>(g.n_edges())
                                      : static_cast<size_t>(g.n);
    auto f = load_function<S>(fn_path, expect);
    auto series = mean_series<S>(g, f, family, rmax);
    std::ostringstream os;
    os << "r,mean,abs_error\n";
    for (int r = 0; r <= rmax; ++r) {
        if constexpr (std::is_same_v<S, Rational>) {
            os << r << ',' << series.values[r] << ',' << series.error_at(r) << '\n';
        } else {
            std::ostringstream num;
            num.precision(17);
            num << series.values[r] << ',' << series.error_at(r);
            os << r << ',' << num.str() << '\n';
        }
    }
    return os.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spherical means on universal covering trees"};
    app.require_subcommand(1);

    std::string graph_src, out, fn_path, type = "sphere", base = "0", name, op = "vertex";
    std::string on = "vertices";
    int radius = 0, rmax = 20, theorem = 1, trials = 50, part = 1;
    std::uint64_t seed = 1;
    double epsilon = kDefaultEpsilon;
    bool exact = false;

    auto* sp = app.add_subcommand("spectrum", "Laplacian spectrum, case analysis and beta");
    sp->add_option("--graph", graph_src)->required();
    sp->add_option("--operator", op)->check(CLI::IsMember({"vertex", "edge"}));
    sp->add_option("--epsilon", epsilon);
    sp->add_option("--out", out);

    auto* rg = app.add_subcommand("region", "cover path counts of a region, CSV id,count");
    rg->add_option("--graph", graph_src)->required();
    rg->add_option("--type", type)
        ->check(CLI::IsMember({"sphere", "edgesphere", "arc", "tube", "horocycle"}));
    rg->add_option("--base", base);
    rg->add_option("--r,--radius", radius);
    rg->add_option("--out", out);

    auto* mn = app.add_subcommand("mean", "mean series of a function, CSV r,mean,abs_error");
    mn->add_option("--graph", graph_src)->required();
    mn->add_option("--function", fn_path)->required();
    mn->add_option("--on", on, "vertices|edges")
        ->check(CLI::IsMember({"vertices", "edges"}));
    mn->add_option("--type", type)
        ->check(CLI::IsMember({"sphere", "edgesphere", "arc", "tube", "horocycle"}));
    mn->add_option("--base", base);
    mn->add_option("--rmax", rmax);
    mn->add_flag("--exact", exact, "exact rational arithmetic");
    mn->add_option("--out", out);

    auto* vf = app.add_subcommand("verify", "cross-check a theorem, JSON verdict");
    vf->add_option("--graph", graph_src)->required();
    vf->add_option("--theorem", theorem)->check(CLI::Range(1, 3));
    vf->add_option("--trials", trials);
    vf->add_option("--seed", seed);
    vf->add_option("--rmax", rmax);
    vf->add_option("--epsilon", epsilon);
    vf->add_option("--out", out);

    auto* gp = app.add_subcommand("gprime", "squared graph on one bipartition part, edge list");
    gp->add_option("--graph", graph_src)->required();
    gp->add_option("--part", part)->check(CLI::Range(1, 2));
    gp->add_option("--out", out);

    auto* gn = app.add_subcommand("generate", "emit a named graph as an edge list");
    gn->add_option("--name", name)->required();
    gn->add_option("--out", out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (sp->parsed()) {
            auto g = resolve_graph(graph_src);
            auto rep = spectrum_report(g, op == "edge", epsilon);
            std::optional<bool> ram;
            if (auto cls = classify_structure(g); cls.regular_q && *cls.regular_q >= 1)
                ram = is_ramanujan(g);
            emit(out, spectral_json(rep, ram).dump(2) + "\n");
        } else if (rg->parsed()) {
            auto g = resolve_graph(graph_src);
            auto region = build_region(g, type, base, radius, type == "edgesphere");
            auto rc = region_counts(g, region);
            std::ostringstream os;
            os << "id,count\n";
            for (size_t i = 0; i < rc.counts.size(); ++i) os << i << ',' << rc.counts[i] << '\n';
            emit(out, os.str());
        } else if (mn->parsed()) {
            auto g = resolve_graph(graph_src);
            auto family = build_region(g, type, base, 0, on == "edges");
            emit(out, exact ? mean_csv<Rational>(g, fn_path, family, rmax)
                            : mean_csv<double>(g, fn_path, family, rmax));
        } else if (vf->parsed()) {
            auto g = resolve_graph(graph_src);
            auto v = cross_check_theorem(g, theorem, trials, seed, rmax, epsilon);
            Json j;
            j["theorem"] = v.theorem;
            j["beta"] = v.beta;
            j["trials"] = v.trials;
            j["rmax"] = v.rmax;
            j["seed"] = v.seed;
            j["max_fitted_rate"] = v.max_fitted_rate;
            j["rate_limit"] = v.rate_limit;
            j["c_emp"] = v.c_emp;
            j["c_per_base"] = v.c_per_base;
            j["bound_holds"] = v.bound_holds;
            j["rate_ok"] = v.rate_ok;
            j["gap_lemma_ok"] = v.gap_lemma_ok;
            j["pass"] = v.pass;
            emit(out, j.dump(2) + "\n");
            if (!v.pass) return 1;
        } else if (gp->parsed()) {
            auto g = resolve_graph(graph_src);
            auto sq = squared_graph(g, part);
            std::ostringstream os;
            os << "# squared graph; vertex i below is original vertex";
            for (int v : sq.vertex_ids) os << ' ' << v;
            os << '\n' << to_edge_list(sq.graph);
            emit(out, os.str());
        } else if (gn->parsed()) {
            emit(out, to_edge_list(generate_by_name(name)));
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
