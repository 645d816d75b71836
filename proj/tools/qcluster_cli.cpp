// Command-line front end for the quasi-cluster engine: exchange-graph
// exploration, variable expansions, flip chains, double-cover checks, the
// hyperbolic identity suites, friezes and the basis rank check.
//
// Exit codes: 0 success, 1 resource limit hit (partial output), 2 a
// mathematical invariant failed.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "qcluster/qcluster.hpp"

namespace {

using namespace qcluster;

struct SurfaceChoice {
    SurfaceSignature sig;
    std::string preset;  // empty when loaded from JSON
};

SurfaceChoice parse_surface(const std::string& preset, const std::string& json_path) {
    if (!preset.empty() && !json_path.empty())
        throw CLI::ValidationError("--surface and --surface-json are mutually exclusive");
    if (!json_path.empty()) {
        std::ifstream in(json_path);
        if (!in) throw CLI::ValidationError("cannot open " + json_path);
        nlohmann::json j;
        in >> j;
        return {io::surface_from_json(j), ""};
    }
    auto colon = preset.find(':');
    std::string kind = preset.substr(0, colon);
    std::string args = colon == std::string::npos ? "" : preset.substr(colon + 1);
    if (kind == "disc") return {SurfaceSignature::disc(std::stoul(args)), preset};
    if (kind == "moebius") return {SurfaceSignature::moebius(std::stoul(args)), preset};
    if (kind == "annulus") {
        auto comma = args.find(',');
        if (comma == std::string::npos) throw CLI::ValidationError("annulus preset needs p,q");
        return {SurfaceSignature::annulus(std::stoul(args.substr(0, comma)),
                                          std::stoul(args.substr(comma + 1))),
                preset};
    }
    throw CLI::ValidationError("unknown surface preset '" + preset + "' (disc:b, moebius:n, annulus:p,q)");
}

// Initial quasi-triangulation for a preset. Quasi mode starts Moebius strips
// at the crosscap-annulus frame (the figure-eight of golden chains); the
// arcs-only walk needs a genuine triangulation and uses the anti-self-folded
// form.
QuasiTriangulation starting_triangulation(const SurfaceChoice& sc, bool arcs_only) {
    const SurfaceSignature& s = sc.sig;
    if (!s.orientable && s.genus == 1 && s.boundary.size() == 1 && !arcs_only)
        return builders::moebius_crosscap(s.boundary[0]);
    return initial_triangulation(s);
}

// Paper names for the six quasi-arcs of moebius:2, keyed by expansion in the
// (c_a, d) cluster. Built here by direct polynomial arithmetic, independent
// of the mutation engine.
std::map<std::string, std::string> m2_name_table(const RegistryPtr& reg) {
    auto gen = [&](const char* n) { return LaurentPoly::generator(reg, n); };
    LaurentPoly ca = gen("c_a"), d = gen("d"), y = gen("y"), z = gen("z");
    LaurentPoly dinv = d.monomial_inverse();
    LaurentPoly N = (y + z) * (y + z) + d * d * y * z;
    std::map<std::string, std::string> t;
    t[ca.to_string()] = "c_a";
    t[d.to_string()] = "d";
    t[(ca * dinv).to_string()] = "a";
    t[((y + z) * dinv).to_string()] = "c";
    t[LaurentPoly::exact_div(N, ca).to_string()] = "c_b";
    t[(LaurentPoly::exact_div(N, ca) * dinv).to_string()] = "b";
    return t;
}

std::string header(const SurfaceChoice* sc, std::uint64_t rng_seed, bool with_seed) {
    std::ostringstream out;
    out << "# qcluster " << kVersion << "\n";
    if (sc) {
        out << "# surface: " << sc->sig.to_string();
        if (!sc->preset.empty()) out << " (" << sc->preset << ")";
        out << "\n";
    }
    if (with_seed) out << "# rng_seed: " << rng_seed << "\n";
    return out.str();
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string tok;
    while (std::getline(in, tok, ',')) out.push_back(tok);
    return out;
}

int cmd_explore(const SurfaceChoice& sc, std::size_t max_seeds, bool arcs_only, unsigned threads,
                const std::string& format, const std::string& out_path) {
    Seed s0 = initial_seed(starting_triangulation(sc, arcs_only));
    ExchangeGraph g = explore(s0, max_seeds, arcs_only, threads);
    StructureReport rep = verify_structure(g, sc.sig);

    std::ostringstream out;
    out << header(&sc, 0, false);
    out << "mode: " << (arcs_only ? "arcs-only" : "quasi") << "\n";
    out << "vertices: " << g.vertex_count() << "\n";
    out << "edges: " << g.undirected_edge_count() << "\n";
    out << "variables: " << g.catalogue.size() << "\n";
    out << "regular: " << (rep.regular ? "yes(" + std::to_string(rep.degree) + ")"
                                       : "no(" + std::to_string(rep.min_degree) + ".." +
                                             std::to_string(rep.max_degree) + ")")
        << "\n";
    out << "coefficients_nonnegative: " << (g.all_coefficients_positive ? "yes" : "no") << "\n";
    if (auto cf = sc.sig.count_quasi_arcs_closed_form())
        out << "closed_form: quasi-arcs " << cf->first << ", arcs " << cf->second << "\n";
    out << "finite_type: " << (sc.sig.is_finite_type() ? "yes" : "no") << "\n";
    if (g.budget_exceeded) out << "budget_exceeded: yes (partial graph)\n";
    for (const auto& w : g.warnings) out << "warning: " << w << "\n";
    for (const auto& f : rep.failures) out << "structure_failure: " << f << "\n";

    if (format == "dot") {
        write_output(out_path, export_dot(g));
        std::cout << out.str();
    } else if (format == "json") {
        write_output(out_path, io::to_json(g, true).dump(2) + "\n");
    } else {
        write_output(out_path, out.str());
    }
    if (!rep.failures.empty() || !g.warnings.empty()) return 2;
    if (g.budget_exceeded) return 1;
    return 0;
}

int cmd_classify(const SurfaceChoice& sc) {
    std::cout << header(&sc, 0, false);
    if (sc.sig.is_finite_type()) {
        auto cf = sc.sig.count_quasi_arcs_closed_form();
        std::cout << "finite type; quasi-arcs: " << cf->first << "; arcs: " << cf->second << "\n";
    } else {
        std::cout << "infinite type\n";
    }
    std::cout << "rank: " << sc.sig.rank() << "\n";
    return 0;
}

int cmd_variables(const SurfaceChoice& sc, const std::string& target_seq, std::size_t max_seeds) {
    Seed s0 = initial_seed(starting_triangulation(sc, false));
    ExchangeGraph g = explore(s0, max_seeds, false);
    if (g.budget_exceeded) {
        std::cout << "budget exceeded; no full catalogue\n";
        return 1;
    }
    ClusterKey target = cluster_key(s0);
    if (!target_seq.empty()) {
        Seed cur = s0;
        for (const auto& name : split_commas(target_seq)) cur = mutate_by_name(cur, name);
        target = cluster_key(cur);
    }
    ExchangeGraph h = expansions_in(g, target, max_seeds);
    std::cout << header(&sc, 0, false);
    std::cout << "cluster:";
    const Seed& ts = h.vertices.begin()->second;  // may differ from target; print target's seed
    (void)ts;
    for (const auto& [id, p] : g.vertices.at(target).vars)
        std::cout << " " << g.vertices.at(target).triangulation.name_of(id);
    std::cout << "\nvariables: " << h.catalogue.size() << "\n";
    std::map<std::string, std::string> names;
    if (sc.preset == "moebius:2") names = m2_name_table(h.vertices.begin()->second.registry);
    for (const auto& [ser, p] : h.catalogue) {
        auto it = names.find(ser);
        std::cout << (it != names.end() ? it->second : std::string("x")) << " = " << ser << "\n";
    }
    return 0;
}

int cmd_flip(const SurfaceChoice& sc, const std::string& seq) {
    Seed cur = initial_seed(starting_triangulation(sc, false));
    std::map<std::string, std::string> names;
    if (sc.preset == "moebius:2") names = m2_name_table(cur.registry);
    std::cout << header(&sc, 0, false);
    std::cout << "cluster:";
    for (const auto& [id, p] : cur.vars)
        std::cout << " " << cur.triangulation.name_of(id) << "=" << p.to_string();
    std::cout << "\n";
    for (const auto& name : split_commas(seq)) {
        Seed next = mutate_by_name(cur, name);
        int fresh = -1;
        for (const auto& [id, p] : next.vars)
            if (!cur.vars.count(id)) fresh = id;
        std::string ser = next.vars.at(fresh).to_string();
        auto it = names.find(ser);
        if (it != names.end()) next.triangulation.rename_element(fresh, it->second);
        std::cout << "mu_" << name << ": " << next.triangulation.name_of(fresh) << " = " << ser
                  << "\n";
        cur = std::move(next);
    }
    return 0;
}

int cmd_cover(const SurfaceChoice& sc, std::size_t paths, std::size_t path_len,
              std::uint64_t rng_seed, std::size_t matrix_instances) {
    if (sc.sig.orientable) {
        std::cout << "surface is orientable; the double cover is two disjoint copies\n";
        return 0;
    }
    std::cout << header(&sc, rng_seed, true);
    QuasiTriangulation base = initial_triangulation(sc.sig);
    DoubleCover C = build_double_cover(base);
    std::cout << "base: " << C.base_sig->to_string() << "\n";
    std::cout << "total: " << C.total_sig->to_string() << "\n";
    std::cout << "rank_doubling: ok\n";

    bool all_ok = true;
    std::mt19937_64 rng(rng_seed);
    Seed bs = initial_seed(C.base);
    Seed ts = initial_seed(C.total);
    auto lift = C.lift;
    auto tau = C.tau;
    auto proj = C.proj;
    std::size_t steps_ok = 0, steps = 0, nonmutable_detected = 0;
    for (std::size_t i = 0; i < paths * path_len && steps < paths * path_len; ++i) {
        std::vector<int> mutable_arcs, frozen;
        for (int t : bs.triangulation.flippable_ids()) {
            if (bs.triangulation.classify_flip(t).kind == FlipKind::TwoTriangles)
                mutable_arcs.push_back(t);
            else
                frozen.push_back(t);
        }
        if (!frozen.empty() && i == 0) {
            // demonstrate the non-commuting counterexample once
            auto rep = orbit_mutate(C, bs, ts, lift, tau, proj, frozen.front());
            if (!rep.mutable_arc && !rep.commuted) ++nonmutable_detected;
        }
        if (mutable_arcs.empty()) break;
        int t = mutable_arcs[rng() % mutable_arcs.size()];
        auto rep = orbit_mutate(C, bs, ts, lift, tau, proj, t);
        ++steps;
        if (!rep.ok()) {
            all_ok = false;
            std::cout << "orbit_failure at step " << steps << ": " << rep.detail << "\n";
            break;
        }
        ++steps_ok;
        bs = rep.base_next;
        ts = rep.total_next;
        lift = rep.lift_next;
        tau = rep.tau_next;
        proj = rep.proj_next;
    }
    std::cout << "orbit_steps: " << steps_ok << "/" << steps << " ok\n";
    if (nonmutable_detected) std::cout << "non_mutable_non_commutation: detected\n";

    std::size_t mat_ok = 0, mat_total = 0;
    Seed mbs = initial_seed(C.base);
    for (std::size_t i = 0; i < matrix_instances; ++i) {
        std::vector<int> mutable_arcs;
        for (int t : mbs.triangulation.flippable_ids())
            if (mbs.triangulation.classify_flip(t).kind == FlipKind::TwoTriangles)
                mutable_arcs.push_back(t);
        if (mutable_arcs.empty()) break;
        int t = mutable_arcs[rng() % mutable_arcs.size()];
        DoubleCover Ci = build_double_cover(mbs.triangulation);
        auto rep = exchange_matrix_rule(Ci, mbs, t);
        ++mat_total;
        if (rep.ok()) ++mat_ok;
        else all_ok = false;
        mbs = mutate(mbs, t);
    }
    std::cout << "matrix_rule: " << mat_ok << "/" << mat_total << " ok\n";
    return all_ok ? 0 : 2;
}

int cmd_verify(std::uint64_t rng_seed, std::size_t samples, double tol) {
    std::cout << header(nullptr, rng_seed, true);
    bool ok = true;
    for (const auto& r : hyp::verify_all(rng_seed, samples, tol)) {
        std::cout << r.to_string() << (r.ok() ? "  [pass]" : "  [FAIL]") << "\n";
        ok = ok && r.ok();
    }
    return ok ? 0 : 2;
}

int cmd_frieze(unsigned p, unsigned q, int epsilon, bool self_class, long long window_size,
               int k_max, const std::string& format, const std::string& out_path) {
    using namespace qcluster::frieze;
    RegistryPtr empty = make_registry({});
    LaurentPoly one = LaurentPoly::constant(empty, 1);
    FriezeSpec<LaurentPoly> spec{p, q, epsilon, {}, {}, self_class, one};
    for (unsigned i = 0; i < p; ++i) spec.boundary_d.push_back(one);
    for (unsigned j = 0; j < q; ++j) spec.boundary_dp.push_back(one);

    Staircase<LaurentPoly> stair;
    long long depth = 2 * window_size + 2 * std::max(k_max, 2) + 6;
    for (long long l = 0; l < depth; ++l) {
        stair.hi.push_back(one);
        stair.lo.push_back(one);
    }
    WindowRect w{-window_size + 1, 0, epsilon > 0 ? window_size : -2 * window_size + 1,
                 epsilon > 0 ? 2 * window_size - 1 : -window_size};
    TilingGrid<LaurentPoly> g = extend(spec, stair, w);
    auto sl2 = check_sl2(g);
    auto mesh = verify_mesh(g);

    std::ostringstream out;
    out << "# frieze p=" << p << " q=" << q << " epsilon=" << epsilon << "\n";
    if (format == "csv") {
        out << "i,j,value\n";
        for (long long i = w.i_min; i <= w.i_max; ++i)
            for (long long j = w.j_min; j <= w.j_max; ++j)
                out << i << "," << j << "," << g.at(i, j).to_string() << "\n";
    }
    out << "cells: " << g.cells.size() << "\n";
    out << "sl2_unit_determinants: " << (sl2.ok() ? "ok" : "violated") << " (" << sl2.checked
        << " squares)\n";
    out << "mesh_relation: " << (mesh.ok() ? "ok" : "violated") << "\n";
    bool cf_ok = true;
    if (k_max >= 2) {
        auto rep = verify_closed_formula(spec, stair, k_max);
        cf_ok = rep.ok();
        out << "closed_formula_k<=" << k_max << ": " << (cf_ok ? "ok" : "mismatch") << "\n";
    }
    if (format == "dot") {
        ArQuiver q2{epsilon, p, q, w};
        write_output(out_path, q2.to_dot());
        std::cout << out.str();
    } else {
        write_output(out_path, out.str());
    }
    return sl2.ok() && mesh.ok() && cf_ok ? 0 : 2;
}

int cmd_basis(const SurfaceChoice& sc, unsigned max_degree, std::size_t oversample,
              std::uint64_t rng_seed, std::size_t max_seeds) {
    if (!sc.sig.is_finite_type()) {
        std::cout << "basis check needs a finite-type surface\n";
        return 2;
    }
    Seed s0 = initial_seed(starting_triangulation(sc, false));
    ExchangeGraph g = explore(s0, max_seeds, false);
    if (g.budget_exceeded) return 1;
    std::cout << header(&sc, rng_seed, true);
    auto rep = monomial_rank_check(g, max_degree, oversample, rng_seed);
    std::cout << "monomials: " << rep.monomial_count << "\n";
    std::cout << "trials: " << rep.trials << "\n";
    std::cout << "rank: " << rep.rank << "\n";
    std::cout << "full_rank: " << (rep.full_rank ? "yes" : "NO") << "\n";
    auto probe = monomial_rank_check(g, max_degree, oversample, rng_seed, true);
    std::cout << "duplicate_probe_caught: " << (probe.duplicate_probe_caught ? "yes" : "NO") << "\n";
    return rep.full_rank && probe.duplicate_probe_caught ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quasi-cluster algebra engine for unpunctured marked surfaces"};
    app.require_subcommand(1);

    std::string surface, surface_json, format = "text", out_path, seq, target_seq;
    std::size_t max_seeds = 100000, samples = 1000, paths = 10, path_len = 10,
                matrix_instances = 20, oversample = 3;
    unsigned threads = 1, p = 1, q = 1, max_degree = 3;
    int epsilon = 1, k_max = 0;
    long long window_size = 10;
    bool arcs_only = false, self_class = false;
    std::uint64_t rng_seed = 42;
    double tol = 1e-9;

    auto add_surface = [&](CLI::App* c) {
        c->add_option("--surface", surface, "preset: disc:b, moebius:n, annulus:p,q");
        c->add_option("--surface-json", surface_json, "path to a surface signature JSON");
    };

    auto* explore_cmd = app.add_subcommand("explore", "enumerate the quasi-exchange graph");
    add_surface(explore_cmd);
    explore_cmd->add_option("--max-seeds", max_seeds);
    explore_cmd->add_flag("--arcs-only", arcs_only, "restrict to mutations between triangulations");
    explore_cmd->add_option("--threads", threads);
    explore_cmd->add_option("--format", format, "text | dot | json");
    explore_cmd->add_option("--out", out_path);

    auto* classify_cmd = app.add_subcommand("classify", "finite-type verdict and closed-form counts");
    add_surface(classify_cmd);

    auto* variables_cmd = app.add_subcommand("variables", "expansions in a chosen quasi-cluster");
    add_surface(variables_cmd);
    variables_cmd->add_option("--target-seq", target_seq, "mutation names leading to the target");
    variables_cmd->add_option("--max-seeds", max_seeds);

    auto* flip_cmd = app.add_subcommand("flip", "apply a mutation sequence and print new variables");
    add_surface(flip_cmd);
    flip_cmd->add_option("--seq", seq, "comma-separated element names")->required();

    auto* cover_cmd = app.add_subcommand("cover", "double-cover construction and orbit checks");
    add_surface(cover_cmd);
    cover_cmd->add_option("--paths", paths);
    cover_cmd->add_option("--path-len", path_len);
    cover_cmd->add_option("--matrix-instances", matrix_instances);
    cover_cmd->add_option("--rng-seed", rng_seed);

    auto* verify_cmd = app.add_subcommand("verify", "hyperbolic lambda-length identity suites");
    verify_cmd->add_option("--samples", samples);
    verify_cmd->add_option("--seed", rng_seed);
    verify_cmd->add_option("--tol", tol);

    auto* frieze_cmd = app.add_subcommand("frieze", "coefficient-free SL2 tiling window");
    frieze_cmd->add_option("--p", p);
    frieze_cmd->add_option("--q", q);
    frieze_cmd->add_option("--epsilon", epsilon)->check(CLI::IsMember({-1, 1}));
    frieze_cmd->add_flag("--self-class", self_class);
    frieze_cmd->add_option("--window", window_size, "window side length");
    frieze_cmd->add_option("--k-max", k_max, "verify the closed formula up to k");
    frieze_cmd->add_option("--format", format, "text | csv | dot");
    frieze_cmd->add_option("--out", out_path);

    auto* basis_cmd = app.add_subcommand("basis", "probabilistic independence of quasi-cluster monomials");
    add_surface(basis_cmd);
    basis_cmd->add_option("--max-degree", max_degree);
    basis_cmd->add_option("--oversample", oversample);
    basis_cmd->add_option("--rng-seed", rng_seed);
    basis_cmd->add_option("--max-seeds", max_seeds);

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(explore_cmd))
            return cmd_explore(parse_surface(surface, surface_json), max_seeds, arcs_only, threads,
                               format, out_path);
        if (app.got_subcommand(classify_cmd)) return cmd_classify(parse_surface(surface, surface_json));
        if (app.got_subcommand(variables_cmd))
            return cmd_variables(parse_surface(surface, surface_json), target_seq, max_seeds);
        if (app.got_subcommand(flip_cmd)) return cmd_flip(parse_surface(surface, surface_json), seq);
        if (app.got_subcommand(cover_cmd))
            return cmd_cover(parse_surface(surface, surface_json), paths, path_len, rng_seed,
                             matrix_instances);
        if (app.got_subcommand(verify_cmd)) return cmd_verify(rng_seed, samples, tol);
        if (app.got_subcommand(frieze_cmd))
            return cmd_frieze(p, q, epsilon, self_class, window_size, k_max, format, out_path);
        if (app.got_subcommand(basis_cmd))
            return cmd_basis(parse_surface(surface, surface_json), max_degree, oversample, rng_seed,
                             max_seeds);
    } catch (const NonExactDivision& e) {
        std::cerr << "laurent-phenomenon violation: " << e.what() << "\n";
        return 2;
    } catch (const CLI::Error& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
