// Acceptance suite: one line per criterion, everything pinned in code.
// Exit status is the number of failed criteria.

#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "qcluster/qcluster.hpp"

using namespace qcluster;

namespace {

struct Outcome {
    bool pass = false;
    std::string note;
};

int failures = 0;

void run(int number, const std::string& title, double budget_seconds,
         const std::function<Outcome()>& body) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
        out = body();
    } catch (const std::exception& e) {
        out.pass = false;
        out.note = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool in_budget = secs <= budget_seconds;
    bool pass = out.pass && in_budget;
    std::ostringstream line;
    line << (pass ? "PASS" : "FAIL") << "  criterion " << number << ": " << title << "  ["
         << std::fixed << secs << "s/" << budget_seconds << "s]";
    if (!out.note.empty()) line << "  " << out.note;
    if (!in_budget) line << "  (over time budget)";
    std::cout << line.str() << std::endl;
    if (!pass) ++failures;
}

LaurentPoly gen(const RegistryPtr& r, const char* n) { return LaurentPoly::generator(r, n); }

// ---- reusable pieces (also exercised twice for criterion 10) ----------------------

std::string report_m2(unsigned threads) {
    ExchangeGraph g = explore(initial_seed(builders::moebius_crosscap(2)), 100000, false, threads);
    return io::to_json(g, true).dump();
}

std::string report_m3(unsigned threads) {
    ExchangeGraph g = explore(initial_seed(builders::moebius_crosscap(3)), 100000, false, threads);
    ExchangeGraph a = explore(initial_seed(builders::moebius_asf(3)), 100000, true, threads);
    return io::to_json(g, false).dump() + io::to_json(a, false).dump();
}

std::string report_hyperbolic(std::uint64_t seed) {
    std::string out;
    for (const auto& r : hyp::verify_all(seed, 1000, 1e-9)) out += r.to_string() + "\n";
    return out;
}

std::string report_basis(std::uint64_t seed) {
    ExchangeGraph g = explore(initial_seed(builders::moebius_crosscap(2)));
    auto rep = monomial_rank_check(g, 3, 3, seed);
    std::ostringstream out;
    out << rep.monomial_count << "/" << rep.trials << "/" << rep.rank << "/" << rep.full_rank;
    return out.str();
}

Outcome criterion1() {
    ExchangeGraph g = explore(initial_seed(builders::moebius_crosscap(2)));
    StructureReport rep = verify_structure(g, SurfaceSignature::moebius(2));
    bool cycle = g.vertex_count() == 6 && g.undirected_edge_count() == 6 && rep.regular &&
                 rep.degree == 2 && g.catalogue.size() == 6 && rep.ok();
    return {cycle, "vertices=" + std::to_string(g.vertex_count()) +
                       " edges=" + std::to_string(g.undirected_edge_count()) +
                       " variables=" + std::to_string(g.catalogue.size())};
}

Outcome criterion2() {
    Seed s0 = initial_seed(builders::moebius_crosscap(2));
    ExchangeGraph g = explore(s0);
    ExchangeGraph h = expansions_in(g, cluster_key(s0));
    const RegistryPtr r = h.vertices.begin()->second.registry;
    LaurentPoly ca = gen(r, "c_a"), d = gen(r, "d"), y = gen(r, "y"), z = gen(r, "z");
    LaurentPoly N = z * z + 2 * (z * y) + y * y + d * d * (z * y);
    std::set<std::string> want{
        ca.to_string(),                                            // c_a
        d.to_string(),                                             // d
        LaurentPoly::exact_div(N, ca).to_string(),                 // c_b
        LaurentPoly::exact_div(N, ca * d).to_string(),             // b
        ((z + y) * d.monomial_inverse()).to_string(),              // c
        (ca * d.monomial_inverse()).to_string(),                   // a
    };
    std::set<std::string> got;
    for (const auto& [ser, p] : h.catalogue) got.insert(ser);
    return {got == want, "catalogue of 6 canonical serializations matches the table"};
}

Outcome criterion3() {
    ExchangeGraph q = explore(initial_seed(builders::moebius_crosscap(3)));
    ExchangeGraph a = explore(initial_seed(builders::moebius_asf(3)), 100000, true);
    bool ok = q.vertex_count() == 22 && a.vertex_count() == 16 && q.catalogue.size() == 13 &&
              verify_structure(q, SurfaceSignature::moebius(3)).ok();
    return {ok, "quasi=" + std::to_string(q.vertex_count()) +
                    " arcs=" + std::to_string(a.vertex_count()) +
                    " variables=" + std::to_string(q.catalogue.size())};
}

Outcome criterion4() {
    const std::size_t catalan[] = {2, 5, 14, 42, 132};
    for (unsigned b = 4; b <= 8; ++b) {
        ExchangeGraph g = explore(initial_seed(builders::disc_fan(b)), 100000, true);
        if (g.vertex_count() != catalan[b - 4]) return {false, "vertex count at b=" + std::to_string(b)};
        if (g.catalogue.size() != b * (b - 3) / 2)
            return {false, "variable count at b=" + std::to_string(b)};
        if (!g.all_coefficients_positive) return {false, "negative coefficient at b=" + std::to_string(b)};
    }
    return {true, "b=4..8 give 2,5,14,42,132 triangulations"};
}

Outcome criterion5() {
    for (unsigned n = 1; n <= 5; ++n) {
        auto cf = SurfaceSignature::moebius(n).count_quasi_arcs_closed_form();
        ExchangeGraph q = explore(initial_seed(builders::moebius_crosscap(n)));
        ExchangeGraph a = explore(initial_seed(builders::moebius_asf(n)), 100000, true);
        if (static_cast<long long>(q.catalogue.size()) != cf->first)
            return {false, "quasi catalogue at n=" + std::to_string(n)};
        if (static_cast<long long>(a.catalogue.size()) != cf->second)
            return {false, "arc catalogue at n=" + std::to_string(n)};
    }
    return {true, "catalogues equal (3n^2-n+2)/2 and n(3n-1)/2 for n=1..5"};
}

Outcome criterion6() {
    // construction for n = 1..3
    for (unsigned n = 1; n <= 3; ++n) {
        DoubleCover C = build_double_cover(builders::moebius_asf(n));
        if (!(*C.total_sig == SurfaceSignature::annulus(n, n)))
            return {false, "cover signature at n=" + std::to_string(n)};
        if (!C.total.validate().empty()) return {false, "cover invalid at n=" + std::to_string(n)};
    }
    // every mutable arc of every triangulation of M2
    {
        ExchangeGraph g = explore(initial_seed(builders::moebius_asf(2)), 1000, true);
        for (const auto& [k, s] : g.vertices) {
            DoubleCover C = build_double_cover(s.triangulation);
            Seed bs = initial_seed(C.base);
            Seed ts = initial_seed(C.total);
            for (int t : s.triangulation.flippable_ids()) {
                if (s.triangulation.classify_flip(t).kind != FlipKind::TwoTriangles) continue;
                if (!orbit_mutate(C, bs, ts, t).ok()) return {false, "M2 orbit mutation"};
            }
        }
    }
    // 100 random mutable steps in M3 with the lift maintained
    {
        DoubleCover C = build_double_cover(builders::moebius_asf(3));
        Seed bs = initial_seed(C.base);
        Seed ts = initial_seed(C.total);
        auto lift = C.lift;
        auto tau = C.tau;
        auto proj = C.proj;
        std::mt19937_64 rng(606);
        for (int step = 0; step < 100; ++step) {
            std::vector<int> mutable_arcs;
            for (int t : bs.triangulation.flippable_ids())
                if (bs.triangulation.classify_flip(t).kind == FlipKind::TwoTriangles)
                    mutable_arcs.push_back(t);
            int t = mutable_arcs[rng() % mutable_arcs.size()];
            auto rep = orbit_mutate(C, bs, ts, lift, tau, proj, t);
            if (!rep.ok()) return {false, "M3 path step " + std::to_string(step) + " " + rep.detail};
            bs = rep.base_next;
            ts = rep.total_next;
            lift = rep.lift_next;
            tau = rep.tau_next;
            proj = rep.proj_next;
        }
    }
    // M1 non-mutable counterexample
    {
        DoubleCover C = build_double_cover(builders::moebius_asf(1));
        Seed bs = initial_seed(C.base);
        Seed ts = initial_seed(C.total);
        auto rep = orbit_mutate(C, bs, ts, bs.triangulation.flippable_ids()[0]);
        if (rep.mutable_arc || rep.commuted) return {false, "M1 counterexample not detected"};
    }
    // exchange matrix rule on 50 random mutable instances
    {
        std::mt19937_64 rng(707);
        Seed bs = initial_seed(builders::moebius_asf(3));
        for (int i = 0; i < 50; ++i) {
            std::vector<int> mutable_arcs;
            for (int t : bs.triangulation.flippable_ids())
                if (bs.triangulation.classify_flip(t).kind == FlipKind::TwoTriangles)
                    mutable_arcs.push_back(t);
            int t = mutable_arcs[rng() % mutable_arcs.size()];
            DoubleCover C = build_double_cover(bs.triangulation);
            auto rep = exchange_matrix_rule(C, bs, t);
            if (!rep.ok()) return {false, "matrix rule instance " + std::to_string(i)};
            bs = mutate(bs, t);
        }
    }
    return {true, "covers, orbits, projection, matrix rule all verified"};
}

Outcome criterion7() {
    for (const auto& rep : hyp::verify_all(4242, 1000, 1e-9)) {
        if (!rep.ok() || rep.samples < 1000) return {false, rep.to_string()};
    }
    return {true, "6 identity suites x >=1000 samples, zero failures at 1e-9"};
}

Outcome criterion8() {
    using namespace qcluster::frieze;
    // 10x10 coefficient-free window from an all-ones staircase
    RegistryPtr empty = make_registry({});
    LaurentPoly one = LaurentPoly::constant(empty, 1);
    FriezeSpec<LaurentPoly> spec{1, 1, +1, {one}, {one}, false, one};
    Staircase<LaurentPoly> stair;
    for (int l = 0; l < 32; ++l) {
        stair.hi.push_back(one);
        stair.lo.push_back(one);
    }
    TilingGrid<LaurentPoly> g = extend(spec, stair, {-9, 0, 10, 19});
    for (long long i = -9; i <= 0; ++i)
        for (long long j = 10; j <= 19; ++j) {
            const LaurentPoly& v = g.at(i, j);
            if (!v.is_monomial() || !v.all_coefficients_positive() || v.is_zero())
                return {false, "non-positive-integer entry"};
        }
    if (!check_sl2(g, 0.0).ok()) return {false, "unit determinant violated"};

    // closed formula numeric k <= 6 and symbolic k <= 4, both orientations
    for (int eps : {+1, -1}) {
        FriezeSpec<double> dspec{2, 2, eps, {1.25, 0.8}, {1.1, 0.9}, false, 1.0};
        Staircase<double> ds;
        for (int l = 0; l < 10; ++l) {
            ds.hi.push_back(1.0 + 0.07 * l);
            ds.lo.push_back(1.6 - 0.05 * l);
        }
        if (!verify_closed_formula(dspec, ds, 6, 1e-9).ok())
            return {false, "numeric closed formula, eps=" + std::to_string(eps)};
    }
    for (int eps : {+1, -1}) {
        std::vector<std::string> names;
        for (int l = 0; l < 8; ++l) {
            names.push_back("h" + std::to_string(l));
            names.push_back("g" + std::to_string(l));
        }
        for (int i = 0; i < 4; ++i) names.push_back("u" + std::to_string(i));
        for (int j = 0; j < 4; ++j) names.push_back("w" + std::to_string(j));
        RegistryPtr reg = make_registry(names);
        FriezeSpec<LaurentPoly> sspec{4, 4, eps, {}, {}, false, LaurentPoly::constant(reg, 1)};
        for (int i = 0; i < 4; ++i)
            sspec.boundary_d.push_back(LaurentPoly::generator(reg, "u" + std::to_string(i)));
        for (int j = 0; j < 4; ++j)
            sspec.boundary_dp.push_back(LaurentPoly::generator(reg, "w" + std::to_string(j)));
        Staircase<LaurentPoly> ss;
        for (int l = 0; l < 8; ++l) {
            ss.hi.push_back(LaurentPoly::generator(reg, "h" + std::to_string(l)));
            ss.lo.push_back(LaurentPoly::generator(reg, "g" + std::to_string(l)));
        }
        if (!verify_closed_formula(sspec, ss, 4).ok())
            return {false, "symbolic closed formula, eps=" + std::to_string(eps)};
    }
    return {true, "SL2 window exact; closed formula k<=6 numeric, k<=4 symbolic, both eps"};
}

Outcome criterion9() {
    ExchangeGraph g = explore(initial_seed(builders::moebius_crosscap(2)));
    auto rep = monomial_rank_check(g, 3, 3, 9001);
    if (!rep.full_rank) return {false, "rank deficiency"};
    auto probe = monomial_rank_check(g, 3, 3, 9001, true);
    if (!probe.duplicate_probe_caught) return {false, "duplicate column not caught"};
    return {true, "monomials=" + std::to_string(rep.monomial_count) +
                      " trials=" + std::to_string(rep.trials) + " rng_seed=9001; probe caught"};
}

Outcome criterion10() {
    if (report_m2(1) != report_m2(4)) return {false, "M2 report depends on thread count"};
    if (report_m3(1) != report_m3(2)) return {false, "M3 report depends on thread count"};
    if (report_m2(1) != report_m2(1)) return {false, "M2 report not reproducible"};
    if (report_hyperbolic(4242) != report_hyperbolic(4242))
        return {false, "hyperbolic report not reproducible"};
    if (report_basis(9001) != report_basis(9001)) return {false, "basis report not reproducible"};
    return {true, "byte-identical reports across reruns and thread counts"};
}

}  // namespace

int main() {
    std::cout << "qcluster acceptance suite (" << kVersion << ")\n";
    run(1, "M2 enumeration: 6 vertices, 2-regular cycle, 6 variables", 1.0, criterion1);
    run(2, "M2 golden variables in the (c_a, d) cluster", 1.0, criterion2);
    run(3, "M3 enumeration: 22 quasi / 16 arcs-only / 13 variables", 10.0, criterion3);
    run(4, "disc sweep b=4..8: Catalan counts, positive Laurent data", 60.0, criterion4);
    run(5, "M_n catalogue formulas for n=1..5", 300.0, criterion5);
    run(6, "double cover: construction, orbits, projection, matrix rule", 120.0, criterion6);
    run(7, "hyperbolic identity suites at 1e-9", 30.0, criterion7);
    run(8, "frieze: exact SL2 window and the closed formula", 60.0, criterion8);
    run(9, "basis: probabilistic independence to degree 3 with probe", 60.0, criterion9);
    run(10, "determinism across reruns and thread counts", 600.0, criterion10);
    std::cout << (failures == 0 ? "ALL CRITERIA PASSED" : "FAILURES: " + std::to_string(failures))
              << std::endl;
    return failures;
}
