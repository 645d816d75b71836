#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "qcluster/cover.hpp"
#include "qcluster/explorer.hpp"

using namespace qcluster;

TEST_CASE("double covers of Moebius strips are annuli C_{n,n}") {
    for (unsigned n = 1; n <= 3; ++n) {
        DoubleCover C = build_double_cover(builders::moebius_asf(n));
        CHECK(*C.total_sig == SurfaceSignature::annulus(n, n));
        CHECK(C.total.validate().empty());
        CHECK(C.total_sig->rank() == 2 * C.base_sig->rank());
        CHECK(C.total.orientable());
    }
}

TEST_CASE("cover preconditions") {
    CHECK_THROWS_AS(build_double_cover(builders::disc_fan(4)), std::invalid_argument);
    CHECK_THROWS_AS(build_double_cover(builders::moebius_crosscap(2)), std::invalid_argument);
}

TEST_CASE("deck involution and lifts") {
    DoubleCover C = build_double_cover(builders::moebius_asf(2));
    for (const auto& [a, b] : C.tau) {
        CHECK(a != b);
        CHECK(C.tau.at(b) == a);
        CHECK(C.proj.at(a) == C.proj.at(b));
    }
    for (const auto& [base_id, lifts] : C.lift) {
        CHECK(C.proj.at(lifts.first) == base_id);
        CHECK(C.proj.at(lifts.second) == base_id);
        CHECK(C.tau.at(lifts.first) == lifts.second);
    }
}

TEST_CASE("projection is a ring map and fixes generators") {
    DoubleCover C = build_double_cover(builders::moebius_asf(2));
    Seed bs = initial_seed(C.base);
    Seed ts = initial_seed(C.total);
    for (const auto& [id, p] : ts.vars) {
        LaurentPoly img = project_pi(C, p, bs.registry);
        CHECK(img == LaurentPoly::generator(bs.registry, C.base.name_of(C.proj.at(id))));
    }
    std::mt19937_64 rng(5150);
    std::uniform_int_distribution<int> expo(-2, 2), coeff(-4, 4);
    for (int i = 0; i < 40; ++i) {
        auto rand_poly = [&] {
            LaurentPoly p = LaurentPoly::zero(ts.registry);
            for (int t = 0; t < 3; ++t) {
                ExpVec e(ts.registry->size(), 0);
                for (auto& x : e) x = expo(rng);
                p += LaurentPoly::monomial(ts.registry, std::move(e), coeff(rng));
            }
            return p;
        };
        LaurentPoly p = rand_poly(), q = rand_poly();
        CHECK(project_pi(C, p * q, bs.registry) ==
              project_pi(C, p, bs.registry) * project_pi(C, q, bs.registry));
    }
}

TEST_CASE("orbit mutations commute and project for every mutable arc of M2") {
    ExchangeGraph g = explore(initial_seed(builders::moebius_asf(2)), 1000, true);
    std::size_t checked = 0;
    for (const auto& [k, s] : g.vertices) {
        DoubleCover C = build_double_cover(s.triangulation);
        Seed bs = initial_seed(C.base);
        Seed ts = initial_seed(C.total);
        for (int t : s.triangulation.flippable_ids()) {
            if (s.triangulation.classify_flip(t).kind != FlipKind::TwoTriangles) continue;
            auto rep = orbit_mutate(C, bs, ts, t);
            CHECK(rep.ok());
            ++checked;
        }
    }
    CHECK(checked == 6);  // path graph on 4 triangulations has 2+2+1+1 mutable arcs
}

TEST_CASE("the M1 inner arc does not commute in the cover") {
    DoubleCover C = build_double_cover(builders::moebius_asf(1));
    Seed bs = initial_seed(C.base);
    Seed ts = initial_seed(C.total);
    auto rep = orbit_mutate(C, bs, ts, bs.triangulation.flippable_ids()[0]);
    CHECK_FALSE(rep.mutable_arc);
    CHECK_FALSE(rep.commuted);
}

TEST_CASE("orbit mutation holds along random mutable paths in M3") {
    DoubleCover C = build_double_cover(builders::moebius_asf(3));
    Seed bs = initial_seed(C.base);
    Seed ts = initial_seed(C.total);
    auto lift = C.lift;
    auto tau = C.tau;
    auto proj = C.proj;
    std::mt19937_64 rng(31);
    for (int step = 0; step < 10; ++step) {
        std::vector<int> mutable_arcs;
        for (int t : bs.triangulation.flippable_ids())
            if (bs.triangulation.classify_flip(t).kind == FlipKind::TwoTriangles)
                mutable_arcs.push_back(t);
        REQUIRE_FALSE(mutable_arcs.empty());
        int t = mutable_arcs[rng() % mutable_arcs.size()];
        auto rep = orbit_mutate(C, bs, ts, lift, tau, proj, t);
        REQUIRE(rep.ok());
        bs = rep.base_next;
        ts = rep.total_next;
        lift = rep.lift_next;
        tau = rep.tau_next;
        proj = rep.proj_next;
    }
}

TEST_CASE("exchange matrix entries stay within -2..2") {
    for (unsigned n = 1; n <= 3; ++n) {
        DoubleCover C = build_double_cover(builders::moebius_asf(n));
        ExchangeMatrix EM(C.total);
        for (int v : EM.rows())
            for (int w : EM.cols()) {
                CHECK(EM.entry(v, w) >= -2);
                CHECK(EM.entry(v, w) <= 2);
            }
    }
}

TEST_CASE("matrix rule reduces to classical Ptolemy on discs") {
    QuasiTriangulation D = builders::disc_fan(5);
    DoubleCover C = orientation_cover(D);  // trivial disjoint cover
    Seed bs = initial_seed(D);
    for (int t : D.flippable_ids()) {
        auto rep = exchange_matrix_rule(C, bs, t);
        CHECK(rep.ok());
    }
}

TEST_CASE("matrix rule matches quasi-mutation on M2 and M3") {
    std::mt19937_64 rng(8);
    for (unsigned n : {2u, 3u}) {
        Seed bs = initial_seed(builders::moebius_asf(n));
        for (int step = 0; step < 12; ++step) {
            std::vector<int> mutable_arcs;
            for (int t : bs.triangulation.flippable_ids())
                if (bs.triangulation.classify_flip(t).kind == FlipKind::TwoTriangles)
                    mutable_arcs.push_back(t);
            int t = mutable_arcs[rng() % mutable_arcs.size()];
            DoubleCover C = build_double_cover(bs.triangulation);
            auto rep = exchange_matrix_rule(C, bs, t);
            CHECK(rep.entries_in_range);
            CHECK(rep.b_pm_well_defined);
            CHECK(rep.relation_matches);
            CHECK(rep.matrix_mutation_matches);
            CHECK(rep.orientation_independent);
            bs = mutate(bs, t);
        }
    }
}

TEST_CASE("matrix rule rejects non-mutable directions") {
    DoubleCover C = build_double_cover(builders::moebius_asf(1));
    Seed bs = initial_seed(C.base);
    CHECK_THROWS_AS(exchange_matrix_rule(C, bs, bs.triangulation.flippable_ids()[0]),
                    std::invalid_argument);
}
