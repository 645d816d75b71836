#include <catch2/catch_amalgamated.hpp>

#include "qcluster/surface.hpp"

using namespace qcluster;

TEST_CASE("rank formulas") {
    for (unsigned n = 1; n <= 10; ++n) CHECK(SurfaceSignature::moebius(n).rank() == n);
    // hexagon: a fan triangulation has b-3 diagonals
    CHECK(SurfaceSignature::disc(6).rank() == 3);
    CHECK(SurfaceSignature::annulus(1, 1).rank() == 2);
    CHECK(SurfaceSignature::annulus(2, 3).rank() == 5);
    CHECK(SurfaceSignature::validated({false, 2, {1}}).rank() == 4);  // Klein bottle with boundary
}

TEST_CASE("degenerate surfaces are rejected") {
    CHECK_THROWS_AS(SurfaceSignature::disc(1), std::invalid_argument);  // monogon
    CHECK_THROWS_AS(SurfaceSignature::disc(2), std::invalid_argument);  // digon
    CHECK_THROWS_AS(SurfaceSignature::disc(3), std::invalid_argument);  // triangle
    CHECK_NOTHROW(SurfaceSignature::disc(4));
    CHECK_THROWS_AS(SurfaceSignature::validated({true, 0, {}}), std::invalid_argument);
    CHECK_THROWS_AS(SurfaceSignature::validated({true, 0, {3, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(SurfaceSignature::validated({false, 0, {2}}), std::invalid_argument);
}

TEST_CASE("finite type classification") {
    CHECK(SurfaceSignature::moebius(3).is_finite_type());
    CHECK(SurfaceSignature::moebius(1).is_finite_type());
    CHECK(SurfaceSignature::disc(5).is_finite_type());
    CHECK_FALSE(SurfaceSignature::validated({false, 2, {1}}).is_finite_type());
    CHECK_FALSE(SurfaceSignature::annulus(1, 1).is_finite_type());
    CHECK_FALSE(SurfaceSignature::validated({true, 1, {4}}).is_finite_type());
    CHECK_FALSE(SurfaceSignature::validated({false, 1, {2, 2}}).is_finite_type());
}

TEST_CASE("closed-form censuses") {
    auto m2 = SurfaceSignature::moebius(2).count_quasi_arcs_closed_form();
    REQUIRE(m2.has_value());
    CHECK(*m2 == std::pair<long long, long long>{6, 5});
    auto m3 = SurfaceSignature::moebius(3).count_quasi_arcs_closed_form();
    CHECK(*m3 == std::pair<long long, long long>{13, 12});
    auto m4 = SurfaceSignature::moebius(4).count_quasi_arcs_closed_form();
    CHECK(*m4 == std::pair<long long, long long>{23, 22});

    // hexagon oracle: brute-force count of non-adjacent vertex pairs
    unsigned b = 6, chords = 0;
    for (unsigned i = 0; i < b; ++i)
        for (unsigned j = i + 1; j < b; ++j)
            if (j - i != 1 && !(i == 0 && j == b - 1)) ++chords;
    auto d6 = SurfaceSignature::disc(6).count_quasi_arcs_closed_form();
    CHECK(d6->first == chords);
    CHECK(d6->second == chords);

    CHECK_FALSE(SurfaceSignature::annulus(2, 2).count_quasi_arcs_closed_form().has_value());
}

TEST_CASE("json round trip") {
    SurfaceSignature s = SurfaceSignature::validated({false, 1, {4}});
    CHECK(s.to_string() == "non-orientable genus=1 boundary=[4]");
    CHECK(s == SurfaceSignature::moebius(4));
}
