#ifndef QCLUSTER_HYPERBOLIC_HPP
#define QCLUSTER_HYPERBOLIC_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

// Floating-point verification lab for the lambda-length identities in the
// upper half-plane: Penner lengths of decorated geodesics, traces of
// hyperbolic isometries and glide reflections, Ptolemy and skein resolutions.
// These are oracles, not production coordinates; double precision with
// relative tolerances is deliberate.

namespace qcluster::hyp {

struct Horocycle {
    double center = 0.0;
    double diameter = 1.0;  // > 0
};

// 2x2 real matrix acting on the half-plane boundary; |det| must be 1.
struct Isometry {
    std::array<double, 4> m{1, 0, 0, 1};  // row-major a,b,c,d

    double a() const { return m[0]; }
    double b() const { return m[1]; }
    double c() const { return m[2]; }
    double d() const { return m[3]; }
    double det() const { return m[0] * m[3] - m[1] * m[2]; }
    double trace() const { return m[0] + m[3]; }

    bool orientation_preserving() const { return det() > 0; }

    void check_unimodular(double tol = 1e-12) const {
        if (std::abs(std::abs(det()) - 1.0) > tol)
            throw std::invalid_argument("isometry: |det| must be 1");
    }

    Isometry inverse() const {
        double dd = det();
        return {{m[3] / dd, -m[1] / dd, -m[2] / dd, m[0] / dd}};
    }

    friend Isometry operator*(const Isometry& x, const Isometry& y) {
        return {{x.m[0] * y.m[0] + x.m[1] * y.m[2], x.m[0] * y.m[1] + x.m[1] * y.m[3],
                 x.m[2] * y.m[0] + x.m[3] * y.m[2], x.m[2] * y.m[1] + x.m[3] * y.m[3]}};
    }

    // Action on horocycles: center via the (anti-)Moebius boundary action,
    // diameter scaled by 1/(c u + d)^2.
    Horocycle apply(const Horocycle& h) const {
        double denom = c() * h.center + d();
        if (denom == 0.0) throw std::domain_error("isometry: horocycle maps to infinity");
        return {(a() * h.center + b()) / denom, h.diameter / (denom * denom)};
    }
};

inline double lambda_arc(const Horocycle& u, const Horocycle& v) {
    if (u.diameter <= 0 || v.diameter <= 0) throw std::invalid_argument("horocycle diameter <= 0");
    if (u.center == v.center) throw std::invalid_argument("lambda_arc: coincident centers");
    return std::abs(v.center - u.center) / std::sqrt(u.diameter * v.diameter);
}

inline double lambda_closed(const Isometry& g, double min_trace = 1e-6) {
    double t = std::abs(g.trace());
    if (t < min_trace) throw std::domain_error("lambda_closed: (near-)zero trace");
    return t;
}

struct IdentityReport {
    std::string name;
    std::size_t samples = 0;
    std::size_t failures = 0;
    std::size_t excluded = 0;  // samples rejected by the sampler constraints
    double max_rel_error = 0.0;
    std::uint64_t rng_seed = 0;

    bool ok() const { return failures == 0 && samples > 0; }

    std::string to_string() const {
        std::ostringstream out;
        out << name << ": samples=" << samples << " max_rel_error=" << max_rel_error
            << " failures=" << failures << " excluded=" << excluded << " rng_seed=" << rng_seed;
        return out.str();
    }
};

namespace detail {

inline void record(IdentityReport& rep, double lhs, double rhs, double tol) {
    double denom = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
    double rel = std::abs(lhs - rhs) / denom;
    rep.max_rel_error = std::max(rep.max_rel_error, rel);
    if (!(rel <= tol)) ++rep.failures;
    ++rep.samples;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// Random matrix with |det| = 1 and the requested determinant sign, bounded
// entries, trace away from zero.
inline Isometry random_unimodular(std::mt19937_64& rng, int det_sign) {
    for (;;) {
        Isometry g{{uniform(rng, -3, 3), uniform(rng, -3, 3), uniform(rng, -3, 3),
                    uniform(rng, -3, 3)}};
        double dd = g.det();
        if (std::abs(dd) < 1e-3) continue;
        if ((dd > 0) != (det_sign > 0)) std::swap(g.m[0], g.m[2]), std::swap(g.m[1], g.m[3]);
        double s = 1.0 / std::sqrt(std::abs(g.det()));
        for (auto& x : g.m) x *= s;
        if (std::abs(g.trace()) < 1e-3) continue;
        return g;
    }
}

}  // namespace detail

// Ptolemy relation for four horocycles on the boundary line: the diagonals'
// product equals the sum of the opposite side products.
inline IdentityReport verify_ptolemy(std::uint64_t rng_seed, std::size_t samples = 1000,
                                     double tol = 1e-9) {
    IdentityReport rep{"ptolemy"};
    rep.rng_seed = rng_seed;
    std::mt19937_64 rng(rng_seed);
    for (std::size_t i = 0; i < samples; ++i) {
        std::array<double, 4> u;
        for (;;) {
            for (auto& x : u) x = detail::uniform(rng, -10, 10);
            std::sort(u.begin(), u.end());
            double minsep = std::min({u[1] - u[0], u[2] - u[1], u[3] - u[2]});
            if (minsep > 1e-3) break;
            ++rep.excluded;
        }
        std::array<Horocycle, 4> H;
        for (int k = 0; k < 4; ++k) H[k] = {u[k], detail::uniform(rng, 0.1, 4.0)};
        double lhs = lambda_arc(H[0], H[2]) * lambda_arc(H[1], H[3]);
        double rhs = lambda_arc(H[0], H[1]) * lambda_arc(H[2], H[3]) +
                     lambda_arc(H[1], H[2]) * lambda_arc(H[3], H[0]);
        detail::record(rep, lhs, rhs, tol);
    }
    return rep;
}

// tr(A)tr(B) = tr(AB) + det(B) tr(AB^{-1}) over all four determinant sign
// combinations.
inline IdentityReport verify_trace_skein(std::uint64_t rng_seed, std::size_t samples = 1000,
                                         double tol = 1e-9) {
    IdentityReport rep{"trace_skein"};
    rep.rng_seed = rng_seed;
    std::mt19937_64 rng(rng_seed);
    const int signs[4][2] = {{+1, +1}, {+1, -1}, {-1, +1}, {-1, -1}};
    for (std::size_t i = 0; i < samples; ++i) {
        auto [sa, sb] = signs[i % 4];
        Isometry A = detail::random_unimodular(rng, sa);
        Isometry B = detail::random_unimodular(rng, sb);
        double lhs = A.trace() * B.trace();
        double rhs = (A * B).trace() + B.det() * (A * B.inverse()).trace();
        detail::record(rep, lhs, rhs, tol);
    }
    return rep;
}

// The unique horocycle triple fixed by an orientation-reversing isometry:
// |tr D| = mu - 1/mu = c/a, with lambda(U,V) = c and lambda(U,W) =
// lambda(W,V) = c/d.
inline IdentityReport verify_antiself(double c, double d, double tol = 1e-9) {
    if (c <= 0 || d <= 0) throw std::invalid_argument("verify_antiself: c, d must be positive");
    IdentityReport rep{"anti_self_folded"};
    double mu = (d + std::sqrt(d * d + 4.0)) / 2.0;  // positive root of mu - 1/mu = d
    double u = -1.0;
    double h = (std::pow(mu, 4) - 1.0) / (c * mu * mu);
    Horocycle U{u, h};
    Isometry D{{mu, 0, 0, -1.0 / mu}};
    Horocycle W = D.apply(U);
    Horocycle V = D.apply(W);
    detail::record(rep, std::abs(D.trace()), mu - 1.0 / mu, tol);
    detail::record(rep, std::abs(D.trace()), d, tol);
    detail::record(rep, lambda_arc(U, V), c, tol);
    detail::record(rep, lambda_arc(U, W), c / d, tol);
    detail::record(rep, lambda_arc(W, V), c / d, tol);
    detail::record(rep, W.center, -mu * mu * u, tol);
    detail::record(rep, V.center, std::pow(mu, 4) * u, tol);
    detail::record(rep, V.diameter, std::pow(mu, 4) * h, tol);
    return rep;
}

// lambda(d^2) = lambda(d)^2 + 2 for glide reflections D = diag(mu, -1/mu).
inline IdentityReport verify_d_squared(std::uint64_t rng_seed, std::size_t samples = 1000,
                                       double tol = 1e-9) {
    IdentityReport rep{"d_squared"};
    rep.rng_seed = rng_seed;
    std::mt19937_64 rng(rng_seed);
    for (std::size_t i = 0; i < samples; ++i) {
        double mu = std::exp(detail::uniform(rng, 1e-3, std::log(100.0)));
        Isometry D{{mu, 0, 0, -1.0 / mu}};
        double ld = lambda_closed(D);
        double ld2 = lambda_closed(D * D);
        detail::record(rep, ld2, ld * ld + 2.0, tol);
    }
    return rep;
}

// Resolution of one arc crossing one closed curve: lambda(a)lambda(b) =
// lambda(e) + lambda(f), for a two-sided (det +1) or one-sided (det -1)
// curve. Horocycle centers follow the sign constraints of the half-plane
// picture; the one-sided branch additionally needs both resolved lengths
// positive.
inline IdentityReport verify_arc_curve_resolution(std::uint64_t rng_seed,
                                                  std::size_t samples = 1000, double tol = 1e-9) {
    IdentityReport rep{"arc_curve_resolution"};
    rep.rng_seed = rng_seed;
    std::mt19937_64 rng(rng_seed);
    for (std::size_t i = 0; i < samples; ++i) {
        bool one_sided = i % 2 == 1;
        double eta = std::exp(detail::uniform(rng, 0.05, 1.5));
        double u, v;
        if (!one_sided) {
            u = detail::uniform(rng, -10, -0.1);
            v = detail::uniform(rng, 0.1, 10);
        } else {
            for (;;) {
                u = detail::uniform(rng, -10, -0.1);
                v = detail::uniform(rng, 0.1, 10);
                if (v > -u / (eta * eta) && v < -u * eta * eta) break;
                ++rep.excluded;
            }
        }
        double h = detail::uniform(rng, 0.1, 4.0), k = detail::uniform(rng, 0.1, 4.0);
        Horocycle U{u, h}, V{v, k};
        Isometry B{{eta, 0, 0, one_sided ? -1.0 / eta : 1.0 / eta}};
        double la = lambda_arc(U, V);
        double lb = lambda_closed(B);
        double le = lambda_arc(U, B.apply(V));
        double lf = lambda_arc(B.apply(U), V);
        detail::record(rep, la * lb, le + lf, tol);
    }
    return rep;
}

// Resolution of a self-crossing arc: lambda(a) = lambda(b)lambda(c) +
// lambda(d), with the loop holonomy two-sided or one-sided.
inline IdentityReport verify_self_intersection_resolution(std::uint64_t rng_seed,
                                                          std::size_t samples = 1000,
                                                          double tol = 1e-9) {
    IdentityReport rep{"self_intersection_resolution"};
    rep.rng_seed = rng_seed;
    std::mt19937_64 rng(rng_seed);
    for (std::size_t i = 0; i < samples; ++i) {
        bool one_sided = i % 2 == 1;
        double eta = std::exp(detail::uniform(rng, 0.05, 1.5));
        double u, v;
        for (;;) {
            u = detail::uniform(rng, 0.1, 10);
            v = detail::uniform(rng, 0.1, 10);
            if (v <= u) std::swap(u, v);
            if (v > u + 1e-3 && (one_sided || v < eta * eta * u)) break;
            ++rep.excluded;
        }
        double h = detail::uniform(rng, 0.1, 4.0), k = detail::uniform(rng, 0.1, 4.0);
        Horocycle U{u, h}, V{v, k};
        Isometry B{{eta, 0, 0, one_sided ? -1.0 / eta : 1.0 / eta}};
        // a = (U, B(V)); c = (U, V); d = (V, B(U)); b = the loop itself
        double la = lambda_arc(U, B.apply(V));
        double lb = lambda_closed(B);
        double lc = lambda_arc(U, V);
        double ld = lambda_arc(V, B.apply(U));
        detail::record(rep, la, lb * lc + ld, tol);
    }
    return rep;
}

// Invariance of lambda-lengths under the isometry action (well-definedness
// oracle for the length of decorated geodesics).
inline IdentityReport verify_invariance(std::uint64_t rng_seed, std::size_t samples = 1000,
                                        double tol = 1e-9) {
    IdentityReport rep{"lambda_invariance"};
    rep.rng_seed = rng_seed;
    std::mt19937_64 rng(rng_seed);
    std::size_t done = 0;
    while (done < samples) {
        int sign = done % 2 ? -1 : +1;
        Isometry g = detail::random_unimodular(rng, sign);
        double u = detail::uniform(rng, -10, 10);
        double v = detail::uniform(rng, -10, 10);
        if (std::abs(u - v) < 1e-3 || std::abs(g.c() * u + g.d()) < 1e-2 ||
            std::abs(g.c() * v + g.d()) < 1e-2) {
            ++rep.excluded;
            continue;
        }
        Horocycle U{u, detail::uniform(rng, 0.1, 4.0)}, V{v, detail::uniform(rng, 0.1, 4.0)};
        detail::record(rep, lambda_arc(g.apply(U), g.apply(V)), lambda_arc(U, V), tol);
        // conjugation invariance of |trace|
        Isometry A = detail::random_unimodular(rng, +1);
        detail::record(rep, std::abs((g * A * g.inverse()).trace()), std::abs(A.trace()), tol);
        ++done;
    }
    return rep;
}

inline std::vector<IdentityReport> verify_all(std::uint64_t rng_seed, std::size_t samples = 1000,
                                              double tol = 1e-9) {
    std::vector<IdentityReport> out;
    out.push_back(verify_ptolemy(rng_seed, samples, tol));
    out.push_back(verify_trace_skein(rng_seed + 1, samples, tol));
    {
        // sweep anti-self-folded triples over a random parameter grid
        IdentityReport rep{"anti_self_folded"};
        rep.rng_seed = rng_seed + 2;
        std::mt19937_64 rng(rng_seed + 2);
        for (std::size_t i = 0; i < samples; ++i) {
            auto sub = verify_antiself(detail::uniform(rng, 0.05, 20.0),
                                       detail::uniform(rng, 0.05, 20.0), tol);
            rep.samples += sub.samples;
            rep.failures += sub.failures;
            rep.max_rel_error = std::max(rep.max_rel_error, sub.max_rel_error);
        }
        out.push_back(rep);
    }
    out.push_back(verify_d_squared(rng_seed + 3, samples, tol));
    out.push_back(verify_arc_curve_resolution(rng_seed + 4, samples, tol));
    out.push_back(verify_self_intersection_resolution(rng_seed + 5, samples, tol));
    out.push_back(verify_invariance(rng_seed + 6, samples, tol));
    return out;
}

}  // namespace qcluster::hyp

#endif  // QCLUSTER_HYPERBOLIC_HPP
