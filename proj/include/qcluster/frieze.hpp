#ifndef QCLUSTER_FRIEZE_HPP
#define QCLUSTER_FRIEZE_HPP

#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "qcluster/laurent.hpp"

// Discrete integrable systems on the AR-grid of a boundary-to-boundary
// homotopy class: the two-term recurrence
//
//   L(i,j) L(i+1,j+eps) = L(i+1,j) L(i,j+eps) + bd(i) bd'(j)
//
// with boundary arrays indexed mod p and mod q, its SL2-tiling specialization
// in the coefficient-free case, and the closed type-A formula through zig-zag
// seeds of a polygon.
//
// Grids are generic over the value ring: exact Laurent polynomials (symbolic
// mode, division via exact_div) or doubles (numeric mode).

namespace qcluster::frieze {

template <class V>
struct ValueOps;

template <>
struct ValueOps<double> {
    static double mul(const double& a, const double& b) { return a * b; }
    static double add(const double& a, const double& b) { return a + b; }
    static double div(const double& a, const double& b) {
        if (b == 0.0) throw std::domain_error("frieze: division by zero value");
        return a / b;
    }
    static bool is_zero(const double& a) { return a == 0.0; }
    static bool equal(const double& a, const double& b, double tol) {
        double m = std::max({std::abs(a), std::abs(b), 1e-300});
        return std::abs(a - b) / m <= tol;
    }
};

template <>
struct ValueOps<LaurentPoly> {
    static LaurentPoly mul(const LaurentPoly& a, const LaurentPoly& b) { return a * b; }
    static LaurentPoly add(const LaurentPoly& a, const LaurentPoly& b) { return a + b; }
    static LaurentPoly div(const LaurentPoly& a, const LaurentPoly& b) {
        return LaurentPoly::exact_div(a, b);
    }
    static bool is_zero(const LaurentPoly& a) { return a.is_zero(); }
    static bool equal(const LaurentPoly& a, const LaurentPoly& b, double) { return a == b; }
};

template <class V>
struct FriezeSpec {
    unsigned p = 1, q = 1;
    int epsilon = +1;                // +1 compatible orientations, -1 otherwise
    std::vector<V> boundary_d;       // length p, lambda of segment {i, i+1} at index i mod p
    std::vector<V> boundary_dp;      // length q
    bool self_class = false;         // boundary conditions L(i,i)=1, L(i,i+1)=bd(i)
    V one;

    const V& bd(long long i) const { return boundary_d[mod(i, p)]; }
    const V& bdp(long long j) const { return boundary_dp[mod(j, q)]; }

    // lambda of the d' segment crossed between columns j and j+eps
    const V& bdp_step(long long j) const { return epsilon > 0 ? bdp(j) : bdp(j - 1); }

    static std::size_t mod(long long x, unsigned m) {
        long long r = x % static_cast<long long>(m);
        if (r < 0) r += m;
        return static_cast<std::size_t>(r);
    }
};

using Cell = std::pair<long long, long long>;

template <class V>
struct TilingGrid {
    FriezeSpec<V> spec;
    std::map<Cell, V> cells;

    bool has(long long i, long long j) const { return cells.count({i, j}) > 0; }
    const V& at(long long i, long long j) const {
        auto it = cells.find({i, j});
        if (it == cells.end()) throw std::out_of_range("grid: cell not filled");
        return it->second;
    }
};

// The staircase is the canonical initial slice: hi[l] = L(-l, l*eps) and
// lo[l] = L(-l-1, l*eps) for l = 0..depth-1.
template <class V>
struct Staircase {
    std::vector<V> hi, lo;
};

struct WindowRect {
    long long i_min = 0, i_max = 0, j_min = 0, j_max = 0;

    bool contains(long long i, long long j) const {
        return i >= i_min && i <= i_max && j >= j_min && j <= j_max;
    }
};

// Fill the window from the staircase (and/or the self-class boundary
// conditions) by the recurrence, working both forward and backward along the
// tau-diagonal. Fails if the window is not reachable or a seeded cell
// conflicts with a computed one.
template <class V>
TilingGrid<V> extend(const FriezeSpec<V>& spec, const Staircase<V>& stair, WindowRect window) {
    TilingGrid<V> g{spec, {}};
    auto seed_cell = [&](long long i, long long j, const V& v) {
        auto it = g.cells.find({i, j});
        if (it != g.cells.end() && !ValueOps<V>::equal(it->second, v, 1e-9))
            throw std::invalid_argument("frieze: conflicting seed values at a cell");
        g.cells.emplace(Cell{i, j}, v);
    };
    for (std::size_t l = 0; l < stair.hi.size(); ++l) {
        if (ValueOps<V>::is_zero(stair.hi[l]) ||
            (l < stair.lo.size() && ValueOps<V>::is_zero(stair.lo[l])))
            throw std::invalid_argument("frieze: staircase values must be nonzero");
        long long ll = static_cast<long long>(l);
        seed_cell(-ll, ll * spec.epsilon, stair.hi[l]);
        if (l < stair.lo.size()) seed_cell(-ll - 1, ll * spec.epsilon, stair.lo[l]);
    }
    if (spec.self_class) {
        if (spec.p != spec.q)
            throw std::invalid_argument("frieze: self-class regime needs p == q");
        long long lo = std::min(window.i_min, window.j_min) - 2 * (long long)spec.p - 4;
        long long hi = std::max(window.i_max, window.j_max) + 2 * (long long)spec.p + 4;
        for (long long i = lo; i <= hi; ++i) {
            seed_cell(i, i, spec.one);
            seed_cell(i, i + 1, spec.bd(i));
        }
    }

    // The dependency cone of the window only touches cells within its
    // diagonal width, so clamp the fill region.
    long long margin = (window.i_max - window.i_min) + (window.j_max - window.j_min) + 4;
    WindowRect region{window.i_min - margin, window.i_max + margin, window.j_min - margin,
                      window.j_max + margin};

    const int eps = spec.epsilon;
    bool progress = true;
    while (progress) {
        progress = false;
        std::vector<std::pair<Cell, V>> fresh;
        for (const auto& [cell, value] : g.cells) {
            auto [i, j] = cell;
            // forward: solve for (i+1, j+eps)
            if (g.has(i + 1, j) && g.has(i, j + eps) && !g.has(i + 1, j + eps) &&
                region.contains(i + 1, j + eps) && !ValueOps<V>::is_zero(value)) {
                V num = ValueOps<V>::add(
                    ValueOps<V>::mul(g.at(i + 1, j), g.at(i, j + eps)),
                    ValueOps<V>::mul(spec.bd(i), spec.bdp_step(j)));
                fresh.push_back({{i + 1, j + eps}, ValueOps<V>::div(num, value)});
            }
            // backward: solve for (i-1, j-eps)
            if (g.has(i - 1, j) && g.has(i, j - eps) && !g.has(i - 1, j - eps) &&
                region.contains(i - 1, j - eps) && !ValueOps<V>::is_zero(value)) {
                V num = ValueOps<V>::add(
                    ValueOps<V>::mul(g.at(i, j - eps), g.at(i - 1, j)),
                    ValueOps<V>::mul(spec.bd(i - 1), spec.bdp_step(j - eps)));
                fresh.push_back({{i - 1, j - eps}, ValueOps<V>::div(num, value)});
            }
        }
        for (auto& [cell, v] : fresh) {
            if (!g.cells.count(cell)) {
                g.cells.emplace(cell, std::move(v));
                progress = true;
            }
        }
    }
    for (long long i = window.i_min; i <= window.i_max; ++i)
        for (long long j = window.j_min; j <= window.j_max; ++j)
            if (!g.has(i, j))
                throw std::invalid_argument("frieze: window not reachable from the staircase");
    return g;
}

struct CheckReport {
    std::size_t checked = 0;
    std::vector<Cell> violations;
    double max_rel_error = 0.0;
    bool ok() const { return checked > 0 && violations.empty(); }
};

// Every filled 2x2 square satisfies the defining relation (general
// coefficients version).
template <class V>
CheckReport verify_mesh(const TilingGrid<V>& g, double tol = 1e-9) {
    CheckReport rep;
    const int eps = g.spec.epsilon;
    for (const auto& [cell, value] : g.cells) {
        auto [i, j] = cell;
        if (!(g.has(i + 1, j) && g.has(i, j + eps) && g.has(i + 1, j + eps))) continue;
        V lhs = ValueOps<V>::mul(value, g.at(i + 1, j + eps));
        V rhs = ValueOps<V>::add(ValueOps<V>::mul(g.at(i + 1, j), g.at(i, j + eps)),
                                 ValueOps<V>::mul(g.spec.bd(i), g.spec.bdp_step(j)));
        ++rep.checked;
        if (!ValueOps<V>::equal(lhs, rhs, tol)) rep.violations.push_back(cell);
    }
    return rep;
}

// Coefficient-free determinant check: every unit square has determinant one
// (the SL2-tiling property).
template <class V>
CheckReport check_sl2(const TilingGrid<V>& g, double tol = 1e-9) {
    CheckReport rep;
    const int eps = g.spec.epsilon;
    for (const auto& [cell, value] : g.cells) {
        auto [i, j] = cell;
        if (!(g.has(i + 1, j) && g.has(i, j + eps) && g.has(i + 1, j + eps))) continue;
        // L(i,j) L(i+1,j+eps) - L(i+1,j) L(i,j+eps) == 1
        V lhs = ValueOps<V>::mul(value, g.at(i + 1, j + eps));
        V rhs = ValueOps<V>::mul(g.at(i + 1, j), g.at(i, j + eps));
        ++rep.checked;
        if (!ValueOps<V>::equal(lhs, ValueOps<V>::add(rhs, g.spec.one), tol))
            rep.violations.push_back(cell);
    }
    return rep;
}

// ---- type A polygon model -------------------------------------------------------
//
// Chords of a disc with m labeled marked points, with Ptolemy mutation. This
// is an independent implementation of the type-A exchange combinatorics (no
// gluing machinery), used for the closed formula and as a disc oracle.

struct PolygonSeed {
    int m = 0;
    RegistryPtr registry;
    std::map<std::pair<int, int>, LaurentPoly> vars;  // chord -> expansion
    std::set<std::pair<int, int>> chords;

    static int mod(int x, int m) {
        int r = x % m;
        return r < 0 ? r + m : r;
    }

    static std::pair<int, int> norm(int a, int b, int m) {
        a = mod(a, m);
        b = mod(b, m);
        if (a > b) std::swap(a, b);
        return {a, b};
    }

    static std::string var_name(std::pair<int, int> c) {
        return "x" + std::to_string(c.first) + "_" + std::to_string(c.second);
    }

    bool is_boundary_pair(std::pair<int, int> c) const {
        return mod(c.second - c.first, m) == 1 || mod(c.first - c.second, m) == 1;
    }

    LaurentPoly value_of(int a, int b) const {
        auto c = norm(a, b, m);
        if (c.first == c.second) return LaurentPoly::constant(registry, 1);
        if (is_boundary_pair(c)) return LaurentPoly::generator(registry, var_name(c));
        auto it = vars.find(c);
        if (it == vars.end()) throw std::invalid_argument("polygon: chord not in the seed");
        return it->second;
    }

    // The two triangles adjacent to a chord: the nearest visible vertex on
    // each side within the current triangulation.
    std::pair<int, int> flip_targets(std::pair<int, int> c) const {
        auto edge = [&](int a, int b) {
            auto n = norm(a, b, m);
            return n.first == n.second ? false : (is_boundary_pair(n) || chords.count(n) > 0);
        };
        auto apex = [&](int from, int to) {
            for (int v = mod(from + 1, m); v != mod(to, m); v = mod(v + 1, m))
                if (edge(c.first, v) && edge(c.second, v)) {
                    // the triangle (c.first, v, c.second) must be empty: v is
                    // the unique such vertex closest with both edges present
                    return v;
                }
            throw std::logic_error("polygon: no apex found");
        };
        int p = apex(c.first, c.second);   // inside (first, second)
        int q = apex(c.second, c.first);   // outside
        return {p, q};
    }

    void mutate(int a, int b) {
        auto c = norm(a, b, m);
        if (!chords.count(c)) throw std::invalid_argument("polygon: flip of a missing chord");
        auto [p, q] = flip_targets(c);
        LaurentPoly rhs = value_of(c.first, p) * value_of(c.second, q) +
                          value_of(p, c.second) * value_of(q, c.first);
        LaurentPoly nv = LaurentPoly::exact_div(rhs, vars.at(c));
        chords.erase(c);
        vars.erase(c);
        auto nc = norm(p, q, m);
        chords.insert(nc);
        vars.emplace(nc, std::move(nv));
    }
};

// Zig-zag triangulation of the m-gon: the snake 0, 2, -1, 3, -2, 4, ...
// The final snake edge degenerates to a boundary pair and is skipped.
inline std::vector<std::pair<int, int>> zigzag_chords(int m) {
    std::vector<int> walk{0, 2};
    int lo = 0, hi = 2;
    while (static_cast<int>(walk.size()) < m - 1) {
        if (walk.size() % 2 == 0) walk.push_back(--lo);
        else walk.push_back(++hi);
    }
    std::vector<std::pair<int, int>> out;
    for (std::size_t i = 0; i + 1 < walk.size(); ++i) {
        auto c = PolygonSeed::norm(walk[i], walk[i + 1], m);
        int gap = PolygonSeed::mod(c.second - c.first, m);
        if (gap == 1 || gap == m - 1) continue;
        out.push_back(c);
    }
    return out;
}

inline PolygonSeed zigzag_seed(int m) {
    if (m < 4) throw std::invalid_argument("polygon: need m >= 4");
    PolygonSeed s;
    s.m = m;
    std::vector<std::string> names;
    for (int i = 0; i < m; ++i)
        names.push_back(PolygonSeed::var_name(PolygonSeed::norm(i, i + 1, m)));
    for (auto& c : zigzag_chords(m)) names.push_back(PolygonSeed::var_name(c));
    s.registry = make_registry(std::move(names));
    for (auto& c : zigzag_chords(m)) {
        s.chords.insert(c);
        s.vars.emplace(c, LaurentPoly::generator(s.registry, PolygonSeed::var_name(c)));
    }
    return s;
}

// The unique subtraction-free Laurent expansion of x_{0,k} in the zig-zag
// seed, computed by flipping the crossing chords. `order` selects the
// mutation route (0 = near to far, 1 = far to near); the result is
// route-independent.
inline LaurentPoly closed_formula_Xk(int k, int m = 0, int order = 0) {
    if (k < 2) throw std::invalid_argument("closed_formula_Xk: k >= 2 required");
    if (m == 0) m = 2 * k + 1;
    if (m < 2 * k + 1)
        throw std::invalid_argument("closed_formula_Xk: need m >= 2k+1 for the zig-zag window");
    PolygonSeed s = zigzag_seed(m);
    if (k == 2) return s.value_of(0, 2);
    // chords crossing {0,k}: B_l = {-l-1, l+2} for l = 0..k-3 and
    // A_l = {-l, l+2} for l = 1..k-3
    std::vector<std::pair<int, int>> seq;
    for (int l = 0; l <= k - 3; ++l) {
        if (l >= 1) seq.push_back(PolygonSeed::norm(-l, l + 2, m));
        seq.push_back(PolygonSeed::norm(-l - 1, l + 2, m));
    }
    if (order == 1) std::reverse(seq.begin(), seq.end());
    for (auto& c : seq) s.mutate(c.first, c.second);
    return s.value_of(0, k);
}

// Substitution map of the closed formula: zig-zag generators to grid data at
// base point (i, j) = (0, 0).
template <class V>
V eval_Xk(const LaurentPoly& Xk, int k, const FriezeSpec<V>& spec, const TilingGrid<V>& g);

inline double eval_Xk(const LaurentPoly& Xk, int k, const FriezeSpec<double>& spec,
                      const TilingGrid<double>& g) {
    int m = 2 * k + 1;
    std::map<std::string, double> assign;
    for (int l = 0; l <= k - 2; ++l) {
        assign[PolygonSeed::var_name(PolygonSeed::norm(-l, -l - 1, m))] = spec.bd(-l - 1);
        assign[PolygonSeed::var_name(PolygonSeed::norm(2 + l, 3 + l, m))] = spec.bdp_step(l * spec.epsilon);
        assign[PolygonSeed::var_name(PolygonSeed::norm(-l, l + 2, m))] = g.at(-l, l * spec.epsilon);
        assign[PolygonSeed::var_name(PolygonSeed::norm(-l - 1, l + 2, m))] =
            g.at(-l - 1, l * spec.epsilon);
    }
    return Xk.eval(assign);
}

inline LaurentPoly eval_Xk(const LaurentPoly& Xk, int k, const FriezeSpec<LaurentPoly>& spec,
                           const TilingGrid<LaurentPoly>& g) {
    int m = 2 * k + 1;
    RegistryPtr target = spec.one.registry();
    std::map<std::string, LaurentPoly> images;
    for (int l = 0; l <= k - 2; ++l) {
        images[PolygonSeed::var_name(PolygonSeed::norm(-l, -l - 1, m))] = spec.bd(-l - 1);
        images[PolygonSeed::var_name(PolygonSeed::norm(2 + l, 3 + l, m))] =
            spec.bdp_step(l * spec.epsilon);
        images[PolygonSeed::var_name(PolygonSeed::norm(-l, l + 2, m))] = g.at(-l, l * spec.epsilon);
        images[PolygonSeed::var_name(PolygonSeed::norm(-l - 1, l + 2, m))] =
            g.at(-l - 1, l * spec.epsilon);
    }
    return Xk.substitute(target, images);
}

struct ClosedFormulaReport {
    int k_max = 0;
    std::vector<int> mismatches;
    bool ok() const { return mismatches.empty(); }
};

// Compare the recurrence against X_k evaluated on the boundary and staircase
// data, for k = 2..k_max. Anchoring the staircase at x_{0,2} -> L(0,0) puts
// the polygon variable x_{0,k} at L(0, (k-2)*eps): the chord ladder climbs
// one mesh step per added marked point past 2.
template <class V>
ClosedFormulaReport verify_closed_formula(const FriezeSpec<V>& spec, const Staircase<V>& stair,
                                          int k_max, double tol = 1e-9) {
    ClosedFormulaReport rep;
    rep.k_max = k_max;
    if (stair.hi.size() < static_cast<std::size_t>(k_max) ||
        stair.lo.size() < static_cast<std::size_t>(k_max))
        throw std::invalid_argument("verify_closed_formula: staircase too short for k_max");
    WindowRect w{0, 0, std::min<long long>(0, (k_max - 2) * spec.epsilon),
                 std::max<long long>(0, (k_max - 2) * spec.epsilon)};
    TilingGrid<V> g = extend(spec, stair, w);
    for (int k = 2; k <= k_max; ++k) {
        LaurentPoly Xk = closed_formula_Xk(k);
        V want = g.at(0, (k - 2) * spec.epsilon);
        V got = eval_Xk(Xk, k, spec, g);
        if (!ValueOps<V>::equal(got, want, tol)) rep.mismatches.push_back(k);
    }
    return rep;
}

// ---- AR-quiver ------------------------------------------------------------------

struct ArQuiver {
    int epsilon = +1;
    unsigned p = 1, q = 1;
    WindowRect window;

    std::pair<long long, long long> sigma0(long long i, long long j) const { return {i + 1, j}; }
    std::pair<long long, long long> sigma1(long long i, long long j) const {
        return {i, j + epsilon};
    }
    std::pair<long long, long long> tau_inv(long long i, long long j) const {
        return {i + 1, j + epsilon};
    }
    std::pair<long long, long long> tau(long long i, long long j) const {
        return {i - 1, j - epsilon};
    }
    std::pair<unsigned, unsigned> label(long long i, long long j) const {
        return {static_cast<unsigned>(FriezeSpec<double>::mod(i, p)),
                static_cast<unsigned>(FriezeSpec<double>::mod(j, q))};
    }

    std::string to_dot() const {
        std::ostringstream out;
        out << "digraph ar_quiver {\n";
        auto id = [](long long i, long long j) {
            std::ostringstream s;
            s << "v" << (i < 0 ? "m" : "") << std::abs(i) << "_" << (j < 0 ? "m" : "")
              << std::abs(j);
            return s.str();
        };
        for (long long i = window.i_min; i <= window.i_max; ++i)
            for (long long j = window.j_min; j <= window.j_max; ++j) {
                auto [li, lj] = label(i, j);
                out << "  " << id(i, j) << " [label=\"(" << li << "," << lj << ")\"];\n";
                auto [si, sj] = sigma0(i, j);
                if (window.contains(si, sj)) out << "  " << id(i, j) << " -> " << id(si, sj) << ";\n";
                auto [ti, tj] = sigma1(i, j);
                if (window.contains(ti, tj)) out << "  " << id(i, j) << " -> " << id(ti, tj) << ";\n";
            }
        out << "}\n";
        return out.str();
    }
};

}  // namespace qcluster::frieze

#endif  // QCLUSTER_FRIEZE_HPP
