#ifndef QCLUSTER_COVER_HPP
#define QCLUSTER_COVER_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "qcluster/seed.hpp"

// The orientation double cover of a gluing structure: every face is
// duplicated, the second copy reflected, and reversing pairings cross-connect
// the two sheets. All pairings of the cover are orientation-preserving, so
// the stored cyclic orders form a consistent orientation; the deck
// transformation swaps the sheets.

namespace qcluster {

struct DoubleCover {
    QuasiTriangulation base;
    QuasiTriangulation total;
    std::optional<SurfaceSignature> base_sig, total_sig;
    std::map<int, int> tau;                   // involution on total element ids
    std::map<int, std::pair<int, int>> lift;  // base id -> its two lifts
    std::map<int, int> proj;                  // total id -> base id
};

// Combinatorial cover of any base without one-sided curves. For an orientable
// base this is the disjoint union of the two sheets.
inline DoubleCover orientation_cover(const QuasiTriangulation& base) {
    for (const auto& [fid, f] : base.faces())
        if (f.kind == FaceKind::Crosscap)
            throw std::invalid_argument(
                "orientation_cover: a quasi-triangulation with a one-sided curve does not lift");

    DoubleCover C;
    C.base = base;
    auto sigma = [](int s) { return s == 0 ? 0 : 3 - s; };

    // slot (face, slot, sheet) -> cover element id
    std::map<std::tuple<int, int, int>, int> assign;
    for (const auto& [id, e] : base.elements()) {
        int a = C.total.add_element(e.kind, e.name + "_0");
        int b = C.total.add_element(e.kind, e.name + "_1");
        C.tau[a] = b;
        C.tau[b] = a;
        C.lift[id] = {a, b};
        C.proj[a] = id;
        C.proj[b] = id;
        if (e.kind == ElemKind::Boundary) {
            auto sl = base.slots_of(id);
            assign[{sl[0].face, sl[0].slot, 0}] = a;
            assign[{sl[0].face, sl[0].slot, 1}] = b;
        } else {
            const Pairing& pr = base.pairings().at(id);
            assign[{pr.first.face, pr.first.slot, 0}] = a;
            assign[{pr.second.face, pr.second.slot, pr.reversing ? 1 : 0}] = a;
            assign[{pr.first.face, pr.first.slot, 1}] = b;
            assign[{pr.second.face, pr.second.slot, pr.reversing ? 0 : 1}] = b;
        }
    }

    std::map<std::pair<int, int>, int> face_copy;  // (base face, sheet) -> cover face
    for (const auto& [fid, f] : base.faces()) {
        int f0 = C.total.add_triangle(assign.at({fid, 0, 0}), assign.at({fid, 1, 0}),
                                      assign.at({fid, 2, 0}));
        // reflected copy: base slot s lands at cover slot sigma(s)
        int f1 = C.total.add_triangle(assign.at({fid, 0, 1}), assign.at({fid, 2, 1}),
                                      assign.at({fid, 1, 1}));
        face_copy[{fid, 0}] = f0;
        face_copy[{fid, 1}] = f1;
    }

    for (const auto& [id, e] : base.elements()) {
        if (e.kind != ElemKind::Arc) continue;
        const Pairing& pr = base.pairings().at(id);
        auto cover_slot = [&](SlotRef sr, int sheet) {
            return SlotRef{face_copy.at({sr.face, sheet}), sheet == 0 ? sr.slot : sigma(sr.slot)};
        };
        int ends2_a = pr.reversing ? 1 : 0;
        auto [a, b] = C.lift.at(id);
        C.total.pair_slots(a, cover_slot(pr.first, 0), cover_slot(pr.second, ends2_a), false);
        C.total.pair_slots(b, cover_slot(pr.first, 1), cover_slot(pr.second, 1 - ends2_a), false);
    }
    return C;
}

// The spec'd double cover: base must be non-orientable and contain no
// one-sided curve. Populates both signatures and checks rank doubling.
inline DoubleCover build_double_cover(const QuasiTriangulation& base) {
    SurfaceSignature bs = base.signature();
    if (bs.orientable)
        throw std::invalid_argument("build_double_cover: base surface is orientable");
    DoubleCover C = orientation_cover(base);
    C.base_sig = bs;
    C.total_sig = C.total.signature();
    if (!C.total_sig->orientable)
        throw std::logic_error("double cover is not orientable");
    if (C.total_sig->rank() != 2 * bs.rank())
        throw std::logic_error("double cover rank is not twice the base rank");
    for (const auto& [a, b] : C.tau)
        if (C.tau.at(b) != a || a == b) throw std::logic_error("deck involution is broken");
    return C;
}

// A copy of a cover triangulation with its boundary segments renamed to the
// base names. Canonical labels of such copies are invariant under the deck
// transformation, which is the right notion for comparing a mutated cover
// with the lift of a mutated base.
inline QuasiTriangulation deck_normalized(const QuasiTriangulation& total,
                                          const std::map<int, int>& proj,
                                          const QuasiTriangulation& base) {
    QuasiTriangulation out = total;
    for (int id : total.boundary_ids()) out.rename_element(id, base.name_of(proj.at(id)));
    return out;
}

// pi: substitute both lifts of each generator by the base generator.
inline LaurentPoly project_pi(const DoubleCover& C, const LaurentPoly& total_poly,
                              const RegistryPtr& base_registry) {
    const RegistryPtr& treg = total_poly.registry();
    std::vector<std::size_t> to_base(treg->size());
    for (std::size_t i = 0; i < treg->size(); ++i) {
        auto tid = C.total.find_by_name(treg->name(i));
        if (!tid) throw std::invalid_argument("project_pi: unknown total generator " + treg->name(i));
        to_base[i] = base_registry->index(C.base.name_of(C.proj.at(*tid)));
    }
    LaurentPoly out = LaurentPoly::zero(base_registry);
    for (const auto& [e, c] : total_poly.terms()) {
        ExpVec be(base_registry->size(), 0);
        for (std::size_t i = 0; i < e.size(); ++i) be[to_base[i]] += e[i];
        out += LaurentPoly::monomial(base_registry, std::move(be), c);
    }
    return out;
}

struct OrbitMutationReport {
    bool mutable_arc = false;
    bool commuted = false;
    bool matches_lift = false;
    bool pix_ok = false;
    std::string detail;

    bool ok() const { return mutable_arc && commuted && matches_lift && pix_ok; }

    // advanced state along the orbit, valid when commuted
    Seed base_next, total_next;
    std::map<int, std::pair<int, int>> lift_next;
    std::map<int, int> tau_next, proj_next;
};

// Mutates the base seed at t and the total seed at both lifts (in both
// orders), then checks commutation, agreement with the lift of the mutated
// base, and the projection identity on the new variables.
inline OrbitMutationReport orbit_mutate(const DoubleCover& C, const Seed& base_seed,
                                        const Seed& total_seed,
                                        const std::map<int, std::pair<int, int>>& lift,
                                        const std::map<int, int>& tau,
                                        const std::map<int, int>& proj, int t) {
    OrbitMutationReport r;
    FlipCase fc = base_seed.triangulation.classify_flip(t);
    r.mutable_arc = fc.kind == FlipKind::TwoTriangles;

    auto [ta, tb] = lift.at(t);
    Seed ab1 = mutate(total_seed, ta);
    int ta_new = -1, tb_new = -1;
    for (const auto& [id, p] : ab1.vars)
        if (!total_seed.vars.count(id)) ta_new = id;
    Seed ab = mutate(ab1, tb);
    for (const auto& [id, p] : ab.vars)
        if (!ab1.vars.count(id)) tb_new = id;
    Seed ba1 = mutate(total_seed, tb);
    Seed ba = mutate(ba1, ta);

    r.commuted = cluster_key(ab) == cluster_key(ba) &&
                 ab.triangulation.canonical_label() == ba.triangulation.canonical_label();
    if (!r.commuted) {
        r.detail = "lifted mutations do not commute";
        return r;
    }

    Seed base_next = mutate(base_seed, t);
    int t_new = -1;
    for (const auto& [id, p] : base_next.vars)
        if (!base_seed.vars.count(id)) t_new = id;

    // triangulation side: the double mutation equals the lift of the mutated
    // base, up to the deck transformation
    DoubleCover Cn = orientation_cover(base_next.triangulation);
    r.matches_lift =
        deck_normalized(Cn.total, Cn.proj, base_next.triangulation).canonical_label() ==
        deck_normalized(ab.triangulation, proj, base_seed.triangulation).canonical_label();

    // variable side: both new total variables project onto the new base variable
    LaurentPoly want = base_next.vars.at(t_new);
    LaurentPoly got_a = project_pi(C, ab.vars.at(ta_new), base_seed.registry);
    LaurentPoly got_b = project_pi(C, ab.vars.at(tb_new), base_seed.registry);
    r.pix_ok = got_a == want && got_b == want;
    if (!r.pix_ok) r.detail = "projection of lifted variables differs from base variable";

    r.base_next = std::move(base_next);
    r.total_next = std::move(ab);
    r.lift_next = lift;
    r.lift_next.erase(t);
    r.lift_next[t_new] = {ta_new, tb_new};
    r.tau_next = tau;
    r.tau_next.erase(ta);
    r.tau_next.erase(tb);
    r.tau_next[ta_new] = tb_new;
    r.tau_next[tb_new] = ta_new;
    r.proj_next = proj;
    r.proj_next.erase(ta);
    r.proj_next.erase(tb);
    r.proj_next[ta_new] = t_new;
    r.proj_next[tb_new] = t_new;
    return r;
}

inline OrbitMutationReport orbit_mutate(const DoubleCover& C, const Seed& base_seed,
                                        const Seed& total_seed, int t) {
    return orbit_mutate(C, base_seed, total_seed, C.lift, C.tau, C.proj, t);
}

// ---- exchange matrices ---------------------------------------------------------

// Signed adjacency entries of an oriented triangulation, rows indexed by arcs
// and columns by arcs and boundary segments. The stored cyclic orders are the
// orientation (true for covers built here).
class ExchangeMatrix {
public:
    explicit ExchangeMatrix(const QuasiTriangulation& T) {
        for (const auto& [fid, f] : T.faces()) {
            if (f.kind != FaceKind::Triangle)
                throw std::invalid_argument("exchange matrix needs a triangulation");
            for (int i = 0; i < 3; ++i) n_[{f.elem[i], f.elem[(i + 1) % 3]}]++;
        }
        for (int id : T.flippable_ids())
            if (T.element(id).kind == ElemKind::Arc) rows_.push_back(id);
        for (const auto& [id, e] : T.elements()) cols_.push_back(id);
    }

    int entry(int v, int w) const { return count(v, w) - count(w, v); }

    const std::vector<int>& rows() const { return rows_; }
    const std::vector<int>& cols() const { return cols_; }

    std::map<std::pair<int, int>, int> as_map() const {
        std::map<std::pair<int, int>, int> m;
        for (int v : rows_)
            for (int w : cols_) m[{v, w}] = entry(v, w);
        return m;
    }

private:
    int count(int a, int b) const {
        auto it = n_.find({a, b});
        return it == n_.end() ? 0 : it->second;
    }

    std::map<std::pair<int, int>, int> n_;
    std::vector<int> rows_;
    std::vector<int> cols_;
};

// Standard matrix mutation at row/column k (extended columns included).
inline std::map<std::pair<int, int>, int> mutate_matrix(
    const std::map<std::pair<int, int>, int>& B, const std::vector<int>& rows,
    const std::vector<int>& cols, int k) {
    std::map<std::pair<int, int>, int> out;
    auto at = [&](int i, int j) {
        auto it = B.find({i, j});
        return it == B.end() ? 0 : it->second;
    };
    auto sgn = [](int x) { return x > 0 ? 1 : (x < 0 ? -1 : 0); };
    for (int i : rows) {
        for (int j : cols) {
            if (i == k || j == k)
                out[{i, j}] = -at(i, j);
            else
                out[{i, j}] = at(i, j) + sgn(at(i, k)) * std::max(at(i, k) * at(k, j), 0);
        }
    }
    return out;
}

struct MatrixRuleReport {
    bool entries_in_range = false;   // all of B in {-2..2}
    bool b_pm_well_defined = false;  // both lift formulas agree
    bool relation_matches = false;   // displayed exchange relation == mutate()
    bool matrix_mutation_matches = false;
    bool orientation_independent = false;
    std::string detail;

    bool ok() const {
        return entries_in_range && b_pm_well_defined && relation_matches &&
               matrix_mutation_matches && orientation_independent;
    }
};

// Checks Prop.-style exchange data coming from the cover: the b^{+-}
// exponents from either lift agree, the product formula reproduces the
// seed mutation, matrix mutation is consistent, and the unordered pair of
// exponent vectors does not depend on the chosen orientation.
inline MatrixRuleReport exchange_matrix_rule(const DoubleCover& C, const Seed& base_seed, int t) {
    MatrixRuleReport r;
    if (base_seed.triangulation.classify_flip(t).kind != FlipKind::TwoTriangles)
        throw std::invalid_argument("exchange_matrix_rule: arc is not mutable");

    ExchangeMatrix EM(C.total);
    auto B = EM.as_map();
    r.entries_in_range = true;
    for (const auto& [vw, x] : B)
        if (x < -2 || x > 2) r.entries_in_range = false;

    auto [ta, tb] = C.lift.at(t);
    std::vector<int> base_elems;
    for (const auto& [id, e] : C.base.elements()) base_elems.push_back(id);

    auto bpm_from_row = [&](int trow) {
        auto at = [&](int i, int j) {
            auto it = B.find({i, j});
            return it == B.end() ? 0 : it->second;
        };
        std::pair<std::map<int, int>, std::map<int, int>> out;  // (b+, b-)
        for (int v : base_elems) {
            auto [va, vb] = C.lift.at(v);
            out.first[v] = std::max(at(trow, va), 0) + std::max(at(trow, vb), 0);
            out.second[v] = std::min(at(trow, va), 0) + std::min(at(trow, vb), 0);
        }
        return out;
    };

    // The two rows describe the same exchange binomial: row tau(t) lists the
    // same unordered pair of exponent vectors with the roles of b+ and -b-
    // swapped (tau reverses orientation).
    auto [bp, bm] = bpm_from_row(ta);
    auto [bp2, bm2] = bpm_from_row(tb);
    auto negate_vals = [](const std::map<int, int>& m) {
        std::map<int, int> out;
        for (auto [k, v] : m) out[k] = -v;
        return out;
    };
    auto pair_of = [&](const std::map<int, int>& plus, const std::map<int, int>& minus) {
        std::vector<std::map<int, int>> p{plus, negate_vals(minus)};
        std::sort(p.begin(), p.end());
        return p;
    };
    r.b_pm_well_defined = pair_of(bp, bm) == pair_of(bp2, bm2);

    // relation: x_t x_t' = prod x_v^{b+} + prod x_v^{-b-}
    LaurentPoly m1 = LaurentPoly::constant(base_seed.registry, 1);
    LaurentPoly m2 = m1;
    for (int v : base_elems) {
        LaurentPoly xv = base_seed.value_of(v);
        if (bp[v] > 0) m1 = m1 * xv.pow(static_cast<unsigned>(bp[v]));
        if (bm[v] < 0) m2 = m2 * xv.pow(static_cast<unsigned>(-bm[v]));
    }
    Seed base_next = mutate(base_seed, t);
    int t_new = -1;
    for (const auto& [id, p] : base_next.vars)
        if (!base_seed.vars.count(id)) t_new = id;
    r.relation_matches = base_seed.vars.at(t) * base_next.vars.at(t_new) == m1 + m2;
    if (!r.relation_matches)
        r.detail = "exchange relation differs: " + (m1 + m2).to_string();

    // matrix mutation: mu_{tb} mu_{ta} (B) against the matrix of the flipped cover
    auto B1 = mutate_matrix(B, EM.rows(), EM.cols(), ta);
    auto B2 = mutate_matrix(B1, EM.rows(), EM.cols(), tb);
    auto [tot1, fc1, ta_new] = C.total.flip(ta);
    auto [tot2, fc2, tb_new] = tot1.flip(tb);
    ExchangeMatrix EM2(tot2);
    auto Bflip = EM2.as_map();
    auto rename = [&](int id) { return id == ta_new ? ta : (id == tb_new ? tb : id); };
    bool same = true;
    for (const auto& [vw, x] : Bflip) {
        auto key = std::make_pair(rename(vw.first), rename(vw.second));
        auto it = B2.find(key);
        if ((it == B2.end() ? 0 : it->second) != x) same = false;
    }
    r.matrix_mutation_matches = same;

    // orientation independence: reflecting every face negates B and swaps the
    // two exponent vectors.
    QuasiTriangulation flipped = C.total;
    flipped.reflect_all_faces();
    ExchangeMatrix EMr(flipped);
    bool negated = true;
    for (const auto& [vw, x] : B)
        if (EMr.entry(vw.first, vw.second) != -x) negated = false;
    std::map<int, int> bpo, bmo;
    {
        auto Br = EMr.as_map();
        auto at = [&](int i, int j) {
            auto it = Br.find({i, j});
            return it == Br.end() ? 0 : it->second;
        };
        for (int v : base_elems) {
            auto [va, vb] = C.lift.at(v);
            bpo[v] = std::max(at(ta, va), 0) + std::max(at(ta, vb), 0);
            bmo[v] = std::min(at(ta, va), 0) + std::min(at(ta, vb), 0);
        }
    }
    // Flipping the orientation negates the matrix, so b+ and -b- trade places
    // column by column and the monomial pair is preserved.
    bool swapped = true;
    for (int v : base_elems)
        if (bpo[v] != -bm[v] || bmo[v] != -bp[v]) swapped = false;
    r.orientation_independent = negated && swapped;
    return r;
}

}  // namespace qcluster

#endif  // QCLUSTER_COVER_HPP
