#ifndef QCLUSTER_SEED_HPP
#define QCLUSTER_SEED_HPP

#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "qcluster/gluing.hpp"
#include "qcluster/laurent.hpp"

// Quasi-seeds: a quasi-triangulation together with one Laurent polynomial per
// flippable element, expanded in the initial quasi-cluster. Quasi-mutation
// applies the matching exchange relation and divides exactly by the old
// variable; a division failure is a Laurent-phenomenon violation and
// propagates as NonExactDivision.

namespace qcluster {

struct Seed {
    QuasiTriangulation triangulation;
    RegistryPtr registry;
    std::map<int, LaurentPoly> vars;   // flippable element id -> expansion
    std::vector<std::string> trace;    // names of flipped elements, in order

    const LaurentPoly& var_of(int elem_id) const {
        auto it = vars.find(elem_id);
        if (it == vars.end()) throw std::invalid_argument("seed: element has no variable");
        return it->second;
    }

    // Variable of any element: boundary segments map to their generators.
    LaurentPoly value_of(int elem_id) const {
        const Element& e = triangulation.element(elem_id);
        if (e.kind == ElemKind::Boundary) return LaurentPoly::generator(registry, e.name);
        return var_of(elem_id);
    }
};

// The registry of an initial seed: flippable elements first (in id order),
// then boundary segments, each mapped to its own generator.
inline Seed initial_seed(const QuasiTriangulation& T) {
    std::vector<std::string> names;
    for (int id : T.flippable_ids()) names.push_back(T.name_of(id));
    for (int id : T.boundary_ids()) names.push_back(T.name_of(id));
    Seed s;
    s.triangulation = T;
    s.registry = make_registry(std::move(names));
    for (int id : T.flippable_ids())
        s.vars.emplace(id, LaurentPoly::generator(s.registry, T.name_of(id)));
    return s;
}

// Exchange right-hand side for a classified flip.
inline LaurentPoly exchange_rhs(const Seed& s, const FlipCase& fc) {
    switch (fc.kind) {
        case FlipKind::TwoTriangles:
            return s.value_of(fc.a) * s.value_of(fc.c) + s.value_of(fc.b) * s.value_of(fc.d);
        case FlipKind::AntiSelfToCurve:
        case FlipKind::CurveToAntiSelf:
            return s.value_of(fc.a);
        case FlipKind::TriangleAnnulus: {
            LaurentPoly xa = s.value_of(fc.a), xb = s.value_of(fc.b), xd = s.value_of(fc.d);
            LaurentPoly sum = xa + xb;
            return sum * sum + xd * xd * xa * xb;
        }
    }
    throw std::logic_error("exchange_rhs: unreachable");
}

inline Seed mutate(const Seed& s, int t, std::string new_name = "") {
    auto [T2, fc, tp] = s.triangulation.flip(t, std::move(new_name));
    LaurentPoly rhs = exchange_rhs(s, fc);
    LaurentPoly xt = s.var_of(t);
    LaurentPoly xtp = LaurentPoly::exact_div(rhs, xt);
    Seed out;
    out.triangulation = std::move(T2);
    out.registry = s.registry;
    out.vars = s.vars;
    out.vars.erase(t);
    out.vars.emplace(tp, std::move(xtp));
    out.trace = s.trace;
    out.trace.push_back(s.triangulation.name_of(t));
    return out;
}

inline Seed mutate_by_name(const Seed& s, std::string_view name, std::string new_name = "") {
    auto id = s.triangulation.find_by_name(name);
    if (!id) throw std::invalid_argument("mutate: no element named '" + std::string(name) + "'");
    return mutate(s, *id, std::move(new_name));
}

// Deterministic key of the quasi-cluster as a set: the sorted canonical
// serializations of its variables.
using ClusterKey = std::vector<std::string>;

inline ClusterKey cluster_key(const Seed& s) {
    ClusterKey k;
    for (const auto& [id, p] : s.vars) k.push_back(p.to_string());
    std::sort(k.begin(), k.end());
    return k;
}

}  // namespace qcluster

#endif  // QCLUSTER_SEED_HPP
