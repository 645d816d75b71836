#ifndef QCLUSTER_GLUING_HPP
#define QCLUSTER_GLUING_HPP

#include <array>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qcluster/surface.hpp"

// Quasi-triangulations as half-edge gluing data.
//
// Faces are triangles (three cyclic slots) or crosscap annuli (a rim slot
// plus a one-sided core curve). Every arc occupies exactly two slots; the
// pairing between them carries an orientation flag. The flag convention:
// `reversing == false` means the two stored cyclic orders traverse the shared
// edge in opposite directions (consistent charts), `reversing == true` means
// they traverse it the same way. An anti-self-folded triangle is a triangle
// whose two inner slots hold the same arc with a reversing self-pairing; a
// preserving self-pairing would be a self-folded triangle, which needs a
// puncture and is rejected.
//
// Stored cyclic orders are a gauge choice: reflecting one face (reversing its
// slot order and toggling the flags of every pairing with exactly one end in
// it) yields the same surface. All invariants computed here (flip results up
// to relabeling, canonical labels, signatures) are gauge-independent.

namespace qcluster {

enum class ElemKind { Arc, Boundary, Curve };

struct Element {
    int id = -1;
    ElemKind kind = ElemKind::Arc;
    std::string name;
};

enum class FaceKind { Triangle, Crosscap };

struct Face {
    FaceKind kind = FaceKind::Triangle;
    // Triangle: three element ids in cyclic order.
    // Crosscap: elem[0] = rim (arc or boundary segment), elem[1] = core curve.
    std::array<int, 3> elem{-1, -1, -1};

    int slot_count() const { return kind == FaceKind::Triangle ? 3 : 2; }
};

struct SlotRef {
    int face = -1;
    int slot = -1;
    friend bool operator==(const SlotRef&, const SlotRef&) = default;
    friend auto operator<=>(const SlotRef&, const SlotRef&) = default;
};

struct Pairing {
    SlotRef first, second;
    bool reversing = false;
};

enum class FlipKind { TwoTriangles, AntiSelfToCurve, CurveToAntiSelf, TriangleAnnulus };

inline const char* to_string(FlipKind k) {
    switch (k) {
        case FlipKind::TwoTriangles: return "TwoTriangles";
        case FlipKind::AntiSelfToCurve: return "AntiSelfToCurve";
        case FlipKind::CurveToAntiSelf: return "CurveToAntiSelf";
        case FlipKind::TriangleAnnulus: return "TriangleAnnulus";
    }
    return "?";
}

// Local data of a flip, including everything the exchange relation needs.
//   TwoTriangles:     x_t x_t' = x_a x_c + x_b x_d        (a,c) and (b,d) paired
//   AntiSelfToCurve:  x_t x_t' = x_a                       a = outer edge
//   CurveToAntiSelf:  x_t x_t' = x_a                       a = annulus rim
//   TriangleAnnulus:  x_t x_t' = (x_a + x_b)^2 + x_d^2 x_a x_b
struct FlipCase {
    FlipKind kind = FlipKind::TwoTriangles;
    int a = -1, b = -1, c = -1, d = -1;
};

class QuasiTriangulation {
public:
    QuasiTriangulation() = default;

    // ---- construction -----------------------------------------------------

    int add_element(ElemKind kind, std::string name) {
        int id = next_elem_++;
        elements_.emplace(id, Element{id, kind, std::move(name)});
        return id;
    }

    int add_triangle(int e0, int e1, int e2) {
        int f = next_face_++;
        faces_.emplace(f, Face{FaceKind::Triangle, {e0, e1, e2}});
        return f;
    }

    int add_crosscap(int rim, int core) {
        int f = next_face_++;
        faces_.emplace(f, Face{FaceKind::Crosscap, {rim, core, -1}});
        return f;
    }

    void pair_slots(int arc, SlotRef a, SlotRef b, bool reversing) {
        pairings_[arc] = Pairing{a, b, reversing};
    }

    void rename_element(int id, std::string name) { elements_.at(id).name = std::move(name); }

    // ---- accessors ---------------------------------------------------------

    const std::map<int, Element>& elements() const { return elements_; }
    const std::map<int, Face>& faces() const { return faces_; }
    const std::map<int, Pairing>& pairings() const { return pairings_; }

    const Element& element(int id) const {
        auto it = elements_.find(id);
        if (it == elements_.end()) throw std::invalid_argument("unknown element id");
        return it->second;
    }

    const Face& face(int id) const {
        auto it = faces_.find(id);
        if (it == faces_.end()) throw std::invalid_argument("unknown face id");
        return it->second;
    }

    const std::string& name_of(int id) const { return element(id).name; }

    std::optional<int> find_by_name(std::string_view name) const {
        for (const auto& [id, e] : elements_)
            if (e.name == name) return id;
        return std::nullopt;
    }

    std::vector<int> flippable_ids() const {
        std::vector<int> out;
        for (const auto& [id, e] : elements_)
            if (e.kind != ElemKind::Boundary) out.push_back(id);
        return out;
    }

    std::vector<int> boundary_ids() const {
        std::vector<int> out;
        for (const auto& [id, e] : elements_)
            if (e.kind == ElemKind::Boundary) out.push_back(id);
        return out;
    }

    std::size_t curve_count() const {
        std::size_t n = 0;
        for (const auto& [id, e] : elements_)
            if (e.kind == ElemKind::Curve) ++n;
        return n;
    }

    std::size_t crosscap_face_count() const {
        std::size_t n = 0;
        for (const auto& [id, f] : faces_)
            if (f.kind == FaceKind::Crosscap) ++n;
        return n;
    }

    std::vector<SlotRef> slots_of(int elem_id) const {
        std::vector<SlotRef> out;
        for (const auto& [fid, f] : faces_)
            for (int s = 0; s < f.slot_count(); ++s)
                if (f.elem[s] == elem_id) out.push_back({fid, s});
        return out;
    }

    // ---- flips -------------------------------------------------------------

    // The case analysis around a flippable element. Throws on boundary
    // segments and unknown elements.
    FlipCase classify_flip(int t) const {
        const Element& et = element(t);
        if (et.kind == ElemKind::Boundary)
            throw std::invalid_argument("classify_flip: boundary segments are never flipped");

        if (et.kind == ElemKind::Curve) {
            SlotRef core = core_slot(t);
            FlipCase fc;
            fc.kind = FlipKind::CurveToAntiSelf;
            fc.a = face(core.face).elem[0];
            return fc;
        }

        const Pairing& pr = pairings_.at(t);
        const Face& f1 = face(pr.first.face);
        const Face& f2 = face(pr.second.face);

        if (pr.first.face == pr.second.face) {
            if (f1.kind != FaceKind::Triangle || !pr.reversing)
                throw std::logic_error("classify_flip: self-paired arc is not anti-self-folded");
            FlipCase fc;
            fc.kind = FlipKind::AntiSelfToCurve;
            int k = 3 - pr.first.slot - pr.second.slot;
            fc.a = f1.elem[k];
            return fc;
        }

        bool cc1 = f1.kind == FaceKind::Crosscap;
        bool cc2 = f2.kind == FaceKind::Crosscap;
        if (cc1 && cc2)
            throw std::logic_error("classify_flip: arc between two annuli (excluded surface)");
        if (cc1 || cc2) {
            SlotRef tri = cc1 ? pr.second : pr.first;
            SlotRef rim = cc1 ? pr.first : pr.second;
            const Face& ft = face(tri.face);
            FlipCase fc;
            fc.kind = FlipKind::TriangleAnnulus;
            fc.a = ft.elem[(tri.slot + 1) % 3];
            fc.b = ft.elem[(tri.slot + 2) % 3];
            fc.d = face(rim.face).elem[1];
            return fc;
        }

        // Two distinct triangles. Gauge-normalize a reversing pairing by
        // virtually reflecting the second face, then read off the Ptolemy
        // pairing of opposite sides.
        int s1 = pr.first.slot;
        int s2 = pr.second.slot;
        int n1 = f1.elem[(s1 + 1) % 3], p1 = f1.elem[(s1 + 2) % 3];
        int n2, p2;
        if (!pr.reversing) {
            n2 = f2.elem[(s2 + 1) % 3];
            p2 = f2.elem[(s2 + 2) % 3];
        } else {
            n2 = f2.elem[(s2 + 2) % 3];
            p2 = f2.elem[(s2 + 1) % 3];
        }
        FlipCase fc;
        fc.kind = FlipKind::TwoTriangles;
        fc.a = n1;
        fc.c = n2;
        fc.b = p1;
        fc.d = p2;
        return fc;
    }

    // Replaces t by the unique other compatible element t'. Returns the new
    // triangulation, the flip case, and the id of t'. `new_name` labels t'
    // (a generated name when empty).
    std::tuple<QuasiTriangulation, FlipCase, int> flip(int t, std::string new_name = "") const {
        FlipCase fc = classify_flip(t);
        QuasiTriangulation out(*this);
        const Pairing pr = element(t).kind == ElemKind::Curve ? Pairing{} : pairings_.at(t);

        auto fresh_name = [&](const char* prefix) {
            if (!new_name.empty()) return new_name;
            return std::string(prefix) + std::to_string(next_elem_);
        };

        switch (fc.kind) {
            case FlipKind::AntiSelfToCurve: {
                int f = pr.first.face;
                int k = 3 - pr.first.slot - pr.second.slot;
                int outer = out.face(f).elem[k];
                int tp = out.add_element(ElemKind::Curve, fresh_name("q"));
                int nf = out.add_crosscap(outer, tp);
                out.redirect_slot(outer, {f, k}, {nf, 0});
                out.faces_.erase(f);
                out.pairings_.erase(t);
                out.elements_.erase(t);
                return {std::move(out), fc, tp};
            }
            case FlipKind::CurveToAntiSelf: {
                SlotRef core = core_slot(t);
                int f = core.face;
                int rim = out.face(f).elem[0];
                int tp = out.add_element(ElemKind::Arc, fresh_name("q"));
                int nf = out.add_triangle(tp, tp, rim);
                out.redirect_slot(rim, {f, 0}, {nf, 2});
                out.pair_slots(tp, {nf, 0}, {nf, 1}, /*reversing=*/true);
                out.faces_.erase(f);
                out.elements_.erase(t);
                return {std::move(out), fc, tp};
            }
            case FlipKind::TriangleAnnulus: {
                bool cc_first = face(pr.first.face).kind == FaceKind::Crosscap;
                SlotRef tri = cc_first ? pr.second : pr.first;
                SlotRef rim = cc_first ? pr.first : pr.second;
                int ftri = tri.face, s = tri.slot;
                int n = out.face(ftri).elem[(s + 1) % 3];
                int p = out.face(ftri).elem[(s + 2) % 3];
                int d = out.face(rim.face).elem[1];
                int tp = out.add_element(ElemKind::Arc, fresh_name("q"));
                // The rim is a loop; flipping moves its basepoint to the
                // opposite corner of the enclosing bigon, so the two free
                // sides swap places in the cyclic order.
                int nf = out.add_triangle(tp, p, n);
                int ng = out.add_crosscap(tp, d);
                std::map<SlotRef, SlotRef> remap{
                    {{ftri, (s + 1) % 3}, {nf, 2}},
                    {{ftri, (s + 2) % 3}, {nf, 1}},
                };
                out.apply_remap(remap);
                out.pair_slots(tp, {nf, 0}, {ng, 0}, pr.reversing);
                out.faces_.erase(ftri);
                out.faces_.erase(rim.face);
                out.pairings_.erase(t);
                out.elements_.erase(t);
                return {std::move(out), fc, tp};
            }
            case FlipKind::TwoTriangles: {
                int f = pr.first.face, g = pr.second.face;
                int s1 = pr.first.slot, s2 = pr.second.slot;
                if (pr.reversing) {
                    out.reflect_face(g);
                    s2 = reflect_slot(s2);
                }
                const Face& ff = out.face(f);
                const Face& fg = out.face(g);
                int n1 = ff.elem[(s1 + 1) % 3], p1 = ff.elem[(s1 + 2) % 3];
                int n2 = fg.elem[(s2 + 1) % 3], p2 = fg.elem[(s2 + 2) % 3];
                int tp = out.add_element(ElemKind::Arc, fresh_name("q"));
                int nf1 = out.add_triangle(tp, p1, n2);
                int nf2 = out.add_triangle(tp, p2, n1);
                std::map<SlotRef, SlotRef> remap{
                    {{f, (s1 + 1) % 3}, {nf2, 2}},
                    {{f, (s1 + 2) % 3}, {nf1, 1}},
                    {{g, (s2 + 1) % 3}, {nf1, 2}},
                    {{g, (s2 + 2) % 3}, {nf2, 1}},
                };
                out.pairings_.erase(t);
                out.apply_remap(remap);
                out.pair_slots(tp, {nf1, 0}, {nf2, 0}, /*reversing=*/false);
                out.faces_.erase(f);
                out.faces_.erase(g);
                out.elements_.erase(t);
                return {std::move(out), fc, tp};
            }
        }
        throw std::logic_error("flip: unreachable");
    }

    // Reflect the stored orientation of one face: reverse its cyclic order
    // and toggle every pairing with exactly one end in it. A pure gauge move.
    void reflect_face(int fid) {
        Face& f = faces_.at(fid);
        if (f.kind == FaceKind::Triangle) std::swap(f.elem[1], f.elem[2]);
        for (auto& [arc, pr] : pairings_) {
            int ends_here = (pr.first.face == fid ? 1 : 0) + (pr.second.face == fid ? 1 : 0);
            if (ends_here == 1) pr.reversing = !pr.reversing;
            if (f.kind == FaceKind::Triangle) {
                if (pr.first.face == fid) pr.first.slot = reflect_slot(pr.first.slot);
                if (pr.second.face == fid) pr.second.slot = reflect_slot(pr.second.slot);
            }
        }
    }

    void reflect_all_faces() {
        std::vector<int> ids;
        for (const auto& [fid, f] : faces_) ids.push_back(fid);
        for (int fid : ids) reflect_face(fid);
    }

    // ---- invariants ----------------------------------------------------------

    std::vector<std::string> validate(const std::optional<SurfaceSignature>& sig = std::nullopt) const {
        std::vector<std::string> bad;
        std::map<int, int> occupancy;
        for (const auto& [fid, f] : faces_) {
            for (int s = 0; s < f.slot_count(); ++s) {
                int e = f.elem[s];
                if (elements_.find(e) == elements_.end()) {
                    bad.push_back("face references unknown element");
                    continue;
                }
                occupancy[e]++;
            }
            if (f.kind == FaceKind::Crosscap) {
                if (element(f.elem[1]).kind != ElemKind::Curve)
                    bad.push_back("crosscap core is not a one-sided curve");
                if (element(f.elem[0]).kind == ElemKind::Curve)
                    bad.push_back("crosscap rim is a one-sided curve");
            }
        }
        for (const auto& [id, e] : elements_) {
            int occ = occupancy.count(id) ? occupancy[id] : 0;
            switch (e.kind) {
                case ElemKind::Arc:
                    if (occ != 2) bad.push_back("arc multiplicity: '" + e.name + "' occupies " +
                                                std::to_string(occ) + " slots (want 2)");
                    if (pairings_.find(id) == pairings_.end())
                        bad.push_back("arc '" + e.name + "' has no pairing");
                    break;
                case ElemKind::Boundary:
                    if (occ != 1) bad.push_back("boundary segment '" + e.name + "' occupies " +
                                                std::to_string(occ) + " slots (want 1)");
                    break;
                case ElemKind::Curve:
                    if (occ != 1) bad.push_back("one-sided curve '" + e.name + "' occupies " +
                                                std::to_string(occ) + " slots (want 1)");
                    break;
            }
        }
        for (const auto& [arc, pr] : pairings_) {
            if (elements_.find(arc) == elements_.end() || element(arc).kind != ElemKind::Arc) {
                bad.push_back("pairing key is not an arc");
                continue;
            }
            for (SlotRef sr : {pr.first, pr.second}) {
                auto it = faces_.find(sr.face);
                if (it == faces_.end() || sr.slot >= it->second.slot_count() ||
                    it->second.elem[sr.slot] != arc) {
                    bad.push_back("pairing endpoint of '" + name_of(arc) + "' does not hold the arc");
                }
            }
            if (pr.first.face == pr.second.face && !pr.reversing)
                bad.push_back("self-folded triangle at '" + name_of(arc) + "' (needs a puncture)");
            if (pr.first.face == pr.second.face &&
                face(pr.first.face).kind == FaceKind::Crosscap)
                bad.push_back("arc between two annuli at '" + name_of(arc) + "'");
        }
        if (crosscap_face_count() != curve_count())
            bad.push_back("crosscap face count differs from one-sided curve count");
        if (sig) {
            if (flippable_ids().size() != sig->rank())
                bad.push_back("flippable element count " + std::to_string(flippable_ids().size()) +
                              " differs from rank " + std::to_string(sig->rank()));
        }
        return bad;
    }

    // ---- canonical label -----------------------------------------------------

    // Relabeling- and gauge-invariant label: a BFS over the face-adjacency
    // structure started from every (face, slot, chirality), taking the
    // lexicographic minimum. Boundary segments keep their names as fixed
    // anchors; arcs and curves are anonymized by discovery order. Mirror
    // images receive the same label (chirality is minimized over), which is
    // what the cluster-key cross-check needs.
    std::string canonical_label() const {
        std::vector<std::vector<int>> comps = face_components();
        std::vector<std::string> labels;
        for (const auto& comp : comps) {
            std::string best;
            for (int f0 : comp) {
                const Face& f = face(f0);
                int nstarts = f.kind == FaceKind::Triangle ? 3 : 1;
                for (int s0 = 0; s0 < nstarts; ++s0) {
                    for (int dir : {+1, -1}) {
                        std::string cand = encode_from(f0, s0, dir);
                        if (best.empty() || cand < best) best = std::move(cand);
                    }
                }
            }
            labels.push_back(std::move(best));
        }
        std::sort(labels.begin(), labels.end());
        std::string out;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (i) out += "|";
            out += labels[i];
        }
        return out;
    }

    // ---- signature recovery ----------------------------------------------------

    // Reconstructs the surface signature from the gluing data: orientability
    // from the flag gauge, boundary circles and their marked points from
    // corner tracing, genus from the rank formula.
    SurfaceSignature signature() const {
        bool orient = orientable();
        // Trace boundary circles.
        std::vector<unsigned> circle_sizes;
        std::set<int> seen;  // boundary element ids already placed on a circle
        for (const auto& [id, e] : elements_) {
            if (e.kind != ElemKind::Boundary || seen.count(id)) continue;
            unsigned count = 0;
            int cur = id;
            bool forward = true;
            do {
                seen.insert(cur);
                ++count;
                auto [next, next_forward] = next_boundary_edge(cur, forward);
                cur = next;
                forward = next_forward;
            } while (!(cur == id && forward));
            circle_sizes.push_back(count);
        }
        std::sort(circle_sizes.begin(), circle_sizes.end(), std::greater<>());

        long long n = static_cast<long long>(circle_sizes.size());
        long long sum = 0;
        for (unsigned b : circle_sizes) sum += b;
        long long N = static_cast<long long>(flippable_ids().size());
        SurfaceSignature sig;
        sig.orientable = orient;
        sig.boundary.assign(circle_sizes.begin(), circle_sizes.end());
        long long num = N + 6 - 3 * n - sum;
        if (orient) {
            if (num % 6 != 0 || num < 0)
                throw std::logic_error("signature: rank formula gives non-integral orientable genus");
            sig.genus = static_cast<unsigned>(num / 6);
        } else {
            if (num % 3 != 0 || num < 3)
                throw std::logic_error("signature: rank formula gives invalid non-orientable genus");
            sig.genus = static_cast<unsigned>(num / 3);
        }
        sig.validate();
        return sig;
    }

    bool orientable() const {
        if (crosscap_face_count() > 0) return false;
        // 2-color faces; a reversing pairing flips the color.
        std::map<int, int> color;
        for (const auto& [fid0, f0] : faces_) {
            if (color.count(fid0)) continue;
            color[fid0] = 0;
            std::queue<int> q;
            q.push(fid0);
            while (!q.empty()) {
                int f = q.front();
                q.pop();
                for (const auto& [arc, pr] : pairings_) {
                    for (auto [from, to] : {std::pair{pr.first, pr.second}, std::pair{pr.second, pr.first}}) {
                        if (from.face != f) continue;
                        int want = color[f] ^ (pr.reversing ? 1 : 0);
                        auto it = color.find(to.face);
                        if (it == color.end()) {
                            color[to.face] = want;
                            q.push(to.face);
                        } else if (it->second != want) {
                            return false;
                        }
                    }
                }
            }
        }
        return true;
    }

private:
    static int reflect_slot(int s) { return s == 0 ? 0 : 3 - s; }

    SlotRef core_slot(int curve_id) const {
        for (const auto& [fid, f] : faces_)
            if (f.kind == FaceKind::Crosscap && f.elem[1] == curve_id) return {fid, 1};
        throw std::invalid_argument("one-sided curve is not the core of any annulus");
    }

    // Update the pairing endpoint of `elem_id` equal to `from` so that it
    // points at `to`. Boundary segments have no pairing and need no action.
    void redirect_slot(int elem_id, SlotRef from, SlotRef to) {
        auto it = pairings_.find(elem_id);
        if (it == pairings_.end()) return;
        if (it->second.first == from) it->second.first = to;
        else if (it->second.second == from) it->second.second = to;
    }

    void apply_remap(const std::map<SlotRef, SlotRef>& remap) {
        for (auto& [arc, pr] : pairings_) {
            auto a = remap.find(pr.first);
            if (a != remap.end()) pr.first = a->second;
            auto b = remap.find(pr.second);
            if (b != remap.end()) pr.second = b->second;
        }
    }

    std::vector<std::vector<int>> face_components() const {
        std::map<int, int> comp;
        int next = 0;
        for (const auto& [fid0, f0] : faces_) {
            if (comp.count(fid0)) continue;
            int c = next++;
            std::queue<int> q;
            comp[fid0] = c;
            q.push(fid0);
            while (!q.empty()) {
                int f = q.front();
                q.pop();
                for (const auto& [arc, pr] : pairings_) {
                    for (auto [x, y] : {std::pair{pr.first, pr.second}, std::pair{pr.second, pr.first}}) {
                        if (x.face == f && !comp.count(y.face)) {
                            comp[y.face] = c;
                            q.push(y.face);
                        }
                    }
                }
            }
        }
        std::vector<std::vector<int>> out(next);
        for (const auto& [fid, c] : comp) out[c].push_back(fid);
        return out;
    }

    // One BFS traversal; emits a token string. Chirality propagates through
    // pairing flags so the result does not depend on the stored gauge.
    std::string encode_from(int f0, int s0, int d0) const {
        std::map<int, std::pair<int, int>> visit;  // face -> (entry slot, dir)
        std::map<int, int> elem_idx;               // arc/curve id -> discovery index
        std::ostringstream out;
        auto elem_token = [&](int id) -> std::string {
            const Element& e = element(id);
            if (e.kind == ElemKind::Boundary) return "B<" + e.name + ">";
            auto it = elem_idx.find(id);
            if (it == elem_idx.end()) it = elem_idx.emplace(id, static_cast<int>(elem_idx.size())).first;
            return (e.kind == ElemKind::Curve ? "c" : "a") + std::to_string(it->second);
        };

        std::queue<int> q;
        visit[f0] = {s0, d0};
        q.push(f0);
        std::vector<int> face_order;
        while (!q.empty()) {
            int fid = q.front();
            q.pop();
            face_order.push_back(fid);
            const Face& f = face(fid);
            auto [entry, dir] = visit[fid];
            if (f.kind == FaceKind::Crosscap) {
                out << "C(" << elem_token(f.elem[0]) << "," << elem_token(f.elem[1]) << ")";
            } else {
                out << "T(";
                for (int k = 0; k < 3; ++k) {
                    int slot = ((entry + dir * k) % 3 + 3) % 3;
                    if (k) out << ",";
                    out << elem_token(f.elem[slot]);
                }
                out << ")";
            }
            // Enqueue neighbors in slot-reading order for determinism.
            int nslots = f.slot_count();
            for (int k = 0; k < nslots; ++k) {
                int slot = f.kind == FaceKind::Crosscap ? k : ((entry + dir * k) % 3 + 3) % 3;
                int eid = f.elem[slot];
                auto pit = pairings_.find(eid);
                if (pit == pairings_.end()) continue;
                const Pairing& pr = pit->second;
                SlotRef here{fid, slot};
                SlotRef other = pr.first == here ? pr.second : (pr.second == here ? pr.first : SlotRef{});
                if (other.face < 0) continue;
                if (visit.count(other.face)) continue;
                int ndir = pr.reversing ? -dir : dir;
                if (face(other.face).kind == FaceKind::Crosscap) ndir = +1;
                visit[other.face] = {other.slot, ndir};
                q.push(other.face);
            }
        }
        // Effective flags in the traversal gauge, sorted by arc discovery.
        // Crosscap faces hang off a single rim pairing, so their flag is pure
        // gauge and is not recorded.
        std::vector<std::pair<int, int>> flags;
        for (const auto& [arc, pr] : pairings_) {
            auto ia = visit.find(pr.first.face);
            auto ib = visit.find(pr.second.face);
            auto ei = elem_idx.find(arc);
            if (ia == visit.end() || ib == visit.end() || ei == elem_idx.end()) continue;
            if (face(pr.first.face).kind == FaceKind::Crosscap ||
                face(pr.second.face).kind == FaceKind::Crosscap)
                continue;
            int eff = (pr.reversing ? 1 : 0) ^ (ia->second.second < 0 ? 1 : 0) ^
                      (ib->second.second < 0 ? 1 : 0);
            flags.emplace_back(ei->second, eff);
        }
        std::sort(flags.begin(), flags.end());
        out << "/";
        for (auto [idx, eff] : flags) out << idx << (eff ? "r" : "p") << ";";
        return out.str();
    }

    // Boundary tracing. An edge-end is (elem, end) with end 0 = tail,
    // 1 = head relative to the stored cyclic order of its face. Walking from
    // the exit end of a boundary segment through corner links and pairings
    // reaches the entry end of the next boundary segment on the circle.
    std::pair<int, bool> next_boundary_edge(int bid, bool forward) const {
        auto [fid, slot] = single_slot(bid);
        // leave through head if traversing forward, else tail
        auto [cur_f, cur_s, cur_end] = std::tuple{fid, slot, forward ? 1 : 0};
        std::size_t guard = 0;
        const std::size_t guard_max = 8 * (faces_.size() * 3 + 1);
        while (true) {
            if (++guard > guard_max)
                throw std::logic_error("boundary trace does not close (interior vertex?)");
            // corner link inside face (cur_f): from (slot,end) to adjacent slot end
            const Face& f = face(cur_f);
            int nslot, nend;
            if (f.kind == FaceKind::Crosscap) {
                // single corner joins the rim's two ends
                nslot = 0;
                nend = 1 - cur_end;
            } else {
                if (cur_end == 1) {  // head of slot s touches corner s+1 = tail of slot s+1
                    nslot = (cur_s + 1) % 3;
                    nend = 0;
                } else {  // tail of slot s touches corner s = head of slot s-1
                    nslot = (cur_s + 2) % 3;
                    nend = 1;
                }
            }
            int eid = f.elem[nslot];
            auto pit = pairings_.find(eid);
            if (pit == pairings_.end()) {
                if (element(eid).kind != ElemKind::Boundary)
                    throw std::logic_error("boundary trace reached an unpaired interior element");
                // arrived at a boundary edge: entering via tail means forward
                return {eid, nend == 0};
            }
            const Pairing& pr = pit->second;
            SlotRef here{cur_f, nslot};
            SlotRef other = pr.first == here ? pr.second : pr.first;
            // preserving: tail<->head, head<->tail; reversing: like ends
            int oend = pr.reversing ? nend : 1 - nend;
            cur_f = other.face;
            cur_s = other.slot;
            cur_end = oend;
        }
    }

    std::pair<int, int> single_slot(int elem_id) const {
        for (const auto& [fid, f] : faces_)
            for (int s = 0; s < f.slot_count(); ++s)
                if (f.elem[s] == elem_id) return {fid, s};
        throw std::invalid_argument("element occupies no slot");
    }

    std::map<int, Element> elements_;
    std::map<int, Face> faces_;
    std::map<int, Pairing> pairings_;
    int next_elem_ = 0;
    int next_face_ = 0;
};

// ---- built-in constructors ---------------------------------------------------

namespace builders {

// Fan triangulation of a disc with b >= 4 marked points: arcs (1,j) for
// j = 3..b-1 from a single vertex.
inline QuasiTriangulation disc_fan(unsigned b) {
    SurfaceSignature::disc(b);
    QuasiTriangulation T;
    std::vector<int> s(b + 1), a(b + 1, -1);
    for (unsigned i = 1; i <= b; ++i)
        s[i] = T.add_element(ElemKind::Boundary, "b" + std::to_string(i));
    for (unsigned j = 3; j + 1 <= b; ++j)
        a[j] = T.add_element(ElemKind::Arc, "t" + std::to_string(j - 2));
    // triangle (1, j, j+1) for j = 2..b-1, consistently oriented
    for (unsigned j = 2; j + 1 <= b; ++j) {
        int e0 = (j == 2) ? s[1] : a[j];
        int e1 = s[j];
        int e2 = (j + 1 == b) ? s[b] : a[j + 1];
        T.add_triangle(e0, e1, e2);
    }
    for (unsigned j = 3; j + 1 <= b; ++j) {
        std::vector<SlotRef> sl = T.slots_of(a[j]);
        if (sl.size() != 2) throw std::logic_error("disc_fan: arc slot bookkeeping");
        T.pair_slots(a[j], sl[0], sl[1], false);
    }
    return T;
}

// Moebius strip with n marked points, anti-self-folded form: a chain of fan
// triangles on the (n+1)-gon around the crosscap pocket plus the pocket's
// anti-self-folded triangle. For n = 1 this is the single triangle (t,t,a).
inline QuasiTriangulation moebius_asf(unsigned n) {
    SurfaceSignature::moebius(n);
    QuasiTriangulation T;
    std::vector<int> s(n + 1);
    bool paper_names = n == 2;
    for (unsigned i = 1; i <= n; ++i)
        s[i] = T.add_element(ElemKind::Boundary,
                             paper_names ? (i == 1 ? "y" : "z") : "b" + std::to_string(i));
    int inner = T.add_element(ElemKind::Arc, paper_names ? "a" : "t1");
    if (n == 1) {
        int f = T.add_triangle(inner, inner, s[1]);
        T.pair_slots(inner, {f, 0}, {f, 1}, true);
        return T;
    }
    int loop = T.add_element(ElemKind::Arc, paper_names ? "c_a" : "t2");
    std::vector<int> diag(n + 1, -1);
    for (unsigned j = 3; j <= n; ++j)
        diag[j] = T.add_element(ElemKind::Arc, "t" + std::to_string(j));
    // polygon corners P0(v1),P1(v1),P2(v2)..Pn(vn); sides loop,s1..sn; fan from P1
    std::vector<std::array<int, 3>> tris;
    if (n == 2) {
        tris.push_back({loop, s[1], s[2]});
    } else {
        tris.push_back({s[1], s[2], diag[3]});
        for (unsigned j = 3; j + 1 <= n; ++j) tris.push_back({diag[j], s[j], diag[j + 1]});
        tris.push_back({diag[n], s[n], loop});
    }
    for (auto& tr : tris) T.add_triangle(tr[0], tr[1], tr[2]);
    int pocket = T.add_triangle(inner, inner, loop);
    T.pair_slots(inner, {pocket, 0}, {pocket, 1}, true);
    for (int arc : T.flippable_ids()) {
        if (arc == inner) continue;
        std::vector<SlotRef> sl = T.slots_of(arc);
        if (sl.size() != 2) throw std::logic_error("moebius_asf: arc slot bookkeeping");
        T.pair_slots(arc, sl[0], sl[1], false);
    }
    return T;
}

// Moebius strip with n marked points, crosscap-annulus form: the one-sided
// core curve sits inside an annulus whose rim is the loop arc around the
// crosscap (the boundary segment itself when n = 1). Initial frame of the
// quasi-cluster walk for the presets.
inline QuasiTriangulation moebius_crosscap(unsigned n) {
    SurfaceSignature::moebius(n);
    QuasiTriangulation T;
    std::vector<int> s(n + 1);
    bool paper_names = n == 2;
    for (unsigned i = 1; i <= n; ++i)
        s[i] = T.add_element(ElemKind::Boundary,
                             paper_names ? (i == 1 ? "y" : "z") : "b" + std::to_string(i));
    if (n == 1) {
        int core = T.add_element(ElemKind::Curve, "t1");
        T.add_crosscap(s[1], core);
        return T;
    }
    int loop = T.add_element(ElemKind::Arc, paper_names ? "c_a" : "t1");
    int core = T.add_element(ElemKind::Curve, paper_names ? "d" : "t2");
    std::vector<int> diag(n + 1, -1);
    for (unsigned j = 3; j <= n; ++j)
        diag[j] = T.add_element(ElemKind::Arc, "t" + std::to_string(j));
    std::vector<std::array<int, 3>> tris;
    if (n == 2) {
        tris.push_back({loop, s[1], s[2]});
    } else {
        tris.push_back({s[1], s[2], diag[3]});
        for (unsigned j = 3; j + 1 <= n; ++j) tris.push_back({diag[j], s[j], diag[j + 1]});
        tris.push_back({diag[n], s[n], loop});
    }
    for (auto& tr : tris) T.add_triangle(tr[0], tr[1], tr[2]);
    T.add_crosscap(loop, core);
    for (int arc : T.flippable_ids()) {
        if (T.element(arc).kind != ElemKind::Arc) continue;
        std::vector<SlotRef> sl = T.slots_of(arc);
        if (sl.size() != 2) throw std::logic_error("moebius_crosscap: arc slot bookkeeping");
        T.pair_slots(arc, sl[0], sl[1], false);
    }
    return T;
}

// Annulus C_{p,q}: cut along one spanning arc, fan-triangulate the resulting
// (p+q+2)-gon, glue the two copies of the cut back together.
inline QuasiTriangulation annulus_ladder(unsigned p, unsigned q) {
    SurfaceSignature::annulus(p, q);
    QuasiTriangulation T;
    std::vector<int> so(p + 1), si(q + 1);
    for (unsigned i = 1; i <= p; ++i) so[i] = T.add_element(ElemKind::Boundary, "b" + std::to_string(i));
    for (unsigned j = 1; j <= q; ++j)
        si[j] = T.add_element(ElemKind::Boundary, "b" + std::to_string(p + j));
    int cut = T.add_element(ElemKind::Arc, "t1");
    // Polygon sides in cyclic order: so[1..p], cut copy, si[1..q], cut copy.
    std::vector<int> side;
    for (unsigned i = 1; i <= p; ++i) side.push_back(so[i]);
    side.push_back(cut);
    for (unsigned j = 1; j <= q; ++j) side.push_back(si[j]);
    side.push_back(cut);
    unsigned m = static_cast<unsigned>(side.size());  // p+q+2 polygon sides
    std::vector<int> diag(m, -1);
    int next_arc = 2;
    for (unsigned c = 2; c + 1 <= m - 1; ++c)
        diag[c] = T.add_element(ElemKind::Arc, "t" + std::to_string(next_arc++));
    // Fan from corner 0: triangle over corners (0, k, k+1) for k = 1..m-2.
    for (unsigned k = 1; k + 1 <= m - 1; ++k) {
        int e0 = (k == 1) ? side[0] : diag[k];
        int e1 = side[k];
        int e2 = (k + 1 == m - 1) ? side[m - 1] : diag[k + 1];
        T.add_triangle(e0, e1, e2);
    }
    for (int arc : T.flippable_ids()) {
        std::vector<SlotRef> sl = T.slots_of(arc);
        if (sl.size() != 2) throw std::logic_error("annulus_ladder: arc slot bookkeeping");
        T.pair_slots(arc, sl[0], sl[1], false);
    }
    return T;
}

}  // namespace builders

// Built-in initial quasi-triangulations per signature (fan for discs, chain
// plus anti-self-folded pocket for Moebius strips, ladder for annuli).
inline QuasiTriangulation initial_triangulation(const SurfaceSignature& s) {
    s.validate();
    if (s.orientable && s.genus == 0 && s.boundary.size() == 1)
        return builders::disc_fan(s.boundary[0]);
    if (!s.orientable && s.genus == 1 && s.boundary.size() == 1)
        return builders::moebius_asf(s.boundary[0]);
    if (s.orientable && s.genus == 0 && s.boundary.size() == 2)
        return builders::annulus_ladder(s.boundary[0], s.boundary[1]);
    throw std::invalid_argument(
        "initial_triangulation: no built-in constructor for " + s.to_string() +
        "; provide an explicit gluing file");
}

}  // namespace qcluster

#endif  // QCLUSTER_GLUING_HPP
