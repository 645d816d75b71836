#ifndef QCLUSTER_IO_HPP
#define QCLUSTER_IO_HPP

#include <string>

#include <json.hpp>

#include "qcluster/explorer.hpp"
#include "qcluster/gluing.hpp"
#include "qcluster/seed.hpp"
#include "qcluster/surface.hpp"

// JSON formats for the CLI and file interchange. All exports are emitted
// from sorted containers, so byte-identical reruns come for free.

namespace qcluster::io {

using nlohmann::json;

// {"orientable": bool, "genus": uint, "boundary": [uint, ...]}
inline json to_json(const SurfaceSignature& s) {
    return json{{"orientable", s.orientable}, {"genus", s.genus}, {"boundary", s.boundary}};
}

inline SurfaceSignature surface_from_json(const json& j) {
    SurfaceSignature s;
    s.orientable = j.at("orientable").get<bool>();
    s.genus = j.at("genus").get<unsigned>();
    s.boundary = j.at("boundary").get<std::vector<unsigned>>();
    s.validate();
    return s;
}

inline json to_json(const QuasiTriangulation& T) {
    json elems = json::array();
    for (const auto& [id, e] : T.elements()) {
        const char* kind = e.kind == ElemKind::Arc ? "arc"
                           : e.kind == ElemKind::Boundary ? "boundary"
                                                          : "one_sided_curve";
        elems.push_back({{"id", id}, {"kind", kind}, {"name", e.name}});
    }
    json faces = json::array();
    for (const auto& [fid, f] : T.faces()) {
        if (f.kind == FaceKind::Triangle)
            faces.push_back({{"id", fid},
                             {"kind", "triangle"},
                             {"slots", {f.elem[0], f.elem[1], f.elem[2]}}});
        else
            faces.push_back(
                {{"id", fid}, {"kind", "crosscap_annulus"}, {"rim", f.elem[0]}, {"core", f.elem[1]}});
    }
    json pairings = json::array();
    for (const auto& [arc, pr] : T.pairings())
        pairings.push_back({{"arc", arc},
                            {"first", {pr.first.face, pr.first.slot}},
                            {"second", {pr.second.face, pr.second.slot}},
                            {"reversing", pr.reversing}});
    return json{{"elements", elems}, {"faces", faces}, {"pairings", pairings}};
}

inline QuasiTriangulation triangulation_from_json(const json& j) {
    QuasiTriangulation T;
    std::map<int, int> elem_map, face_map;
    for (const auto& e : j.at("elements")) {
        std::string kind = e.at("kind").get<std::string>();
        ElemKind k = kind == "arc" ? ElemKind::Arc
                     : kind == "boundary" ? ElemKind::Boundary
                     : kind == "one_sided_curve"
                         ? ElemKind::Curve
                         : throw std::invalid_argument("gluing json: unknown element kind " + kind);
        elem_map[e.at("id").get<int>()] = T.add_element(k, e.at("name").get<std::string>());
    }
    for (const auto& f : j.at("faces")) {
        std::string kind = f.at("kind").get<std::string>();
        int fid;
        if (kind == "triangle") {
            auto s = f.at("slots");
            fid = T.add_triangle(elem_map.at(s.at(0).get<int>()), elem_map.at(s.at(1).get<int>()),
                                 elem_map.at(s.at(2).get<int>()));
        } else if (kind == "crosscap_annulus") {
            fid = T.add_crosscap(elem_map.at(f.at("rim").get<int>()),
                                 elem_map.at(f.at("core").get<int>()));
        } else {
            throw std::invalid_argument("gluing json: unknown face kind " + kind);
        }
        face_map[f.at("id").get<int>()] = fid;
    }
    for (const auto& p : j.at("pairings")) {
        auto a = p.at("first");
        auto b = p.at("second");
        T.pair_slots(elem_map.at(p.at("arc").get<int>()),
                     {face_map.at(a.at(0).get<int>()), a.at(1).get<int>()},
                     {face_map.at(b.at(0).get<int>()), b.at(1).get<int>()},
                     p.at("reversing").get<bool>());
    }
    auto bad = T.validate();
    if (!bad.empty())
        throw std::invalid_argument("gluing json failed validation: " + bad.front());
    return T;
}

inline json to_json(const Seed& s) {
    json vars = json::object();
    for (const auto& [id, p] : s.vars) vars[s.triangulation.name_of(id)] = p.to_string();
    return json{{"triangulation", to_json(s.triangulation)},
                {"registry", s.registry->names()},
                {"vars", vars},
                {"trace", s.trace}};
}

inline json to_json(const ExchangeGraph& g, bool full_seeds) {
    json vertices = json::array();
    for (const auto& [k, s] : g.vertices) {
        json v{{"key", k}};
        if (full_seeds) v["seed"] = to_json(s);
        vertices.push_back(std::move(v));
    }
    json edges = json::array();
    for (const auto& e : g.edges) {
        if (!(e.from <= e.to)) continue;
        edges.push_back({{"from", detail::short_hash(e.from)},
                         {"to", detail::short_hash(e.to)},
                         {"flipped", e.flipped}});
    }
    json catalogue = json::array();
    for (const auto& [ser, p] : g.catalogue) catalogue.push_back(ser);
    return json{{"partial", g.budget_exceeded},
                {"arcs_only", g.arcs_only},
                {"vertices", vertices},
                {"edges", edges},
                {"catalogue", catalogue},
                {"warnings", g.warnings}};
}

// Round-trip support: the cluster keys of an exported graph.
inline std::vector<ClusterKey> keys_from_json(const json& j) {
    std::vector<ClusterKey> out;
    for (const auto& v : j.at("vertices")) out.push_back(v.at("key").get<ClusterKey>());
    return out;
}

}  // namespace qcluster::io

#endif  // QCLUSTER_IO_HPP
