#ifndef QCLUSTER_EXPLORER_HPP
#define QCLUSTER_EXPLORER_HPP

#include <algorithm>
#include <cstdint>
#include <future>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "qcluster/seed.hpp"
#include "qcluster/surface.hpp"

// Breadth-first enumeration of the quasi-exchange graph, deduplicated by
// cluster key. The frontier is processed in sorted key order and results are
// merged canonically, so the outcome is identical for any thread count.

namespace qcluster {

struct ExchangeEdge {
    ClusterKey from, to;
    std::string flipped;  // element name in the source seed

    friend bool operator<(const ExchangeEdge& a, const ExchangeEdge& b) {
        return std::tie(a.from, a.to, a.flipped) < std::tie(b.from, b.to, b.flipped);
    }
};

struct ExchangeGraph {
    std::map<ClusterKey, Seed> vertices;
    std::set<ExchangeEdge> edges;                    // directed; both directions present
    std::map<std::string, LaurentPoly> catalogue;    // serialization -> variable
    bool arcs_only = false;
    bool budget_exceeded = false;
    bool all_coefficients_positive = true;
    std::vector<std::string> warnings;

    std::size_t vertex_count() const { return vertices.size(); }

    std::size_t undirected_edge_count() const {
        std::size_t n = 0;
        for (const auto& e : edges)
            if (e.from <= e.to) ++n;
        return n;
    }

    std::map<ClusterKey, std::size_t> degrees() const {
        std::map<ClusterKey, std::size_t> deg;
        for (const auto& [k, s] : vertices) deg[k] = 0;
        for (const auto& e : edges) {
            auto it = deg.find(e.from);
            if (it != deg.end()) ++it->second;
        }
        return deg;
    }
};

namespace detail {

inline bool skip_in_arcs_only(const Seed& s, int t) {
    FlipCase fc = s.triangulation.classify_flip(t);
    return fc.kind == FlipKind::AntiSelfToCurve || fc.kind == FlipKind::CurveToAntiSelf;
}

struct Expansion {
    ClusterKey from;
    std::string flipped;
    Seed seed;
    ClusterKey key;
};

}  // namespace detail

// BFS over quasi-mutations from `start`. In arcs_only mode flips whose source
// or target is a one-sided curve are skipped, so the vertices are exactly the
// triangulations (the start seed must then be a triangulation itself).
inline ExchangeGraph explore(const Seed& start, std::size_t max_seeds = 100000,
                             bool arcs_only = false, unsigned threads = 1) {
    ExchangeGraph g;
    g.arcs_only = arcs_only;
    ClusterKey k0 = cluster_key(start);
    g.vertices.emplace(k0, start);
    for (const auto& [id, p] : start.vars) g.catalogue.emplace(p.to_string(), p);

    std::vector<ClusterKey> frontier{k0};
    std::map<ClusterKey, std::string> label_by_key;
    label_by_key[k0] = start.triangulation.canonical_label();

    while (!frontier.empty()) {
        std::sort(frontier.begin(), frontier.end());
        // Expand the whole frontier (possibly in parallel), then merge
        // sequentially in canonical order.
        auto expand_one = [&](const ClusterKey& key) {
            std::vector<detail::Expansion> out;
            const Seed& s = g.vertices.at(key);
            std::vector<int> dirs = s.triangulation.flippable_ids();
            std::sort(dirs.begin(), dirs.end(),
                      [&](int a, int b) { return s.triangulation.name_of(a) < s.triangulation.name_of(b); });
            for (int t : dirs) {
                if (arcs_only && detail::skip_in_arcs_only(s, t)) continue;
                Seed next = mutate(s, t);
                out.push_back({key, s.triangulation.name_of(t), std::move(next), {}});
                out.back().key = cluster_key(out.back().seed);
            }
            return out;
        };

        std::vector<std::vector<detail::Expansion>> batches(frontier.size());
        if (threads <= 1 || frontier.size() == 1) {
            for (std::size_t i = 0; i < frontier.size(); ++i) batches[i] = expand_one(frontier[i]);
        } else {
            std::vector<std::future<void>> futs;
            std::atomic<std::size_t> cursor{0};
            unsigned nw = std::min<unsigned>(threads, static_cast<unsigned>(frontier.size()));
            for (unsigned w = 0; w < nw; ++w) {
                futs.push_back(std::async(std::launch::async, [&] {
                    for (;;) {
                        std::size_t i = cursor.fetch_add(1);
                        if (i >= frontier.size()) break;
                        batches[i] = expand_one(frontier[i]);
                    }
                }));
            }
            for (auto& f : futs) f.get();
        }

        std::vector<ClusterKey> next_frontier;
        for (auto& batch : batches) {
            for (auto& ex : batch) {
                for (const auto& [id, p] : ex.seed.vars) {
                    if (!p.all_coefficients_positive()) g.all_coefficients_positive = false;
                    g.catalogue.emplace(p.to_string(), p);
                }
                auto it = g.vertices.find(ex.key);
                if (it != g.vertices.end()) {
                    // Cross-check: one cluster key must not cover two
                    // combinatorially non-isomorphic triangulations.
                    const std::string lbl = ex.seed.triangulation.canonical_label();
                    if (label_by_key.at(ex.key) != lbl)
                        g.warnings.push_back("cluster-key collision across non-isomorphic triangulations");
                    g.edges.insert({ex.from, ex.key, ex.flipped});
                    continue;
                }
                if (g.vertices.size() >= max_seeds) {
                    g.budget_exceeded = true;
                    continue;
                }
                label_by_key[ex.key] = ex.seed.triangulation.canonical_label();
                g.vertices.emplace(ex.key, std::move(ex.seed));
                g.edges.insert({ex.from, ex.key, ex.flipped});
                next_frontier.push_back(ex.key);
            }
        }
        if (g.budget_exceeded) break;
        frontier = std::move(next_frontier);
    }
    return g;
}

struct StructureReport {
    bool regular = false;
    std::size_t degree = 0;  // meaningful when regular
    std::size_t min_degree = 0, max_degree = 0;
    bool connected = true;   // by construction of the BFS
    std::optional<std::pair<long long, long long>> closed_form;
    bool catalogue_matches_closed_form = true;
    std::vector<std::string> failures;

    bool ok() const { return failures.empty(); }
};

// Structural assertions on a completed exploration: n-regularity in quasi
// mode, detected non-regularity in arcs-only mode on non-orientable surfaces,
// and the closed-form census where one exists.
inline StructureReport verify_structure(const ExchangeGraph& g, const SurfaceSignature& sig) {
    StructureReport r;
    if (g.budget_exceeded) {
        r.failures.push_back("exploration did not complete within budget");
        return r;
    }
    auto deg = g.degrees();
    r.min_degree = SIZE_MAX;
    for (const auto& [k, d] : deg) {
        r.min_degree = std::min(r.min_degree, d);
        r.max_degree = std::max(r.max_degree, d);
    }
    if (deg.empty()) r.min_degree = 0;
    r.regular = r.min_degree == r.max_degree;
    r.degree = r.max_degree;

    if (!g.arcs_only) {
        if (!r.regular || r.degree != sig.rank())
            r.failures.push_back("quasi-exchange graph is not rank-regular");
        // Every neighbor set must have full size (self-distinct keys).
        for (const auto& [k, s] : g.vertices) {
            std::set<ClusterKey> nb;
            for (const auto& e : g.edges)
                if (e.from == k) nb.insert(e.to);
            if (nb.size() != sig.rank())
                r.failures.push_back("vertex with repeated or missing neighbor keys");
        }
    } else if (!sig.orientable) {
        if (r.regular && g.vertices.size() > 1)
            r.failures.push_back("arcs-only exchange graph of a non-orientable surface should not be regular");
    }

    r.closed_form = sig.count_quasi_arcs_closed_form();
    if (r.closed_form) {
        long long want = g.arcs_only ? r.closed_form->second : r.closed_form->first;
        if (static_cast<long long>(g.catalogue.size()) != want) {
            r.catalogue_matches_closed_form = false;
            r.failures.push_back("catalogue size " + std::to_string(g.catalogue.size()) +
                                 " differs from closed form " + std::to_string(want));
        }
    }
    return r;
}

// Re-run the exploration with the chosen vertex as the initial seed: every
// catalogue variable expressed in that quasi-cluster (over a fresh registry
// named by the target's elements).
inline ExchangeGraph expansions_in(const ExchangeGraph& g, const ClusterKey& target,
                                   std::size_t max_seeds = 100000) {
    auto it = g.vertices.find(target);
    if (it == g.vertices.end()) throw std::invalid_argument("expansions_in: unknown target vertex");
    Seed fresh = initial_seed(it->second.triangulation);
    return explore(fresh, max_seeds, g.arcs_only);
}

struct RankCheckReport {
    std::size_t monomial_count = 0;
    std::size_t trials = 0;
    std::uint64_t rng_seed = 0;
    std::size_t rank = 0;
    bool full_rank = false;
    bool duplicate_probe_caught = false;
};

namespace detail {

inline std::size_t rational_matrix_rank(std::vector<std::vector<BigRat>> m) {
    std::size_t rows = m.size();
    if (rows == 0) return 0;
    std::size_t cols = m[0].size();
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols && rank < rows; ++c) {
        std::size_t pivot = rank;
        while (pivot < rows && m[pivot][c] == 0) ++pivot;
        if (pivot == rows) continue;
        std::swap(m[pivot], m[rank]);
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == rank || m[r][c] == 0) continue;
            BigRat f = m[r][c] / m[rank][c];
            for (std::size_t k = c; k < cols; ++k) m[r][k] -= f * m[rank][k];
        }
        ++rank;
    }
    return rank;
}

inline BigRat random_positive_rational(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> num(1, 23), den(1, 23);
    return BigRat(num(rng), den(rng));
}

}  // namespace detail

// Enumerates all quasi-cluster monomials of total degree <= max_degree
// (weighted quasi-triangulations) and checks, at oversampled random positive
// rational points, that their evaluation matrix has full column rank.
// `probe_duplicate` injects a copied column first and expects the checker to
// catch it.
inline RankCheckReport monomial_rank_check(const ExchangeGraph& g, unsigned max_degree,
                                           std::size_t oversample, std::uint64_t rng_seed,
                                           bool probe_duplicate = false) {
    RankCheckReport rep;
    rep.rng_seed = rng_seed;
    if (g.vertices.empty()) return rep;
    const RegistryPtr reg = g.vertices.begin()->second.registry;

    // Collect distinct monomials by canonical serialization.
    std::map<std::string, LaurentPoly> monomials;
    for (const auto& [key, seed] : g.vertices) {
        std::vector<const LaurentPoly*> cluster;
        for (const auto& [id, p] : seed.vars) cluster.push_back(&p);
        const std::size_t n = cluster.size();
        std::vector<unsigned> w(n, 0);
        // odometer over all weight vectors with sum <= max_degree
        for (;;) {
            LaurentPoly m = LaurentPoly::constant(reg, 1);
            for (std::size_t i = 0; i < n; ++i)
                if (w[i]) m = m * cluster[i]->pow(w[i]);
            monomials.emplace(m.to_string(), std::move(m));
            std::size_t i = 0;
            while (i < n) {
                ++w[i];
                unsigned sum = 0;
                for (auto x : w) sum += x;
                if (sum <= max_degree) break;
                w[i] = 0;
                ++i;
            }
            if (i == n) break;
        }
    }
    rep.monomial_count = monomials.size();
    rep.trials = oversample * monomials.size();

    std::mt19937_64 rng(rng_seed);
    std::vector<std::vector<BigRat>> matrix(rep.trials);
    for (std::size_t t = 0; t < rep.trials; ++t) {
        std::vector<BigRat> point(reg->size());
        for (auto& v : point) v = detail::random_positive_rational(rng);
        auto& row = matrix[t];
        row.reserve(monomials.size() + 1);
        for (const auto& [s, m] : monomials) row.push_back(m.eval_rational(point));
        if (probe_duplicate && !row.empty()) row.push_back(row.front());
    }
    std::size_t cols = monomials.size() + (probe_duplicate ? 1 : 0);
    rep.rank = detail::rational_matrix_rank(std::move(matrix));
    if (probe_duplicate) {
        rep.duplicate_probe_caught = rep.rank < cols;
        rep.full_rank = rep.rank == monomials.size();
    } else {
        rep.full_rank = rep.rank == cols;
    }
    return rep;
}

// ---- exports ------------------------------------------------------------------

namespace detail {

inline std::string short_hash(const ClusterKey& k) {
    std::uint64_t h = 1469598103934665603ull;  // FNV-1a
    for (const auto& s : k) {
        for (char c : s) {
            h ^= static_cast<unsigned char>(c);
            h *= 1099511628211ull;
        }
        h ^= 0xff;
        h *= 1099511628211ull;
    }
    std::ostringstream out;
    out << std::hex << h;
    return out.str();
}

}  // namespace detail

inline std::string export_dot(const ExchangeGraph& g) {
    std::ostringstream out;
    out << "graph exchange {\n";
    for (const auto& [k, s] : g.vertices)
        out << "  n" << detail::short_hash(k) << ";\n";
    for (const auto& e : g.edges) {
        if (!(e.from <= e.to)) continue;  // one line per undirected edge
        out << "  n" << detail::short_hash(e.from) << " -- n" << detail::short_hash(e.to)
            << " [label=\"" << e.flipped << "\"];\n";
    }
    out << "}\n";
    return out.str();
}

}  // namespace qcluster

#endif  // QCLUSTER_EXPLORER_HPP
