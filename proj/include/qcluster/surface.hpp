#ifndef QCLUSTER_SURFACE_HPP
#define QCLUSTER_SURFACE_HPP

#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

// Surface signatures: the homeomorphism data of an unpunctured marked
// surface, its rank, and the finite-type classification.

namespace qcluster {

struct SurfaceSignature {
    // For orientable surfaces `genus` is the orientable genus g; for
    // non-orientable surfaces it is the non-orientable genus k >= 1
    // (number of crosscaps).
    bool orientable = true;
    unsigned genus = 0;
    std::vector<unsigned> boundary;  // marked points per boundary component, each >= 1

    static SurfaceSignature disc(unsigned b) { return validated({true, 0, {b}}); }
    static SurfaceSignature annulus(unsigned p, unsigned q) { return validated({true, 0, {p, q}}); }
    static SurfaceSignature moebius(unsigned n) { return validated({false, 1, {n}}); }

    static SurfaceSignature validated(SurfaceSignature s) {
        s.validate();
        return s;
    }

    // Punctured surfaces are structurally excluded: there is no puncture
    // field at all, and the degenerate unpunctured discs (monogon, digon,
    // triangle) are rejected here.
    void validate() const {
        if (boundary.empty())
            throw std::invalid_argument("surface: at least one boundary component is required");
        for (unsigned b : boundary)
            if (b < 1) throw std::invalid_argument("surface: every boundary component needs a marked point");
        if (!orientable && genus < 1)
            throw std::invalid_argument("surface: non-orientable genus must be >= 1");
        if (orientable && genus == 0 && boundary.size() == 1 && boundary[0] <= 3)
            throw std::invalid_argument("surface: unpunctured monogon, digon and triangle are excluded");
        if (rank_raw() < 1)
            throw std::invalid_argument("surface: rank must be >= 1");
    }

    unsigned marked_points() const {
        return std::accumulate(boundary.begin(), boundary.end(), 0u);
    }

    // Number of elements of every quasi-triangulation.
    unsigned rank() const {
        validate();
        long long r = rank_raw();
        return static_cast<unsigned>(r);
    }

    // Finite type: a disc with >= 4 marked points, or a Moebius strip with
    // >= 1 marked point.
    bool is_finite_type() const {
        validate();
        if (orientable) return genus == 0 && boundary.size() == 1;
        return genus == 1 && boundary.size() == 1;
    }

    // Closed-form census for the finite-type surfaces: (quasi-arcs, arcs).
    std::optional<std::pair<long long, long long>> count_quasi_arcs_closed_form() const {
        if (!is_finite_type()) return std::nullopt;
        long long n = boundary[0];
        if (orientable) {
            long long arcs = n * (n - 3) / 2;
            return std::make_pair(arcs, arcs);
        }
        return std::make_pair((3 * n * n - n + 2) / 2, n * (3 * n - 1) / 2);
    }

    std::string to_string() const {
        std::ostringstream out;
        out << (orientable ? "orientable" : "non-orientable") << " genus=" << genus << " boundary=[";
        for (std::size_t i = 0; i < boundary.size(); ++i) {
            if (i) out << ",";
            out << boundary[i];
        }
        out << "]";
        return out.str();
    }

    friend bool operator==(const SurfaceSignature& a, const SurfaceSignature& b) {
        return a.orientable == b.orientable && a.genus == b.genus && a.boundary == b.boundary;
    }

private:
    long long rank_raw() const {
        long long n = static_cast<long long>(boundary.size());
        long long sum = marked_points();
        if (orientable) return 6 * static_cast<long long>(genus) - 6 + 3 * n + sum;
        return 3 * static_cast<long long>(genus) - 6 + 3 * n + sum;
    }
};

}  // namespace qcluster

#endif  // QCLUSTER_SURFACE_HPP
