#ifndef MIXINF_NEWTON_HPP
#define MIXINF_NEWTON_HPP

#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "json.hpp"

#include "mixinf/mixed_polynomial.hpp"
#include "mixinf/rational.hpp"

namespace mixinf {

/// supp(f) = { nu + mu | c_{nu,mu} != 0 }, sorted and duplicate-free.
struct SupportSet {
    std::vector<LatticePoint> points;
};

/// Convex hull of a finite lattice point set.
struct Polytope {
    std::vector<LatticePoint> points;   ///< generating points, sorted
    std::vector<std::size_t> vertices;  ///< indices of the extreme points
    int dim = 0;                        ///< affine dimension
};

struct FaceFlags {
    bool at_infinity = false;   ///< face of Gamma_0 that misses the origin
    bool bad = false;
    bool strictly_bad = false;
};

/**
 * A face of a Polytope, identified by the set of generating points it
 * contains. The functional a and offset d satisfy a.p = d on the face and
 * a.q > d for every other generating point (minimizing convention). The
 * functional is the primitive integer representative lying in the direction
 * space of the polytope's affine hull; the polytope itself gets a = 0.
 */
struct Face {
    std::vector<std::size_t> point_indices;
    std::vector<LatticePoint> vertex_subset;
    std::vector<LatticePoint> lattice_points;  ///< support points on the face
    int dim = 0;
    std::vector<Integer> functional;
    Integer offset{0};
    FaceFlags flags;
    /// For bad faces, a mixed-sign normal a with a.x = 0 cutting out the face.
    std::optional<std::vector<Integer>> bad_hyperplane;

    std::set<LatticePoint> lattice_point_set() const
    {
        return {lattice_points.begin(), lattice_points.end()};
    }
};

/// All nonempty faces, sorted by (dim, point_indices); incidence holds the
/// covering pairs (lower, upper) of the containment order.
struct FaceLattice {
    Polytope polytope;
    std::vector<Face> faces;
    std::vector<std::pair<std::size_t, std::size_t>> incidence;
};

/// Throws ZeroPolynomial.
SupportSet support(const MixedPolynomial& f);

/// Every coordinate axis carries a support point. Throws ZeroPolynomial.
bool is_convenient(const MixedPolynomial& f);

/// Face lattice of conv(points) in exact arithmetic. Points must be
/// nonempty and share one length. lattice_points of each face are the
/// face's points.
FaceLattice enumerate_faces(std::vector<LatticePoint> points);

/// Gamma_0(f) = conv({0} u supp f) with at_infinity flags set; lattice_points
/// exclude the origin unless f has a constant term. Throws ZeroPolynomial.
FaceLattice newton_polyhedron(const MixedPolynomial& f);

/// Faces of Gamma_0(f) missing the origin: Gamma^+(f).
std::vector<Face> boundary_at_infinity(const MixedPolynomial& f);

/// conv(supp f \ {0}) with bad / strictly bad flags filled in. Throws
/// ZeroPolynomial or EmptySupport.
FaceLattice support_hull(const MixedPolynomial& f);

std::vector<Face> bad_faces(const MixedPolynomial& f);
std::vector<Face> strictly_bad_faces(const MixedPolynomial& f);

/// Exact LP decision of the bad-face condition for the face with the given
/// point set inside `points` (all of conv(points)'s generators). Returns the
/// cutting hyperplane when one exists.
std::optional<std::vector<Integer>> find_bad_hyperplane(const std::vector<LatticePoint>& points,
                                                        const std::vector<std::size_t>& face_indices);

/// True when the affine span of the given points contains the origin.
bool affine_span_contains_origin(const std::vector<LatticePoint>& points);

/// Affine dimension of a point set (-1 for the empty set).
int affine_dimension(const std::vector<LatticePoint>& points);

/// Documented JSON shape: coordinates as exact "p/q" strings, flags and
/// incidence pairs.
nlohmann::ordered_json to_json(const FaceLattice& lattice);
nlohmann::ordered_json to_json(const Face& face);

} // namespace mixinf

#endif
