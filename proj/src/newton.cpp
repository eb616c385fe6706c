#include "mixinf/newton.hpp"

#include "mixinf/error.hpp"
#include "mixinf/linear_program.hpp"

#include <algorithm>
#include <map>

namespace mixinf {

namespace {

constexpr const char* module_name = "newton";

RationalVector to_rational(const LatticePoint& p)
{
    RationalVector v;
    v.reserve(p.size());
    for (auto x : p)
        v.emplace_back(x);
    return v;
}

RationalVector difference(const LatticePoint& a, const LatticePoint& b)
{
    RationalVector v;
    v.reserve(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        v.emplace_back(a[i] - b[i]);
    return v;
}

Integer dot(const std::vector<Integer>& a, const LatticePoint& p)
{
    Integer s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * p[i];
    return s;
}

/// Exposed-point test: some functional is minimized exactly at points[k].
bool is_vertex(const std::vector<LatticePoint>& points, std::size_t k)
{
    const std::size_t n = points[k].size();
    // Variables (a_1..a_n, c).
    std::vector<LinearConstraint> rows;
    for (std::size_t q = 0; q < points.size(); ++q) {
        LinearConstraint row;
        row.coeffs = to_rational(points[q]);
        row.coeffs.emplace_back(-1);
        if (q == k) {
            row.sense = LinearConstraint::Sense::Equal;
            row.rhs = 0;
        } else {
            row.sense = LinearConstraint::Sense::GreaterEqual;
            row.rhs = 1;
        }
        rows.push_back(std::move(row));
    }
    return find_feasible_point(rows, n + 1).has_value();
}

void require_nonzero(const MixedPolynomial& f)
{
    if (f.is_zero())
        throw Error(ErrorKind::ZeroPolynomial, module_name, "the zero polynomial has no support");
}

struct Facet {
    std::vector<std::size_t> members;  // sorted point indices
    std::vector<Integer> normal;       // primitive, >= 0 on all points relative to the facet
};

bool is_subset(const std::vector<std::size_t>& small, const std::vector<std::size_t>& big)
{
    return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

} // namespace

int affine_dimension(const std::vector<LatticePoint>& points)
{
    if (points.empty())
        return -1;
    RationalMatrix rows;
    for (std::size_t k = 1; k < points.size(); ++k)
        rows.push_back(difference(points[k], points[0]));
    return static_cast<int>(rank(std::move(rows), points[0].size()));
}

bool affine_span_contains_origin(const std::vector<LatticePoint>& points)
{
    if (points.empty())
        return false;
    RationalMatrix rows;
    for (const auto& p : points)
        rows.push_back(to_rational(p));
    return static_cast<int>(rank(std::move(rows), points[0].size())) == affine_dimension(points);
}

SupportSet support(const MixedPolynomial& f)
{
    require_nonzero(f);
    std::set<LatticePoint> pts;
    for (const auto& t : f.terms())
        pts.insert(support_point(t));
    return SupportSet{{pts.begin(), pts.end()}};
}

bool is_convenient(const MixedPolynomial& f)
{
    const auto supp = support(f);
    for (std::size_t i = 0; i < f.n_vars(); ++i) {
        const bool hit = std::any_of(supp.points.begin(), supp.points.end(), [&](const LatticePoint& p) {
            for (std::size_t j = 0; j < p.size(); ++j)
                if ((j == i) != (p[j] > 0))
                    return false;
            return true;
        });
        if (!hit)
            return false;
    }
    return true;
}

FaceLattice enumerate_faces(std::vector<LatticePoint> points)
{
    if (points.empty())
        throw Error(ErrorKind::EmptySupport, module_name, "cannot take the hull of no points");
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    const std::size_t n = points[0].size();
    const std::size_t count = points.size();

    FaceLattice lattice;
    lattice.polytope.points = points;

    // Direction space of the affine hull, as RREF rows.
    RationalMatrix directions;
    for (std::size_t k = 1; k < count; ++k)
        directions.push_back(difference(points[k], points[0]));
    {
        const auto pivots = row_reduce(directions, n);
        directions.resize(pivots.size());
    }
    const std::size_t d = directions.size();
    lattice.polytope.dim = static_cast<int>(d);

    std::vector<std::size_t> all(count);
    for (std::size_t k = 0; k < count; ++k)
        all[k] = k;

    if (count <= d + 1) {
        lattice.polytope.vertices = all;
    } else {
        for (std::size_t k = 0; k < count; ++k)
            if (is_vertex(points, k))
                lattice.polytope.vertices.push_back(k);
    }
    const auto& vertices = lattice.polytope.vertices;

    std::vector<Facet> facets;
    if (d > 0) {
        std::set<std::vector<std::size_t>> seen;
        std::vector<std::size_t> pick(d);
        // Walk all d-subsets of the vertices in lexicographic order.
        std::vector<std::size_t> idx(d);
        for (std::size_t k = 0; k < d; ++k)
            idx[k] = k;
        const std::size_t nv = vertices.size();
        while (nv >= d) {
            const LatticePoint& base = points[vertices[idx[0]]];
            RationalMatrix system;
            for (std::size_t k = 1; k < d; ++k) {
                const RationalVector diff = difference(points[vertices[idx[k]]], base);
                RationalVector row(d);
                for (std::size_t r = 0; r < d; ++r)
                    row[r] = mixinf::dot(directions[r], diff);
                system.push_back(std::move(row));
            }
            const auto kernel = nullspace(system, d);
            if (kernel.size() == 1) {
                RationalVector a(n, Rational(0));
                for (std::size_t r = 0; r < d; ++r)
                    for (std::size_t c = 0; c < n; ++c)
                        a[c] += kernel[0][r] * directions[r][c];
                auto normal = primitive_integer(a);
                const Integer base_value = dot(normal, base);
                bool has_pos = false, has_neg = false;
                std::vector<std::size_t> members;
                for (std::size_t q = 0; q < count; ++q) {
                    const Integer s = dot(normal, points[q]) - base_value;
                    if (s > 0)
                        has_pos = true;
                    else if (s < 0)
                        has_neg = true;
                    else
                        members.push_back(q);
                }
                if (!(has_pos && has_neg) && seen.insert(members).second) {
                    if (has_neg)
                        for (auto& x : normal)
                            x = -x;
                    facets.push_back(Facet{members, normal});
                }
            }
            // next combination
            std::size_t k = d;
            while (k > 0 && idx[k - 1] == nv - d + k - 1)
                --k;
            if (k == 0)
                break;
            ++idx[k - 1];
            for (std::size_t j = k; j < d; ++j)
                idx[j] = idx[j - 1] + 1;
        }
    }

    // Proper faces are the nonempty intersections of facets.
    std::set<std::vector<std::size_t>> face_sets;
    std::vector<std::vector<std::size_t>> frontier;
    for (const auto& f : facets)
        if (face_sets.insert(f.members).second)
            frontier.push_back(f.members);
    while (!frontier.empty()) {
        std::vector<std::vector<std::size_t>> next;
        for (const auto& a : frontier) {
            for (const auto& f : facets) {
                std::vector<std::size_t> meet;
                std::set_intersection(a.begin(), a.end(), f.members.begin(), f.members.end(),
                                      std::back_inserter(meet));
                if (!meet.empty() && face_sets.insert(meet).second)
                    next.push_back(std::move(meet));
            }
        }
        frontier = std::move(next);
    }
    face_sets.insert(all);

    std::vector<bool> is_vtx(count, false);
    for (auto v : vertices)
        is_vtx[v] = true;

    for (const auto& members : face_sets) {
        Face face;
        face.point_indices = members;
        std::vector<LatticePoint> pts;
        for (auto k : members) {
            pts.push_back(points[k]);
            if (is_vtx[k])
                face.vertex_subset.push_back(points[k]);
        }
        face.lattice_points = pts;
        face.dim = affine_dimension(pts);
        face.functional.assign(n, Integer(0));
        if (members.size() != count) {
            for (const auto& f : facets)
                if (is_subset(members, f.members))
                    for (std::size_t c = 0; c < n; ++c)
                        face.functional[c] += f.normal[c];
            face.functional = primitive_integer(mixinf::to_rational(face.functional));
        }
        face.offset = dot(face.functional, pts.front());
        lattice.faces.push_back(std::move(face));
    }
    std::sort(lattice.faces.begin(), lattice.faces.end(), [](const Face& a, const Face& b) {
        if (a.dim != b.dim)
            return a.dim < b.dim;
        return a.point_indices < b.point_indices;
    });
    for (std::size_t i = 0; i < lattice.faces.size(); ++i)
        for (std::size_t j = 0; j < lattice.faces.size(); ++j)
            if (lattice.faces[j].dim == lattice.faces[i].dim + 1 &&
                is_subset(lattice.faces[i].point_indices, lattice.faces[j].point_indices))
                lattice.incidence.emplace_back(i, j);
    return lattice;
}

FaceLattice newton_polyhedron(const MixedPolynomial& f)
{
    const auto supp = support(f);
    std::vector<LatticePoint> pts = supp.points;
    const LatticePoint origin(f.n_vars(), 0);
    const bool has_constant = std::binary_search(pts.begin(), pts.end(), origin);
    if (!has_constant)
        pts.push_back(origin);
    FaceLattice lattice = enumerate_faces(pts);
    const auto origin_it = std::lower_bound(lattice.polytope.points.begin(), lattice.polytope.points.end(), origin);
    const auto origin_index = static_cast<std::size_t>(origin_it - lattice.polytope.points.begin());
    for (auto& face : lattice.faces) {
        face.flags.at_infinity = !std::binary_search(face.point_indices.begin(), face.point_indices.end(), origin_index);
        if (!has_constant)
            std::erase(face.lattice_points, origin);
    }
    return lattice;
}

std::vector<Face> boundary_at_infinity(const MixedPolynomial& f)
{
    std::vector<Face> out;
    for (auto& face : newton_polyhedron(f).faces)
        if (face.flags.at_infinity)
            out.push_back(std::move(face));
    return out;
}

std::optional<std::vector<Integer>> find_bad_hyperplane(const std::vector<LatticePoint>& points,
                                                        const std::vector<std::size_t>& face_indices)
{
    if (points.empty())
        return std::nullopt;
    const std::size_t n = points[0].size();
    std::vector<bool> on_face(points.size(), false);
    for (auto k : face_indices)
        on_face[k] = true;

    std::vector<LinearConstraint> base;
    for (std::size_t q = 0; q < points.size(); ++q) {
        LinearConstraint row;
        row.coeffs = to_rational(points[q]);
        row.sense = on_face[q] ? LinearConstraint::Sense::Equal : LinearConstraint::Sense::GreaterEqual;
        row.rhs = on_face[q] ? 0 : 1;
        base.push_back(std::move(row));
    }
    // a -> -a swaps the roles of i and j, so the orientation a >= 0 on the
    // hull loses nothing once every ordered pair is tried.
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j)
                continue;
            auto rows = base;
            LinearConstraint neg{RationalVector(n, Rational(0)), LinearConstraint::Sense::LessEqual, Rational(-1)};
            neg.coeffs[i] = 1;
            LinearConstraint pos{RationalVector(n, Rational(0)), LinearConstraint::Sense::GreaterEqual, Rational(1)};
            pos.coeffs[j] = 1;
            rows.push_back(std::move(neg));
            rows.push_back(std::move(pos));
            if (auto a = find_feasible_point(rows, n))
                return primitive_integer(*a);
        }
    }
    return std::nullopt;
}

FaceLattice support_hull(const MixedPolynomial& f)
{
    auto supp = support(f);
    const LatticePoint origin(f.n_vars(), 0);
    std::erase(supp.points, origin);
    if (supp.points.empty())
        throw Error(ErrorKind::EmptySupport, module_name, "supp(f) \\ {0} is empty");
    FaceLattice lattice = enumerate_faces(supp.points);
    for (auto& face : lattice.faces) {
        face.bad_hyperplane = find_bad_hyperplane(lattice.polytope.points, face.point_indices);
        face.flags.bad = face.bad_hyperplane.has_value();
        face.flags.strictly_bad = face.flags.bad && affine_span_contains_origin(face.lattice_points);
    }
    return lattice;
}

std::vector<Face> bad_faces(const MixedPolynomial& f)
{
    std::vector<Face> out;
    for (auto& face : support_hull(f).faces)
        if (face.flags.bad)
            out.push_back(std::move(face));
    return out;
}

std::vector<Face> strictly_bad_faces(const MixedPolynomial& f)
{
    std::vector<Face> out;
    for (auto& face : support_hull(f).faces)
        if (face.flags.strictly_bad)
            out.push_back(std::move(face));
    return out;
}

namespace {

nlohmann::ordered_json point_json(const LatticePoint& p)
{
    auto arr = nlohmann::ordered_json::array();
    for (auto x : p)
        arr.push_back(to_string(Rational(x)));
    return arr;
}

nlohmann::ordered_json integers_json(const std::vector<Integer>& v)
{
    auto arr = nlohmann::ordered_json::array();
    for (const auto& x : v)
        arr.push_back(x.str());
    return arr;
}

} // namespace

nlohmann::ordered_json to_json(const Face& face)
{
    nlohmann::ordered_json j;
    j["dim"] = face.dim;
    auto verts = nlohmann::ordered_json::array();
    for (const auto& v : face.vertex_subset)
        verts.push_back(point_json(v));
    j["vertices"] = verts;
    auto lps = nlohmann::ordered_json::array();
    for (const auto& p : face.lattice_points)
        lps.push_back(point_json(p));
    j["lattice_points"] = lps;
    j["functional"] = integers_json(face.functional);
    j["offset"] = face.offset.str();
    j["flags"] = {{"at_infinity", face.flags.at_infinity},
                  {"bad", face.flags.bad},
                  {"strictly_bad", face.flags.strictly_bad}};
    if (face.bad_hyperplane)
        j["bad_hyperplane"] = integers_json(*face.bad_hyperplane);
    return j;
}

nlohmann::ordered_json to_json(const FaceLattice& lattice)
{
    nlohmann::ordered_json j;
    auto verts = nlohmann::ordered_json::array();
    for (auto v : lattice.polytope.vertices)
        verts.push_back(point_json(lattice.polytope.points[v]));
    j["polytope"] = {{"dim", lattice.polytope.dim}, {"vertices", verts}};
    auto faces = nlohmann::ordered_json::array();
    for (std::size_t k = 0; k < lattice.faces.size(); ++k) {
        auto fj = to_json(lattice.faces[k]);
        nlohmann::ordered_json with_id;
        with_id["id"] = k;
        for (auto it = fj.begin(); it != fj.end(); ++it)
            with_id[it.key()] = it.value();
        faces.push_back(with_id);
    }
    j["faces"] = faces;
    auto inc = nlohmann::ordered_json::array();
    for (const auto& [a, b] : lattice.incidence)
        inc.push_back({a, b});
    j["incidence"] = inc;
    return j;
}

} // namespace mixinf
