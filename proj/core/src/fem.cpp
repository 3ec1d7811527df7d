#include "dfh/fem.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dfh {

namespace {
std::size_t at(Index i) { return static_cast<std::size_t>(i); }
}  // namespace

FeFunction FeFunction::zero(const Mesh& mesh, SpaceTag space) {
    FeFunction f;
    f.space = space;
    f.coefficients.assign(space == SpaceTag::VelocityP0Vec ? 2 * mesh.num_elements() : mesh.num_vertices(),
                          0.0);
    return f;
}

void validate(const ProblemData& data) {
    if (!data.viscosity) throw std::invalid_argument("problem data: viscosity not set");
    if (!data.force0) throw std::invalid_argument("problem data: f0 not set");
    if (!data.force1) throw std::invalid_argument("problem data: f1 not set");
    if (!(data.diffusivity > 0.0)) throw std::invalid_argument("problem data: kappa must be positive");
    if (!(data.viscosity_min > 0.0) || data.viscosity_max < data.viscosity_min)
        throw std::invalid_argument("problem data: need 0 < nu_min <= nu_max");
    const Vec2 f10 = data.force1(0.0);
    if (f10.x != 0.0 || f10.y != 0.0) throw std::invalid_argument("problem data: f1(0) must vanish");
    if (!(data.p >= 1.0 && data.p < 2.0)) throw std::invalid_argument("problem data: p must lie in [1, 2)");
    if (data.quad_degree < 1 || data.quad_degree > kMaxQuadratureDegree)
        throw std::invalid_argument("problem data: unsupported quadrature degree");
}

std::array<Vec2, 3> hat_gradients(const Mesh& mesh, Index k) {
    const auto& t = mesh.triangle(k);
    const Point a = mesh.vertex(t[0]), b = mesh.vertex(t[1]), c = mesh.vertex(t[2]);
    const double inv = 1.0 / cross(b - a, c - a);
    return {Vec2{(b.y - c.y) * inv, (c.x - b.x) * inv}, Vec2{(c.y - a.y) * inv, (a.x - c.x) * inv},
            Vec2{(a.y - b.y) * inv, (b.x - a.x) * inv}};
}

double eval_p1(const Mesh& mesh, std::span<const double> coeffs, Index k, const std::array<double, 3>& bary) {
    const auto& t = mesh.triangle(k);
    return bary[0] * coeffs[at(t[0])] + bary[1] * coeffs[at(t[1])] + bary[2] * coeffs[at(t[2])];
}

Vec2 grad_p1(const Mesh& mesh, std::span<const double> coeffs, Index k) {
    const auto g = hat_gradients(mesh, k);
    const auto& t = mesh.triangle(k);
    Vec2 s{};
    for (std::size_t i = 0; i < 3; ++i) s = s + coeffs[at(t[i])] * g[i];
    return s;
}

std::vector<double> dirac_load(const Mesh& mesh, std::span<const Point> sources) {
    std::vector<double> load(mesh.num_vertices(), 0.0);
    for (const Point& z : sources) {
        const PointLocation loc = locate_point(mesh, z);
        if (loc.kind == PointLocation::Kind::AtVertex) {
            load[at(loc.id)] += 1.0;
            continue;
        }
        const Index k = loc.containing_elements.front();
        auto bary = barycentric(mesh, k, z);
        if (loc.kind == PointLocation::Kind::OnEdge) {
            const auto& ee = mesh.element_edges(k);
            for (std::size_t i = 0; i < 3; ++i)
                if (ee[i] == loc.id) bary[i] = 0.0;
        }
        double s = 0.0;
        for (double& b : bary) {
            b = std::max(b, 0.0);
            s += b;
        }
        const auto& t = mesh.triangle(k);
        for (std::size_t i = 0; i < 3; ++i) load[at(t[i])] += bary[i] / s;
    }
    return load;
}

std::vector<double> boundary_flux(const Mesh& mesh, std::span<const CornerFlux> flux_bc) {
    if (flux_bc.empty()) return {};
    std::vector<double> g(mesh.num_edges(), 0.0);
    double total = 0.0, perimeter = 0.0;
    for (std::size_t e = 0; e < mesh.num_edges(); ++e) {
        const Edge& ed = mesh.edges()[e];
        if (!ed.boundary()) continue;
        const Point a = mesh.vertex(ed.vertices[0]), b = mesh.vertex(ed.vertices[1]);
        const double len = mesh.edge_length(static_cast<Index>(e));
        for (const CornerFlux& f : flux_bc) {
            // closure of the edge contains the corner
            const Point d = b - a;
            const double t = std::clamp(dot(f.corner - a, d) / dot(d, d), 0.0, 1.0);
            if (norm(a + t * d - f.corner) <= 1e-12 * len) g[e] += f.value;
        }
        total += g[e] * len;
        perimeter += len;
    }
    const double mean = total / perimeter;
    for (std::size_t e = 0; e < mesh.num_edges(); ++e)
        if (mesh.edges()[e].boundary()) g[e] -= mean;
    return g;
}

DarcyMeshTerms darcy_mesh_terms(const Mesh& mesh, const ProblemData& data) {
    const std::size_t nt = mesh.num_elements();
    const TriangleRule& rule = triangle_rule(data.quad_degree);
    const double nu_tol = 1e-12 * data.viscosity_max;
    DarcyMeshTerms t;
    t.nu_integral.resize(nt);
    t.f0_integral.resize(2 * nt);
    for (std::size_t kk = 0; kk < nt; ++kk) {
        const auto k = static_cast<Index>(kk);
        double nu_int = 0.0, fx = 0.0, fy = 0.0;
        const Point a = mesh.vertex(mesh.triangle(k)[0]), b = mesh.vertex(mesh.triangle(k)[1]),
                    c = mesh.vertex(mesh.triangle(k)[2]);
        for (std::size_t q = 0; q < rule.weights.size(); ++q) {
            const auto& l = rule.points[q];
            const Point x{l[0] * a.x + l[1] * b.x + l[2] * c.x, l[0] * a.y + l[1] * b.y + l[2] * c.y};
            const Vec2 f = data.force0(x);
            const double nu = data.viscosity(x);
            if (nu < data.viscosity_min - nu_tol || nu > data.viscosity_max + nu_tol)
                throw std::domain_error("viscosity " + std::to_string(nu) + " outside its declared bounds");
            nu_int += rule.weights[q] * nu;
            fx += rule.weights[q] * f.x;
            fy += rule.weights[q] * f.y;
        }
        const double jac = 2.0 * mesh.area(k);
        t.nu_integral[kk] = jac * nu_int;
        t.f0_integral[2 * kk] = jac * fx;
        t.f0_integral[2 * kk + 1] = jac * fy;
    }
    return t;
}

DarcySystem assemble_darcy_step(const Mesh& mesh, const ProblemData& data, const FeFunction& u_prev,
                                const FeFunction& t_prev, const DarcyMeshTerms* cached) {
    if (u_prev.space != SpaceTag::VelocityP0Vec || t_prev.space != SpaceTag::TemperatureP1)
        throw std::invalid_argument("assemble_darcy_step: wrong function spaces");
    const std::size_t nt = mesh.num_elements(), nv = mesh.num_vertices();
    const TriangleRule& rule = triangle_rule(data.quad_degree);
    DarcyMeshTerms local;
    if (!cached) {
        local = darcy_mesh_terms(mesh, data);
        cached = &local;
    } else if (cached->nu_integral.size() != nt) {
        throw std::invalid_argument("assemble_darcy_step: cached terms do not match the mesh");
    }

    DarcySystem sys;
    sys.velocity_mass.resize(nt);
    sys.rhs_u.assign(2 * nt, 0.0);
    sys.rhs_p.assign(nv, 0.0);
    sys.mean_weights.assign(nv, 0.0);
    TripletBuilder b(nv, 2 * nt);
    b.reserve(6 * nt);

    for (std::size_t kk = 0; kk < nt; ++kk) {
        const auto k = static_cast<Index>(kk);
        const double area = mesh.area(k);
        const auto& tri = mesh.triangle(k);
        sys.velocity_mass[kk] = cached->nu_integral[kk] + area * norm(u_prev.velocity(k));

        // f1(T_prev) at quadrature points; skipped when T_prev vanishes on K
        double fx = 0.0, fy = 0.0;
        const auto& tc = t_prev.coefficients;
        if (tc[at(tri[0])] != 0.0 || tc[at(tri[1])] != 0.0 || tc[at(tri[2])] != 0.0) {
            for (std::size_t q = 0; q < rule.weights.size(); ++q) {
                const Vec2 f = data.force1(eval_p1(mesh, tc, k, rule.points[q]));
                fx += rule.weights[q] * f.x;
                fy += rule.weights[q] * f.y;
            }
        }
        sys.rhs_u[2 * kk] = cached->f0_integral[2 * kk] + 2.0 * area * fx;
        sys.rhs_u[2 * kk + 1] = cached->f0_integral[2 * kk + 1] + 2.0 * area * fy;

        const auto grads = hat_gradients(mesh, k);
        for (std::size_t i = 0; i < 3; ++i) {
            b.add(at(tri[i]), 2 * kk, area * grads[i].x);
            b.add(at(tri[i]), 2 * kk + 1, area * grads[i].y);
            sys.mean_weights[at(tri[i])] += area / 3.0;
        }
    }
    sys.divergence = b.build();

    const auto g = boundary_flux(mesh, data.flux_bc);
    for (std::size_t e = 0; e < g.size(); ++e) {
        if (g[e] == 0.0) continue;
        const Edge& ed = mesh.edges()[e];
        const double half = 0.5 * g[e] * mesh.edge_length(static_cast<Index>(e));
        sys.rhs_p[at(ed.vertices[0])] += half;
        sys.rhs_p[at(ed.vertices[1])] += half;
    }
    return sys;
}

SparseMatrix darcy_saddle_matrix(const DarcySystem& sys) {
    const std::size_t nu = sys.rhs_u.size(), np = sys.rhs_p.size();
    const std::size_t n = nu + np + 1;
    TripletBuilder m(n, n);
    for (std::size_t k = 0; k < sys.velocity_mass.size(); ++k) {
        m.add(2 * k, 2 * k, sys.velocity_mass[k]);
        m.add(2 * k + 1, 2 * k + 1, sys.velocity_mass[k]);
    }
    const auto& b = sys.divergence;
    for (std::size_t q = 0; q < b.rows(); ++q) {
        for (auto p = b.row_offsets()[q]; p < b.row_offsets()[q + 1]; ++p) {
            const auto col = static_cast<std::size_t>(b.col_indices()[static_cast<std::size_t>(p)]);
            const double v = b.values()[static_cast<std::size_t>(p)];
            m.add(nu + q, col, v);
            m.add(col, nu + q, v);
        }
        m.add(nu + q, n - 1, sys.mean_weights[q]);
        m.add(n - 1, nu + q, sys.mean_weights[q]);
    }
    return m.build();
}

DarcySolution solve_darcy_step(const Mesh& mesh, const DarcySystem& sys, std::vector<std::int32_t>* ordering) {
    const std::size_t nt = mesh.num_elements(), nv = mesh.num_vertices();
    TripletBuilder s(nv + 1, nv + 1);
    s.reserve(9 * nt + 2 * nv);
    std::vector<double> rhs(nv + 1, 0.0);
    for (std::size_t q = 0; q < nv; ++q) rhs[q] = -sys.rhs_p[q];

    for (std::size_t kk = 0; kk < nt; ++kk) {
        const auto k = static_cast<Index>(kk);
        const double area = mesh.area(k);
        const double a = sys.velocity_mass[kk];
        const auto grads = hat_gradients(mesh, k);
        const auto& tri = mesh.triangle(k);
        const Vec2 f{sys.rhs_u[2 * kk], sys.rhs_u[2 * kk + 1]};
        const double w = area * area / a;
        for (std::size_t i = 0; i < 3; ++i) {
            rhs[at(tri[i])] += area * dot(grads[i], f) / a;
            for (std::size_t j = 0; j < 3; ++j) s.add(at(tri[i]), at(tri[j]), w * dot(grads[i], grads[j]));
        }
    }
    for (std::size_t q = 0; q < nv; ++q) {
        s.add(q, nv, sys.mean_weights[q]);
        s.add(nv, q, sys.mean_weights[q]);
    }
    const std::vector<double> sol = factor_solve(s.build(), rhs, ordering);

    DarcySolution out;
    out.pressure = FeFunction::zero(mesh, SpaceTag::PressureP1);
    std::copy(sol.begin(), sol.begin() + static_cast<std::ptrdiff_t>(nv), out.pressure.coefficients.begin());
    out.multiplier = -sol[nv];
    out.velocity = FeFunction::zero(mesh, SpaceTag::VelocityP0Vec);
    for (std::size_t kk = 0; kk < nt; ++kk) {
        const auto k = static_cast<Index>(kk);
        const double area = mesh.area(k);
        const Vec2 gp = grad_p1(mesh, out.pressure.coefficients, k);
        const double a = sys.velocity_mass[kk];
        out.velocity.coefficients[2 * kk] = (sys.rhs_u[2 * kk] - area * gp.x) / a;
        out.velocity.coefficients[2 * kk + 1] = (sys.rhs_u[2 * kk + 1] - area * gp.y) / a;
    }
    return out;
}

InteriorDofs interior_dofs(const Mesh& mesh) {
    InteriorDofs d;
    d.vertex_to_dof.assign(mesh.num_vertices(), -1);
    for (std::size_t v = 0; v < mesh.num_vertices(); ++v) {
        if (mesh.is_boundary_vertex(static_cast<Index>(v))) continue;
        d.vertex_to_dof[v] = static_cast<Index>(d.dof_to_vertex.size());
        d.dof_to_vertex.push_back(static_cast<Index>(v));
    }
    return d;
}

namespace {

template <class Scatter>
void heat_local_loop(const Mesh& mesh, const ProblemData& data, const FeFunction& u, Scatter&& scatter) {
    if (u.space != SpaceTag::VelocityP0Vec) throw std::invalid_argument("assemble_heat: u must be P0 velocity");
    for (std::size_t kk = 0; kk < mesh.num_elements(); ++kk) {
        const auto k = static_cast<Index>(kk);
        const double area = mesh.area(k);
        const auto grads = hat_gradients(mesh, k);
        const Vec2 uk = u.velocity(k);
        const auto& tri = mesh.triangle(k);
        for (std::size_t i = 0; i < 3; ++i) {
            const double conv = area / 3.0 * dot(uk, grads[i]);
            for (std::size_t j = 0; j < 3; ++j)
                scatter(tri[i], tri[j], data.diffusivity * area * dot(grads[i], grads[j]) - conv);
        }
    }
}

}  // namespace

SparseMatrix assemble_heat(const Mesh& mesh, const ProblemData& data, const FeFunction& u,
                           const InteriorDofs& dofs) {
    TripletBuilder m(dofs.size(), dofs.size());
    m.reserve(9 * mesh.num_elements());
    heat_local_loop(mesh, data, u, [&](Index i, Index j, double v) {
        const Index di = dofs.vertex_to_dof[at(i)], dj = dofs.vertex_to_dof[at(j)];
        if (di >= 0 && dj >= 0) m.add(at(di), at(dj), v);
    });
    return m.build();
}

SparseMatrix assemble_heat_full(const Mesh& mesh, const ProblemData& data, const FeFunction& u) {
    TripletBuilder m(mesh.num_vertices(), mesh.num_vertices());
    m.reserve(9 * mesh.num_elements());
    heat_local_loop(mesh, data, u, [&](Index i, Index j, double v) { m.add(at(i), at(j), v); });
    return m.build();
}

FeFunction solve_heat_step(const Mesh& mesh, const ProblemData& data, const FeFunction& u,
                           std::vector<std::int32_t>* ordering) {
    FeFunction temp = FeFunction::zero(mesh, SpaceTag::TemperatureP1);
    const InteriorDofs dofs = interior_dofs(mesh);
    if (dofs.size() == 0) return temp;
    const std::vector<double> load = dirac_load(mesh, data.dirac_sources);
    std::vector<double> rhs(dofs.size());
    for (std::size_t d = 0; d < dofs.size(); ++d) rhs[d] = load[at(dofs.dof_to_vertex[d])];
    const std::vector<double> sol = factor_solve(assemble_heat(mesh, data, u, dofs), rhs, ordering);
    for (std::size_t d = 0; d < dofs.size(); ++d) temp.coefficients[at(dofs.dof_to_vertex[d])] = sol[d];
    return temp;
}

Vec2 forchheimer_operator(double nu, Vec2 v) { return (nu + norm(v)) * v; }

}  // namespace dfh
