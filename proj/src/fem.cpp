// Copyright (c) 2026 the eddyrec developers. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "eddyrec/fem.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "eddyrec/errors.hpp"

namespace eddyrec
{

SigmaField zero_sigma(const DofMap& dofs)
{
  SigmaField sigma;
  sigma.values = Eigen::VectorXd::Zero(dofs.n_sigma_dofs());
  return sigma;
}

Eigen::Vector4d sigma_vertex_values(const DofMap& dofs, const SigmaField& sigma,
                                    const Tet& tet)
{
  Eigen::Vector4d values = Eigen::Vector4d::Zero();
  for (int i = 0; i < 4; ++i)
  {
    const int dof = dofs.sigma_dof[tet.v[i]];
    if (dof >= 0) values[i] = sigma.values[dof];
  }
  return values;
}

ElementGeometry element_geometry(const std::array<Eigen::Vector3d, 4>& x)
{
  Eigen::Matrix3d jac;
  jac.col(0) = x[1] - x[0];
  jac.col(1) = x[2] - x[0];
  jac.col(2) = x[3] - x[0];
  const double det = jac.determinant();
  const double scale = jac.colwise().norm().maxCoeff();
  if (!(det > 1e-12 * scale * scale * scale))
    throw MeshError("degenerate element: nonpositive volume");

  ElementGeometry g;
  g.x = x;
  const Eigen::Matrix3d inv = jac.inverse();
  for (int i = 0; i < 3; ++i) g.grad[i + 1] = inv.row(i);
  g.grad[0] = -(g.grad[1] + g.grad[2] + g.grad[3]);
  g.volume = det / 6.0;
  return g;
}

ElementGeometry element_geometry(const TetMesh& mesh, int tet)
{
  const auto& t = mesh.tets[tet];
  try
  {
    return element_geometry({mesh.vertices[t.v[0]], mesh.vertices[t.v[1]],
                             mesh.vertices[t.v[2]], mesh.vertices[t.v[3]]});
  }
  catch (const MeshError&)
  {
    std::ostringstream msg;
    msg << "degenerate element " << tet;
    throw MeshError(msg.str());
  }
}

void gauss_legendre_01(int n, std::vector<double>& nodes, std::vector<double>& weights)
{
  nodes.resize(n);
  weights.resize(n);
  for (int i = 0; i < n; ++i)
  {
    // Newton iteration on P_n over [-1, 1].
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it)
    {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k)
      {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = 0.5 * (1.0 - x);  // descending roots -> ascending nodes
    weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
}

const TetQuadRule& tet_quadrature()
{
  static const TetQuadRule rule = []
  {
    TetQuadRule r;
    std::vector<double> gx, gw;
    gauss_legendre_01(4, gx, gw);
    for (int iu = 0; iu < 4; ++iu)
      for (int iv = 0; iv < 4; ++iv)
        for (int iw = 0; iw < 4; ++iw)
        {
          const double u = gx[iu], v = gx[iv], w = gx[iw];
          const double x = u;
          const double y = v * (1.0 - u);
          const double z = w * (1.0 - u) * (1.0 - v);
          // Jacobian of the collapsed map, normalized by the simplex volume.
          const double wt =
              6.0 * gw[iu] * gw[iv] * gw[iw] * (1.0 - u) * (1.0 - u) * (1.0 - v);
          r.points.emplace_back(1.0 - x - y - z, x, y, z);
          r.weights.push_back(wt);
        }
    return r;
  }();
  return rule;
}

const TriQuadRule& tri_quadrature()
{
  static const TriQuadRule rule = []
  {
    TriQuadRule r;
    std::vector<double> gx, gw;
    gauss_legendre_01(4, gx, gw);
    for (int iu = 0; iu < 4; ++iu)
      for (int iv = 0; iv < 4; ++iv)
      {
        const double u = gx[iu], v = gx[iv];
        const double x = u;
        const double y = v * (1.0 - u);
        const double wt = 2.0 * gw[iu] * gw[iv] * (1.0 - u);
        r.points.emplace_back(1.0 - x - y, x, y);
        r.weights.push_back(wt);
      }
    return r;
  }();
  return rule;
}

Eigen::Vector3d whitney_curl(const ElementGeometry& g, int local_edge)
{
  const auto [a, b] = kTetEdges[local_edge];
  return 2.0 * g.grad[a].cross(g.grad[b]);
}

Eigen::Vector3d whitney_value(const ElementGeometry& g, int local_edge,
                              const Eigen::Vector4d& lambda)
{
  const auto [a, b] = kTetEdges[local_edge];
  return lambda[a] * g.grad[b] - lambda[b] * g.grad[a];
}

Mat6 local_curl_curl(const ElementGeometry& g, double mu)
{
  std::array<Eigen::Vector3d, 6> curls;
  for (int e = 0; e < 6; ++e) curls[e] = whitney_curl(g, e);
  Mat6 out;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) out(i, j) = g.volume / mu * curls[i].dot(curls[j]);
  return out;
}

Mat6 local_edge_mass(const ElementGeometry& g, const Eigen::Vector4d& weight)
{
  const auto& rule = tet_quadrature();
  Mat6 out = Mat6::Zero();
  std::array<Eigen::Vector3d, 6> values;
  for (std::size_t q = 0; q < rule.points.size(); ++q)
  {
    const Eigen::Vector4d& lambda = rule.points[q];
    const double w = rule.weights[q] * g.volume * weight.dot(lambda);
    for (int e = 0; e < 6; ++e) values[e] = whitney_value(g, e, lambda);
    for (int i = 0; i < 6; ++i)
      for (int j = i; j < 6; ++j) out(i, j) += w * values[i].dot(values[j]);
  }
  out = out.selfadjointView<Eigen::Upper>();
  return out;
}

Mat6x4 local_grad_coupling(const ElementGeometry& g, double eps)
{
  const auto& rule = tet_quadrature();
  Mat6x4 out = Mat6x4::Zero();
  for (std::size_t q = 0; q < rule.points.size(); ++q)
  {
    const Eigen::Vector4d& lambda = rule.points[q];
    const double w = rule.weights[q] * g.volume * eps;
    for (int i = 0; i < 6; ++i)
    {
      const Eigen::Vector3d ni = whitney_value(g, i, lambda);
      for (int p = 0; p < 4; ++p) out(i, p) += w * ni.dot(g.grad[p]);
    }
  }
  return out;
}

Mat6x4 local_grad_coupling(const TetMesh& mesh, int tet, double eps)
{
  if (mesh.tets[tet].region != Region::Air)
  {
    std::ostringstream msg;
    msg << "grad coupling requested on conductor tet " << tet;
    throw MeshError(msg.str());
  }
  return local_grad_coupling(element_geometry(mesh, tet), eps);
}

P1Matrices local_p1(const ElementGeometry& g, double coeff)
{
  P1Matrices out;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
    {
      out.stiffness(i, j) = coeff * g.volume * g.grad[i].dot(g.grad[j]);
      out.mass(i, j) = coeff * g.volume / 20.0 * (i == j ? 2.0 : 1.0);
    }
  return out;
}

Mat3 face_tangential_mass(const std::array<Eigen::Vector3d, 3>& x)
{
  const Eigen::Vector3d e1 = x[1] - x[0];
  const Eigen::Vector3d e2 = x[2] - x[0];
  const Eigen::Vector3d nrm = e1.cross(e2);
  const double area = 0.5 * nrm.norm();
  const double scale = std::max(e1.norm(), e2.norm());
  if (!(area > 1e-12 * scale * scale)) throw MeshError("degenerate surface triangle");

  // In-plane coordinates and the 2D barycentric gradients.
  const Eigen::Vector3d t1 = e1.normalized();
  const Eigen::Vector3d t2 = nrm.normalized().cross(t1);
  Eigen::Matrix2d jac;
  jac << e1.dot(t1), e2.dot(t1), e1.dot(t2), e2.dot(t2);
  const Eigen::Matrix2d inv = jac.inverse();
  std::array<Eigen::Vector2d, 3> grad;
  grad[1] = inv.row(0);
  grad[2] = inv.row(1);
  grad[0] = -(grad[1] + grad[2]);

  static constexpr std::array<std::array<int, 2>, 3> kFaceEdges = {
      {{0, 1}, {0, 2}, {1, 2}}};
  const auto& rule = tri_quadrature();
  Mat3 out = Mat3::Zero();
  for (std::size_t q = 0; q < rule.points.size(); ++q)
  {
    const Eigen::Vector3d& lambda = rule.points[q];
    const double w = rule.weights[q] * area;
    std::array<Eigen::Vector2d, 3> values;
    for (int e = 0; e < 3; ++e)
    {
      const auto [a, b] = kFaceEdges[e];
      values[e] = lambda[a] * grad[b] - lambda[b] * grad[a];
    }
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) out(i, j) += w * values[i].dot(values[j]);
  }
  return out;
}

Mat3 face_tangential_mass(const TetMesh& mesh, const BoundaryFace& face)
{
  if (face.label != FaceLabel::Gamma)
    throw MeshError("tangential mass requested on a face off the measurement surface");
  return face_tangential_mass(
      {mesh.vertices[face.v[0]], mesh.vertices[face.v[1]], mesh.vertices[face.v[2]]});
}

SaddleSystem assemble_state_system(const TetMesh& mesh, const DofMap& dofs,
                                   const Material& material, const SigmaField& sigma)
{
  const int n_edge = dofs.n_edge_dofs();
  const int n_mult = dofs.n_multiplier_dofs();
  SaddleSystem system;
  system.n_edge = n_edge;
  system.n_multiplier = n_mult;

  std::vector<Eigen::Triplet<Complex>> triplets;
  triplets.reserve(mesh.tets.size() * 48);
  for (int t = 0; t < mesh.n_tets(); ++t)
  {
    const auto& tet = mesh.tets[t];
    const ElementGeometry geom = element_geometry(mesh, t);
    const bool conductor = tet.region == Region::Conductor;

    Mat6 real_part = local_curl_curl(geom, material.mu);
    Mat6 imag_part = Mat6::Zero();
    if (conductor)
    {
      const Eigen::Vector4d weight =
          Eigen::Vector4d::Constant(material.sigma0) + sigma_vertex_values(dofs, sigma, tet);
      imag_part = -material.omega * local_edge_mass(geom, weight);
    }

    std::array<int, 6> dof;
    std::array<double, 6> sign;
    for (int e = 0; e < 6; ++e)
    {
      dof[e] = dofs.edge_dof[mesh.tet_edges[t][e]];
      sign[e] = mesh.tet_edge_signs[t][e];
    }
    for (int i = 0; i < 6; ++i)
    {
      if (dof[i] < 0) continue;
      for (int j = 0; j < 6; ++j)
      {
        if (dof[j] < 0) continue;
        const Complex value(sign[i] * sign[j] * real_part(i, j),
                            sign[i] * sign[j] * imag_part(i, j));
        triplets.emplace_back(dof[i], dof[j], value);
      }
    }

    if (!conductor)
    {
      const Mat6x4 coupling = local_grad_coupling(geom, material.eps);
      for (int p = 0; p < 4; ++p)
      {
        const int mdof = dofs.multiplier_dof[tet.v[p]];
        if (mdof < 0) continue;
        for (int i = 0; i < 6; ++i)
        {
          if (dof[i] < 0) continue;
          const double value = sign[i] * coupling(i, p);
          triplets.emplace_back(n_edge + mdof, dof[i], Complex(value, 0.0));
          triplets.emplace_back(dof[i], n_edge + mdof, Complex(value, 0.0));
        }
      }
    }
  }

  system.matrix.resize(n_edge + n_mult, n_edge + n_mult);
  system.matrix.setFromTriplets(triplets.begin(), triplets.end());
  system.matrix.makeCompressed();
  return system;
}

namespace
{

// Barycentric coordinates of p in tet t.
Eigen::Vector4d barycentric(const TetMesh& mesh, int t, const Eigen::Vector3d& p)
{
  const auto& tet = mesh.tets[t];
  Eigen::Matrix3d jac;
  jac.col(0) = mesh.vertices[tet.v[1]] - mesh.vertices[tet.v[0]];
  jac.col(1) = mesh.vertices[tet.v[2]] - mesh.vertices[tet.v[0]];
  jac.col(2) = mesh.vertices[tet.v[3]] - mesh.vertices[tet.v[0]];
  const Eigen::Vector3d rel = jac.inverse() * (p - mesh.vertices[tet.v[0]]);
  return {1.0 - rel.sum(), rel[0], rel[1], rel[2]};
}

}  // namespace

Eigen::VectorXcd assemble_dipole_rhs(const TetMesh& mesh, const DofMap& dofs,
                                     const std::vector<Eigen::Vector3d>& points,
                                     const Eigen::Vector3d& direction, double omega)
{
  constexpr double kBoundaryTol = 1e-12;
  Eigen::VectorXcd load = Eigen::VectorXcd::Zero(dofs.n_edge_dofs());
  const Complex i_omega(0.0, omega);
  const auto& n = mesh.box.divisions;

  for (std::size_t p = 0; p < points.size(); ++p)
  {
    const Eigen::Vector3d& pt = points[p];
    std::array<int, 3> cell;
    bool outside = false;
    for (int d = 0; d < 3; ++d)
    {
      const double rel = (pt[d] - mesh.box.lo[d]) / mesh.spacing[d];
      cell[d] = std::clamp(static_cast<int>(std::floor(rel)), 0, n[d] - 1);
      outside = outside || rel < -kBoundaryTol || rel > n[d] + kBoundaryTol;
    }
    if (outside)
    {
      std::ostringstream msg;
      msg << "source point " << p << " lies outside the mesh";
      throw MeshError(msg.str());
    }

    const int base = 6 * (cell[0] + n[0] * (cell[1] + n[1] * cell[2]));
    int best_tet = -1;
    double best_min = -1.0;
    for (int k = 0; k < 6; ++k)
    {
      const double min_coord = barycentric(mesh, base + k, pt).minCoeff();
      if (min_coord > best_min)
      {
        best_min = min_coord;
        best_tet = base + k;
      }
    }
    if (best_min < kBoundaryTol)
    {
      std::ostringstream msg;
      msg << "source point " << p << " lies on an element boundary";
      throw MeshError(msg.str());
    }

    const ElementGeometry geom = element_geometry(mesh, best_tet);
    for (int e = 0; e < 6; ++e)
    {
      const int dof = dofs.edge_dof[mesh.tet_edges[best_tet][e]];
      if (dof < 0) continue;
      load[dof] += i_omega * static_cast<double>(mesh.tet_edge_signs[best_tet][e]) *
                   direction.dot(whitney_curl(geom, e));
    }
  }
  return load;
}

Eigen::VectorXcd assemble_volume_load(
    const TetMesh& mesh, const DofMap& dofs,
    const std::function<Eigen::Vector3cd(const Eigen::Vector3d&)>& f)
{
  const auto& rule = tet_quadrature();
  Eigen::VectorXcd load = Eigen::VectorXcd::Zero(dofs.n_edge_dofs());
  for (int t = 0; t < mesh.n_tets(); ++t)
  {
    const ElementGeometry geom = element_geometry(mesh, t);
    for (std::size_t q = 0; q < rule.points.size(); ++q)
    {
      const Eigen::Vector4d& lambda = rule.points[q];
      Eigen::Vector3d xq = Eigen::Vector3d::Zero();
      for (int i = 0; i < 4; ++i) xq += lambda[i] * geom.x[i];
      const Eigen::Vector3cd fq = f(xq) * (rule.weights[q] * geom.volume);
      for (int e = 0; e < 6; ++e)
      {
        const int dof = dofs.edge_dof[mesh.tet_edges[t][e]];
        if (dof < 0) continue;
        load[dof] += static_cast<double>(mesh.tet_edge_signs[t][e]) *
                     fq.dot(whitney_value(geom, e, lambda).cast<Complex>());
      }
    }
  }
  return load;
}

GammaSurface build_gamma_surface(const TetMesh& mesh)
{
  GammaSurface surface;
  surface.slot_of.assign(mesh.n_edges(), -1);

  std::vector<int> edges;
  for (std::size_t f = 0; f < mesh.boundary_faces.size(); ++f)
  {
    const auto& face = mesh.boundary_faces[f];
    if (face.label != FaceLabel::Gamma) continue;
    surface.gamma_faces.push_back(static_cast<int>(f));
    edges.push_back(mesh.edge_index(face.v[0], face.v[1]));
    edges.push_back(mesh.edge_index(face.v[0], face.v[2]));
    edges.push_back(mesh.edge_index(face.v[1], face.v[2]));
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  surface.edges = std::move(edges);
  for (std::size_t s = 0; s < surface.edges.size(); ++s)
    surface.slot_of[surface.edges[s]] = static_cast<int>(s);

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(surface.gamma_faces.size() * 9);
  for (const int f : surface.gamma_faces)
  {
    const auto& face = mesh.boundary_faces[f];
    const Mat3 local = face_tangential_mass(mesh, face);
    const std::array<int, 3> slots = {
        surface.slot_of[mesh.edge_index(face.v[0], face.v[1])],
        surface.slot_of[mesh.edge_index(face.v[0], face.v[2])],
        surface.slot_of[mesh.edge_index(face.v[1], face.v[2])]};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        triplets.emplace_back(slots[i], slots[j], local(i, j));
  }
  const int n = static_cast<int>(surface.edges.size());
  surface.mass.resize(n, n);
  surface.mass.setFromTriplets(triplets.begin(), triplets.end());
  surface.mass.makeCompressed();
  return surface;
}

}  // namespace eddyrec
