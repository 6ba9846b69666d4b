// Copyright (c) 2026 the eddyrec developers. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#include "eddyrec/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <sstream>

#include "eddyrec/errors.hpp"

namespace eddyrec
{

namespace
{

// Lattice index of a plane coordinate, or -1 when the plane does not line up
// with the grid.
int plane_index(double value, double lo, double h, int n)
{
  const double k = (value - lo) / h;
  const int ki = static_cast<int>(std::lround(k));
  if (ki < 0 || ki > n || std::abs(k - ki) > 1e-9) return -1;
  return ki;
}

std::uint64_t fnv1a(std::uint64_t hash, const void* data, std::size_t size)
{
  const auto* bytes = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < size; ++i)
  {
    hash ^= bytes[i];
    hash *= 0x100000001b3ull;
  }
  return hash;
}

double signed_volume(const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                     const Eigen::Vector3d& c, const Eigen::Vector3d& d)
{
  return (b - a).cross(c - a).dot(d - a) / 6.0;
}

}  // namespace

int TetMesh::vertex_id(int ix, int iy, int iz) const
{
  const int nx = box.divisions[0];
  const int ny = box.divisions[1];
  return ix + (nx + 1) * (iy + (ny + 1) * iz);
}

std::array<int, 3> TetMesh::lattice(int vertex) const
{
  const int nx = box.divisions[0];
  const int ny = box.divisions[1];
  const int ix = vertex % (nx + 1);
  const int iy = (vertex / (nx + 1)) % (ny + 1);
  const int iz = vertex / ((nx + 1) * (ny + 1));
  return {ix, iy, iz};
}

int TetMesh::edge_index(int a, int b) const
{
  if (a > b) std::swap(a, b);
  const std::array<int, 2> key = {a, b};
  const auto it = std::lower_bound(edges.begin(), edges.end(), key);
  if (it == edges.end() || *it != key) return -1;
  return static_cast<int>(it - edges.begin());
}

std::uint64_t TetMesh::hash() const
{
  std::uint64_t h = 0xcbf29ce484222325ull;
  h = fnv1a(h, box.divisions.data(), sizeof(box.divisions));
  const double meta[8] = {box.lo.x(), box.lo.y(), box.lo.z(), box.hi.x(),
                          box.hi.y(), box.hi.z(), box.z_interface, box.z_top};
  h = fnv1a(h, meta, sizeof(meta));
  for (const auto& v : vertices) h = fnv1a(h, v.data(), 3 * sizeof(double));
  for (const auto& t : tets)
  {
    h = fnv1a(h, t.v.data(), sizeof(t.v));
    const auto r = static_cast<std::uint8_t>(t.region);
    h = fnv1a(h, &r, 1);
  }
  return h;
}

TetMesh build_box_mesh(const BoxSpec& spec)
{
  const int nx = spec.divisions[0];
  const int ny = spec.divisions[1];
  const int nz = spec.divisions[2];
  if (nx < 1 || ny < 1 || nz < 1) throw MeshError("divisions must be positive");
  for (int d = 0; d < 3; ++d)
  {
    if (!(spec.hi[d] > spec.lo[d])) throw MeshError("degenerate box bounds");
  }
  if (!(spec.z_interface < spec.z_top))
    throw MeshError("z_interface must lie below z_top");

  TetMesh mesh;
  mesh.box = spec;
  mesh.spacing = {(spec.hi.x() - spec.lo.x()) / nx, (spec.hi.y() - spec.lo.y()) / ny,
                  (spec.hi.z() - spec.lo.z()) / nz};

  const int k_if = plane_index(spec.z_interface, spec.lo.z(), mesh.spacing[2], nz);
  if (k_if < 0)
  {
    std::ostringstream msg;
    msg << "z_interface plane z = " << spec.z_interface
        << " is not aligned with a mesh plane (dz = " << mesh.spacing[2] << ")";
    throw MeshError(msg.str());
  }
  const int k_top = plane_index(spec.z_top, spec.lo.z(), mesh.spacing[2], nz);
  if (k_top != nz)
  {
    std::ostringstream msg;
    msg << "z_top plane z = " << spec.z_top
        << " must coincide with the top of the box z = " << spec.hi.z();
    throw MeshError(msg.str());
  }
  if (k_if == 0 || k_if == nz)
    throw MeshError("z_interface must be strictly inside the box");
  mesh.interface_layer = k_if;

  mesh.vertices.reserve(static_cast<std::size_t>(nx + 1) * (ny + 1) * (nz + 1));
  for (int iz = 0; iz <= nz; ++iz)
    for (int iy = 0; iy <= ny; ++iy)
      for (int ix = 0; ix <= nx; ++ix)
        mesh.vertices.emplace_back(spec.lo.x() + ix * mesh.spacing[0],
                                   spec.lo.y() + iy * mesh.spacing[1],
                                   spec.lo.z() + iz * mesh.spacing[2]);

  // Kuhn subdivision: one tet per monotone lattice path from the low corner
  // of a cell to its high corner. Shared cell faces receive the same diagonal
  // in neighbouring cells, so the mesh is conforming.
  static constexpr int kPaths[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                       {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  mesh.tets.reserve(static_cast<std::size_t>(6) * nx * ny * nz);
  for (int kz = 0; kz < nz; ++kz)
  {
    const Region region = kz >= k_if ? Region::Air : Region::Conductor;
    for (int ky = 0; ky < ny; ++ky)
      for (int kx = 0; kx < nx; ++kx)
        for (const auto& path : kPaths)
        {
          std::array<int, 3> corner = {kx, ky, kz};
          std::array<int, 4> ids;
          ids[0] = mesh.vertex_id(corner[0], corner[1], corner[2]);
          corner[path[0]]++;
          ids[1] = mesh.vertex_id(corner[0], corner[1], corner[2]);
          corner[path[1]]++;
          ids[2] = mesh.vertex_id(corner[0], corner[1], corner[2]);
          corner[path[2]]++;
          ids[3] = mesh.vertex_id(corner[0], corner[1], corner[2]);
          if (signed_volume(mesh.vertices[ids[0]], mesh.vertices[ids[1]],
                            mesh.vertices[ids[2]], mesh.vertices[ids[3]]) < 0)
            std::swap(ids[2], ids[3]);
          mesh.tets.push_back({ids, region});
        }
  }

  // Deduplicated edge set in lexicographic order.
  std::vector<std::array<int, 2>> all_edges;
  all_edges.reserve(mesh.tets.size() * 6);
  for (const auto& tet : mesh.tets)
    for (const auto& e : kTetEdges)
    {
      int a = tet.v[e[0]];
      int b = tet.v[e[1]];
      if (a > b) std::swap(a, b);
      all_edges.push_back({a, b});
    }
  std::sort(all_edges.begin(), all_edges.end());
  all_edges.erase(std::unique(all_edges.begin(), all_edges.end()), all_edges.end());
  mesh.edges = std::move(all_edges);

  mesh.tet_edges.resize(mesh.tets.size());
  mesh.tet_edge_signs.resize(mesh.tets.size());
  for (std::size_t t = 0; t < mesh.tets.size(); ++t)
    for (std::size_t le = 0; le < kTetEdges.size(); ++le)
    {
      const int a = mesh.tets[t].v[kTetEdges[le][0]];
      const int b = mesh.tets[t].v[kTetEdges[le][1]];
      mesh.tet_edges[t][le] = mesh.edge_index(a, b);
      mesh.tet_edge_signs[t][le] = static_cast<std::int8_t>(a < b ? 1 : -1);
    }

  // Face incidence: boundary faces appear once, interior faces exactly twice.
  static constexpr int kTetFaces[4][3] = {{1, 2, 3}, {0, 2, 3}, {0, 1, 3}, {0, 1, 2}};
  std::map<std::array<int, 3>, std::array<int, 2>> face_tets;
  for (std::size_t t = 0; t < mesh.tets.size(); ++t)
    for (const auto& f : kTetFaces)
    {
      std::array<int, 3> key = {mesh.tets[t].v[f[0]], mesh.tets[t].v[f[1]],
                                mesh.tets[t].v[f[2]]};
      std::sort(key.begin(), key.end());
      auto [it, inserted] = face_tets.try_emplace(key, std::array<int, 2>{-1, -1});
      if (inserted)
        it->second[0] = static_cast<int>(t);
      else if (it->second[1] == -1)
        it->second[1] = static_cast<int>(t);
      else
        throw MeshError("face shared by more than two tets");
    }

  const int nz_planes = nz;
  for (const auto& [key, owners] : face_tets)
  {
    if (owners[1] == -1)
    {
      const bool on_top = mesh.lattice(key[0])[2] == nz_planes &&
                          mesh.lattice(key[1])[2] == nz_planes &&
                          mesh.lattice(key[2])[2] == nz_planes;
      mesh.boundary_faces.push_back(
          {key, on_top ? FaceLabel::Gamma : FaceLabel::GammaD, owners[0]});
    }
    else if (mesh.tets[owners[0]].region != mesh.tets[owners[1]].region)
    {
      const bool first_air = mesh.tets[owners[0]].region == Region::Air;
      mesh.interface_faces.push_back({key, first_air ? owners[0] : owners[1],
                                      first_air ? owners[1] : owners[0]});
    }
  }

  return mesh;
}

DofMap build_dof_maps(const TetMesh& mesh)
{
  DofMap dofs;
  const int nx = mesh.box.divisions[0];
  const int ny = mesh.box.divisions[1];
  const int k_if = mesh.interface_layer;

  // Edges of any GammaD face carry the essential condition n x E = 0. Edges
  // on the boundary ring of Gamma belong to a lateral wall as well, so they
  // end up essential too.
  std::vector<char> essential(mesh.edges.size(), 0);
  for (const auto& face : mesh.boundary_faces)
  {
    if (face.label != FaceLabel::GammaD) continue;
    essential[mesh.edge_index(face.v[0], face.v[1])] = 1;
    essential[mesh.edge_index(face.v[0], face.v[2])] = 1;
    essential[mesh.edge_index(face.v[1], face.v[2])] = 1;
  }
  dofs.edge_dof.assign(mesh.edges.size(), -1);
  for (std::size_t e = 0; e < mesh.edges.size(); ++e)
    if (!essential[e])
    {
      dofs.edge_dof[e] = static_cast<int>(dofs.free_edges.size());
      dofs.free_edges.push_back(static_cast<int>(e));
    }

  dofs.multiplier_dof.assign(mesh.vertices.size(), -1);
  dofs.sigma_dof.assign(mesh.vertices.size(), -1);
  for (int v = 0; v < mesh.n_vertices(); ++v)
  {
    const auto [ix, iy, iz] = mesh.lattice(v);
    const bool lateral = ix == 0 || ix == nx || iy == 0 || iy == ny;
    // Multiplier space: air vertices, free on Gamma, zero on the interface
    // and the lateral walls of the air region.
    if (iz > k_if && !lateral)
    {
      dofs.multiplier_dof[v] = static_cast<int>(dofs.multiplier_vertices.size());
      dofs.multiplier_vertices.push_back(v);
    }
    // Conductivity space: vertices strictly interior to the conductor.
    if (iz > 0 && iz < k_if && !lateral)
    {
      dofs.sigma_dof[v] = static_cast<int>(dofs.sigma_vertices.size());
      dofs.sigma_vertices.push_back(v);
    }
  }
  return dofs;
}

}  // namespace eddyrec
