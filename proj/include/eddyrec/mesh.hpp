// Copyright (c) 2026 the eddyrec developers. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef EDDYREC_MESH_HPP
#define EDDYREC_MESH_HPP

#include <array>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace eddyrec
{

enum class Region : std::uint8_t
{
  Air,
  Conductor
};

enum class FaceLabel : std::uint8_t
{
  Gamma,   // measurement surface, z = z_top
  GammaD   // perfectly conducting walls, n x E = 0
};

struct Tet
{
  std::array<int, 4> v;  // positive orientation
  Region region;
};

struct BoundaryFace
{
  std::array<int, 3> v;  // sorted by global vertex id
  FaceLabel label;
  int tet;  // owning element
};

struct InterfaceFace
{
  std::array<int, 3> v;
  int tet_air;
  int tet_conductor;
};

// Axis-aligned box domain with the conductor below z_interface and air above.
struct BoxSpec
{
  Eigen::Vector3d lo;
  Eigen::Vector3d hi;
  std::array<int, 3> divisions;
  double z_interface;
  double z_top;
};

// Local edges of a tetrahedron in (vertex, vertex) index pairs. Whitney basis
// functions and all 6x6 element matrices use this ordering.
inline constexpr std::array<std::array<int, 2>, 6> kTetEdges = {
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

// Structured tetrahedral partition of the layered box. Immutable after
// construction; all derived classifications (dof maps, surface extraction)
// use the stored lattice indices rather than floating-point comparisons.
class TetMesh
{
public:
  std::vector<Eigen::Vector3d> vertices;
  std::vector<Tet> tets;

  // Global edges as sorted vertex pairs, in lexicographic order. The global
  // edge direction is from the lower to the higher vertex id.
  std::vector<std::array<int, 2>> edges;

  // Per-tet global edge ids and the sign relating the local Whitney function
  // (oriented by local vertex order) to the globally oriented one.
  std::vector<std::array<int, 6>> tet_edges;
  std::vector<std::array<std::int8_t, 6>> tet_edge_signs;

  std::vector<BoundaryFace> boundary_faces;
  std::vector<InterfaceFace> interface_faces;

  BoxSpec box;
  std::array<double, 3> spacing;
  int interface_layer = 0;  // lattice index of the z = z_interface plane

  int n_vertices() const { return static_cast<int>(vertices.size()); }
  int n_tets() const { return static_cast<int>(tets.size()); }
  int n_edges() const { return static_cast<int>(edges.size()); }

  // Lattice lookup for the structured grid; vertex ids are laid out as
  // ix + (nx+1) * (iy + (ny+1) * iz).
  int vertex_id(int ix, int iy, int iz) const;
  std::array<int, 3> lattice(int vertex) const;

  int edge_index(int a, int b) const;  // -1 if the pair is not a mesh edge

  // FNV-1a over the lattice metadata, vertex coordinates and connectivity.
  // Stable for identical build inputs; used to bind observation files to the
  // mesh they were generated on.
  std::uint64_t hash() const;
};

// Global numbering of the three unknown families:
//  - edge dofs: tangential field unknowns, essential (= 0) on GammaD edges;
//  - multiplier dofs: air-region nodal unknowns, free on Gamma, zero on the
//    rest of the air boundary;
//  - sigma dofs: conductivity unknowns on vertices strictly inside the
//    conductor (H^1_0 of the conductor region).
struct DofMap
{
  std::vector<int> edge_dof;        // per edge: free index or -1
  std::vector<int> multiplier_dof;  // per vertex: index or -1
  std::vector<int> sigma_dof;       // per vertex: index or -1

  std::vector<int> free_edges;           // inverse of edge_dof
  std::vector<int> multiplier_vertices;  // inverse of multiplier_dof
  std::vector<int> sigma_vertices;       // inverse of sigma_dof

  int n_edge_dofs() const { return static_cast<int>(free_edges.size()); }
  int n_multiplier_dofs() const { return static_cast<int>(multiplier_vertices.size()); }
  int n_sigma_dofs() const { return static_cast<int>(sigma_vertices.size()); }
};

// Builds the 6-tets-per-cube subdivision of the box. Throws MeshError when
// z_interface or z_top do not coincide with mesh planes (the diagnostic names
// the offending plane) or when the box is degenerate.
TetMesh build_box_mesh(const BoxSpec& spec);

DofMap build_dof_maps(const TetMesh& mesh);

}  // namespace eddyrec

#endif  // EDDYREC_MESH_HPP
