// Copyright (c) 2026 the eddyrec developers. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef EDDYREC_FEM_HPP
#define EDDYREC_FEM_HPP

#include <array>
#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "eddyrec/mesh.hpp"

namespace eddyrec
{

using Complex = std::complex<double>;

struct Material
{
  double mu = 1.0;      // magnetic permeability
  double eps = 1.0;     // electric permittivity of the air region
  double sigma0 = 1.0;  // background conductivity of the conductor region
  double omega = 0.79;  // angular frequency
};

// Nodal anomaly conductivity over the sigma dofs; implicitly zero on the
// conductor boundary and outside the conductor.
struct SigmaField
{
  Eigen::VectorXd values;
};

SigmaField zero_sigma(const DofMap& dofs);

// Values of a SigmaField at the four vertices of a tet (zero off the dofs).
Eigen::Vector4d sigma_vertex_values(const DofMap& dofs, const SigmaField& sigma,
                                    const Tet& tet);

// Precomputed affine geometry of one tet: vertex coordinates, barycentric
// gradients and volume. Throws MeshError for degenerate elements.
struct ElementGeometry
{
  std::array<Eigen::Vector3d, 4> x;
  std::array<Eigen::Vector3d, 4> grad;
  double volume;
};

ElementGeometry element_geometry(const std::array<Eigen::Vector3d, 4>& x);
ElementGeometry element_geometry(const TetMesh& mesh, int tet);

// ---------------------------------------------------------------------------
// Quadrature. One volume rule is used for every weighted integral in the
// project: a tensor-product Gauss rule collapsed onto the simplex, exact for
// total degree <= 5. Points are stored in barycentric coordinates and the
// weights sum to one, so integral(K, f) ~= V * sum_q w_q f(x_q).
// ---------------------------------------------------------------------------
struct TetQuadRule
{
  std::vector<Eigen::Vector4d> points;  // barycentric
  std::vector<double> weights;
};

struct TriQuadRule
{
  std::vector<Eigen::Vector3d> points;  // barycentric
  std::vector<double> weights;
};

const TetQuadRule& tet_quadrature();
const TriQuadRule& tri_quadrature();

// Gauss-Legendre nodes/weights on [0, 1].
void gauss_legendre_01(int n, std::vector<double>& nodes, std::vector<double>& weights);

// ---------------------------------------------------------------------------
// Local element matrices for the lowest-order Nedelec (Whitney) edge space
// and the P1 nodal space. Rows/columns follow kTetEdges in the element-local
// orientation; global orientation signs are applied during assembly.
// ---------------------------------------------------------------------------

using Mat6 = Eigen::Matrix<double, 6, 6>;
using Mat6x4 = Eigen::Matrix<double, 6, 4>;
using Mat4 = Eigen::Matrix<double, 4, 4>;
using Mat3 = Eigen::Matrix<double, 3, 3>;

// Constant curl of the local Whitney function for edge e.
Eigen::Vector3d whitney_curl(const ElementGeometry& g, int local_edge);

// Whitney function value at a barycentric point.
Eigen::Vector3d whitney_value(const ElementGeometry& g, int local_edge,
                              const Eigen::Vector4d& lambda);

// integral mu^{-1} (curl N_i) . (curl N_j); one-point evaluation is exact.
Mat6 local_curl_curl(const ElementGeometry& g, double mu);

// integral w(x) N_i . N_j with w linear (vertex values `weight`).
Mat6 local_edge_mass(const ElementGeometry& g, const Eigen::Vector4d& weight);

// integral eps N_i . grad(lambda_p); the air-region coupling block.
Mat6x4 local_grad_coupling(const ElementGeometry& g, double eps);
// Region-checked variant; throws MeshError when called on a conductor tet.
Mat6x4 local_grad_coupling(const TetMesh& mesh, int tet, double eps);

struct P1Matrices
{
  Mat4 stiffness;
  Mat4 mass;
};

// Exact P1 stiffness and mass, both scaled by `coeff`.
P1Matrices local_p1(const ElementGeometry& g, double coeff);

// 2D Whitney edge mass of a triangle: entries are surface integrals of the
// tangential traces, rows/columns ordered by the sorted-vertex edge pairs
// (0,1), (0,2), (1,2).
Mat3 face_tangential_mass(const std::array<Eigen::Vector3d, 3>& x);
// Label-checked variant for measurement-surface faces.
Mat3 face_tangential_mass(const TetMesh& mesh, const BoundaryFace& face);

// ---------------------------------------------------------------------------
// Global assembly.
// ---------------------------------------------------------------------------

// Complex symmetric saddle matrix over [free edge dofs | multiplier dofs]:
//   [ A(sigma)  B^T ]     A_jk = int mu^{-1} curl N_k . curl N_j
//   [ B         0   ]           - i omega (sigma0 + sigma) N_k . N_j
//                         B_pk = int_air eps N_k . grad(lambda_p)
struct SaddleSystem
{
  Eigen::SparseMatrix<Complex> matrix;
  int n_edge = 0;
  int n_multiplier = 0;
};

SaddleSystem assemble_state_system(const TetMesh& mesh, const DofMap& dofs,
                                   const Material& material, const SigmaField& sigma);

// Weak action of the dipole source i omega curl(sum_p delta(x - x_p) dir) on
// the edge space. Every point must lie strictly inside a tet; points within
// tolerance of an element boundary are rejected with their index.
Eigen::VectorXcd assemble_dipole_rhs(const TetMesh& mesh, const DofMap& dofs,
                                     const std::vector<Eigen::Vector3d>& points,
                                     const Eigen::Vector3d& direction, double omega);

// Generic volume load integral f . N_j, used by the manufactured-solution
// checks. f is evaluated at physical quadrature points.
Eigen::VectorXcd assemble_volume_load(
    const TetMesh& mesh, const DofMap& dofs,
    const std::function<Eigen::Vector3cd(const Eigen::Vector3d&)>& f);

// Measurement surface: the Gamma edges in a fixed order together with the
// assembled tangential mass matrix over them.
struct GammaSurface
{
  std::vector<int> edges;        // global edge ids, ascending
  std::vector<int> slot_of;      // per global edge: surface slot or -1
  std::vector<int> gamma_faces;  // indices into mesh.boundary_faces
  Eigen::SparseMatrix<double> mass;
};

GammaSurface build_gamma_surface(const TetMesh& mesh);

}  // namespace eddyrec

#endif  // EDDYREC_FEM_HPP
