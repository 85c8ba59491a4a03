// Global sparse assembly of the discrete operators over DOF layouts.
// Assembly is deterministic: triplets are emitted in a fixed entity order, so
// repeated assemblies are bit-identical.

#ifndef STOKESBGG_ASSEMBLY_HPP
#define STOKESBGG_ASSEMBLY_HPP

#include <Eigen/Sparse>
#include <string>

#include "stokesbgg/context.hpp"
#include "stokesbgg/potentials.hpp"

namespace stokesbgg {

enum class Op {
  SGrad,          // X_Sgrad -> X_Srot
  TGrad,          // X_Srot -> X_ddr_rot
  SRot,           // X_Srot -> P^k(T_h)
  TRot,           // X_ddr_rot -> P^{k+1}(T_h)^2
  Sskw,           // X_ddr_rot -> P^k(T_h)
  Hess,           // X_Sgrad -> X_ddr_rot (composition)
  SymEmbed,       // X_ddr_rot_sym -> X_ddr_rot
  TRotSym,        // X_ddr_rot_sym -> P^{k+1}(T_h)^2
  G0,             // DDR0 gradient (per-edge values)
  C0,             // DDR0 curl into P^0(T_h) coefficients
  Pi0,            // P^k(T_h) -> P^0(T_h) coefficient truncation
  RGrad,          // X_Sgrad -> DDR0_grad
  RRot,           // X_Srot -> DDR0_curl
  EGrad,          // DDR0_grad -> X_Sgrad
  ERot,           // DDR0_curl -> X_Srot
  Inj0,           // P^0(T_h) -> P^k(T_h) coefficient injection
  GramSGradComp,  // component-norm Gram on X_Sgrad (diagonal)
  GramSRotComp,   // component-norm Gram on X_Srot (diagonal)
  GramSGradProd,  // stabilised product Gram on X_Sgrad
  GramSRotProd,   // stabilised product Gram on X_Srot
};

std::string to_string(Op op);
Op op_from_string(const std::string& name);

struct GlobalOperator {
  DofLayout source, target;
  Eigen::SparseMatrix<double> mat;
};

GlobalOperator assemble(Op op, const MeshContext& mc);

/// Block operators of the twisted complex:
///   A0 = [[SGrad, -Id ], [0, TGrad]]  and  A1 = [[SRot, -Sskw], [0, TRot]].
struct TwistedOperators {
  Eigen::SparseMatrix<double> A0, A1;
  int dim0, dim1, dim2;  // stacked space dimensions
};

TwistedOperators twisted_operators(const MeshContext& mc);

}  // namespace stokesbgg

#endif
