// Consistency-rate studies: the theorem left-hand quantities evaluated on a
// refinement sequence of meshes with smooth data, fitted on log-log axes.
// Non-polynomial integrands share the operator quadrature; the reported
// quad_delta is the change under one quadrature refinement, never silently
// absorbed into the error.

#ifndef STOKESBGG_RATES_HPP
#define STOKESBGG_RATES_HPP

#include <vector>

#include "stokesbgg/assembly.hpp"

namespace stokesbgg {

enum class StudyKind {
  Potential,    // scalar potential error, order k+2
  Gradient,     // h-weighted gradient reconstruction error, order k+2
  Rot,          // scalar rot error, order k+1
  ProductGrad,  // dual-norm mismatch of the head product, order k+2
  ProductRot,   // dual-norm mismatch of the middle product, order k+1
  AdjointGrad,  // adjoint consistency of the gradient, order k+1
  AdjointRot,   // adjoint consistency of the rot, order k+1
};

std::string to_string(StudyKind kind);
StudyKind study_kind_from_string(const std::string& name);

struct SmoothScalar {
  ScalarField value;
  VectorField gradient;
};

struct SmoothVector {
  VectorField value;
  ScalarField rot;
  ScalarField div;
};

struct RateStudy {
  StudyKind kind;
  double target = 0.;
  std::vector<double> h, error, quad_delta;
  double slope = 0.;
  double fit_residual = 0.;
  bool degenerate = false;  // errors at the exactness floor, no slope fitted
};

/// Runs one study over a mesh family. The scalar field feeds the head-space
/// studies and the discrete argument of the adjoint-gradient study; the vector
/// field feeds the middle-space studies and the adjoint data.
RateStudy consistency_study(StudyKind kind, const SmoothScalar& q, const SmoothVector& v,
                            const std::vector<PolyMesh>& meshes, int k);

}  // namespace stokesbgg

#endif
