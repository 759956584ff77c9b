#pragma once

#include <vector>

#include "gsma/pencil.hpp"
#include "gsma/selectors.hpp"
#include "gsma/types.hpp"

namespace gsma {

/// One dynamic subsystem E_k ẋ = A_k x + B_k u, y = C_k x + D_k u with an
/// equal number of inputs and outputs.
struct Subsystem {
  Matrix E, A, B, C, D;
  Index states() const { return A.rows(); }
  Index io() const { return D.rows(); }
};

/// Static coupling [J11 J12; J21 J22]·[x_I; x_A] = [x_O; 0].
struct Interconnection {
  Matrix J11, J12, J21, J22;
  Index io() const { return J11.rows(); }
  Index algebraic() const { return J22.rows(); }
};

struct CompositeModel {
  std::vector<Subsystem> subsystems;
  Interconnection interconnection;

  Index total_states() const;
  Index total_io() const;
  Index dimension() const;  // states + 2·io + algebraic
  void validate() const;
};

/// Monolithic pencil over [x_M; x_I; x_O; x_A].
ProjectionPencil assemble_monolithic(const CompositeModel& model);

/// Per-subsystem reduced matrices and frequency-dependent corrections at λ.
struct SubsystemHTerms {
  Matrix A_r, B_r, C_r;
  Matrix H_A, H_B, H_C, H_D;
};

/// pair_k is the subsystem-level pair (E_Mk, F_Mk), normalized against E_k.
SubsystemHTerms subsystem_h_terms(const Subsystem& sub, const SubspacePair& pair_k,
                                  Complex lambda);

/// A_r + H(λ) assembled from subsystem terms and the bordered J solve.
Matrix composite_h(const CompositeModel& model, const std::vector<SubspacePair>& pairs,
                   Complex lambda);

/// Full eigenvector [v_M; v_I; v_O; v_A] for a converged (λ, α) through the
/// subsystem chain and the interconnection solve.
Vector recover_composite_eigenvector(const CompositeModel& model,
                                     const std::vector<SubspacePair>& pairs, Complex lambda,
                                     const Vector& alpha);

/// Embeds per-subsystem pairs into monolithic coordinates (zero rows over
/// x_I, x_O, x_A), mirroring the stacked variable structure.
SubspacePair embed_pairs(const CompositeModel& model, const std::vector<SubspacePair>& pairs);

/// Algorithms 3 and 4 driven through the composite H(λ) assembly.  The
/// monolithic pencil is used for residuals and left-vector recovery.
SolveResult composite_algorithm3(const CompositeModel& model,
                                 const std::vector<SubspacePair>& pairs,
                                 const ModeSelector& selector, const SolverOptions& opts = {});

SolveResult composite_algorithm4(const CompositeModel& model,
                                 const std::vector<SubspacePair>& pairs0,
                                 const ModeSelector& selector, const SolverOptions& opts = {});

}  // namespace gsma
