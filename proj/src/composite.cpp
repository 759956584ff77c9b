#include "gsma/composite.hpp"

#include <Eigen/Dense>

#include "gsma/errors.hpp"
#include "gsma/generalized.hpp"
#include "reduced_iteration.hpp"

namespace gsma {

Index CompositeModel::total_states() const {
  Index s = 0;
  for (const auto& sub : subsystems) s += sub.states();
  return s;
}

Index CompositeModel::total_io() const {
  Index s = 0;
  for (const auto& sub : subsystems) s += sub.io();
  return s;
}

Index CompositeModel::dimension() const {
  return total_states() + 2 * total_io() + interconnection.algebraic();
}

void CompositeModel::validate() const {
  if (subsystems.empty()) throw InvalidArgument("composite: no subsystems");
  for (const auto& sub : subsystems) {
    const Index ms = sub.states(), io = sub.io();
    if (sub.E.rows() != ms || sub.E.cols() != ms || sub.A.cols() != ms)
      throw DimensionMismatch("composite: subsystem E/A dimensions inconsistent");
    if (sub.B.rows() != ms || sub.B.cols() != io || sub.C.rows() != io || sub.C.cols() != ms ||
        sub.D.cols() != io)
      throw DimensionMismatch("composite: subsystem B/C/D dimensions inconsistent");
    const double scale = 1.0 + norm_inf(sub.E);
    if ((sub.E * sub.E - sub.E).norm() > 1e-10 * scale ||
        (sub.E - sub.E.adjoint()).norm() > 1e-10 * scale)
      throw InvalidArgument("composite: subsystem E is not a symmetric projection");
  }
  const auto& J = interconnection;
  const Index io = total_io(), alg = J.algebraic();
  if (J.J11.rows() != io || J.J11.cols() != io || J.J12.rows() != io || J.J12.cols() != alg ||
      J.J21.rows() != alg || J.J21.cols() != io || J.J22.cols() != alg)
    throw DimensionMismatch("composite: interconnection blocks inconsistent with io sum");
}

ProjectionPencil assemble_monolithic(const CompositeModel& model) {
  model.validate();
  const Index ms = model.total_states(), io = model.total_io();
  const Index alg = model.interconnection.algebraic();
  const Index m = ms + 2 * io + alg;
  const Index off_I = ms, off_O = ms + io, off_A = ms + 2 * io;

  std::vector<Eigen::Triplet<Complex>> eT, aT;
  auto add_block = [](std::vector<Eigen::Triplet<Complex>>& t, const Matrix& M, Index r0, Index c0,
                      Complex scale = Complex(1, 0)) {
    for (Index j = 0; j < M.cols(); ++j)
      for (Index i = 0; i < M.rows(); ++i)
        if (M(i, j) != Complex(0, 0)) t.emplace_back(r0 + i, c0 + j, scale * M(i, j));
  };

  // Equation rows: dynamic [0,ms), output definitions [ms,ms+io),
  // network coupling [ms+io,ms+2io), algebraic closure [ms+2io,m).
  Index so = 0, oo = 0;
  for (const auto& sub : model.subsystems) {
    add_block(eT, sub.E, so, so);
    // λE_k x_Mk = A_k x_Mk + B_k x_Ik
    add_block(aT, sub.A, so, so);
    add_block(aT, sub.B, so, off_I + oo);
    // 0 = C_k x_Mk + D_k x_Ik - x_Ok
    add_block(aT, sub.C, off_I + oo, so);
    add_block(aT, sub.D, off_I + oo, off_I + oo);
    for (Index i = 0; i < sub.io(); ++i)
      aT.emplace_back(off_I + oo + i, off_O + oo + i, Complex(-1, 0));
    so += sub.states();
    oo += sub.io();
  }
  // 0 = -J11 x_I + x_O - J12 x_A
  add_block(aT, model.interconnection.J11, off_O, off_I, Complex(-1, 0));
  for (Index i = 0; i < io; ++i) aT.emplace_back(off_O + i, off_O + i, Complex(1, 0));
  add_block(aT, model.interconnection.J12, off_O, off_A, Complex(-1, 0));
  // 0 = -J21 x_I - J22 x_A
  add_block(aT, model.interconnection.J21, off_A, off_I, Complex(-1, 0));
  add_block(aT, model.interconnection.J22, off_A, off_A, Complex(-1, 0));

  SparseMatrix E(m, m), A(m, m);
  E.setFromTriplets(eT.begin(), eT.end());
  A.setFromTriplets(aT.begin(), aT.end());
  return ProjectionPencil(std::move(E), std::move(A));
}

namespace {

Matrix apply_Pk(const Matrix& EEk, const Matrix& EFk, const Matrix& X) {
  return X - EEk * (EFk.adjoint() * X);
}

}  // namespace

SubsystemHTerms subsystem_h_terms(const Subsystem& sub, const SubspacePair& pair_k,
                                  Complex lambda) {
  const Index ms = sub.states(), n = pair_k.n();
  if (pair_k.basis_right.rows() != ms)
    throw DimensionMismatch("subsystem_h_terms: pair does not match subsystem dimension");

  SubsystemHTerms t;
  const Matrix EE = sub.E * pair_k.basis_right;
  const Matrix EF = sub.E * pair_k.basis_left;
  const Matrix AE = sub.A * pair_k.basis_right;
  const Matrix FA = pair_k.basis_left.adjoint() * sub.A;  // F†A

  t.A_r = FA * pair_k.basis_right;
  t.B_r = pair_k.basis_left.adjoint() * sub.B;
  t.C_r = sub.C * pair_k.basis_right;

  // anticommutator form of the subsystem shifted operator
  Matrix op = lambda * sub.E - sub.A;
  op.noalias() += EE * (EF.adjoint() * sub.A);
  op.noalias() += (sub.A * EE) * EF.adjoint();
  Factorization f;
  try {
    f = factor(op);
  } catch (const SingularMatrix&) {
    throw ShiftSingular("subsystem_h_terms: shifted subsystem operator singular");
  }

  const Matrix XA = apply_Pk(EE, EF, Matrix(f.solve(apply_Pk(EE, EF, AE))));
  const Matrix XB = apply_Pk(EE, EF, Matrix(f.solve(apply_Pk(EE, EF, sub.B))));

  t.H_A = FA * XA;     // n×n
  t.H_B = FA * XB;     // n×io
  t.H_C = sub.C * XA;  // io×n
  t.H_D = sub.C * XB;  // io×io
  (void)n;
  return t;
}

namespace {

struct CompositeTerms {
  Matrix A_r, B_r, C_r, D;
  Matrix H_A, H_B, H_C, H_D;
  Index n_total = 0;
};

CompositeTerms gather_terms(const CompositeModel& model, const std::vector<SubspacePair>& pairs,
                            Complex lambda) {
  const Index l = static_cast<Index>(model.subsystems.size());
  if (static_cast<Index>(pairs.size()) != l)
    throw InvalidArgument("composite: one pair per subsystem required");

  Index n_total = 0;
  const Index io = model.total_io();
  for (const auto& p : pairs) n_total += p.n();

  CompositeTerms ct;
  ct.n_total = n_total;
  ct.A_r = Matrix::Zero(n_total, n_total);
  ct.B_r = Matrix::Zero(n_total, io);
  ct.C_r = Matrix::Zero(io, n_total);
  ct.D = Matrix::Zero(io, io);
  ct.H_A = Matrix::Zero(n_total, n_total);
  ct.H_B = Matrix::Zero(n_total, io);
  ct.H_C = Matrix::Zero(io, n_total);
  ct.H_D = Matrix::Zero(io, io);

  Index no = 0, oo = 0;
  for (Index k = 0; k < l; ++k) {
    const auto& sub = model.subsystems[static_cast<size_t>(k)];
    const auto& pk = pairs[static_cast<size_t>(k)];
    const Index nk = pk.n(), iok = sub.io();
    SubsystemHTerms t = subsystem_h_terms(sub, pk, lambda);
    ct.A_r.block(no, no, nk, nk) = t.A_r;
    ct.B_r.block(no, oo, nk, iok) = t.B_r;
    ct.C_r.block(oo, no, iok, nk) = t.C_r;
    ct.D.block(oo, oo, iok, iok) = sub.D;
    ct.H_A.block(no, no, nk, nk) = t.H_A;
    ct.H_B.block(no, oo, nk, iok) = t.H_B;
    ct.H_C.block(oo, no, iok, nk) = t.H_C;
    ct.H_D.block(oo, oo, iok, iok) = t.H_D;
    no += nk;
    oo += iok;
  }
  return ct;
}

// Bordered interconnection solve: [[J11-(D+H_D), J12],[J21, J22]] X = RHS.
Factorization bordered_factor(const CompositeModel& model, const CompositeTerms& ct) {
  const Index io = model.total_io();
  const Index alg = model.interconnection.algebraic();
  Matrix bordered(io + alg, io + alg);
  bordered.topLeftCorner(io, io) = model.interconnection.J11 - (ct.D + ct.H_D);
  bordered.topRightCorner(io, alg) = model.interconnection.J12;
  bordered.bottomLeftCorner(alg, io) = model.interconnection.J21;
  bordered.bottomRightCorner(alg, alg) = model.interconnection.J22;
  // cancellation scale: judge singularity against the ingredients, not the
  // collapsed result
  const double scale = std::max({norm_inf(model.interconnection.J11),
                                 norm_inf(model.interconnection.J12),
                                 norm_inf(model.interconnection.J21),
                                 norm_inf(model.interconnection.J22),
                                 norm_inf(Matrix(ct.D + ct.H_D)), 1.0});
  if (norm_inf(bordered) <= 1e-13 * scale)
    throw InterconnectionSingular("composite: bordered J matrix vanishes at this λ");
  try {
    Factorization f = factor(bordered);
    if (f.condition_estimate() > 1e12 * std::max(1.0, scale / norm_inf(bordered)))
      throw InterconnectionSingular("composite: bordered J matrix numerically singular");
    return f;
  } catch (const SingularMatrix&) {
    throw InterconnectionSingular("composite: bordered J matrix singular at this λ");
  }
}

}  // namespace

Matrix composite_h(const CompositeModel& model, const std::vector<SubspacePair>& pairs,
                   Complex lambda) {
  CompositeTerms ct = gather_terms(model, pairs, lambda);
  const Index io = model.total_io();
  const Index alg = model.interconnection.algebraic();
  if (io + alg == 0) return ct.A_r + ct.H_A;

  Factorization f = bordered_factor(model, ct);
  Matrix rhs = Matrix::Zero(io + alg, ct.n_total);
  rhs.topRows(io) = ct.C_r + ct.H_C;
  const Matrix X = f.solve(rhs);
  return ct.A_r + ct.H_A + (ct.B_r + ct.H_B) * X.topRows(io);
}

Vector recover_composite_eigenvector(const CompositeModel& model,
                                     const std::vector<SubspacePair>& pairs, Complex lambda,
                                     const Vector& alpha) {
  CompositeTerms ct = gather_terms(model, pairs, lambda);
  const Index io = model.total_io();
  const Index alg = model.interconnection.algebraic();
  const Index ms = model.total_states();

  Vector z_I = Vector::Zero(io), z_A = Vector::Zero(alg);
  if (io + alg > 0) {
    Factorization f = bordered_factor(model, ct);
    Vector rhs = Vector::Zero(io + alg);
    rhs.head(io) = (ct.C_r + ct.H_C) * alpha;
    const Vector X = f.solve(rhs);
    z_I = X.head(io);
    z_A = X.tail(alg);
  }
  const Vector z_O = (ct.C_r + ct.H_C) * alpha + (ct.D + ct.H_D) * z_I;

  Vector v(ms + 2 * io + alg);
  Index so = 0, oo = 0, no = 0;
  for (size_t k = 0; k < model.subsystems.size(); ++k) {
    const auto& sub = model.subsystems[k];
    const auto& pk = pairs[k];
    const Index nk = pk.n(), iok = sub.io(), msk = sub.states();
    const Vector alpha_k = alpha.segment(no, nk);
    const Vector zI_k = z_I.segment(oo, iok);

    const Matrix EE = sub.E * pk.basis_right;
    const Matrix EF = sub.E * pk.basis_left;
    Matrix op = lambda * sub.E - sub.A;
    op.noalias() += EE * (EF.adjoint() * sub.A);
    op.noalias() += (sub.A * EE) * EF.adjoint();
    Factorization f;
    try {
      f = factor(op);
    } catch (const SingularMatrix&) {
      throw ShiftSingular("recover_composite_eigenvector: shifted subsystem operator singular");
    }
    const Vector rhs_k = apply_Pk(EE, EF, Matrix(sub.A * (pk.basis_right * alpha_k) + sub.B * zI_k));
    const Vector z_Mk = apply_Pk(EE, EF, Matrix(f.solve(rhs_k)));
    v.segment(so, msk) = pk.basis_right * alpha_k + z_Mk;

    so += msk;
    oo += iok;
    no += nk;
  }
  v.segment(ms, io) = z_I;
  v.segment(ms + io, io) = z_O;
  v.segment(ms + 2 * io, alg) = z_A;
  return v;
}

SubspacePair embed_pairs(const CompositeModel& model, const std::vector<SubspacePair>& pairs) {
  const Index m = model.dimension();
  Index n_total = 0;
  for (const auto& p : pairs) n_total += p.n();
  SubspacePair pair;
  pair.basis_right = Matrix::Zero(m, n_total);
  pair.basis_left = Matrix::Zero(m, n_total);
  Index so = 0, no = 0;
  for (size_t k = 0; k < model.subsystems.size(); ++k) {
    const Index msk = model.subsystems[k].states();
    const Index nk = pairs[k].n();
    pair.basis_right.block(so, no, msk, nk) = pairs[k].basis_right;
    pair.basis_left.block(so, no, msk, nk) = pairs[k].basis_left;
    so += msk;
    no += nk;
  }
  return pair;
}

namespace {

class CompositeReduced final : public detail::ReducedProblem {
 public:
  CompositeReduced(const CompositeModel& model, std::vector<SubspacePair> pairs,
                   SubspaceUpdate update)
      : model_(model),
        pairs_(std::move(pairs)),
        update_(update),
        monolithic_(assemble_monolithic(model)) {
    embedded_ = embed_pairs(model_, pairs_);
    initial_right_ = embedded_.basis_right;
    a_rr_ = reduced_a(monolithic_, embedded_);
  }

  const Matrix& a_rr() override { return a_rr_; }

  Matrix reduced_matrix(Complex shift) override { return composite_h(model_, pairs_, shift); }

  Recovered recover(Complex shift, Complex lambda, const Vector& alpha,
                    const Vector& beta) override {
    Recovered rec;
    rec.v = recover_composite_eigenvector(model_, pairs_, shift, alpha);
    // left vector recovered through the monolithic pencil
    RecoveredVectors zy = recover_z_y(monolithic_, embedded_, shift, alpha, beta);
    rec.w = zy.w;
    rec.residual = residual(monolithic_, lambda, rec.v, rec.w).first;
    rec.rho = participation_ratio(rec.v, rec.w, embedded_, monolithic_);
    return rec;
  }

  void update_subspace(const Recovered& rec, Vector& alpha, Vector& beta) override {
    if (update_ == SubspaceUpdate::none) return;
    // split the recovered vectors back into subsystem blocks
    Index so = 0;
    std::vector<SubspacePair> updated;
    for (size_t k = 0; k < model_.subsystems.size(); ++k) {
      const Index msk = model_.subsystems[k].states();
      if (pairs_[k].n() == 0) {  // opted-out subsystem keeps its empty pair
        updated.push_back(pairs_[k]);
        so += msk;
        continue;
      }
      Vector v_Mk = rec.v.segment(so, msk);
      Vector w_Mk = rec.w.segment(so, msk);
      const auto& sub = model_.subsystems[k];
      if (update_ == SubspaceUpdate::zeroed_static) {
        v_Mk = sub.E * v_Mk;
        w_Mk = sub.E * w_Mk;
      }
      ProjectionPencil sub_pencil(SparseMatrix(sub.E.sparseView()), SparseMatrix(sub.A.sparseView()));
      updated.push_back(normalize_pair(v_Mk, w_Mk, sub_pencil));
      so += msk;
    }
    pairs_ = std::move(updated);
    embedded_ = embed_pairs(model_, pairs_);
    a_rr_ = reduced_a(monolithic_, embedded_);
    alpha = embedded_.basis_left.adjoint() * (monolithic_.E() * rec.v);
    beta = embedded_.basis_right.adjoint() * (monolithic_.E() * rec.w);
  }

  const Matrix* initial_basis() const override { return &initial_right_; }
  const Matrix* current_basis() const override { return &embedded_.basis_right; }

 private:
  const CompositeModel& model_;
  std::vector<SubspacePair> pairs_;
  SubspaceUpdate update_;
  ProjectionPencil monolithic_;
  SubspacePair embedded_;
  Matrix initial_right_;
  Matrix a_rr_;
};

}  // namespace

SolveResult composite_algorithm3(const CompositeModel& model,
                                 const std::vector<SubspacePair>& pairs,
                                 const ModeSelector& selector, const SolverOptions& opts) {
  CompositeReduced problem(model, pairs, SubspaceUpdate::none);
  return detail::iterate_reduced(problem, selector, opts, false);
}

SolveResult composite_algorithm4(const CompositeModel& model,
                                 const std::vector<SubspacePair>& pairs0,
                                 const ModeSelector& selector, const SolverOptions& opts) {
  CompositeReduced problem(model, pairs0, opts.subspace_update);
  return detail::iterate_reduced(problem, selector, opts, true);
}

}  // namespace gsma
