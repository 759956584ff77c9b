#include "gsma/generalized.hpp"

#include <Eigen/Dense>

#include <cmath>

#include "gsma/errors.hpp"
#include "reduced_iteration.hpp"

namespace gsma {

Matrix reduced_a(const ProjectionPencil& pencil, const SubspacePair& pair) {
  return pair.basis_left.adjoint() * (pencil.A() * pair.basis_right);
}

ShiftedOperator build_shifted_operator(const ProjectionPencil& pencil, const SubspacePair& pair,
                                       Complex lambda, HForm form) {
  const Matrix EE = pencil.E() * pair.basis_right;  // E·E
  const Matrix EF = pencil.E() * pair.basis_left;   // E·F

  Matrix op = lambda * pencil.dense_E() - pencil.dense_A();
  if (form == HForm::qa_only || form == HForm::anticommutator) {
    // QA = (E·E)(F†EA)
    const Matrix FEA = (pencil.A().adjoint() * EF).adjoint();
    op.noalias() += EE * FEA;
  }
  if (form == HForm::aq_only || form == HForm::anticommutator) {
    // AQ = (AE·E)(F†E)
    const Matrix AEE = pencil.A() * EE;
    op.noalias() += AEE * EF.adjoint();
  }

  ShiftedOperator shifted;
  shifted.lambda = lambda;
  shifted.form = form;
  try {
    shifted.fact = factor(op);
  } catch (const SingularMatrix&) {
    throw ShiftSingular("shifted operator N(λ,Q)^{-1} is singular");
  }
  if (shifted.fact.condition_estimate() > 1e14)
    throw ShiftSingular("shifted operator N(λ,Q)^{-1} is numerically singular");
  return shifted;
}

namespace {

// P X = X - E·E·(F†E X), with F†E = (E·F)†.
Matrix apply_P(const Matrix& EE, const Matrix& EF, const Matrix& X) {
  return X - EE * (EF.adjoint() * X);
}

// P† X = X - E·F·(E†E X).
Matrix apply_P_adjoint(const Matrix& EE, const Matrix& EF, const Matrix& X) {
  return X - EF * (EE.adjoint() * X);
}

}  // namespace

Matrix h_general(const ProjectionPencil& pencil, const SubspacePair& pair, Complex lambda,
                 HForm form) {
  const Matrix EE = pencil.E() * pair.basis_right;
  const Matrix EF = pencil.E() * pair.basis_left;
  const Matrix AE = pencil.A() * pair.basis_right;
  const Matrix FA = (pencil.A().adjoint() * pair.basis_left).adjoint();  // F†A

  ShiftedOperator op = build_shifted_operator(pencil, pair, lambda, form);
  const Matrix X = op.fact.solve(apply_P(EE, EF, AE));
  return FA * apply_P(EE, EF, X);
}

RecoveredVectors recover_z_y(const ProjectionPencil& pencil, const SubspacePair& pair,
                             Complex lambda, const Vector& alpha, const Vector& beta, HForm form) {
  const Matrix EE = pencil.E() * pair.basis_right;
  const Matrix EF = pencil.E() * pair.basis_left;

  ShiftedOperator op = build_shifted_operator(pencil, pair, lambda, form);

  RecoveredVectors out;
  const Vector pae = apply_P(EE, EF, Matrix(pencil.A() * (pair.basis_right * alpha)));
  out.z = apply_P(EE, EF, Matrix(op.fact.solve(pae)));
  const Vector paf = apply_P_adjoint(EE, EF, Matrix(pencil.A().adjoint() * (pair.basis_left * beta)));
  out.y = apply_P_adjoint(EE, EF, Matrix(op.fact.solve_adjoint(paf)));
  out.v = pair.basis_right * alpha + out.z;
  out.w = pair.basis_left * beta + out.y;
  return out;
}

SubspacePair invariance_shift(const SubspacePair& pair, const ProjectionPencil& pencil,
                              const Matrix& L, InvarianceSide side) {
  const Matrix& base = side == InvarianceSide::right ? pair.basis_right : pair.basis_left;
  if (L.rows() != base.rows() || L.cols() != base.cols())
    throw DimensionMismatch("invariance_shift: L must match the basis dimensions");
  SubspacePair shifted = pair;
  const Matrix delta = L - Matrix(pencil.E() * L);  // (I - E)L
  if (side == InvarianceSide::right)
    shifted.basis_right += delta;
  else
    shifted.basis_left += delta;
  return shifted;
}

namespace {

// Basis with `lead` first and the strongest remaining directions of the old
// basis orthogonalized against it.
Matrix refresh_basis(const Vector& lead, const Matrix& old_basis) {
  const Index n = old_basis.cols();
  Matrix B(old_basis.rows(), n);
  B.col(0) = lead.normalized();
  if (n > 1) {
    Matrix rest = old_basis - B.col(0) * (B.col(0).adjoint() * old_basis);
    Eigen::ColPivHouseholderQR<Matrix> qr(rest);
    B.rightCols(n - 1) = qr.householderQ() * Matrix::Identity(old_basis.rows(), n - 1);
  }
  return B;
}

class PencilReduced final : public detail::ReducedProblem {
 public:
  PencilReduced(const ProjectionPencil& pencil, SubspacePair pair, HForm form,
                SubspaceUpdate update)
      : pencil_(pencil),
        pair_(std::move(pair)),
        initial_right_(pair_.basis_right),
        form_(form),
        update_(update) {
    refresh_reduced();
  }

  const Matrix& a_rr() override { return a_rr_; }

  Matrix reduced_matrix(Complex shift) override {
    build_cache(shift);
    return a_rr_ + FA_ * PX_;
  }

  Recovered recover(Complex shift, Complex lambda, const Vector& alpha,
                    const Vector& beta) override {
    build_cache(shift);
    Recovered rec;
    const Vector z = apply_P(EE_, EF_, Matrix(X_ * alpha));
    const Vector u0 =
        apply_P_adjoint(EE_, EF_, Matrix(pencil_.A().adjoint() * (pair_.basis_left * beta)));
    const Vector y = apply_P_adjoint(EE_, EF_, Matrix(op_.fact.solve_adjoint(u0)));
    rec.v = pair_.basis_right * alpha + z;
    rec.w = pair_.basis_left * beta + y;
    rec.residual = residual(pencil_, lambda, rec.v, rec.w).first;
    rec.rho = participation_ratio(rec.v, rec.w, pair_, pencil_);
    return rec;
  }

  void update_subspace(const Recovered& rec, Vector& alpha, Vector& beta) override {
    if (update_ == SubspaceUpdate::none) return;
    Matrix new_right = refresh_basis(rec.v, pair_.basis_right);
    Matrix new_left = refresh_basis(rec.w, pair_.basis_left);
    if (update_ == SubspaceUpdate::zeroed_static) {
      new_right = pencil_.E() * new_right;
      new_left = pencil_.E() * new_left;
    }
    pair_ = normalize_pair(new_right, new_left, pencil_);
    refresh_reduced();
    alpha = pair_.basis_left.adjoint() * (pencil_.E() * rec.v);
    beta = pair_.basis_right.adjoint() * (pencil_.E() * rec.w);
  }

  const Matrix* initial_basis() const override { return &initial_right_; }
  const Matrix* current_basis() const override { return &pair_.basis_right; }

 private:
  void refresh_reduced() {
    EE_ = pencil_.E() * pair_.basis_right;
    EF_ = pencil_.E() * pair_.basis_left;
    AE_ = pencil_.A() * pair_.basis_right;
    FA_ = (pencil_.A().adjoint() * pair_.basis_left).adjoint();
    a_rr_ = FA_ * pair_.basis_right;
    have_cache_ = false;
  }

  void build_cache(Complex shift) {
    if (have_cache_ && shift == cached_shift_) return;
    op_ = build_shifted_operator(pencil_, pair_, shift, form_);
    X_ = op_.fact.solve(apply_P(EE_, EF_, AE_));
    PX_ = apply_P(EE_, EF_, X_);
    cached_shift_ = shift;
    have_cache_ = true;
  }

  const ProjectionPencil& pencil_;
  SubspacePair pair_;
  Matrix initial_right_;
  HForm form_;
  SubspaceUpdate update_;
  Matrix EE_, EF_, AE_, FA_, a_rr_;
  ShiftedOperator op_;
  Matrix X_, PX_;
  Complex cached_shift_{};
  bool have_cache_ = false;
};

}  // namespace

SolveResult algorithm3(const ProjectionPencil& pencil, const SubspacePair& pair,
                       const ModeSelector& selector, const SolverOptions& opts) {
  PencilReduced problem(pencil, pair, opts.h_form, SubspaceUpdate::none);
  return detail::iterate_reduced(problem, selector, opts, false);
}

SolveResult algorithm4(const ProjectionPencil& pencil, const SubspacePair& pair0,
                       const ModeSelector& selector, const SolverOptions& opts) {
  PencilReduced problem(pencil, pair0, opts.h_form, opts.subspace_update);
  return detail::iterate_reduced(problem, selector, opts, true);
}

double order_estimate(const std::vector<double>& errors, int window) {
  if (window < 3) throw InvalidArgument("order_estimate: window must be at least 3");
  if (errors.size() < 4) throw InsufficientData("order_estimate: need at least 4 error entries");
  for (size_t i = 0; i + 1 < errors.size(); ++i)
    if (!(errors[i] > 0) || !(errors[i + 1] < errors[i]))
      throw InsufficientData("order_estimate: errors must be positive and strictly decreasing");

  const size_t w = std::min<size_t>(static_cast<size_t>(window), errors.size());
  const size_t begin = errors.size() - w;
  std::vector<double> x, y;
  for (size_t i = begin; i + 1 < errors.size(); ++i) {
    x.push_back(std::log(errors[i]));
    y.push_back(std::log(errors[i + 1]));
  }
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double cov = 0, var = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    cov += (x[i] - mx) * (y[i] - my);
    var += (x[i] - mx) * (x[i] - mx);
  }
  if (var == 0) throw InsufficientData("order_estimate: degenerate error sequence");
  return cov / var;
}

double convergence_order_estimate(const ConvergenceReport& report, int window) {
  if (report.iterates.empty()) throw InsufficientData("convergence_order_estimate: empty report");
  const double floor =
      100.0 * Eigen::NumTraits<double>::epsilon() * (1.0 + std::abs(report.iterates.back().lambda));
  std::vector<double> deltas;
  for (const auto& it : report.iterates) {
    if (std::isfinite(it.delta_abs) && it.delta_abs > floor) deltas.push_back(it.delta_abs);
  }
  // longest strictly decreasing tail
  size_t start = deltas.size();
  while (start > 0 && (start == deltas.size() || deltas[start - 1] > deltas[start])) --start;
  std::vector<double> tail(deltas.begin() + static_cast<long>(start), deltas.end());
  if (tail.size() < 4)
    throw InsufficientData("convergence_order_estimate: too few decreasing error entries");
  return order_estimate(tail, window);
}

}  // namespace gsma
