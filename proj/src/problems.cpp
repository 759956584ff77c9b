#include "gsma/problems.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <random>
#include <unordered_map>

#include "gsma/errors.hpp"

namespace gsma {

namespace {

constexpr double kPi = std::numbers::pi;

struct PairHash {
  size_t operator()(const std::pair<Index, Index>& p) const {
    return std::hash<long long>()((static_cast<long long>(p.first) << 32) ^
                                  (p.second & 0xffffffffLL));
  }
};

std::unordered_map<std::pair<Index, Index>, Index, PairHash> build_index(
    const std::vector<std::pair<Index, Index>>& points) {
  std::unordered_map<std::pair<Index, Index>, Index, PairHash> map;
  for (size_t k = 0; k < points.size(); ++k) map[points[k]] = static_cast<Index>(k);
  return map;
}

}  // namespace

CrossGeometry reference_cross() { return CrossGeometry{}; }

Index GridLayout::index_of(Index i, Index j) const {
  for (size_t k = 0; k < points.size(); ++k)
    if (points[k].first == i && points[k].second == j) return static_cast<Index>(k);
  return -1;
}

namespace {

// Interior of the plus-shaped union of the vertical and horizontal slabs.
bool cross_interior(const CrossGeometry& g, Index i, Index j) {
  const Index c = g.core;
  const bool vert = (i > 0 && i < c) && (j > -g.arm_down && j < c + g.arm_up);
  const bool horz = (j > 0 && j < c) && (i > -g.arm_left && i < c + g.arm_right);
  return vert || horz;
}

}  // namespace

std::pair<ProjectionPencil, GridLayout> cross_plate(const CrossGeometry& g) {
  if (g.core < 1 || g.arm_up < 0 || g.arm_down < 0 || g.arm_left < 0 || g.arm_right < 0 ||
      !(g.h > 0))
    throw InvalidArgument("cross_plate: invalid geometry");

  GridLayout layout;
  for (Index j = -g.arm_down; j <= g.core + g.arm_up; ++j)
    for (Index i = -g.arm_left; i <= g.core + g.arm_right; ++i)
      if (cross_interior(g, i, j)) layout.points.emplace_back(i, j);
  if (layout.points.size() < 4) throw InvalidArgument("cross_plate: fewer than 4 interior points");

  const Index m = static_cast<Index>(layout.points.size());
  const auto index = build_index(layout.points);
  const double inv_h2 = 1.0 / (g.h * g.h);

  std::vector<Eigen::Triplet<Complex>> eT, aT;
  eT.reserve(static_cast<size_t>(m));
  aT.reserve(static_cast<size_t>(5 * m));
  for (Index p = 0; p < m; ++p) {
    const auto [i, j] = layout.points[static_cast<size_t>(p)];
    eT.emplace_back(p, p, Complex(1, 0));
    aT.emplace_back(p, p, Complex(4.0 * inv_h2, 0));
    const std::pair<Index, Index> nbrs[4] = {{i - 1, j}, {i + 1, j}, {i, j - 1}, {i, j + 1}};
    for (const auto& nb : nbrs) {
      auto it = index.find(nb);
      if (it != index.end()) aT.emplace_back(p, it->second, Complex(-inv_h2, 0));
    }
  }
  SparseMatrix E(m, m), A(m, m);
  E.setFromTriplets(eT.begin(), eT.end());
  A.setFromTriplets(aT.begin(), aT.end());
  return {ProjectionPencil(std::move(E), std::move(A)), std::move(layout)};
}

Vector cross_plate_initial_guess(const CrossGeometry& g, const GridLayout& layout,
                                 ArmPattern pattern) {
  // Full antisymmetric standing wave over the slab holding the two opposing
  // arms: +1 bump towards one arm, -1 towards the other, node on the core
  // midline, zero on the transverse arms.  Boundary-compatible by the sine
  // factors.
  const double c = static_cast<double>(g.core);
  Vector guess = Vector::Zero(static_cast<Index>(layout.points.size()));
  for (size_t p = 0; p < layout.points.size(); ++p) {
    const auto [i, j] = layout.points[p];
    double value = 0.0;
    if (pattern == ArmPattern::up_vs_down) {
      const double bottom = -static_cast<double>(g.arm_down);
      const double top = c + static_cast<double>(g.arm_up);
      if (i > 0 && i < g.core) {
        const double t = (j - bottom) / (top - bottom);
        if (t > 0 && t < 1) value = -std::sin(kPi * i / c) * std::sin(2.0 * kPi * t);
      }
    } else {
      const double left = -static_cast<double>(g.arm_left);
      const double right = c + static_cast<double>(g.arm_right);
      if (j > 0 && j < g.core) {
        const double t = (i - left) / (right - left);
        if (t > 0 && t < 1) value = -std::sin(kPi * j / c) * std::sin(2.0 * kPi * t);
      }
    }
    guess[static_cast<Index>(p)] = Complex(value, 0);
  }
  return guess;
}

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

CompositeModel build_synthetic(const SyntheticCompositeParams& p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const Index l = p.subsystems, ns = p.states_per, io = p.io_per;
  const Index IO = l * io, alg = p.algebraic;
  const double omega_base = 120.0 * kPi;

  CompositeModel model;
  std::vector<double> spring(static_cast<size_t>(l));
  for (Index k = 0; k < l; ++k) {
    Subsystem sub;
    sub.E = Matrix::Identity(ns, ns);
    sub.A = Matrix::Zero(ns, ns);
    sub.B = Matrix::Zero(ns, io);
    sub.C = Matrix::Zero(io, ns);
    sub.D = Matrix::Zero(io, io);

    const double K = uniform(rng, 0.02, 0.15);   // local spring on δ
    const double d = uniform(rng, 0.05, 0.3);    // damping on ω
    spring[static_cast<size_t>(k)] = K;
    sub.A(0, 1) = omega_base;  // δ̇ = 120π ω
    sub.A(1, 0) = -K;
    sub.A(1, 1) = -d;
    sub.B(1, 0) = 1.0;  // network torque enters ω̇
    sub.C(0, 0) = 1.0;  // first output is δ

    for (Index s = 2; s < ns; ++s) {
      const bool is_static = (s == ns - 1 && ns >= 4);
      if (is_static) {
        sub.E(s, s) = 0.0;
        sub.A(s, s) = -1.0;  // 0 = 0.05 δ - x_s
        sub.A(s, 0) = 0.05;
      } else {
        sub.A(s, s) = -uniform(rng, 1.0, 5.0);
        sub.A(s, 0) = uniform(rng, -0.1, 0.1);
        sub.A(1, s) = uniform(rng, -0.02, 0.02);  // weak back coupling into ω̇
      }
    }
    for (Index c = 1; c < io; ++c) {
      const Index drive = 2 + (c - 1) % std::max<Index>(ns - 2, 1);
      sub.B(std::min(drive, ns - 1), c) = uniform(rng, 0.05, 0.15);
      sub.C(c, std::min<Index>(c, ns - 1)) = 1.0;
    }
    model.subsystems.push_back(std::move(sub));
  }

  // Network: first input of each machine sees -C_off·δ, where C_off is an
  // ε-grounded weighted ring-plus-chords Laplacian; remaining channels are
  // decoupled pass-throughs.
  RealMatrix W = RealMatrix::Zero(l, l);
  for (Index k = 0; k < l; ++k) {
    const Index next = (k + 1) % l;
    if (next != k) {
      const double w = uniform(rng, 0.01, 0.08);
      W(k, next) += w;
      W(next, k) += w;
    }
  }
  for (Index chord = 0; chord < l / 2; ++chord) {
    const Index a = static_cast<Index>(rng() % static_cast<std::uint64_t>(l));
    const Index b = static_cast<Index>(rng() % static_cast<std::uint64_t>(l));
    if (a == b) continue;
    const double w = uniform(rng, 0.005, 0.03);
    W(a, b) += w;
    W(b, a) += w;
  }
  RealMatrix C_off = -W;
  for (Index k = 0; k < l; ++k) C_off(k, k) = W.row(k).sum() + 0.01;

  Matrix gamma = Matrix::Zero(IO, IO);
  for (Index k = 0; k < l; ++k)
    for (Index j2 = 0; j2 < l; ++j2) gamma(k * io, j2 * io) = -C_off(k, j2);
  for (Index k = 0; k < l; ++k)
    for (Index c = 1; c < io; ++c) gamma(k * io + c, k * io + c) = 0.1;

  Interconnection J;
  J.J22 = Matrix::Identity(alg, alg);
  J.J12 = Matrix::Zero(IO, alg);
  J.J21 = Matrix::Zero(alg, IO);
  for (Index i = 0; i < alg; ++i) {
    J.J22(i, i) += uniform(rng, -0.1, 0.1);
    for (Index j2 = 0; j2 < alg; ++j2)
      if (i != j2) J.J22(i, j2) = uniform(rng, -0.05, 0.05);
  }
  for (Index i = 0; i < IO; ++i)
    for (Index j2 = 0; j2 < alg; ++j2) {
      J.J12(i, j2) = uniform(rng, -0.2, 0.2);
      J.J21(j2, i) = uniform(rng, -0.2, 0.2);
    }
  // J11 = Γ^{-1} + J12 J22^{-1} J21 so the Schur complement is exactly Γ^{-1}
  const Matrix gamma_inv = gamma.partialPivLu().inverse();
  J.J11 = gamma_inv + J.J12 * J.J22.partialPivLu().solve(J.J21);
  model.interconnection = std::move(J);
  return model;
}

}  // namespace

CompositeModel synthetic_composite(const SyntheticCompositeParams& p) {
  if (p.subsystems < 1 || p.states_per < 2 || p.io_per < 1 || p.algebraic < 1)
    throw InvalidArgument("synthetic_composite: sizes must be positive (states_per ≥ 2)");

  for (int attempt = 0; attempt < 5; ++attempt) {
    CompositeModel model = build_synthetic(p, p.seed + 0x517cc1b7u * static_cast<std::uint64_t>(attempt));
    try {
      model.validate();
      ProjectionPencil pencil = assemble_monolithic(model);
      if (pencil.dimension() <= dense_limit()) {
        oracle_full_spectrum(pencil);  // solvability check
      }
      return model;
    } catch (const Error&) {
      continue;
    }
  }
  throw GenerationFailed("synthetic_composite: no solvable model after bounded retries");
}

std::vector<SubspacePair> electromech_init(const CompositeModel& model) {
  std::vector<SubspacePair> pairs;
  for (const auto& sub : model.subsystems) {
    const Index ns = sub.states();
    if (ns < 2) throw InvalidArgument("electromech_init: subsystems need (δ, ω) head states");
    Vector e = Vector::Zero(ns), f = Vector::Zero(ns);
    e[0] = Complex(120.0 * kPi, 0);
    e[1] = Complex(0, 2.0 * kPi);
    f[0] = Complex(0, -2.0 * kPi);
    f[1] = Complex(120.0 * kPi, 0);
    ProjectionPencil sub_pencil(SparseMatrix(sub.E.sparseView()), SparseMatrix(sub.A.sparseView()));
    pairs.push_back(normalize_pair(e, f, sub_pencil));
  }
  return pairs;
}

}  // namespace gsma
