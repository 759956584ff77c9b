#include <doctest.h>

#include <random>

#include "gsma/errors.hpp"
#include "gsma/pencil.hpp"
#include "gsma/problems.hpp"
#include "gsma/random_instances.hpp"
#include "support.hpp"

using namespace gsma;
using testsupport::random_complex;
using testsupport::random_complex_vector;

namespace {

ProjectionPencil identity_pencil(const Matrix& A) {
  return ProjectionPencil(Matrix(Matrix::Identity(A.rows(), A.cols())), A);
}

}  // namespace

TEST_CASE("pencil: construction validates E") {
  Matrix A = Matrix::Identity(2, 2);
  Matrix not_idempotent(2, 2);
  not_idempotent << 1, 0, 0, 2;
  CHECK_THROWS_AS(ProjectionPencil(not_idempotent, A), InvalidArgument);
  Matrix not_symmetric(2, 2);
  not_symmetric << 1, 0.5, 0, 0;
  CHECK_THROWS_AS(ProjectionPencil(not_symmetric, A), InvalidArgument);
  Matrix E(2, 2);
  E << 0.5, 0.5, 0.5, 0.5;  // rank-1 projection
  ProjectionPencil p(E, A);
  CHECK(p.rank_E() == 1);
}

TEST_CASE("normalize_pair: already normalized pair unchanged") {
  ProjectionPencil p = identity_pencil(Matrix::Identity(2, 2));
  Matrix e(2, 1), f(2, 1);
  e << 1, 0;
  f << 1, 0;
  SubspacePair pair = normalize_pair(e, f, p);
  CHECK((pair.basis_right - e).norm() == doctest::Approx(0.0));
  CHECK((pair.basis_left - f).norm() == doctest::Approx(0.0));
}

TEST_CASE("normalize_pair: scalar scaling goes to the left basis") {
  ProjectionPencil p = identity_pencil(Matrix::Identity(2, 2));
  Matrix e(2, 1), f(2, 1);
  e << 2, 0;
  f << 3, 0;
  SubspacePair pair = normalize_pair(e, f, p);
  CHECK((pair.basis_right - e).norm() == doctest::Approx(0.0));
  CHECK(pair.basis_left(0, 0).real() == doctest::Approx(0.5));
  CHECK((pair.basis_left.adjoint() * (p.E() * pair.basis_right) - Matrix::Identity(1, 1)).norm() <=
        1e-14);
}

TEST_CASE("normalize_pair: static components invisible to the product") {
  Matrix E(2, 2);
  E << 1, 0, 0, 0;
  ProjectionPencil p(E, Matrix(Matrix::Identity(2, 2)));
  Matrix e(2, 1), f(2, 1);
  e << 1, 5;
  f << 1, 7;
  SubspacePair pair = normalize_pair(e, f, p);
  CHECK((pair.basis_right - e).norm() == doctest::Approx(0.0));
  CHECK((pair.basis_left - f).norm() <= 1e-14);  // G = 1 already
}

TEST_CASE("normalize_pair: kernel columns and degenerate products rejected") {
  Matrix E(2, 2);
  E << 1, 0, 0, 0;
  ProjectionPencil p(E, Matrix(Matrix::Identity(2, 2)));
  Matrix e(2, 1);
  e << 0, 1;  // in ker E
  CHECK_THROWS_AS(normalize_pair(e, e, p), DegenerateSubspace);

  // E-orthogonal pair on an identity-E pencil
  ProjectionPencil q = identity_pencil(Matrix::Identity(2, 2));
  Matrix e2(2, 1), f2(2, 1);
  e2 << 1, 0;
  f2 << 0, 1;
  CHECK_THROWS_AS(normalize_pair(e2, f2, q), DegenerateSubspace);
}

TEST_CASE("projectors: canonical basis and diagonal projections") {
  ProjectionPencil p = identity_pencil(Matrix::Identity(2, 2));
  Matrix e(2, 1);
  e << 1, 0;
  SubspacePair pair = normalize_pair(e, e, p);
  Projectors proj = projectors(pair, p);
  Matrix expected = Matrix::Zero(2, 2);
  expected(0, 0) = 1;
  CHECK((proj.Q - expected).norm() <= 1e-14);
  CHECK((proj.P - (Matrix::Identity(2, 2) - expected)).norm() <= 1e-14);

  Matrix E3 = Matrix::Zero(3, 3);
  E3(0, 0) = E3(1, 1) = 1;
  ProjectionPencil p3(E3, Matrix(Matrix::Identity(3, 3)));
  Matrix e3 = Matrix::Zero(3, 1);
  e3(0, 0) = 1;
  SubspacePair pair3 = normalize_pair(e3, e3, p3);
  Projectors proj3 = projectors(pair3, p3);
  Matrix expected3 = Matrix::Zero(3, 3);
  expected3(0, 0) = 1;
  CHECK((proj3.Q - expected3).norm() <= 1e-14);
}

TEST_CASE("property: projector algebra on random normalized pairs") {
  std::mt19937_64 rng(101);
  for (int rep = 0; rep < 6; ++rep) {
    const Index m = 5 + static_cast<Index>(rng() % 8);
    const Index r = 2 + static_cast<Index>(rng() % (m - 2));
    ProjectionPencil pencil = random_projection_pencil(rng(), m, r);
    const Index n = 1 + static_cast<Index>(rng() % 2);
    SubspacePair pair = random_normalized_pair(rng(), pencil, n, true);
    Projectors proj = projectors(pair, pencil);
    const double sQ = 1.0 + proj.Q.norm();
    CHECK((proj.Q * proj.Q - proj.Q).norm() <= 1e-10 * sQ);
    CHECK((proj.P * proj.P - proj.P).norm() <= 1e-10 * (1.0 + proj.P.norm()));
    CHECK((proj.P * proj.Q).norm() <= 1e-10 * sQ);
    CHECK((proj.Q * proj.P).norm() <= 1e-10 * sQ);
    // P = I - Q by construction; the sum re-rounds at machine precision
    CHECK((proj.P + proj.Q - Matrix::Identity(m, m)).norm() <= 8 * Eigen::NumTraits<double>::epsilon() * sQ);
    CHECK((pair.basis_left.adjoint() * (pencil.dense_E() - proj.Q)).norm() <= 1e-10 * sQ);
    CHECK(((pencil.dense_E() - proj.Q) * pair.basis_right).norm() <= 1e-10 * sQ);
  }
}

TEST_CASE("decompose: in-subspace, orthogonal and random reconstruction") {
  ProjectionPencil p = identity_pencil(Matrix::Identity(2, 2));
  Matrix e(2, 1);
  e << 1, 0;
  SubspacePair pair = normalize_pair(e, e, p);

  Vector v_in = pair.basis_right * Vector::Constant(1, Complex(2.5, -1));
  auto [alpha_in, z_in] = decompose_right(v_in, pair, p);
  CHECK(std::abs(alpha_in[0] - Complex(2.5, -1)) <= 1e-14);
  CHECK(z_in.norm() <= 1e-14);

  Vector v_perp(2);
  v_perp << 0, 1;
  auto [alpha_perp, z_perp] = decompose_right(v_perp, pair, p);
  CHECK(std::abs(alpha_perp[0]) <= 1e-14);
  CHECK((z_perp - v_perp).norm() <= 1e-14);

  std::mt19937_64 rng(7);
  ProjectionPencil pr = random_projection_pencil(rng(), 6, 4);
  SubspacePair pair6 = random_normalized_pair(rng(), pr, 2, true);
  const Vector v = random_complex_vector(rng, 6);
  auto [alpha, z] = decompose_right(v, pair6, pr);
  CHECK((pair6.basis_right * alpha + z - v).norm() <= 1e-12 * v.norm());
  CHECK((pair6.basis_left.adjoint() * (pr.E() * z)).norm() <= 1e-12 * v.norm());
  const Vector w = random_complex_vector(rng, 6);
  auto [beta, y] = decompose_left(w, pair6, pr);
  CHECK((pair6.basis_left * beta + y - w).norm() <= 1e-12 * w.norm());
  CHECK((pair6.basis_right.adjoint() * (pr.E() * y)).norm() <= 1e-12 * w.norm());
}

TEST_CASE("oracle: standard problem reduces to dense eigenanalysis") {
  Matrix A = Matrix::Zero(2, 2);
  A(0, 0) = 1;
  A(1, 1) = 2;
  OracleSpectrum s = oracle_full_spectrum(identity_pencil(A));
  REQUIRE(s.modes.size() == 2);
  CHECK(s.modes[0].lambda.real() == doctest::Approx(1.0));
  CHECK(s.modes[1].lambda.real() == doctest::Approx(2.0));
  CHECK(s.infinite_count == 0);
}

TEST_CASE("oracle: static condensation via the Schur complement") {
  Matrix E(2, 2), A(2, 2);
  E << 1, 0, 0, 0;
  A << 0, 1, 1, -2;
  OracleSpectrum s = oracle_full_spectrum(ProjectionPencil(E, A));
  REQUIRE(s.modes.size() == 1);
  CHECK(s.modes[0].lambda.real() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(s.infinite_count == 1);
  // v ∝ [2, 1]
  const Vector& v = s.modes[0].v;
  CHECK(std::abs(v[0] / v[1] - Complex(2, 0)) <= 1e-10);
  auto [rres, lres] =
      residual(ProjectionPencil(E, A), s.modes[0].lambda, s.modes[0].v, s.modes[0].w);
  CHECK(rres <= 1e-10);
  CHECK(lres <= 1e-10);
}

TEST_CASE("oracle: cross plate with E = I matches dense eigenanalysis") {
  CrossGeometry g;
  g.core = 6;
  g.arm_up = g.arm_down = g.arm_left = g.arm_right = 0;
  g.h = 1.0 / 6.0;
  auto [pencil, layout] = cross_plate(g);
  REQUIRE(pencil.dimension() == 25);
  OracleSpectrum s = oracle_full_spectrum(pencil);
  EigDecomposition eig = eig_dense(pencil.dense_A());
  std::vector<double> a, b;
  for (const auto& mode : s.modes) a.push_back(mode.lambda.real());
  for (Index i = 0; i < eig.size(); ++i) b.push_back(eig.eigenvalues[i].real());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  for (size_t i = 0; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-10));
}

TEST_CASE("oracle: completeness and NotSolvable detection") {
  std::mt19937_64 rng(55);
  for (int rep = 0; rep < 4; ++rep) {
    const Index m = 6 + static_cast<Index>(rng() % 6);
    const Index r = 2 + static_cast<Index>(rng() % (m - 2));
    ProjectionPencil pencil = random_projection_pencil(rng(), m, r);
    OracleSpectrum s = oracle_full_spectrum(pencil);
    CHECK(static_cast<Index>(s.modes.size()) == r);
    CHECK(s.infinite_count == m - r);
    for (const auto& mode : s.modes) {
      CHECK(mode.v.norm() == doctest::Approx(1.0).epsilon(1e-12));
      if (!mode.degenerate_pairing)
        CHECK(std::abs(mode.w.dot(pencil.E() * mode.v) - Complex(1, 0)) <= 1e-10);
    }
  }
  // not solvable: zero static-static block with zero coupling
  Matrix E(2, 2), A(2, 2);
  E << 1, 0, 0, 0;
  A << 1, 0, 0, 0;
  CHECK_THROWS_AS(oracle_full_spectrum(ProjectionPencil(E, A)), NotSolvable);
}

TEST_CASE("participation_ratio: perfect subspace gives infinite rho") {
  ProjectionPencil p = identity_pencil(Matrix::Identity(3, 3));
  Matrix e = Matrix::Zero(3, 1);
  e(0, 0) = 1;
  SubspacePair pair = normalize_pair(e, e, p);
  Projectors proj = projectors(pair, p);
  Vector v = Vector::Zero(3);
  v[0] = 1;
  ParticipationRatio rho = participation_ratio(v, v, proj, p);
  CHECK(rho.infinite);
  CHECK(rho.magnitude() == std::numeric_limits<double>::infinity());
}

TEST_CASE("participation_ratio: generalized formula equals the classical one") {
  std::mt19937_64 rng(77);
  for (int rep = 0; rep < 5; ++rep) {
    const Index m = 8, n = 2;
    const Matrix A = random_complex(rng, m, m);
    ProjectionPencil pencil = identity_pencil(A);
    Matrix basis = Matrix::Zero(m, n);
    basis.topRows(n) = Matrix::Identity(n, n);
    SubspacePair pair = normalize_pair(basis, basis, pencil);
    Projectors proj = projectors(pair, pencil);

    const Vector v = random_complex_vector(rng, m);
    const Vector w = random_complex_vector(rng, m);
    ParticipationRatio rho = participation_ratio(v, w, proj, pencil);
    const Complex classical = w.head(n).dot(v.head(n)) / w.tail(m - n).dot(v.tail(m - n));
    CHECK(std::abs(rho.value - classical) <= 1e-12 * std::abs(classical));
    ParticipationRatio rho2 = participation_ratio(v, w, pair, pencil);
    CHECK(std::abs(rho2.value - rho.value) <= 1e-12 * std::abs(rho.value));
  }
}

TEST_CASE("residual: oracle modes tiny, generic vectors large, perturbation linear") {
  std::mt19937_64 rng(99);
  ProjectionPencil pencil = random_projection_pencil(rng(), 8, 6);
  OracleSpectrum s = oracle_full_spectrum(pencil);
  const OracleMode& mode = s.modes[2];
  auto [r0, l0] = residual(pencil, mode.lambda, mode.v, mode.w);
  CHECK(r0 <= 1e-10);
  CHECK(l0 <= 1e-10);

  const Vector v = random_complex_vector(rng, 8);
  auto [r1, l1] = residual(pencil, mode.lambda, v, v);
  CHECK(r1 > 1e-4);  // generic vector is far from an eigenvector

  auto [r2, l2] = residual(pencil, mode.lambda + Complex(1e-6, 0), mode.v, mode.w);
  const double ev_scale =
      (pencil.E() * mode.v).norm() / ((pencil.norm_A() + std::abs(mode.lambda)) * mode.v.norm());
  CHECK(r2 == doctest::Approx(1e-6 * ev_scale).epsilon(0.01));
}

TEST_CASE("property: decomposition uniqueness on random pencils") {
  std::mt19937_64 rng(111);
  for (int rep = 0; rep < 6; ++rep) {
    const Index m = 6 + static_cast<Index>(rng() % 6);
    ProjectionPencil pencil = random_projection_pencil(rng(), m, m - 2);
    SubspacePair pair = random_normalized_pair(rng(), pencil, 2, true);
    const Vector v = random_complex_vector(rng, m);
    auto [alpha, z] = decompose_right(v, pair, pencil);
    auto [alpha2, z2] = decompose_right(Vector(pair.basis_right * alpha + z), pair, pencil);
    CHECK((alpha2 - alpha).norm() <= 1e-12 * (1.0 + alpha.norm()));
    CHECK((z2 - z).norm() <= 1e-12 * (1.0 + z.norm()));
  }
}
