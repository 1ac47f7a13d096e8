#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <eigen3/unsupported/Eigen/KroneckerProduct>

#include <cmath>
#include <complex>
#include <vector>

#include "qlab/assignment.hpp"
#include "qlab/kraus.hpp"
#include "qlab/lindblad.hpp"
#include "qlab/matfun.hpp"
#include "qlab/rng.hpp"

using namespace qlab;

namespace {

const partition qubit = partition::single("Q", 2);

std::vector<op> computational_projectors(const partition& part) {
  std::vector<op> ps;
  for (int k = 0; k < part.total_dim(); ++k) {
    cmatrix p = cmatrix::Zero(part.total_dim(), part.total_dim());
    p(k, k) = 1.0;
    ps.emplace_back(std::move(p), part);
  }
  return ps;
}

}  // namespace

TEST_CASE("kraus factories validate completeness and shapes") {
  CHECK_THROWS_AS(kraus_channel::checked({}, qubit), error);
  CHECK_THROWS_AS(
      kraus_channel::checked({cmatrix::Identity(3, 3)}, qubit), error);
  // half an identity is nowhere near trace preserving
  CHECK_THROWS_AS(
      kraus_channel::checked({0.5 * cmatrix::Identity(2, 2)}, qubit), error);
  // but unchecked lets deliberately lossy maps through
  kraus_channel lossy =
      kraus_channel::unchecked({0.5 * cmatrix::Identity(2, 2)}, qubit, qubit);
  CHECK_FALSE(verify_cpt(lossy).tp_ok);
}

TEST_CASE("identity and unitary channels act as advertised") {
  density_matrix rho = random_density_matrix(qubit, 2, 5);
  CHECK(max_abs(apply(identity_channel(qubit), rho).mat - rho.mat) == 0.0);

  cmatrix u = random_unitary(2, 8);
  density_matrix out = apply(unitary_channel(u, qubit), rho);
  CHECK(max_abs(out.mat - u * rho.mat * u.adjoint()) < 1e-15);
  CHECK(out.part == rho.part);

  cmatrix not_unitary = 2.0 * u;
  CHECK_THROWS_AS(unitary_channel(not_unitary, qubit), error);
}

TEST_CASE("full dephasing keeps the diagonal and kills the off-diagonal") {
  kraus_channel deph = luders_channel(computational_projectors(qubit));
  cmatrix rho(2, 2);
  rho << 0.3, complexd(0.1, 0.05), complexd(0.1, -0.05), 0.7;

  // direct two-term Kraus sum as the oracle
  cmatrix p0 = cmatrix::Zero(2, 2), p1 = cmatrix::Zero(2, 2);
  p0(0, 0) = 1.0;
  p1(1, 1) = 1.0;
  const cmatrix oracle = p0 * rho * p0 + p1 * rho * p1;

  density_matrix out = apply(deph, density_matrix(rho, qubit));
  CHECK(max_abs(out.mat - oracle) < 1e-15);
  CHECK(std::abs(out.mat(0, 1)) == 0.0);
  CHECK(out.mat(0, 0).real() == doctest::Approx(0.3));
}

TEST_CASE("verify_cpt diagnostics") {
  cmatrix u = random_unitary(3, 21);
  auto d = verify_cpt(unitary_channel(u, partition::single("S", 3)));
  CHECK(d.tp_residual <= 1e-12);
  CHECK(d.choi_min_eigenvalue >= -1e-12);
  CHECK(d.ok);

  // scaling every Kraus operator by 0.9 loses 19% of the trace
  partition s3 = partition::single("S", 3);
  kraus_channel scaled = kraus_channel::unchecked({0.9 * u}, s3, s3);
  auto d2 = verify_cpt(scaled);
  CHECK(d2.tp_residual == doctest::Approx(0.19).epsilon(1e-12));
  CHECK_FALSE(d2.tp_ok);
  CHECK(d2.cp_ok);  // still a genuine Kraus sum, just lossy
}

TEST_CASE("the transpose map is detected as non-CP") {
  // qubit transpose as a superoperator: its dual operator on the doubled
  // space is the swap matrix
  cmatrix swap = cmatrix::Zero(4, 4);
  swap(0, 0) = swap(1, 2) = swap(2, 1) = swap(3, 3) = 1.0;
  choi_matrix c{swap, 2, 2};

  Eigen::SelfAdjointEigenSolver<cmatrix> solver(swap, Eigen::EigenvaluesOnly);
  CHECK(solver.eigenvalues().minCoeff() == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK_THROWS_AS(kraus_from_choi(c), error);
}

TEST_CASE("choi of the identity is the unnormalized entangled projector") {
  choi_matrix c = choi(identity_channel(qubit));
  cvector v = cvector::Zero(4);
  v(0) = v(3) = 1.0;  // |00> + |11> on out (x) in
  CHECK(max_abs(c.mat - v * v.adjoint()) < 1e-15);
}

TEST_CASE("choi spectrum of the depolarizing channel") {
  const double p = 0.3;
  std::vector<cmatrix> ops = {std::sqrt(1.0 - 3.0 * p / 4.0) * cmatrix::Identity(2, 2),
                              std::sqrt(p / 4.0) * pauli_x(),
                              std::sqrt(p / 4.0) * pauli_y(),
                              std::sqrt(p / 4.0) * pauli_z()};
  kraus_channel depol = kraus_channel::checked(ops, qubit);
  choi_matrix c = choi(depol);

  Eigen::SelfAdjointEigenSolver<cmatrix> solver(c.mat, Eigen::EigenvaluesOnly);
  rvector expected(4);
  expected << p / 2, p / 2, p / 2, 2.0 - 3.0 * p / 2;  // ascending
  for (int i = 0; i < 4; ++i)
    CHECK(solver.eigenvalues()(i) == doctest::Approx(expected(i)).epsilon(1e-12));
  CHECK(c.mat.trace().real() == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("kraus <-> choi round trip preserves channel action") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    kraus_channel ch = random_channel(3, 4, seed);
    kraus_channel back = kraus_from_choi(choi(ch));
    for (int k = 0; k < 5; ++k) {
      density_matrix rho =
          random_density_matrix(3, 3, split_seed(seed, 100 + k));
      CHECK(max_abs(apply_raw(back, rho.mat) - apply(ch, rho).mat) < 1e-10);
    }
    auto d = verify_cpt(back);
    CHECK(d.tp_residual <= 1e-9);
    CHECK(d.choi_min_eigenvalue >= -1e-9);
  }
}

TEST_CASE("rectangular channels: tracing out a factor in Kraus form") {
  partition ab({"A", "B"}, {2, 2});
  // E_a = <a| (x) 1 implements the partial trace over A
  std::vector<cmatrix> ops;
  for (int a = 0; a < 2; ++a) {
    cmatrix e = cmatrix::Zero(2, 4);
    for (int b = 0; b < 2; ++b) e(b, ab.pack({a, b})) = 1.0;
    ops.push_back(e);
  }
  kraus_channel tr_a =
      kraus_channel::checked(ops, ab, partition::single("B", 2));

  density_matrix rho = random_density_matrix(ab, 4, 17);
  CHECK(max_abs(apply(tr_a, rho).mat - partial_trace(rho, {"B"}).mat) < 1e-13);

  kraus_channel back = kraus_from_choi(choi(tr_a), ab, partition::single("B", 2));
  CHECK(max_abs(apply_raw(back, rho.mat) - apply_raw(tr_a, rho.mat)) < 1e-12);
}

TEST_CASE("random channels are CPT and deterministic") {
  for (std::uint64_t seed : {2u, 9u, 31u}) {
    kraus_channel ch = random_channel(4, 3, seed);
    auto d = verify_cpt(ch);
    CHECK(d.tp_residual <= 1e-12);
    CHECK(d.choi_min_eigenvalue >= -1e-12);

    kraus_channel again = random_channel(4, 3, seed);
    for (std::size_t k = 0; k < ch.kraus_ops.size(); ++k)
      CHECK(max_abs(ch.kraus_ops[k] - again.kraus_ops[k]) == 0.0);
  }
}

TEST_CASE("apply preserves hermiticity and positivity") {
  for (std::uint64_t seed = 40; seed < 50; ++seed) {
    kraus_channel ch = random_channel(3, 2, seed);
    density_matrix rho = random_density_matrix(3, 2, seed + 1000);
    density_matrix out = apply(ch, rho);
    CHECK(hermiticity_residual(out.mat) < 1e-12);
    Eigen::SelfAdjointEigenSolver<cmatrix> solver(out.mat, Eigen::EigenvaluesOnly);
    CHECK(solver.eigenvalues().minCoeff() >= -1e-9);
    CHECK(out.mat.trace().real() == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("luders channel: validation, identity case, block diagonality") {
  CHECK_THROWS_AS(luders_channel({}), error);

  partition q4 = partition::single("S", 4);
  kraus_channel ident = luders_channel({identity_op(q4)});
  density_matrix rho = random_density_matrix(q4, 4, 3);
  CHECK(max_abs(apply(ident, rho).mat - rho.mat) < 1e-15);

  // incomplete and non-orthogonal sets are rejected
  auto ps = computational_projectors(q4);
  CHECK_THROWS_AS(luders_channel({ps[0], ps[1]}), error);
  cmatrix tilted(4, 4);
  tilted.setZero();
  tilted(0, 0) = tilted(0, 1) = tilted(1, 0) = tilted(1, 1) = 0.5;
  CHECK_THROWS_AS(
      luders_channel({op(tilted, q4), ps[1], ps[2], ps[3]}), error);

  // 2+2 block projectors: output block-diagonal, commutes with each projector
  cmatrix pa = cmatrix::Zero(4, 4), pb = cmatrix::Zero(4, 4);
  pa(0, 0) = pa(1, 1) = 1.0;
  pb(2, 2) = pb(3, 3) = 1.0;
  kraus_channel blocks = luders_channel({op(pa, q4), op(pb, q4)});
  density_matrix out = apply(blocks, rho);

  cmatrix oracle = pa * rho.mat * pa + pb * rho.mat * pb;  // direct Kraus sum
  CHECK(max_abs(out.mat - oracle) < 1e-15);
  CHECK(max_abs(out.mat.block(0, 2, 2, 2)) == 0.0);
  CHECK(max_abs(out.mat * pa - pa * out.mat) <= 1e-12);
  CHECK(max_abs(out.mat * pb - pb * out.mat) <= 1e-12);
}

TEST_CASE("lindblad: free evolution matches the exact unitary map") {
  op h(pauli_z(), qubit);
  lindblad_generator gen(h, {}, {});
  density_matrix rho = random_density_matrix(qubit, 2, 77);

  const double t = 1.0;
  density_matrix evolved = lindblad_evolve(gen, rho, t, 1e-3);

  cmatrix u(2, 2);  // exp(-i sigma_z t) in closed form
  u.setZero();
  u(0, 0) = std::exp(complexd(0, -t));
  u(1, 1) = std::exp(complexd(0, t));
  CHECK(max_abs(evolved.mat - u * rho.mat * u.adjoint()) < 1e-8);
  CHECK(evolved.mat.trace().real() == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("lindblad: dephasing follows the closed-form 2x2 solution") {
  // d/dt rho01 = -2 gamma rho01 for jump operator sigma_z at rate gamma,
  // solved exactly; diagonal is frozen
  const double gamma = 0.8;
  op h(cmatrix::Zero(2, 2), qubit);
  lindblad_generator gen(h, {op(pauli_z(), qubit)}, {gamma});

  cmatrix rho0(2, 2);
  rho0 << 0.3, complexd(0.2, -0.1), complexd(0.2, 0.1), 0.7;

  for (double t : {0.25, 1.0, 2.0 / gamma}) {
    density_matrix out = lindblad_evolve(gen, density_matrix(rho0, qubit), t, 1e-3);
    const complexd expected01 = rho0(0, 1) * std::exp(-2.0 * gamma * t);
    CHECK(std::abs(out.mat(0, 1) - expected01) < 1e-6);
    CHECK(out.mat(0, 0).real() == doctest::Approx(0.3).epsilon(1e-8));
    CHECK(out.mat.trace().real() == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("lindblad: oversized steps trip the positivity guard") {
  cmatrix lower = cmatrix::Zero(2, 2);
  lower(0, 1) = 1.0;  // decay |1> -> |0>
  lindblad_generator gen(op(cmatrix::Zero(2, 2), qubit), {op(lower, qubit)},
                         {100.0});
  cmatrix excited = cmatrix::Zero(2, 2);
  excited(1, 1) = 1.0;
  CHECK_THROWS_AS(
      lindblad_evolve(gen, density_matrix(excited, qubit), 1.0, 0.5), error);

  CHECK_THROWS_AS(lindblad_generator(op(pauli_x() * complexd(0, 1), qubit), {}, {}),
                  error);
  CHECK_THROWS_AS(lindblad_generator(op(cmatrix::Zero(2, 2), qubit),
                                     {op(lower, qubit)}, {-1.0}),
                  error);
}

TEST_CASE("assignment map: defining identity and factorized case") {
  partition qe({"Q", "E"}, {2, 3});

  // full-rank joint state: A[rho_Q] telescopes back to rho_W
  for (std::uint64_t seed = 60; seed < 64; ++seed) {
    density_matrix rho_w = random_density_matrix(qe, 6, seed);
    cmatrix rho_q = partial_trace(rho_w, {"Q"}).mat;
    op lifted = assignment_map(rho_w, {"Q"}, op(rho_q, partition::single("Q", 2)));
    CHECK(max_abs(lifted.mat - rho_w.mat) < 1e-10);
  }

  // factorized joint state: A[X] = X (x) rho_E
  density_matrix rho_q = random_density_matrix(partition::single("Q", 2), 2, 70);
  density_matrix rho_e = random_density_matrix(partition::single("E", 3), 3, 71);
  density_matrix rho_w(Eigen::kroneckerProduct(rho_q.mat, rho_e.mat).eval(), qe);
  cmatrix x = random_gaussian_matrix(2, 2, 72);
  x = x + x.adjoint().eval();  // Hermitian test operand
  op lifted = assignment_map(rho_w, {"Q"}, op(x, partition::single("Q", 2)));
  CHECK(max_abs(lifted.mat - Eigen::kroneckerProduct(x, rho_e.mat).eval()) < 1e-10);
}

TEST_CASE("assignment map: Q need not be the leading factor") {
  partition eq({"E", "Q"}, {3, 2});
  density_matrix rho_w = random_density_matrix(eq, 6, 80);
  cmatrix rho_q = partial_trace(rho_w, {"Q"}).mat;
  op lifted = assignment_map(rho_w, {"Q"}, op(rho_q, partition::single("Q", 2)));
  CHECK(max_abs(lifted.mat - rho_w.mat) < 1e-10);
}

TEST_CASE("assignment map: support handling on rank-deficient reductions") {
  partition qe({"Q", "E"}, {3, 2});
  // Schmidt-rank-2 pure state: rho_Q has a null direction |2>
  cvector psi = cvector::Zero(6);
  psi(qe.pack({0, 0})) = std::sqrt(0.6);
  psi(qe.pack({1, 1})) = std::sqrt(0.4);
  density_matrix rho_w = density_matrix::pure(state_vector(psi, qe));
  partition q = partition::single("Q", 3);

  cmatrix rho_q = partial_trace(rho_w, {"Q"}).mat;
  op lifted = assignment_map(rho_w, {"Q"}, op(rho_q, q));
  CHECK(max_abs(lifted.mat - rho_w.mat) < 1e-10);

  // positivity is preserved for PSD operands on the support
  cmatrix on_support = cmatrix::Zero(3, 3);
  on_support(0, 0) = 0.5;
  on_support(1, 1) = 0.5;
  op lifted2 = assignment_map(rho_w, {"Q"}, op(on_support, q));
  Eigen::SelfAdjointEigenSolver<cmatrix> solver(lifted2.mat, Eigen::EigenvaluesOnly);
  CHECK(solver.eigenvalues().minCoeff() >= -1e-9);

  // an operand living on the null direction is rejected
  cmatrix off_support = cmatrix::Zero(3, 3);
  off_support(2, 2) = 1.0;
  CHECK_THROWS_AS(assignment_map(rho_w, {"Q"}, op(off_support, q)), error);
}

TEST_CASE("conditional state: propagation rule reproduces channel action") {
  // identity: rho comes back untouched
  choi_matrix j_id = conditional_state(identity_channel(qubit));
  density_matrix rho = random_density_matrix(qubit, 2, 90);
  CHECK(max_abs(propagate_with_conditional_state(j_id, rho.mat) - rho.mat) < 1e-15);

  // Hadamard: |0><0| goes to |+><+|
  kraus_channel had = unitary_channel(hadamard(), qubit);
  choi_matrix j_had = conditional_state(had);
  cmatrix zero = cmatrix::Zero(2, 2);
  zero(0, 0) = 1.0;
  cmatrix plus = cmatrix::Constant(2, 2, 0.5);
  CHECK(max_abs(propagate_with_conditional_state(j_had, zero) - plus) < 1e-14);

  // random channels against apply() as the oracle
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    kraus_channel ch = random_channel(3, 3, seed);
    choi_matrix j = conditional_state(ch);
    CHECK(hermiticity_residual(j.mat) < 1e-12);
    for (int k = 0; k < 5; ++k) {
      density_matrix r = random_density_matrix(3, 3, split_seed(seed, k));
      CHECK(max_abs(propagate_with_conditional_state(j, r.mat) - apply(ch, r).mat) <
            1e-10);
    }
  }
}

TEST_CASE("matrix roots: pseudo-inverse stays on the support") {
  density_matrix rho = random_density_matrix(4, 2, 33);
  cmatrix root = sqrt_psd(rho.mat);
  CHECK(max_abs(root * root - rho.mat) < 1e-12);

  cmatrix inv_root = inv_sqrt_psd(rho.mat);
  cmatrix proj = support_projector(rho.mat);
  CHECK(max_abs(inv_root * rho.mat * inv_root - proj) < 1e-10);
  CHECK(max_abs(proj * proj - proj) < 1e-12);

  cmatrix negative = -cmatrix::Identity(2, 2);
  CHECK_THROWS_AS(sqrt_psd(negative), error);
}
