#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <eigen3/unsupported/Eigen/KroneckerProduct>

#include <cmath>
#include <complex>
#include <vector>

#include "qlab/density.hpp"
#include "qlab/rng.hpp"
#include "qlab/states.hpp"

using namespace qlab;

namespace {

// independent partial-trace oracle: walk every entry of the full matrix and
// accumulate wherever the traced-out indices agree
cmatrix ptrace_oracle(const cmatrix& m, const partition& part,
                      const std::vector<std::string>& keep) {
  const partition kept = part.sub(keep);
  std::vector<int> keep_pos;
  for (const auto& label : kept.labels) keep_pos.push_back(part.position(label));

  cmatrix out = cmatrix::Zero(kept.total_dim(), kept.total_dim());
  for (int r = 0; r < part.total_dim(); ++r) {
    const auto ridx = part.unpack(r);
    for (int c = 0; c < part.total_dim(); ++c) {
      const auto cidx = part.unpack(c);
      bool diagonal_elsewhere = true;
      for (int f = 0; f < part.factors(); ++f) {
        bool is_kept = false;
        for (int p : keep_pos) is_kept |= (p == f);
        if (!is_kept && ridx[f] != cidx[f]) { diagonal_elsewhere = false; break; }
      }
      if (!diagonal_elsewhere) continue;
      std::vector<int> kr, kc;
      for (int p : keep_pos) { kr.push_back(ridx[p]); kc.push_back(cidx[p]); }
      out(kept.pack(kr), kept.pack(kc)) += m(r, c);
    }
  }
  return out;
}

}  // namespace

TEST_CASE("partition: index packing round-trips") {
  partition part({"A", "B", "C"}, {2, 3, 2});
  CHECK(part.total_dim() == 12);
  for (int i = 0; i < 12; ++i) CHECK(part.pack(part.unpack(i)) == i);
  // first factor varies slowest
  CHECK(part.pack({1, 0, 0}) == 6);
  CHECK(part.pack({0, 1, 1}) == 3);
}

TEST_CASE("partition: validation") {
  CHECK_THROWS_AS(partition({"A", "A"}, {2, 2}), error);
  CHECK_THROWS_AS(partition({"A"}, {0}), error);
  CHECK_THROWS_AS(partition({"A", "B"}, {2}), error);
  partition part({"A", "B"}, {2, 2});
  CHECK_THROWS_AS(part.sub({}), error);
  CHECK_THROWS_AS(part.sub({"Z"}), error);
  CHECK_THROWS_AS(part.position("Z"), error);
}

TEST_CASE("partition: sub keeps original factor order") {
  partition part({"A", "B", "C"}, {2, 3, 4});
  partition s = part.sub({"C", "A"});
  CHECK(s.labels == std::vector<std::string>{"A", "C"});
  CHECK(s.dims == std::vector<int>{2, 4});
}

TEST_CASE("tensor: basis composition and norm") {
  partition q = partition::single("Q", 2);
  state_vector zero = basis_state(q, 0);
  state_vector one = basis_state(partition::single("R", 2), 1);
  state_vector both = tensor(zero, one);
  CHECK(both.dim() == 4);
  CHECK(std::abs(both.amps(1) - 1.0) < 1e-15);  // |0>|1> -> index 1

  // norm multiplicativity on a superposition
  cvector a(2);
  a << std::sqrt(0.3), std::sqrt(0.7);
  state_vector sup(a, q);
  CHECK(tensor(sup, one).amps.norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("tensor: identities compose and the dimension cap holds") {
  op id2 = identity_op(partition::single("A", 2));
  op id3 = identity_op(partition::single("B", 3));
  op id6 = tensor(id2, id3);
  CHECK(max_abs(id6.mat - cmatrix::Identity(6, 6)) == 0.0);

  op big = identity_op(partition::single("X", 200));
  CHECK_THROWS_AS(tensor(big, id3), error);
}

TEST_CASE("embed routes sub-operator indices by label") {
  partition whole({"A", "B", "C"}, {2, 2, 2});
  op x_on_b(pauli_x(), partition::single("B", 2));
  op embedded = embed(x_on_b, whole);

  op ida = identity_op(partition::single("A", 2));
  op idc = identity_op(partition::single("C", 2));
  op reference = tensor(tensor(ida, x_on_b), idc);
  CHECK(max_abs(embedded.mat - reference.mat) == 0.0);

  // two-factor sub-operator given in swapped order still lands correctly
  cmatrix cnot(4, 4);
  cnot << 1, 0, 0, 0,
          0, 1, 0, 0,
          0, 0, 0, 1,
          0, 0, 1, 0;
  op gate(cnot, partition({"C", "A"}, {2, 2}));  // control C, target A
  op lifted = embed(gate, whole);
  // |a b c> with c=1 flips a
  state_vector in = basis_state(whole, whole.pack({0, 1, 1}));
  cvector out_amps = lifted.mat * in.amps;
  CHECK(std::abs(out_amps(whole.pack({1, 1, 1})) - 1.0) < 1e-15);
}

TEST_CASE("embed_product equals the product of individual embeddings") {
  partition whole({"A", "B", "C"}, {2, 3, 2});
  op xa(pauli_x(), partition::single("A", 2));
  cmatrix shift = cmatrix::Zero(3, 3);
  shift(1, 0) = shift(2, 1) = shift(0, 2) = 1.0;
  op sb(shift, partition::single("B", 3));
  op zc(pauli_z(), partition::single("C", 2));

  op joint = embed_product({xa, sb, zc}, whole);
  cmatrix separate = embed(xa, whole).mat * embed(sb, whole).mat * embed(zc, whole).mat;
  CHECK(max_abs(joint.mat - separate) < 1e-15);

  CHECK_THROWS_AS(embed_product({xa, sb}, whole), error);       // C uncovered
  CHECK_THROWS_AS(embed_product({xa, xa, sb, zc}, whole), error);  // A twice
}

TEST_CASE("permute_factors relabels amplitudes consistently") {
  partition ab({"A", "B"}, {2, 3});
  state_vector v = random_pure_state(ab, 7);
  state_vector w = permute_factors(v, {"B", "A"});
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 3; ++b)
      CHECK(v.amps(ab.pack({a, b})) == w.amps(w.part.pack({b, a})));
}

TEST_CASE("density_matrix: construction validates and clips") {
  partition q = partition::single("Q", 2);
  cmatrix good(2, 2);
  good << 0.3, 0, 0, 0.7;
  density_matrix rho(good, q);
  CHECK(rho.trace_deficit == 0.0);

  cmatrix nonherm(2, 2);
  nonherm << 0.5, 0.2, 0.3, 0.5;
  CHECK_THROWS_AS(density_matrix(nonherm, q), error);

  cmatrix negative(2, 2);
  negative << 1.1, 0, 0, -0.1;
  CHECK_THROWS_AS(density_matrix(negative, q), error);

  // tiny negative eigenvalue is clipped, not fatal
  cmatrix borderline(2, 2);
  borderline << 1.0, 0, 0, -5e-11;
  density_matrix clipped(borderline, q);
  Eigen::SelfAdjointEigenSolver<cmatrix> solver(clipped.mat);
  CHECK(solver.eigenvalues().minCoeff() >= 0.0);

  cmatrix sub(2, 2);
  sub << 0.5, 0, 0, 0.48;
  CHECK(density_matrix(sub, q).trace_deficit == doctest::Approx(0.02).epsilon(1e-9));
}

TEST_CASE("validate_density_matrix reports instead of throwing") {
  partition q = partition::single("Q", 2);
  cmatrix good(2, 2);
  good << 0.3, 0, 0, 0.7;
  auto d = validate_density_matrix(op(good, q));
  CHECK(d.ok);
  CHECK(d.trace == doctest::Approx(1.0));
  CHECK(d.decay_probability == doctest::Approx(0.0).epsilon(1e-12));

  cmatrix nonherm(2, 2);
  nonherm << 0.5, 0.2, 0.3, 0.5;
  auto d2 = validate_density_matrix(op(nonherm, q));
  CHECK_FALSE(d2.hermitian_ok);
  CHECK_FALSE(d2.ok);

  cmatrix sub(2, 2);
  sub << 0.49, 0, 0, 0.49;
  auto d3 = validate_density_matrix(op(sub, q));
  CHECK(d3.ok);
  CHECK(d3.decay_probability == doctest::Approx(0.02).epsilon(1e-9));
}

TEST_CASE("partial_trace: two-term entangled state gives the Schmidt spectrum") {
  // alpha |a1>|b1> + beta |a2>|b2> with orthogonal factors on each side
  const double alpha = std::sqrt(0.3), beta = std::sqrt(0.7);
  partition ab({"A", "B"}, {2, 2});
  cvector psi = cvector::Zero(4);
  psi(ab.pack({0, 0})) = alpha;
  psi(ab.pack({1, 1})) = beta;
  density_matrix rho = density_matrix::pure(state_vector(psi, ab));

  density_matrix ra = partial_trace(rho, {"A"});
  auto es = spectral_decompose(ra);
  CHECK(es.probs[0] == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(es.probs[1] == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("partial_trace: product state reduces exactly") {
  density_matrix a = random_density_matrix(partition::single("A", 3), 2, 11);
  density_matrix b = random_density_matrix(partition::single("B", 2), 2, 12);
  cmatrix prod = Eigen::kroneckerProduct(a.mat, b.mat).eval();
  density_matrix joint(prod, partition({"A", "B"}, {3, 2}));
  CHECK(max_abs(partial_trace(joint, {"A"}).mat - a.mat) < 1e-14);
  CHECK(max_abs(partial_trace(joint, {"B"}).mat - b.mat) < 1e-14);
}

TEST_CASE("partial_trace: every reduction path through the diagram agrees") {
  partition abc({"A", "B", "C"}, {2, 2, 3});
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    density_matrix rho = random_density_matrix(abc, 4, seed);

    // one-step versus two-step reductions to A
    cmatrix direct = partial_trace(rho, {"A"}).mat;
    cmatrix via_ab = partial_trace(partial_trace(rho, {"A", "B"}), {"A"}).mat;
    cmatrix via_ac = partial_trace(partial_trace(rho, {"A", "C"}), {"A"}).mat;
    CHECK(max_abs(direct - via_ab) < 1e-12);
    CHECK(max_abs(direct - via_ac) < 1e-12);

    // against the entry-walking oracle
    CHECK(max_abs(direct - ptrace_oracle(rho.mat, abc, {"A"})) < 1e-12);
    CHECK(max_abs(partial_trace(rho, {"B", "C"}).mat -
                  ptrace_oracle(rho.mat, abc, {"B", "C"})) < 1e-12);

    // trace and hermiticity survive
    density_matrix rbc = partial_trace(rho, {"B", "C"});
    CHECK(std::abs(rbc.mat.trace().real() - rho.mat.trace().real()) < 1e-12);
    CHECK(hermiticity_residual(rbc.mat) < 1e-14);
  }
}

TEST_CASE("partial_trace: diagonal joint table reduces to classical sums") {
  partition ab({"A", "B"}, {3, 4});
  rmatrix table(3, 4);
  table << 0.05, 0.10, 0.02, 0.08,
           0.15, 0.05, 0.05, 0.10,
           0.10, 0.10, 0.10, 0.10;
  cmatrix joint = cmatrix::Zero(12, 12);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 4; ++b)
      joint(ab.pack({a, b}), ab.pack({a, b})) = table(a, b);
  density_matrix rho(joint, ab);

  cmatrix ra = partial_trace(rho, {"A"}).mat;
  cmatrix rb = partial_trace(rho, {"B"}).mat;
  for (int a = 0; a < 3; ++a)
    CHECK(ra(a, a).real() == doctest::Approx(table.row(a).sum()).epsilon(1e-12));
  for (int b = 0; b < 4; ++b)
    CHECK(rb(b, b).real() == doctest::Approx(table.col(b).sum()).epsilon(1e-12));
  CHECK(max_abs(ra - cmatrix(ra.diagonal().asDiagonal())) < 1e-15);
}

TEST_CASE("spectral_decompose: pure state comes back as a single unit pair") {
  state_vector psi = random_pure_state(4, 3);
  auto es = spectral_decompose(density_matrix::pure(psi));
  CHECK(es.probs[0] == doctest::Approx(1.0).epsilon(1e-12));
  for (int i = 1; i < es.size(); ++i) CHECK(es.probs[i] < 1e-12);
  // same ray up to the fixed gauge
  CHECK(std::abs(std::abs(es.states[0].amps.dot(psi.amps)) - 1.0) < 1e-12);
}

TEST_CASE("spectral_decompose: gauge fixing and ordering conventions") {
  for (std::uint64_t seed = 30; seed < 40; ++seed) {
    density_matrix rho = random_density_matrix(4, 4, seed);
    auto es = spectral_decompose(rho);
    for (int i = 0; i + 1 < es.size(); ++i) CHECK(es.probs[i] >= es.probs[i + 1]);
    for (const auto& s : es.states) {
      // first component above the floor is real positive
      for (int k = 0; k < s.dim(); ++k) {
        if (std::abs(s.amps(k)) > 1e-12) {
          CHECK(s.amps(k).imag() == doctest::Approx(0.0).epsilon(1e-12));
          CHECK(s.amps(k).real() > 0.0);
          break;
        }
      }
    }
    // pairwise orthogonality
    for (int i = 0; i < es.size(); ++i)
      for (int j = i + 1; j < es.size(); ++j)
        CHECK(std::abs(es.states[i].amps.dot(es.states[j].amps)) < 1e-8);
  }
}

TEST_CASE("spectral_decompose: degenerate spectrum still deterministic") {
  partition q = partition::single("Q", 4);
  density_matrix mixed(cmatrix::Identity(4, 4) / 4.0, q);
  auto a = spectral_decompose(mixed);
  auto b = spectral_decompose(mixed);
  for (int i = 0; i < 4; ++i) {
    CHECK(a.probs[i] == b.probs[i]);
    CHECK(max_abs(a.states[i].amps - b.states[i].amps) == 0.0);
  }
}

TEST_CASE("rebuild inverts spectral_decompose") {
  for (std::uint64_t seed = 50; seed < 60; ++seed) {
    density_matrix rho = random_density_matrix(4, 3, seed);
    density_matrix back = rebuild(spectral_decompose(rho));
    CHECK(max_abs(back.mat - rho.mat) < 1e-12);
  }
}

TEST_CASE("subnormalized spectra keep the deficit visible") {
  partition q = partition::single("Q", 2);
  cmatrix sub(2, 2);
  sub << 0.6, 0, 0, 0.3;
  auto es = spectral_decompose(density_matrix(sub, q));
  CHECK(es.trace_deficit == doctest::Approx(0.1).epsilon(1e-9));
  CHECK(es.probs[0] + es.probs[1] == doctest::Approx(0.9).epsilon(1e-12));
}

TEST_CASE("von_neumann_entropy: anchors and the direct-summation oracle") {
  partition q4 = partition::single("Q", 4);

  CHECK(von_neumann_entropy(density_matrix::pure(random_pure_state(4, 9))) ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK(von_neumann_entropy(density_matrix(cmatrix::Identity(4, 4) / 4.0, q4)) ==
        doctest::Approx(std::log(4.0)).epsilon(1e-12));

  rvector p(4);
  p << 1.0 / 12, 1.0 / 12, 1.0 / 12, 9.0 / 12;
  cmatrix diag = cmatrix::Zero(4, 4);
  double oracle = 0.0;
  for (int i = 0; i < 4; ++i) {
    diag(i, i) = p(i);
    oracle -= p(i) * std::log(p(i));
  }
  CHECK(von_neumann_entropy(density_matrix(diag, q4)) ==
        doctest::Approx(oracle).epsilon(1e-13));
}

TEST_CASE("von_neumann_entropy is additive on product states") {
  density_matrix a = random_density_matrix(partition::single("A", 3), 3, 71);
  density_matrix b = random_density_matrix(partition::single("B", 4), 2, 72);
  density_matrix joint(Eigen::kroneckerProduct(a.mat, b.mat).eval(),
                       partition({"A", "B"}, {3, 4}));
  CHECK(von_neumann_entropy(joint) ==
        doctest::Approx(von_neumann_entropy(a) + von_neumann_entropy(b))
            .epsilon(1e-10));
}

TEST_CASE("random generators: determinism and advertised structure") {
  state_vector v1 = random_pure_state(5, 42);
  state_vector v2 = random_pure_state(5, 42);
  CHECK(max_abs(v1.amps - v2.amps) == 0.0);
  CHECK(std::abs(v1.amps.norm() - 1.0) < 1e-12);
  CHECK(max_abs(v1.amps - random_pure_state(5, 43).amps) > 1e-3);

  density_matrix r1 = random_density_matrix(4, 2, 7);
  density_matrix r2 = random_density_matrix(4, 2, 7);
  CHECK(max_abs(r1.mat - r2.mat) == 0.0);
  Eigen::SelfAdjointEigenSolver<cmatrix> solver(r1.mat, Eigen::EigenvaluesOnly);
  int above = 0;
  for (int i = 0; i < 4; ++i)
    if (solver.eigenvalues()(i) > 1e-10) ++above;
  CHECK(above == 2);
  CHECK_THROWS_AS(random_density_matrix(4, 5, 1), error);
  CHECK_THROWS_AS(random_density_matrix(4, 0, 1), error);

  cmatrix u = random_unitary(6, 13);
  CHECK(max_abs(u * u.adjoint() - cmatrix::Identity(6, 6)) < 1e-12);
}
