// Copyright 2026 The tempcompat Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <catch_amalgamated.hpp>

#include <vector>

#include "oracles.hpp"
#include "tempcompat.hpp"

using namespace tempcompat;
using Catch::Matchers::WithinAbs;

namespace {

ComplexMatrix sigma(int k) { return pauli_matrices()[static_cast<std::size_t>(k)]; }

BipartiteOperator bell_state() {
  ComplexMatrix phi = ComplexMatrix::Zero(4, 4);
  phi(0, 0) = phi(0, 3) = phi(3, 0) = phi(3, 3) = 0.5;
  return {2, 2, phi};
}

ComplexMatrix random_psd(Index d, Rng& rng) {
  const ComplexMatrix g = ginibre(d, d, rng);
  return g * g.adjoint();
}

}  // namespace

TEST_CASE("hermitian operator validation", "[operators]") {
  ComplexMatrix m(2, 2);
  m << 1.0, Complex(0.0, 1.0), Complex(0.0, 1.0), 1.0;
  CHECK_THROWS_AS(HermitianOperator(m), InvariantError);
  CHECK_THROWS_AS(HermitianOperator(ComplexMatrix(2, 3)), DimensionError);
  CHECK_NOTHROW(HermitianOperator(sigma(2)));
}

TEST_CASE("eig_hermitian examples", "[operators]") {
  SECTION("sigma_z") {
    const auto sd = eig_hermitian(HermitianOperator(sigma(3)));
    REQUIRE(sd.eigenvalues.size() == 2);
    CHECK_THAT(sd.eigenvalues[0], WithinAbs(1.0, 1e-12));
    CHECK_THAT(sd.eigenvalues[1], WithinAbs(-1.0, 1e-12));
    ComplexMatrix p0 = ComplexMatrix::Zero(2, 2);
    p0(0, 0) = 1.0;
    CHECK(max_abs_diff(sd.projectors[0], p0) < 1e-12);
  }
  SECTION("identity is one cluster") {
    const auto sd = eig_hermitian(HermitianOperator(identity(2)));
    REQUIRE(sd.eigenvalues.size() == 1);
    CHECK(sd.multiplicities[0] == 2);
    CHECK(max_abs_diff(sd.projectors[0], identity(2)) < 1e-12);
  }
  SECTION("sigma_x projectors are |+><+| and |-><-|") {
    const auto sd = eig_hermitian(HermitianOperator(sigma(1)));
    ComplexMatrix plus = ComplexMatrix::Constant(2, 2, 0.5);
    ComplexMatrix minus(2, 2);
    minus << 0.5, -0.5, -0.5, 0.5;
    CHECK(max_abs_diff(sd.projectors[0], plus) < 1e-12);
    CHECK(max_abs_diff(sd.projectors[1], minus) < 1e-12);
  }
}

TEST_CASE("spectral decomposition invariants on random Hermitian matrices", "[operators][property]") {
  Rng rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    const Index d = rng.uniform_int(1, 8);
    ComplexMatrix m = random_hermitian(d, rng).matrix();
    if (trial % 3 == 0 && d > 1) {
      // Force a degenerate eigenvalue.
      const ComplexMatrix u = random_unitary(d, rng);
      RealVector v(d);
      for (Index i = 0; i < d; ++i) v(i) = i < 2 ? 0.5 : rng.normal();
      m = u * v.cast<Complex>().asDiagonal() * u.adjoint();
      m = 0.5 * (m + m.adjoint()).eval();
    }
    const auto sd = eig_hermitian(HermitianOperator(m));
    CHECK(max_abs_diff(sd.reconstruct(), m) < 1e-9);
    int total = 0;
    for (std::size_t i = 0; i < sd.projectors.size(); ++i) {
      total += sd.multiplicities[i];
      CHECK(max_abs_diff(sd.projectors[i] * sd.projectors[i], sd.projectors[i]) < 1e-9);
      for (std::size_t j = i + 1; j < sd.projectors.size(); ++j)
        CHECK(max_abs(sd.projectors[i] * sd.projectors[j]) < 1e-9);
      if (i > 0) CHECK(sd.eigenvalues[i] < sd.eigenvalues[i - 1]);
    }
    CHECK(total == d);
    const auto ref = oracle::eigenvalues(oracle::from_eigen(m));
    for (Index k = 0; k < d; ++k)
      CHECK_THAT(sd.values(d - 1 - k), WithinAbs(ref[static_cast<std::size_t>(k)], 1e-9));
  }
}

TEST_CASE("is_psd examples", "[operators]") {
  ComplexMatrix p = ComplexMatrix::Zero(2, 2);
  p(0, 0) = 1.0;
  auto r = is_psd(HermitianOperator(p));
  CHECK(r.psd);
  CHECK_THAT(r.min_eigenvalue, WithinAbs(0.0, 1e-12));
  r = is_psd(HermitianOperator(sigma(3)));
  CHECK_FALSE(r.psd);
  CHECK_THAT(r.min_eigenvalue, WithinAbs(-1.0, 1e-12));
  const ComplexMatrix pt = partial_transpose(bell_state(), Side::A).matrix();
  r = is_psd(HermitianOperator(pt));
  CHECK_FALSE(r.psd);
  CHECK_THAT(r.min_eigenvalue, WithinAbs(oracle::min_eigenvalue(pt), 1e-10));
  CHECK_THAT(r.min_eigenvalue, WithinAbs(-0.5, 1e-12));
}

TEST_CASE("tensor examples and oracle agreement", "[operators]") {
  CHECK(max_abs_diff(tensor(identity(2), identity(2)).matrix(), identity(4)) < 1e-15);
  ComplexMatrix zz = ComplexMatrix::Zero(4, 4);
  zz.diagonal() << 1.0, -1.0, -1.0, 1.0;
  CHECK(max_abs_diff(tensor(sigma(3), sigma(3)).matrix(), zz) < 1e-15);
  ComplexMatrix p0 = ComplexMatrix::Zero(2, 2);
  p0(0, 0) = 1.0;
  ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
  expected.block(0, 0, 2, 2) = sigma(1);
  CHECK(max_abs_diff(tensor(p0, sigma(1)).matrix(), expected) < 1e-15);

  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const Index da = rng.uniform_int(1, 4), db = rng.uniform_int(1, 4);
    const ComplexMatrix x = ginibre(da, da, rng), y = ginibre(db, db, rng);
    const auto ref = oracle::kron(oracle::from_eigen(x), oracle::from_eigen(y));
    CHECK(oracle::max_abs_diff(oracle::from_eigen(tensor(x, y).matrix()), ref) < 1e-14);
  }
}

TEST_CASE("partial trace", "[operators]") {
  SECTION("examples") {
    const ComplexMatrix traced = partial_trace(bell_state(), Side::B);
    CHECK(max_abs_diff(traced, identity(2) / 2.0) < 1e-15);
    CHECK(max_abs_diff(partial_trace(swap_operator(2), Side::B), identity(2)) < 1e-15);
    Rng rng(5);
    const DensityMatrix ra = random_density(3, 3, rng), rb = random_density(2, 2, rng);
    CHECK(max_abs_diff(partial_trace(tensor(ra.matrix(), rb.matrix()), Side::B), ra.matrix()) < 1e-14);
  }
  SECTION("property: Tr_B(A ⊗ B) = A Tr B and oracle agreement") {
    Rng rng(17);
    for (int trial = 0; trial < 40; ++trial) {
      const Index da = rng.uniform_int(1, 4), db = rng.uniform_int(1, 4);
      const ComplexMatrix a = ginibre(da, da, rng), b = ginibre(db, db, rng);
      CHECK(max_abs_diff(partial_trace(tensor(a, b), Side::B), a * b.trace()) < 1e-12);
      CHECK(max_abs_diff(partial_trace(tensor(a, b), Side::A), b * a.trace()) < 1e-12);
      const BipartiteOperator t(da, db, ginibre(da * db, da * db, rng));
      const auto m = oracle::from_eigen(t.matrix());
      CHECK(oracle::max_abs_diff(oracle::from_eigen(partial_trace(t, Side::B)),
                                 oracle::ptrace(m, da, db, true)) < 1e-12);
      CHECK(oracle::max_abs_diff(oracle::from_eigen(partial_trace(t, Side::A)),
                                 oracle::ptrace(m, da, db, false)) < 1e-12);
      CHECK(std::abs(partial_trace(t, Side::A).trace() - t.matrix().trace()) < 1e-12);
    }
  }
}

TEST_CASE("partial transpose", "[operators]") {
  SECTION("examples") {
    Rng rng(9);
    const ComplexMatrix ra = random_density(2, 2, rng).matrix().real().cast<Complex>();
    const ComplexMatrix ra_sym = 0.5 * (ra + ra.transpose());
    const ComplexMatrix rb = random_density(2, 2, rng).matrix();
    const BipartiteOperator prod = tensor(ra_sym, rb);
    CHECK(max_abs_diff(partial_transpose(prod, Side::A).matrix(), prod.matrix()) < 1e-15);
    CHECK(max_abs_diff(partial_transpose(bell_state(), Side::A).matrix(),
                       swap_operator(2).matrix() / 2.0) < 1e-15);
  }
  SECTION("property: involution, oracle agreement, commutes with the other partial trace") {
    Rng rng(19);
    for (int trial = 0; trial < 40; ++trial) {
      const Index da = rng.uniform_int(1, 4), db = rng.uniform_int(1, 4);
      const BipartiteOperator t(da, db, ginibre(da * db, da * db, rng));
      for (Side s : {Side::A, Side::B}) {
        CHECK(max_abs_diff(partial_transpose(partial_transpose(t, s), s).matrix(), t.matrix()) < 1e-15);
      }
      CHECK(oracle::max_abs_diff(oracle::from_eigen(partial_transpose(t, Side::A).matrix()),
                                 oracle::ptranspose(oracle::from_eigen(t.matrix()), da, db, true)) < 1e-15);
      CHECK(oracle::max_abs_diff(oracle::from_eigen(partial_transpose(t, Side::B).matrix()),
                                 oracle::ptranspose(oracle::from_eigen(t.matrix()), da, db, false)) < 1e-15);
      // Tr_A(T_A t) = Tr_A t and Tr_B(T_A t) = (Tr_B t)^T.
      CHECK(max_abs_diff(partial_trace(partial_transpose(t, Side::A), Side::A), partial_trace(t, Side::A)) < 1e-12);
      CHECK(max_abs_diff(partial_trace(partial_transpose(t, Side::A), Side::B),
                         ComplexMatrix(partial_trace(t, Side::B).transpose())) < 1e-12);
      // In a rotated basis the transpose is still an involution, and PT
      // spectra are basis independent.
      const ComplexMatrix u = random_unitary(da, rng);
      const auto once = partial_transpose(t, Side::A, u);
      CHECK(max_abs_diff(partial_transpose(once, Side::A, u).matrix(), t.matrix()) < 1e-12);
    }
  }
  SECTION("basis dimension mismatch") {
    CHECK_THROWS_AS(partial_transpose(bell_state(), Side::A, identity(3)), DimensionError);
  }
}

TEST_CASE("hadamard product", "[operators]") {
  Rng rng(21);
  const ComplexMatrix a = ginibre(3, 3, rng);
  CHECK(max_abs_diff(hadamard_product(a, ComplexMatrix::Ones(3, 3)), a) < 1e-15);
  const ComplexMatrix diag = a.diagonal().asDiagonal();
  CHECK(max_abs_diff(hadamard_product(a, identity(3)), diag) < 1e-15);
  CHECK_THROWS_AS(hadamard_product(a, identity(2)), DimensionError);
}

TEST_CASE("Schur product closure on random PSD pairs", "[operators][property]") {
  Rng rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    const Index d = rng.uniform_int(2, 8);
    const ComplexMatrix a = random_psd(d, rng), b = random_psd(d, rng);
    const ComplexMatrix h = hadamard_product(a, b);
    CHECK(is_psd(HermitianOperator(ComplexMatrix(0.5 * (h + h.adjoint())))).psd);
  }
}

TEST_CASE("sqrt_pinv", "[operators]") {
  SECTION("examples") {
    const auto mixed = sqrt_pinv(DensityMatrix::maximally_mixed(2));
    CHECK(max_abs_diff(mixed.inv_sqrt.matrix(), std::sqrt(2.0) * identity(2)) < 1e-12);
    ComplexMatrix p0 = ComplexMatrix::Zero(2, 2);
    p0(0, 0) = 1.0;
    const auto pure = sqrt_pinv(DensityMatrix(p0));
    CHECK(max_abs_diff(pure.inv_sqrt.matrix(), p0) < 1e-12);
    CHECK(max_abs_diff(pure.complement, identity(2) - p0) < 1e-12);
    CHECK_FALSE(pure.faithful());
    ComplexMatrix d = ComplexMatrix::Zero(2, 2);
    d.diagonal() << 0.9, 0.1;
    ComplexMatrix expected = ComplexMatrix::Zero(2, 2);
    expected.diagonal() << 1.0 / std::sqrt(0.9), 1.0 / std::sqrt(0.1);
    CHECK(max_abs_diff(sqrt_pinv(DensityMatrix(d)).inv_sqrt.matrix(), expected) < 1e-12);
  }
  SECTION("property: pinv^2 rho = P") {
    Rng rng(29);
    for (int trial = 0; trial < 40; ++trial) {
      const Index d = rng.uniform_int(1, 6);
      const DensityMatrix rho = random_density(d, rng.uniform_int(1, d), rng);
      const auto s = sqrt_pinv(rho);
      CHECK(max_abs_diff(s.inv_sqrt.matrix() * s.inv_sqrt.matrix() * rho.matrix(), s.support) < 1e-9);
      CHECK(max_abs_diff(s.sqrt.matrix() * s.sqrt.matrix(), rho.matrix()) < 1e-12);
    }
  }
}

TEST_CASE("swap_factors", "[operators]") {
  Rng rng(31);
  const DensityMatrix ra = random_density(2, 2, rng), rb = random_density(3, 2, rng);
  const auto swapped = swap_factors(tensor(ra.matrix(), rb.matrix()));
  CHECK(swapped.dim_a() == 3);
  CHECK(max_abs_diff(swapped.matrix(), tensor(rb.matrix(), ra.matrix()).matrix()) < 1e-15);
  CHECK(max_abs_diff(swap_factors(swap_operator(3)).matrix(), swap_operator(3).matrix()) < 1e-15);
  const BipartiteOperator t(2, 3, ginibre(6, 6, rng));
  CHECK(max_abs_diff(swap_factors(swap_factors(t)).matrix(), t.matrix()) == 0.0);
}

TEST_CASE("Cauchy and harmonic-mean matrices", "[operators]") {
  SECTION("examples") {
    const std::vector<double> half{0.5, 0.5};
    CHECK(max_abs_diff(cauchy_matrix(half).matrix(), ComplexMatrix::Constant(2, 2, 2.0)) < 1e-15);
    const std::vector<double> one{1.0};
    CHECK_THAT(cauchy_matrix(one).matrix()(0, 0).real(), WithinAbs(1.0, 1e-15));
    const std::vector<double> p{0.9, 0.1};
    ComplexMatrix omega(2, 2);
    omega << 10.0 / 9.0, 2.0, 2.0, 10.0;
    CHECK(max_abs_diff(cauchy_matrix(p).matrix(), omega) < 1e-12);
    CHECK(oracle::min_eigenvalue(omega) > 0.0);
    CHECK_THAT(harmonic_mean_matrix(p).matrix()(0, 1).real(), WithinAbs(0.6, 1e-12));
    const std::vector<double> uniform{0.25, 0.25, 0.25, 0.25};
    CHECK(max_abs_diff(harmonic_mean_matrix(uniform).matrix(), ComplexMatrix::Ones(4, 4)) < 1e-15);
  }
  SECTION("nonpositive entries are rejected") {
    const std::vector<double> bad{0.5, 0.0, 0.5};
    CHECK_THROWS_AS(cauchy_matrix(bad), InvariantError);
    CHECK_THROWS_AS(harmonic_mean_matrix(bad), InvariantError);
  }
  SECTION("property: PSD with unit diagonal, dims 1..8") {
    Rng rng(37);
    for (int trial = 0; trial < 100; ++trial) {
      const auto n = static_cast<std::size_t>(rng.uniform_int(1, 8));
      std::vector<double> p(n);
      double total = 0.0;
      for (double& x : p) total += (x = rng.exponential() + 1e-6);
      for (double& x : p) x /= total;
      const auto c = cauchy_matrix(p);
      const auto h = harmonic_mean_matrix(p);
      CHECK(oracle::min_eigenvalue(c.matrix()) >= -1e-9 * c.matrix().cwiseAbs().maxCoeff());
      CHECK(oracle::min_eigenvalue(h.matrix()) >= -1e-9);
      for (std::size_t i = 0; i < n; ++i) CHECK_THAT(h.matrix()(Index(i), Index(i)).real(), WithinAbs(1.0, 1e-15));
    }
  }
}
