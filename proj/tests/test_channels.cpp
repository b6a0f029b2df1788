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

/// Reference action of a Kraus list: sum_k K X K^dagger.
ComplexMatrix kraus_action(const std::vector<ComplexMatrix>& ks, const ComplexMatrix& x) {
  ComplexMatrix out = ComplexMatrix::Zero(ks.front().rows(), ks.front().rows());
  for (const auto& k : ks) out += k * x * k.adjoint();
  return out;
}

}  // namespace

TEST_CASE("from_kraus examples", "[channels]") {
  const std::vector<ComplexMatrix> id{identity(2)};
  const SuperOp e = from_kraus(id);
  ComplexVector omega = ComplexVector::Zero(4);
  omega(0) = omega(3) = 1.0;
  CHECK(max_abs_diff(e.choi().matrix(), omega * omega.adjoint()) < 1e-15);

  const std::vector<ComplexMatrix> flip{sigma(1)};
  ComplexMatrix zero = ComplexMatrix::Zero(2, 2);
  zero(0, 0) = 1.0;
  ComplexMatrix one = ComplexMatrix::Zero(2, 2);
  one(1, 1) = 1.0;
  CHECK(max_abs_diff(apply_channel(from_kraus(flip), zero), one) < 1e-15);

  const std::vector<ComplexMatrix> deph{std::sqrt(0.75) * identity(2), std::sqrt(0.25) * sigma(3)};
  const SuperOp d = from_kraus(deph);
  CHECK(is_cptp(d).cptp);
  ComplexMatrix plus = ComplexMatrix::Constant(2, 2, 0.5);
  CHECK_THAT(apply_channel(d, plus)(0, 1).real(), WithinAbs(0.25, 1e-15));

  const std::vector<ComplexMatrix> bad{identity(2), identity(3)};
  CHECK_THROWS_AS(from_kraus(bad), DimensionError);
}

TEST_CASE("apply matches the Kraus action and is linear", "[channels][property]") {
  Rng rng(41);
  for (int trial = 0; trial < 30; ++trial) {
    const Index din = rng.uniform_int(1, 4), dout = rng.uniform_int(1, 4);
    std::vector<ComplexMatrix> ks;
    for (Index k = 0; k < 3; ++k) ks.push_back(ginibre(dout, din, rng));
    const SuperOp e = from_kraus(ks);
    const ComplexMatrix x = ginibre(din, din, rng), y = ginibre(din, din, rng);
    CHECK(max_abs_diff(apply_channel(e, x), kraus_action(ks, x)) < 1e-12);
    const Complex a(0.3, -1.2), b(-0.7, 0.4);
    CHECK(max_abs_diff(apply_channel(e, a * x + b * y), a * apply_channel(e, x) + b * apply_channel(e, y)) < 1e-10);
    CHECK(max_abs_diff(e(x), apply_channel(e, x)) == 0.0);
  }
  CHECK_THROWS_AS(apply_channel(identity_channel(2), identity(3)), DimensionError);
}

TEST_CASE("CPTP channels send states to states", "[channels][property]") {
  Rng rng(43);
  for (int trial = 0; trial < 30; ++trial) {
    const Index din = rng.uniform_int(1, 4), dout = rng.uniform_int(1, 4);
    const SuperOp e = random_cptp(din, dout, rng.uniform_int(1, 4), rng);
    const DensityMatrix rho = random_density(din, rng.uniform_int(1, din), rng);
    const ComplexMatrix out = apply_channel(e, rho.matrix());
    CHECK_NOTHROW(DensityMatrix(ComplexMatrix(0.5 * (out + out.adjoint()))));
  }
}

TEST_CASE("Jamiolkowski operator", "[channels]") {
  CHECK(max_abs_diff(jamiolkowski(identity_channel(3)).matrix(), swap_operator(3).matrix()) < 1e-15);
  Rng rng(47);
  const DensityMatrix sigma_state = random_density(2, 2, rng);
  const SuperOp replace = replace_channel(3, sigma_state.matrix());
  CHECK(max_abs_diff(jamiolkowski(replace).matrix(), tensor(identity(3), sigma_state.matrix()).matrix()) < 1e-15);
  for (int trial = 0; trial < 20; ++trial) {
    const Index din = rng.uniform_int(1, 4), dout = rng.uniform_int(1, 4);
    const SuperOp e = random_cptp(din, dout, 2, rng);
    // J[E] = (id ⊗ E)(SWAP) built by hand from matrix units.
    ComplexMatrix j = ComplexMatrix::Zero(din * dout, din * dout);
    for (Index a = 0; a < din; ++a)
      for (Index b = 0; b < din; ++b)
        j += tensor(matrix_unit(din, a, b), apply_channel(e, matrix_unit(din, b, a))).matrix();
    CHECK(max_abs_diff(jamiolkowski(e).matrix(), j) < 1e-14);
    CHECK(oracle::max_abs_diff(oracle::from_eigen(jamiolkowski(e).matrix()),
                               oracle::ptranspose(oracle::from_eigen(e.choi().matrix()), din, dout, true)) < 1e-15);
    CHECK(max_abs_diff(from_jamiolkowski(jamiolkowski(e)).choi().matrix(), e.choi().matrix()) == 0.0);
  }
}

TEST_CASE("is_cptp and is_hptp", "[channels]") {
  CHECK(is_cptp(identity_channel(2)).cptp);
  const auto t = is_cptp(transpose_map(2));
  CHECK_FALSE(t.cptp);
  CHECK(t.trace_preserving);
  CHECK_THAT(t.choi_min_eigenvalue, WithinAbs(-1.0, 1e-12));
  CHECK(is_hptp(transpose_map(2)));
  Rng rng(53);
  CHECK(is_hptp(random_cptp(3, 2, 2, rng)));
  const ComplexMatrix iy = Complex(0.0, 1.0) * sigma(2);
  CHECK_FALSE(is_hptp(SuperOp(tensor(iy, identity(2)))));
}

TEST_CASE("compose", "[channels][property]") {
  Rng rng(59);
  for (int trial = 0; trial < 20; ++trial) {
    const Index d1 = rng.uniform_int(1, 3), d2 = rng.uniform_int(1, 3), d3 = rng.uniform_int(1, 3);
    const SuperOp e = random_cptp(d1, d2, 2, rng);
    const SuperOp f = random_cptp(d2, d3, 2, rng);
    const ComplexMatrix x = ginibre(d1, d1, rng);
    CHECK(max_abs_diff(apply_channel(compose(f, e), x), apply_channel(f, apply_channel(e, x))) < 1e-12);
    CHECK(choi_distance(compose(identity_channel(d2), e), e) < 1e-14);
    const DensityMatrix s = random_density(d3, d3, rng);
    CHECK(choi_distance(compose(replace_channel(d2, s.matrix()), e), replace_channel(d1, s.matrix())) < 1e-12);
    // (F ∘ E)* = E* ∘ F*
    CHECK(choi_distance(hs_adjoint(compose(f, e)), compose(hs_adjoint(e), hs_adjoint(f))) < 1e-10);
  }
  CHECK_THROWS_AS(compose(identity_channel(2), identity_channel(3)), DimensionError);
}

TEST_CASE("Hilbert-Schmidt adjoint", "[channels]") {
  Rng rng(61);
  SECTION("defining identity on matrix units") {
    for (int trial = 0; trial < 10; ++trial) {
      const Index din = rng.uniform_int(1, 3), dout = rng.uniform_int(1, 3);
      std::vector<ComplexMatrix> ks{ginibre(dout, din, rng), ginibre(dout, din, rng)};
      const SuperOp e = from_kraus(ks);
      const SuperOp adj = hs_adjoint(e);
      for (Index i = 0; i < din; ++i)
        for (Index j = 0; j < din; ++j)
          for (Index k = 0; k < dout; ++k)
            for (Index l = 0; l < dout; ++l) {
              const ComplexMatrix a = matrix_unit(din, i, j), b = matrix_unit(dout, k, l);
              const Complex lhs = (apply_channel(e, a).adjoint() * b).trace();
              const Complex rhs = (a.adjoint() * apply_channel(adj, b)).trace();
              CHECK(std::abs(lhs - rhs) < 1e-12);
            }
      CHECK(choi_distance(hs_adjoint(adj), e) == 0.0);
    }
  }
  SECTION("unitary and trace map") {
    const ComplexMatrix u = random_unitary(3, rng);
    CHECK(choi_distance(hs_adjoint(unitary_channel(u)), unitary_channel(u.adjoint())) < 1e-12);
    const SuperOp adj = hs_adjoint(trace_map(3));
    const ComplexMatrix one = ComplexMatrix::Constant(1, 1, Complex(2.5, 0.0));
    CHECK(max_abs_diff(apply_channel(adj, one), 2.5 * identity(3)) < 1e-15);
  }
}

TEST_CASE("superoperator matrix acts on row-major vectorizations", "[channels]") {
  Rng rng(67);
  const SuperOp e = random_cptp(2, 3, 2, rng);
  const ComplexMatrix s = superoperator_matrix(e);
  const ComplexMatrix x = ginibre(2, 2, rng);
  ComplexVector v(4);
  for (Index r = 0; r < 2; ++r)
    for (Index c = 0; c < 2; ++c) v(r * 2 + c) = x(r, c);
  const ComplexVector w = s * v;
  const ComplexMatrix y = apply_channel(e, x);
  for (Index r = 0; r < 3; ++r)
    for (Index c = 0; c < 3; ++c) CHECK(std::abs(w(r * 3 + c) - y(r, c)) < 1e-12);
}

TEST_CASE("Process validates dimensions", "[channels]") {
  CHECK_THROWS_AS(Process(identity_channel(2), DensityMatrix::maximally_mixed(3)), DimensionError);
  CHECK_NOTHROW(Process(identity_channel(2), DensityMatrix::maximally_mixed(2)));
}
