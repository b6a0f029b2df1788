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

#pragma once

// Product ensembles, seeded random states and channels, and perfect
// distinguishability of state ensembles.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/QR>

#include "tempcompat/channels.hpp"

namespace tempcompat {

/// SplitMix64 stream. Every draw is a pure function of the seed and the number
/// of previous draws, so results are identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Independent child stream; advances this stream by one draw.
  Rng split() { return Rng(next() ^ 0x6a09e667f3bcc909ULL); }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform on {lo, ..., hi}.
  Index uniform_int(Index lo, Index hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<Index>(next() % span);
  }

  double normal() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  Complex complex_normal() { return Complex(normal(), normal()) / std::sqrt(2.0); }

  double exponential() { return -std::log(1.0 - uniform()); }

 private:
  std::uint64_t state_;
};

inline ComplexMatrix ginibre(Index rows, Index cols, Rng& rng) {
  ComplexMatrix g(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) g(i, j) = rng.complex_normal();
  return g;
}

/// Haar-random unitary: QR of a Ginibre matrix with the phases of R removed.
inline ComplexMatrix random_unitary(Index d, Rng& rng) {
  Eigen::HouseholderQR<ComplexMatrix> qr(ginibre(d, d, rng));
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix& r = qr.matrixQR();
  for (Index k = 0; k < d; ++k) {
    const double mag = std::abs(r(k, k));
    if (mag > 0.0) q.col(k) *= r(k, k) / mag;
  }
  return q;
}

inline ComplexVector random_pure_state(Index d, Rng& rng) {
  ComplexVector v = ginibre(d, 1, rng).col(0);
  return v / v.norm();
}

/// Induced-measure random density matrix of the given rank.
inline DensityMatrix random_density(Index d, Index rank, Rng& rng) {
  if (d < 1 || rank < 1 || rank > d) {
    throw DimensionError("random_density: rank " + std::to_string(rank) +
                         " outside 1.." + std::to_string(d));
  }
  const ComplexMatrix g = ginibre(d, rank, rng);
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix(ComplexMatrix(0.5 * (rho + rho.adjoint())));
}

inline DensityMatrix random_density(Index d, Index rank, std::uint64_t seed) {
  Rng rng(seed);
  return random_density(d, rank, rng);
}

/// Kraus operators K_k S^{-1/2} with S = sum K_k^dagger K_k. The count is
/// raised to ceil(dim_in / dim_out) when smaller, since S is singular otherwise.
inline SuperOp random_cptp(Index dim_in, Index dim_out, Index kraus_count, Rng& rng) {
  if (kraus_count < 1) throw DimensionError("random_cptp: need at least one Kraus operator");
  kraus_count = std::max(kraus_count, (dim_in + dim_out - 1) / dim_out);
  std::vector<ComplexMatrix> ops;
  ComplexMatrix s = ComplexMatrix::Zero(dim_in, dim_in);
  for (Index k = 0; k < kraus_count; ++k) {
    ops.push_back(ginibre(dim_out, dim_in, rng));
    s += ops.back().adjoint() * ops.back();
  }
  const ComplexMatrix norm = hermitian_function(
      HermitianOperator(ComplexMatrix(0.5 * (s + s.adjoint()))),
      [](double x) { return 1.0 / std::sqrt(x); });
  for (ComplexMatrix& k : ops) k = k * norm;
  return from_kraus(ops);
}

inline SuperOp random_cptp(Index dim_in, Index dim_out, Index kraus_count, std::uint64_t seed) {
  Rng rng(seed);
  return random_cptp(dim_in, dim_out, kraus_count, rng);
}

inline HermitianOperator random_hermitian(Index d, Rng& rng) {
  const ComplexMatrix g = ginibre(d, d, rng);
  return HermitianOperator(ComplexMatrix(0.5 * (g + g.adjoint())));
}

inline ComplexMatrix random_projector(Index d, Index rank, Rng& rng) {
  const ComplexMatrix u = random_unitary(d, rng).leftCols(rank);
  return u * u.adjoint();
}

/// lambda (2P - 1) for a Haar-random projector P of rank 1..d; rank d gives
/// lambda * 1.
inline HermitianOperator random_light_touch(Index d, Rng& rng) {
  const Index rank = rng.uniform_int(1, d);
  const double lambda = 1.0 - rng.uniform();  // (0, 1]
  const ComplexMatrix p = random_projector(d, rank, rng);
  const ComplexMatrix m = lambda * (2.0 * p - identity(d));
  return HermitianOperator(ComplexMatrix(0.5 * (m + m.adjoint())));
}

/// S^{-1/2} A_k S^{-1/2} for random positive A_k of random rank. Ranks are
/// raised from the last outcome backwards until they add up to at least d.
inline std::vector<ComplexMatrix> random_povm(Index d, Index outcomes, Rng& rng) {
  if (outcomes < 1) throw DimensionError("random_povm: need at least one outcome");
  std::vector<Index> ranks;
  Index total = 0;
  for (Index k = 0; k < outcomes; ++k) total += ranks.emplace_back(rng.uniform_int(1, d));
  for (Index k = outcomes - 1; k >= 0 && total < d; --k) {
    const Index bump = std::min(d - ranks[std::size_t(k)], d - total);
    ranks[std::size_t(k)] += bump;
    total += bump;
  }
  std::vector<ComplexMatrix> parts;
  ComplexMatrix s = ComplexMatrix::Zero(d, d);
  for (Index k = 0; k < outcomes; ++k) {
    const ComplexMatrix g = ginibre(d, ranks[std::size_t(k)], rng);
    parts.push_back(g * g.adjoint());
    s += parts.back();
  }
  const ComplexMatrix inv = hermitian_function(
      HermitianOperator(ComplexMatrix(0.5 * (s + s.adjoint()))),
      [](double x) { return 1.0 / std::sqrt(x); });
  for (ComplexMatrix& e : parts) {
    e = inv * e * inv;
    e = 0.5 * (e + e.adjoint()).eval();
  }
  return parts;
}

/// Part of h with vanishing partial traces on both factors.
inline ComplexMatrix traceless_marginals_component(const BipartiteOperator& h) {
  const Index da = h.dim_a();
  const Index db = h.dim_b();
  const ComplexMatrix ra = partial_trace(h, Side::B);
  const ComplexMatrix rb = partial_trace(h, Side::A);
  const Complex tr = h.matrix().trace();
  return h.matrix() - tensor(ra, identity(db) / static_cast<double>(db)).matrix() -
         tensor(identity(da) / static_cast<double>(da), rb).matrix() +
         tr * identity(da * db) / static_cast<double>(da * db);
}

/// rho_a ⊗ rho_b + scale * X with X Hermitian, Tr_A X = Tr_B X = 0. The result
/// has the given marginals and is generally not positive.
inline BipartiteOperator random_hermitian_with_marginals(const DensityMatrix& rho_a,
                                                         const DensityMatrix& rho_b, double scale,
                                                         Rng& rng) {
  const Index da = rho_a.dim();
  const Index db = rho_b.dim();
  const BipartiteOperator h(da, db, random_hermitian(da * db, rng).matrix());
  ComplexMatrix x = traceless_marginals_component(h);
  x = 0.5 * (x + x.adjoint()).eval();
  return {da, db, tensor(rho_a.matrix(), rho_b.matrix()).matrix() + scale * x};
}

/// Weighted family of product states. Weights sum to one; negative weights
/// make it a quasiprobability ensemble.
class ProductEnsemble {
 public:
  ProductEnsemble() = default;
  ProductEnsemble(std::vector<double> weights, std::vector<DensityMatrix> states_a,
                  std::vector<DensityMatrix> states_b)
      : weights_(std::move(weights)), states_a_(std::move(states_a)), states_b_(std::move(states_b)) {
    if (weights_.empty() || weights_.size() != states_a_.size() ||
        weights_.size() != states_b_.size()) {
      throw DimensionError("ProductEnsemble: weights and state lists differ in length");
    }
    double total = 0.0;
    for (double w : weights_) total += w;
    if (std::abs(total - 1.0) > 1e-10) {
      throw InvariantError("ProductEnsemble: weights sum to " + std::to_string(total) +
                           ", expected 1");
    }
    for (std::size_t k = 1; k < weights_.size(); ++k) {
      if (states_a_[k].dim() != states_a_[0].dim() || states_b_[k].dim() != states_b_[0].dim()) {
        throw DimensionError("ProductEnsemble: states of unequal dimension");
      }
    }
  }

  const std::vector<double>& weights() const { return weights_; }
  const std::vector<DensityMatrix>& states_a() const { return states_a_; }
  const std::vector<DensityMatrix>& states_b() const { return states_b_; }
  std::size_t size() const { return weights_.size(); }
  Index dim_a() const { return states_a_.front().dim(); }
  Index dim_b() const { return states_b_.front().dim(); }

  bool quasi() const {
    for (double w : weights_)
      if (w < 0.0) return true;
    return false;
  }

 private:
  std::vector<double> weights_;
  std::vector<DensityMatrix> states_a_;
  std::vector<DensityMatrix> states_b_;
};

/// tau = sum_theta t_theta rho_{A;theta} ⊗ rho_{B;theta}.
inline BipartiteOperator assemble_state(const ProductEnsemble& e) {
  ComplexMatrix tau = ComplexMatrix::Zero(e.dim_a() * e.dim_b(), e.dim_a() * e.dim_b());
  for (std::size_t k = 0; k < e.size(); ++k)
    tau += e.weights()[k] * tensor(e.states_a()[k].matrix(), e.states_b()[k].matrix()).matrix();
  return {e.dim_a(), e.dim_b(), ComplexMatrix(0.5 * (tau + tau.adjoint()))};
}

namespace detail {

inline std::vector<double> dirichlet(std::size_t n, Rng& rng) {
  std::vector<double> w(n);
  double total = 0.0;
  for (double& x : w) total += (x = rng.exponential());
  for (double& x : w) x /= total;
  return w;
}

}  // namespace detail

/// Dirichlet-uniform weights over products of random-rank states.
inline ProductEnsemble random_separable(Index dim_a, Index dim_b, Index n_terms, Rng& rng) {
  if (n_terms < 1) throw DimensionError("random_separable: need at least one term");
  std::vector<double> w = detail::dirichlet(static_cast<std::size_t>(n_terms), rng);
  std::vector<DensityMatrix> a, b;
  for (Index k = 0; k < n_terms; ++k) {
    a.push_back(random_density(dim_a, rng.uniform_int(1, dim_a), rng));
    b.push_back(random_density(dim_b, rng.uniform_int(1, dim_b), rng));
  }
  return {std::move(w), std::move(a), std::move(b)};
}

inline ProductEnsemble random_separable(Index dim_a, Index dim_b, Index n_terms,
                                        std::uint64_t seed) {
  Rng rng(seed);
  return random_separable(dim_a, dim_b, n_terms, rng);
}

/// Separable ensemble whose A states all live in one random subspace of
/// dimension rank_a, so rho_A has rank at most rank_a.
inline ProductEnsemble random_separable_restricted(Index dim_a, Index dim_b, Index n_terms,
                                                   Index rank_a, Rng& rng) {
  if (rank_a < 1 || rank_a > dim_a) {
    throw DimensionError("random_separable_restricted: rank outside 1.." + std::to_string(dim_a));
  }
  const ComplexMatrix v = random_unitary(dim_a, rng).leftCols(rank_a);
  std::vector<double> w = detail::dirichlet(static_cast<std::size_t>(n_terms), rng);
  std::vector<DensityMatrix> a, b;
  for (Index k = 0; k < n_terms; ++k) {
    const DensityMatrix inner = random_density(rank_a, rng.uniform_int(1, rank_a), rng);
    const ComplexMatrix lifted = v * inner.matrix() * v.adjoint();
    a.emplace_back(ComplexMatrix(0.5 * (lifted + lifted.adjoint())));
    b.push_back(random_density(dim_b, rng.uniform_int(1, dim_b), rng));
  }
  return {std::move(w), std::move(a), std::move(b)};
}

/// Ensemble {t_theta, rho_theta} on a single system.
struct StateEnsemble {
  std::vector<double> weights;
  std::vector<DensityMatrix> states;

  DensityMatrix average() const {
    if (states.empty() || weights.size() != states.size()) {
      throw DimensionError("StateEnsemble: weights and states differ in length");
    }
    ComplexMatrix avg = ComplexMatrix::Zero(states[0].dim(), states[0].dim());
    for (std::size_t k = 0; k < states.size(); ++k) avg += weights[k] * states[k].matrix();
    return DensityMatrix(ComplexMatrix(0.5 * (avg + avg.adjoint())));
  }
};

inline StateEnsemble side_ensemble(const ProductEnsemble& e, Side side) {
  return {e.weights(), side == Side::A ? e.states_a() : e.states_b()};
}

inline DensityMatrix pure_density(const ComplexVector& v) {
  return DensityMatrix(ComplexMatrix(v * v.adjoint()));
}

/// |0>, |1>, |+>, |->, |+i>, |-i> on both factors with weights 5/8 then
/// 3/40 five times. Vertical weight t_1 + t_2 exceeds each horizontal pair.
inline ProductEnsemble biased_six_state_ensemble() {
  const double r = 1.0 / std::sqrt(2.0);
  const Complex i(0.0, 1.0);
  std::vector<ComplexVector> kets(6, ComplexVector(2));
  kets[0] << 1.0, 0.0;
  kets[1] << 0.0, 1.0;
  kets[2] << r, r;
  kets[3] << r, -r;
  kets[4] << r, r * i;
  kets[5] << r, -r * i;
  std::vector<double> w{5.0 / 8.0, 3.0 / 40.0, 3.0 / 40.0, 3.0 / 40.0, 3.0 / 40.0, 3.0 / 40.0};
  std::vector<DensityMatrix> states;
  for (const auto& k : kets) states.push_back(pure_density(k));
  return {std::move(w), states, states};
}

/// Pairwise Hilbert-Schmidt overlaps Tr[rho_j rho_k] below tol.
inline bool is_orthogonal_ensemble(const std::vector<DensityMatrix>& states, double tol = 1e-9) {
  for (std::size_t j = 0; j < states.size(); ++j)
    for (std::size_t k = j + 1; k < states.size(); ++k)
      if (std::abs((states[j].matrix() * states[k].matrix()).trace()) > tol) return false;
  return true;
}

/// POVM with an outcome-to-state assignment. `assignment[phi]` is the index of
/// the state announced on outcome phi.
struct DiscriminationInstance {
  StateEnsemble ensemble;
  std::vector<ComplexMatrix> povm;
  std::vector<std::size_t> assignment;
};

/// Support projectors of the states, plus 1 - sum when that is nonzero
/// (assigned to state 0).
inline DiscriminationInstance discrimination_povm(const StateEnsemble& e, double tol = 1e-9) {
  if (!is_orthogonal_ensemble(e.states, tol)) {
    throw InvariantError("discrimination_povm: ensemble is not orthogonal");
  }
  DiscriminationInstance out{e, {}, {}};
  const Index d = e.states.front().dim();
  ComplexMatrix total = ComplexMatrix::Zero(d, d);
  for (std::size_t k = 0; k < e.states.size(); ++k) {
    out.povm.push_back(sqrt_pinv(e.states[k], Tolerances{}.rank).support);
    out.assignment.push_back(k);
    total += out.povm.back();
  }
  const ComplexMatrix rest = identity(d) - total;
  if (max_abs(rest) > tol) {
    out.povm.push_back(0.5 * (rest + rest.adjoint()));
    out.assignment.push_back(0);
  }
  return out;
}

/// t_theta Tr[rho_theta E_phi] = delta_{theta, f(phi)} Tr[rho E_phi] for every
/// pair (theta, phi), with rho the ensemble average.
inline bool perfect_distinguishability_check(const DiscriminationInstance& inst,
                                             double tol = 1e-9) {
  if (inst.povm.size() != inst.assignment.size()) {
    throw DimensionError("perfect_distinguishability_check: assignment length mismatch");
  }
  const DensityMatrix avg = inst.ensemble.average();
  for (std::size_t phi = 0; phi < inst.povm.size(); ++phi) {
    const double total = (avg.matrix() * inst.povm[phi]).trace().real();
    for (std::size_t theta = 0; theta < inst.ensemble.states.size(); ++theta) {
      const double lhs =
          inst.ensemble.weights[theta] * (inst.ensemble.states[theta].matrix() * inst.povm[phi]).trace().real();
      const double rhs = inst.assignment[phi] == theta ? total : 0.0;
      if (!(std::abs(lhs - rhs) <= tol)) return false;  // NaN fails too
    }
  }
  return true;
}

}  // namespace tempcompat
