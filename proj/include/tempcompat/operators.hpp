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

// Dense complex linear-algebra kernel: Hermitian spectral decompositions,
// tensor structure, partial trace/transpose, Hadamard-Schur products and
// pseudoinverse matrix functions.

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Eigenvalues>

#include "tempcompat/core.hpp"

namespace tempcompat {

inline ComplexMatrix identity(Index d) { return ComplexMatrix::Identity(d, d); }

/// |i><j| in dimension d.
inline ComplexMatrix matrix_unit(Index d, Index i, Index j) {
  ComplexMatrix m = ComplexMatrix::Zero(d, d);
  m(i, j) = 1.0;
  return m;
}

inline ComplexMatrix anticommutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  return a * b + b * a;
}

inline double hermiticity_defect(const ComplexMatrix& m) {
  return max_abs(m - m.adjoint());
}

/// Dense square matrix that is Hermitian up to the configured tolerance. The
/// stored matrix is the exactly Hermitian part (M + M^dagger) / 2.
class HermitianOperator {
 public:
  HermitianOperator() = default;

  explicit HermitianOperator(const ComplexMatrix& m, double tol = Tolerances{}.hermiticity) {
    if (m.rows() != m.cols()) {
      throw DimensionError("HermitianOperator: matrix is not square (" +
                           std::to_string(m.rows()) + "x" + std::to_string(m.cols()) + ")");
    }
    const double defect = hermiticity_defect(m);
    if (defect > tol * std::max(1.0, max_abs(m))) {
      throw InvariantError("HermitianOperator: matrix is not hermitian (defect " +
                           std::to_string(defect) + ")");
    }
    m_ = 0.5 * (m + m.adjoint());
  }

  const ComplexMatrix& matrix() const { return m_; }
  Index dim() const { return m_.rows(); }

 private:
  ComplexMatrix m_;
};

/// Canonical spectral decomposition M = sum_k lambda_k P_k with eigenvalues
/// clustered by gap. `values`/`basis` keep the full eigenbasis in the same
/// descending order for callers that need a concrete orthonormal basis.
struct SpectralDecomposition {
  std::vector<double> eigenvalues;  // one per cluster, descending
  std::vector<ComplexMatrix> projectors;
  std::vector<int> multiplicities;
  RealVector values;    // all eigenvalues, descending
  ComplexMatrix basis;  // column k is the eigenvector of values[k]

  Index dim() const { return basis.rows(); }

  ComplexMatrix reconstruct() const {
    ComplexMatrix out = ComplexMatrix::Zero(dim(), dim());
    for (std::size_t k = 0; k < projectors.size(); ++k) out += eigenvalues[k] * projectors[k];
    return out;
  }
};

/// Eigenvalues whose consecutive gap is at most `cluster_tol` (absolute)
/// share one projector.
inline SpectralDecomposition eig_hermitian(const HermitianOperator& m, double cluster_tol) {
  const Index d = m.dim();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m.matrix());
  if (solver.info() != Eigen::Success) throw Error("eig_hermitian: eigensolver failed");

  SpectralDecomposition out;
  out.values = solver.eigenvalues().reverse();
  out.basis = solver.eigenvectors().rowwise().reverse();

  Index start = 0;
  while (start < d) {
    Index end = start + 1;
    while (end < d && out.values(end - 1) - out.values(end) <= cluster_tol) ++end;
    const auto block = out.basis.middleCols(start, end - start);
    out.eigenvalues.push_back(out.values.segment(start, end - start).mean());
    out.projectors.push_back(block * block.adjoint());
    out.multiplicities.push_back(static_cast<int>(end - start));
    start = end;
  }
  return out;
}

inline SpectralDecomposition eig_hermitian(const HermitianOperator& m,
                                           const Tolerances& tol = {}) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> probe(m.matrix(), Eigen::EigenvaluesOnly);
  const double radius = m.dim() == 0 ? 0.0 : probe.eigenvalues().cwiseAbs().maxCoeff();
  return eig_hermitian(m, tol.cluster * std::max(1.0, radius));
}

struct PsdCheck {
  bool psd = false;
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
};

/// PSD iff lambda_min >= -tol * max(1, lambda_max).
inline PsdCheck is_psd(const HermitianOperator& m, double tol = Tolerances{}.psd) {
  if (m.dim() == 0) return {true, 0.0, 0.0};
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m.matrix(), Eigen::EigenvaluesOnly);
  PsdCheck out;
  out.min_eigenvalue = solver.eigenvalues()(0);
  out.max_eigenvalue = solver.eigenvalues()(m.dim() - 1);
  out.psd = out.min_eigenvalue >= -tol * std::max(1.0, out.max_eigenvalue);
  return out;
}

/// Positive semidefinite, unit-trace Hermitian operator.
class DensityMatrix {
 public:
  DensityMatrix() = default;

  explicit DensityMatrix(const HermitianOperator& h, const Tolerances& tol = {}) : h_(h) {
    const double tr = h_.matrix().trace().real();
    if (std::abs(tr - 1.0) > tol.trace) {
      throw InvariantError("DensityMatrix: trace is " + std::to_string(tr) + ", expected 1");
    }
    const PsdCheck check = is_psd(h_, tol.psd);
    if (!check.psd) {
      throw InvariantError("DensityMatrix: not positive semidefinite (min eigenvalue " +
                           std::to_string(check.min_eigenvalue) + ")");
    }
  }

  explicit DensityMatrix(const ComplexMatrix& m, const Tolerances& tol = {})
      : DensityMatrix(HermitianOperator(m, tol.hermiticity), tol) {}

  const ComplexMatrix& matrix() const { return h_.matrix(); }
  const HermitianOperator& hermitian() const { return h_; }
  Index dim() const { return h_.dim(); }

  static DensityMatrix maximally_mixed(Index d) {
    return DensityMatrix(ComplexMatrix(identity(d) / static_cast<double>(d)));
  }

 private:
  HermitianOperator h_;
};

/// Operator on A ⊗ B; row/column index of |i_A, i_B> is i_A * dim_b + i_B.
class BipartiteOperator {
 public:
  BipartiteOperator() = default;

  BipartiteOperator(Index dim_a, Index dim_b, ComplexMatrix m)
      : dim_a_(dim_a), dim_b_(dim_b), m_(std::move(m)) {
    if (dim_a <= 0 || dim_b <= 0) throw DimensionError("BipartiteOperator: nonpositive factor");
    if (m_.rows() != dim_a * dim_b || m_.cols() != dim_a * dim_b) {
      throw DimensionError("BipartiteOperator: matrix is " + std::to_string(m_.rows()) + "x" +
                           std::to_string(m_.cols()) + ", factors " + std::to_string(dim_a) +
                           "x" + std::to_string(dim_b));
    }
  }

  Index dim_a() const { return dim_a_; }
  Index dim_b() const { return dim_b_; }
  Index dim(Side s) const { return s == Side::A ? dim_a_ : dim_b_; }
  const ComplexMatrix& matrix() const { return m_; }

  Complex operator()(Index ia, Index ib, Index ja, Index jb) const {
    return m_(ia * dim_b_ + ib, ja * dim_b_ + jb);
  }

 private:
  Index dim_a_ = 0;
  Index dim_b_ = 0;
  ComplexMatrix m_;
};

inline BipartiteOperator tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != a.cols() || b.rows() != b.cols()) {
    throw DimensionError("tensor: factors must be square");
  }
  const Index da = a.rows();
  const Index db = b.rows();
  ComplexMatrix out(da * db, da * db);
  for (Index i = 0; i < da; ++i) {
    for (Index j = 0; j < da; ++j) out.block(i * db, j * db, db, db) = a(i, j) * b;
  }
  return {da, db, std::move(out)};
}

/// Traces out `side`; the result lives on the other factor.
inline ComplexMatrix partial_trace(const BipartiteOperator& t, Side side) {
  const Index da = t.dim_a();
  const Index db = t.dim_b();
  const ComplexMatrix& m = t.matrix();
  if (side == Side::B) {
    ComplexMatrix out(da, da);
    for (Index i = 0; i < da; ++i) {
      for (Index j = 0; j < da; ++j) out(i, j) = m.block(i * db, j * db, db, db).trace();
    }
    return out;
  }
  ComplexMatrix out = ComplexMatrix::Zero(db, db);
  for (Index i = 0; i < da; ++i) out += m.block(i * db, i * db, db, db);
  return out;
}

/// Conjugates the `side` factor by `u` (u on that factor, identity on the other).
inline ComplexMatrix conjugate_factor(const BipartiteOperator& t, Side side,
                                      const ComplexMatrix& u) {
  const ComplexMatrix lift = side == Side::A ? tensor(u, identity(t.dim_b())).matrix()
                                             : tensor(identity(t.dim_a()), u).matrix();
  return lift * t.matrix() * lift.adjoint();
}

namespace detail {

inline ComplexMatrix transpose_factor_computational(const BipartiteOperator& t, Side side) {
  const Index da = t.dim_a();
  const Index db = t.dim_b();
  const ComplexMatrix& m = t.matrix();
  ComplexMatrix out(m.rows(), m.cols());
  for (Index ia = 0; ia < da; ++ia)
    for (Index ib = 0; ib < db; ++ib)
      for (Index ja = 0; ja < da; ++ja)
        for (Index jb = 0; jb < db; ++jb) {
          const Index r = ia * db + ib;
          const Index c = ja * db + jb;
          if (side == Side::A) {
            out(ja * db + ib, ia * db + jb) = m(r, c);
          } else {
            out(ia * db + jb, ja * db + ib) = m(r, c);
          }
        }
  return out;
}

}  // namespace detail

/// Partial transpose in the computational basis.
inline BipartiteOperator partial_transpose(const BipartiteOperator& t, Side side) {
  return {t.dim_a(), t.dim_b(), detail::transpose_factor_computational(t, side)};
}

/// Partial transpose with respect to the orthonormal basis given by the
/// columns of `basis`: X -> U (U^dagger X U)^T U^dagger on the chosen factor.
inline BipartiteOperator partial_transpose(const BipartiteOperator& t, Side side,
                                           const ComplexMatrix& basis) {
  if (basis.rows() != t.dim(side) || basis.cols() != t.dim(side)) {
    throw DimensionError("partial_transpose: basis has dimension " +
                         std::to_string(basis.rows()) + ", factor " + std::string(to_string(side)) +
                         " has " + std::to_string(t.dim(side)));
  }
  const BipartiteOperator in_basis(t.dim_a(), t.dim_b(),
                                   conjugate_factor(t, side, basis.adjoint()));
  const BipartiteOperator flipped = partial_transpose(in_basis, side);
  return {t.dim_a(), t.dim_b(), conjugate_factor(flipped, side, basis)};
}

inline BipartiteOperator partial_transpose(const BipartiteOperator& t, Side side,
                                           const SpectralDecomposition& basis) {
  return partial_transpose(t, side, basis.basis);
}

inline ComplexMatrix hadamard_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("hadamard_product: shape mismatch");
  }
  return a.cwiseProduct(b);
}

/// Linear extension of B ⊗ A -> A ⊗ B; factor dimensions are exchanged.
inline BipartiteOperator swap_factors(const BipartiteOperator& t) {
  const Index da = t.dim_a();
  const Index db = t.dim_b();
  ComplexMatrix out(t.matrix().rows(), t.matrix().cols());
  for (Index ia = 0; ia < da; ++ia)
    for (Index ib = 0; ib < db; ++ib)
      for (Index ja = 0; ja < da; ++ja)
        for (Index jb = 0; jb < db; ++jb) out(ib * da + ia, jb * da + ja) = t(ia, ib, ja, jb);
  return {db, da, std::move(out)};
}

/// SWAP = sum_ij |i><j| ⊗ |j><i| on C^d ⊗ C^d.
inline BipartiteOperator swap_operator(Index d) {
  ComplexMatrix out = ComplexMatrix::Zero(d * d, d * d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) out(i * d + j, j * d + i) = 1.0;
  return {d, d, std::move(out)};
}

/// f applied to the spectrum of a Hermitian matrix.
template <typename F>
ComplexMatrix hermitian_function(const HermitianOperator& m, F&& f) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m.matrix());
  const RealVector mapped = solver.eigenvalues().unaryExpr(f);
  return solver.eigenvectors() * mapped.asDiagonal() * solver.eigenvectors().adjoint();
}

/// rho^{-1/2} on the support of rho together with the support projection.
struct PseudoInverseSqrt {
  HermitianOperator inv_sqrt;
  HermitianOperator sqrt;
  ComplexMatrix support;     // P
  ComplexMatrix complement;  // P^perp = 1 - P
  Index rank = 0;

  bool faithful() const { return rank == support.rows(); }
};

/// Eigenvalues p <= rank_tol * p_max are treated as zero.
inline PseudoInverseSqrt sqrt_pinv(const DensityMatrix& rho, double rank_tol = Tolerances{}.rank) {
  const Index d = rho.dim();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(rho.matrix());
  const RealVector& p = solver.eigenvalues();
  const ComplexMatrix& v = solver.eigenvectors();
  const double cutoff = rank_tol * std::max(p.maxCoeff(), 0.0);

  RealVector inv(d), root(d), keep(d);
  Index rank = 0;
  for (Index i = 0; i < d; ++i) {
    const bool on_support = p(i) > cutoff;
    rank += on_support ? 1 : 0;
    inv(i) = on_support ? 1.0 / std::sqrt(p(i)) : 0.0;
    root(i) = on_support ? std::sqrt(p(i)) : 0.0;
    keep(i) = on_support ? 1.0 : 0.0;
  }
  const ComplexMatrix support = v * keep.asDiagonal() * v.adjoint();
  return {HermitianOperator(ComplexMatrix(v * inv.asDiagonal() * v.adjoint())),
          HermitianOperator(ComplexMatrix(v * root.asDiagonal() * v.adjoint())), support,
          identity(d) - support, rank};
}

namespace detail {

inline void require_positive(std::span<const double> p, const char* who) {
  if (p.empty()) throw DimensionError(std::string(who) + ": empty distribution");
  for (double x : p) {
    if (!(x > 0.0)) {
      throw InvariantError(std::string(who) + ": entries must be strictly positive, got " +
                           std::to_string(x));
    }
  }
}

}  // namespace detail

/// omega_ij = 2 / (p_i + p_j).
inline HermitianOperator cauchy_matrix(std::span<const double> p) {
  detail::require_positive(p, "cauchy_matrix");
  const auto n = static_cast<Index>(p.size());
  ComplexMatrix out(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) out(i, j) = 2.0 / (p[i] + p[j]);
  return HermitianOperator(out);
}

/// H_ij = 2 sqrt(p_i p_j) / (p_i + p_j); unit diagonal.
inline HermitianOperator harmonic_mean_matrix(std::span<const double> p) {
  detail::require_positive(p, "harmonic_mean_matrix");
  const auto n = static_cast<Index>(p.size());
  ComplexMatrix out(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) out(i, j) = 2.0 * std::sqrt(p[i] * p[j]) / (p[i] + p[j]);
  return HermitianOperator(out);
}

}  // namespace tempcompat
