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

// Linear maps between operator spaces. A map E : M_in -> M_out is stored as
// its Choi matrix C[E] = sum_ij |i><j| ⊗ E(|i><j|) in the computational basis,
// with the input on factor A and the output on factor B.

#include <span>
#include <string>
#include <utility>

#include "tempcompat/operators.hpp"

namespace tempcompat {

class SuperOp {
 public:
  SuperOp() = default;
  explicit SuperOp(BipartiteOperator choi) : choi_(std::move(choi)) {}

  Index dim_in() const { return choi_.dim_a(); }
  Index dim_out() const { return choi_.dim_b(); }
  const BipartiteOperator& choi() const { return choi_; }

  ComplexMatrix operator()(const ComplexMatrix& x) const;

 private:
  BipartiteOperator choi_;
};

/// Builds a map from its action on matrix units.
template <typename F>
SuperOp from_action(Index dim_in, Index dim_out, F&& action) {
  ComplexMatrix choi(dim_in * dim_out, dim_in * dim_out);
  for (Index i = 0; i < dim_in; ++i) {
    for (Index j = 0; j < dim_in; ++j) {
      const ComplexMatrix image = action(matrix_unit(dim_in, i, j));
      if (image.rows() != dim_out || image.cols() != dim_out) {
        throw DimensionError("from_action: image has wrong dimension");
      }
      choi.block(i * dim_out, j * dim_out, dim_out, dim_out) = image;
    }
  }
  return SuperOp(BipartiteOperator(dim_in, dim_out, std::move(choi)));
}

/// Kraus operators are dim_out x dim_in.
inline SuperOp from_kraus(std::span<const ComplexMatrix> ops) {
  if (ops.empty()) throw DimensionError("from_kraus: empty Kraus list");
  const Index dout = ops.front().rows();
  const Index din = ops.front().cols();
  ComplexMatrix choi = ComplexMatrix::Zero(din * dout, din * dout);
  for (const ComplexMatrix& k : ops) {
    if (k.rows() != dout || k.cols() != din) {
      throw DimensionError("from_kraus: inconsistent Kraus operator shapes");
    }
    // |K>> = sum_i |i> ⊗ K|i>
    ComplexVector v(din * dout);
    for (Index i = 0; i < din; ++i) v.segment(i * dout, dout) = k.col(i);
    choi += v * v.adjoint();
  }
  return SuperOp(BipartiteOperator(din, dout, std::move(choi)));
}

/// E(X)_ab = sum_ij X_ij <a|E(|i><j|)|b>, contracted against the Choi matrix.
/// Not named `apply`: argument-dependent lookup on std::complex would also
/// find std::apply.
inline ComplexMatrix apply_channel(const SuperOp& e, const ComplexMatrix& x) {
  const Index din = e.dim_in();
  const Index dout = e.dim_out();
  if (x.rows() != din || x.cols() != din) {
    throw DimensionError("apply_channel: input is " + std::to_string(x.rows()) + "x" +
                         std::to_string(x.cols()) + ", channel expects " + std::to_string(din));
  }
  const ComplexMatrix& c = e.choi().matrix();
  ComplexMatrix out = ComplexMatrix::Zero(dout, dout);
  for (Index i = 0; i < din; ++i)
    for (Index j = 0; j < din; ++j) {
      if (x(i, j) == Complex(0.0)) continue;
      out += x(i, j) * c.block(i * dout, j * dout, dout, dout);
    }
  return out;
}

inline ComplexMatrix SuperOp::operator()(const ComplexMatrix& x) const {
  return apply_channel(*this, x);
}

/// J[E] = sum_ij |i><j| ⊗ E(|j><i|) = (id ⊗ E)(SWAP).
inline BipartiteOperator jamiolkowski(const SuperOp& e) {
  return partial_transpose(e.choi(), Side::A);
}

inline SuperOp from_jamiolkowski(const BipartiteOperator& j) {
  return SuperOp(partial_transpose(j, Side::A));
}

inline SuperOp from_choi(const BipartiteOperator& c) { return SuperOp(c); }

/// Max-norm distance between Choi matrices.
inline double choi_distance(const SuperOp& a, const SuperOp& b) {
  if (a.dim_in() != b.dim_in() || a.dim_out() != b.dim_out()) {
    throw DimensionError("choi_distance: maps act between different spaces");
  }
  return max_abs_diff(a.choi().matrix(), b.choi().matrix());
}

struct CptpDiagnostics {
  bool cptp = false;
  bool hermitian = false;
  bool trace_preserving = false;
  bool completely_positive = false;
  double choi_min_eigenvalue = 0.0;
  double choi_max_eigenvalue = 0.0;
  double tp_residual = 0.0;           // max |Tr_out C - 1_in|
  double hermiticity_residual = 0.0;  // max |C - C^dagger|
};

inline double trace_preservation_residual(const SuperOp& e) {
  return max_abs_diff(partial_trace(e.choi(), Side::B), identity(e.dim_in()));
}

/// Choi's theorem: CP iff the Choi matrix is PSD; TP iff Tr_out C = 1.
inline CptpDiagnostics is_cptp(const SuperOp& e, double tol = Tolerances{}.psd) {
  const ComplexMatrix& c = e.choi().matrix();
  const double scale = std::max(1.0, max_abs(c));
  CptpDiagnostics d;
  d.hermiticity_residual = hermiticity_defect(c);
  d.hermitian = d.hermiticity_residual <= tol * scale;
  d.tp_residual = trace_preservation_residual(e);
  d.trace_preserving = d.tp_residual <= tol * scale;
  const HermitianOperator h(ComplexMatrix(0.5 * (c + c.adjoint())));
  const PsdCheck psd = is_psd(h, tol);
  d.choi_min_eigenvalue = psd.min_eigenvalue;
  d.choi_max_eigenvalue = psd.max_eigenvalue;
  d.completely_positive = d.hermitian && psd.psd;
  d.cptp = d.completely_positive && d.trace_preserving;
  return d;
}

/// Hermitian-preserving (Choi Hermitian) and trace-preserving.
inline bool is_hptp(const SuperOp& e, double tol = Tolerances{}.psd) {
  const ComplexMatrix& c = e.choi().matrix();
  const double scale = std::max(1.0, max_abs(c));
  return hermiticity_defect(c) <= tol * scale && trace_preservation_residual(e) <= tol * scale;
}

/// F ∘ E.
inline SuperOp compose(const SuperOp& f, const SuperOp& e) {
  if (e.dim_out() != f.dim_in()) {
    throw DimensionError("compose: inner map outputs dimension " + std::to_string(e.dim_out()) +
                         ", outer map expects " + std::to_string(f.dim_in()));
  }
  const ComplexMatrix& ce = e.choi().matrix();
  const Index din = e.dim_in();
  const Index mid = e.dim_out();
  const Index dout = f.dim_out();
  ComplexMatrix choi(din * dout, din * dout);
  for (Index i = 0; i < din; ++i)
    for (Index j = 0; j < din; ++j)
      choi.block(i * dout, j * dout, dout, dout) = apply_channel(f, ComplexMatrix(ce.block(i * mid, j * mid, mid, mid)));
  return SuperOp(BipartiteOperator(din, dout, std::move(choi)));
}

/// Hilbert-Schmidt adjoint: Tr[E(A)^dagger B] = Tr[A^dagger E*(B)].
/// C[E*]_{(a,i),(b,j)} = conj(C[E]_{(i,a),(j,b)}).
inline SuperOp hs_adjoint(const SuperOp& e) {
  const BipartiteOperator swapped = swap_factors(e.choi());
  return SuperOp(BipartiteOperator(swapped.dim_a(), swapped.dim_b(), swapped.matrix().conjugate()));
}

/// Dense superoperator S with vec(E(X)) = S vec(X), row-major vectorization.
inline ComplexMatrix superoperator_matrix(const SuperOp& e) {
  const Index din = e.dim_in();
  const Index dout = e.dim_out();
  ComplexMatrix s(dout * dout, din * din);
  for (Index i = 0; i < din; ++i)
    for (Index j = 0; j < din; ++j)
      for (Index a = 0; a < dout; ++a)
        for (Index b = 0; b < dout; ++b) s(a * dout + b, i * din + j) = e.choi()(i, a, j, b);
  return s;
}

inline SuperOp identity_channel(Index d) {
  return from_action(d, d, [](const ComplexMatrix& x) { return x; });
}

inline SuperOp unitary_channel(const ComplexMatrix& u) {
  if (u.rows() != u.cols()) throw DimensionError("unitary_channel: matrix is not square");
  const ComplexMatrix ops[] = {u};
  return from_kraus(ops);
}

/// A -> Tr[A] sigma.
inline SuperOp replace_channel(Index dim_in, const ComplexMatrix& sigma) {
  return SuperOp(tensor(identity(dim_in), sigma));
}

/// A -> A^T in the computational basis (HPTP, not CP for d >= 2).
inline SuperOp transpose_map(Index d) {
  return from_action(d, d, [](const ComplexMatrix& x) { return ComplexMatrix(x.transpose()); });
}

/// A -> Tr[A], as a map into 1x1 matrices.
inline SuperOp trace_map(Index d) {
  return from_action(d, 1, [](const ComplexMatrix& x) { return ComplexMatrix::Constant(1, 1, x.trace()); });
}

/// A process (E, rho): an input state together with a channel acting on it.
class Process {
 public:
  Process(SuperOp channel, DensityMatrix input) : channel_(std::move(channel)), input_(std::move(input)) {
    if (input_.dim() != channel_.dim_in()) {
      throw DimensionError("Process: state has dimension " + std::to_string(input_.dim()) +
                           ", channel input is " + std::to_string(channel_.dim_in()));
    }
  }

  const SuperOp& channel() const { return channel_; }
  const DensityMatrix& input() const { return input_; }

 private:
  SuperOp channel_;
  DensityMatrix input_;
};

}  // namespace tempcompat
