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

// States over time: the canonical state over time E ⋆ rho, two-time
// expectation values of observables measured with Lüders updates, and
// pseudo-density matrices assembled from Pauli correlation tables.

#include <array>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tempcompat/channels.hpp"

namespace tempcompat {

/// Hermitian observable with its cached canonical spectral decomposition.
class Observable {
 public:
  Observable() = default;
  explicit Observable(HermitianOperator m, const Tolerances& tol = {})
      : m_(std::move(m)), spectral_(eig_hermitian(m_, tol)) {}
  explicit Observable(const ComplexMatrix& m, const Tolerances& tol = {})
      : Observable(HermitianOperator(m, tol.hermiticity), tol) {}

  const ComplexMatrix& matrix() const { return m_.matrix(); }
  const SpectralDecomposition& spectral() const { return spectral_; }
  Index dim() const { return m_.dim(); }

 private:
  HermitianOperator m_;
  SpectralDecomposition spectral_;
};

/// E ⋆ rho = 1/2 {rho ⊗ 1, J[E]}.
inline BipartiteOperator star_product(const SuperOp& e, const DensityMatrix& rho) {
  if (rho.dim() != e.dim_in()) {
    throw DimensionError("star_product: state has dimension " + std::to_string(rho.dim()) +
                         ", channel input is " + std::to_string(e.dim_in()));
  }
  const ComplexMatrix lifted = tensor(rho.matrix(), identity(e.dim_out())).matrix();
  return {e.dim_in(), e.dim_out(), 0.5 * anticommutator(lifted, jamiolkowski(e).matrix())};
}

inline BipartiteOperator star_product(const Process& p) {
  return star_product(p.channel(), p.input());
}

/// State over time for B influencing A, written on A ⊗ B:
/// 1/2 {1_A ⊗ rho_B, J[F*]} with F : B -> A.
inline BipartiteOperator reverse_star(const SuperOp& f, const DensityMatrix& rho_b) {
  if (rho_b.dim() != f.dim_in()) {
    throw DimensionError("reverse_star: state has dimension " + std::to_string(rho_b.dim()) +
                         ", channel input is " + std::to_string(f.dim_in()));
  }
  const ComplexMatrix lifted = tensor(identity(f.dim_out()), rho_b.matrix()).matrix();
  return {f.dim_out(), f.dim_in(),
          0.5 * anticommutator(lifted, jamiolkowski(hs_adjoint(f)).matrix())};
}

/// Spectrum is {lambda} or {lambda, -lambda} for some lambda >= 0, after
/// clustering eigenvalues within tol * ||M||.
inline bool is_light_touch(const Observable& m, double tol = Tolerances{}.cluster) {
  const RealVector& v = m.spectral().values;
  if (v.size() == 0) return true;
  const double norm = v.cwiseAbs().maxCoeff();
  const double gap = tol * norm;
  std::vector<double> clusters;
  Index start = 0;
  while (start < v.size()) {
    Index end = start + 1;
    while (end < v.size() && v(end - 1) - v(end) <= gap) ++end;
    clusters.push_back(v.segment(start, end - start).mean());
    start = end;
  }
  if (clusters.size() == 1) return clusters[0] >= -gap;
  if (clusters.size() != 2) return false;
  const double lambda = 0.5 * (std::abs(clusters[0]) + std::abs(clusters[1]));
  return std::abs(clusters[0] - lambda) <= gap && std::abs(clusters[1] + lambda) <= gap;
}

/// <M, N> = sum_i lambda_i Tr[E(P_i rho P_i) N].
inline double two_time_expectation(const Observable& m, const Observable& n, const Process& p) {
  if (m.dim() != p.channel().dim_in() || n.dim() != p.channel().dim_out()) {
    throw DimensionError("two_time_expectation: observable dimensions do not match the process");
  }
  const auto& sd = m.spectral();
  Complex total = 0.0;
  for (std::size_t k = 0; k < sd.projectors.size(); ++k) {
    const ComplexMatrix& proj = sd.projectors[k];
    const ComplexMatrix updated = proj * p.input().matrix() * proj;
    total += sd.eigenvalues[k] * (apply_channel(p.channel(), updated) * n.matrix()).trace();
  }
  if (std::abs(total.imag()) > 1e-9) {
    throw InvariantError("two_time_expectation: imaginary residue " +
                         std::to_string(total.imag()));
  }
  return total.real();
}

struct RepresentabilityCheck {
  bool representable = false;
  double residual = 0.0;
};

/// Compares Tr[R (M ⊗ N)] with the two-time expectation value of the process.
inline RepresentabilityCheck representability_check(const BipartiteOperator& r, const Observable& m,
                                                    const Observable& n, const Process& p,
                                                    double tol = 1e-9) {
  if (r.dim_a() != m.dim() || r.dim_b() != n.dim()) {
    throw DimensionError("representability_check: operator factors do not match observables");
  }
  const Complex represented = (r.matrix() * tensor(m.matrix(), n.matrix()).matrix()).trace();
  const double residual = std::abs(represented - two_time_expectation(m, n, p));
  return {residual <= tol, residual};
}

inline const std::array<ComplexMatrix, 4>& pauli_matrices() {
  static const std::array<ComplexMatrix, 4> paulis = [] {
    const Complex i(0.0, 1.0);
    std::array<ComplexMatrix, 4> s;
    s[0] = identity(2);
    s[1] = ComplexMatrix(2, 2);
    s[1] << 0.0, 1.0, 1.0, 0.0;
    s[2] = ComplexMatrix(2, 2);
    s[2] << 0.0, -i, i, 0.0;
    s[3] = ComplexMatrix(2, 2);
    s[3] << 1.0, 0.0, 0.0, -1.0;
    return s;
  }();
  return paulis;
}

/// sigma_{alpha_1} ⊗ ... ⊗ sigma_{alpha_m} as a matrix.
inline ComplexMatrix pauli_string_matrix(std::span<const int> alpha) {
  ComplexMatrix out = identity(1);
  for (int a : alpha) {
    if (a < 0 || a > 3) throw DimensionError("pauli_string: index out of range {0,1,2,3}");
    out = tensor(out, pauli_matrices()[static_cast<std::size_t>(a)]).matrix();
  }
  return out;
}

inline Observable pauli_string(std::span<const int> alpha) {
  return Observable(pauli_string_matrix(alpha));
}

/// Expectation values <sigma_alpha, sigma_beta> for m qubits per side, indexed
/// by the base-4 encodings of alpha and beta (first qubit most significant).
class CorrelationTable {
 public:
  CorrelationTable() = default;
  explicit CorrelationTable(int m) : m_(m) {
    if (m < 1 || m > 4) throw DimensionError("CorrelationTable: qubit count must be in 1..4");
    entries_.assign(static_cast<std::size_t>(strings() * strings()), std::nullopt);
  }

  int qubits() const { return m_; }
  Index strings() const { return Index{1} << (2 * m_); }

  Index encode(std::span<const int> alpha) const {
    if (static_cast<int>(alpha.size()) != m_) {
      throw DimensionError("CorrelationTable: index vector has length " +
                           std::to_string(alpha.size()) + ", expected " + std::to_string(m_));
    }
    Index code = 0;
    for (int a : alpha) {
      if (a < 0 || a > 3) throw DimensionError("CorrelationTable: Pauli index out of range");
      code = code * 4 + a;
    }
    return code;
  }

  std::vector<int> decode(Index code) const {
    std::vector<int> alpha(static_cast<std::size_t>(m_));
    for (int k = m_ - 1; k >= 0; --k) {
      alpha[static_cast<std::size_t>(k)] = static_cast<int>(code % 4);
      code /= 4;
    }
    return alpha;
  }

  void set(Index a, Index b, double value) { entries_.at(slot(a, b)) = value; }
  void set(std::span<const int> alpha, std::span<const int> beta, double value) {
    set(encode(alpha), encode(beta), value);
  }
  std::optional<double> get(Index a, Index b) const { return entries_.at(slot(a, b)); }
  std::optional<double> get(std::span<const int> alpha, std::span<const int> beta) const {
    return get(encode(alpha), encode(beta));
  }

  bool complete() const {
    for (const auto& e : entries_)
      if (!e) return false;
    return true;
  }

  /// Throws InvariantError naming the first violated invariant.
  void validate(double tol = 1e-9) const {
    if (!complete()) throw InvariantError("CorrelationTable: incomplete table");
    if (std::abs(*get(0, 0) - 1.0) > tol) {
      throw InvariantError("CorrelationTable: normalization entry <sigma_0, sigma_0> is " +
                           std::to_string(*get(0, 0)));
    }
    for (const auto& e : entries_) {
      if (std::abs(*e) > 1.0 + tol) {
        throw InvariantError("CorrelationTable: entry " + std::to_string(*e) +
                             " outside [-1, 1]");
      }
    }
  }

 private:
  std::size_t slot(Index a, Index b) const {
    if (a < 0 || b < 0 || a >= strings() || b >= strings()) {
      throw DimensionError("CorrelationTable: code out of range");
    }
    return static_cast<std::size_t>(a * strings() + b);
  }

  int m_ = 0;
  std::vector<std::optional<double>> entries_;
};

/// R = 4^{-m} sum <sigma_alpha, sigma_beta> sigma_alpha ⊗ sigma_beta.
inline BipartiteOperator pdm_from_correlations(const CorrelationTable& t) {
  t.validate();
  const Index n = t.strings();
  const Index d = Index{1} << t.qubits();
  std::vector<ComplexMatrix> strings;
  strings.reserve(static_cast<std::size_t>(n));
  for (Index a = 0; a < n; ++a) strings.push_back(pauli_string_matrix(t.decode(a)));
  ComplexMatrix r = ComplexMatrix::Zero(d * d, d * d);
  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < n; ++b) {
      const double v = *t.get(a, b);
      if (v == 0.0) continue;
      r += v * tensor(strings[static_cast<std::size_t>(a)], strings[static_cast<std::size_t>(b)])
                   .matrix();
    }
  return {d, d, r / static_cast<double>(n)};
}

/// Two-time expectation values of every Pauli pair for an m-qubit process.
inline CorrelationTable correlations_from_process(const Process& p, int m) {
  const Index d = Index{1} << m;
  if (p.channel().dim_in() != d || p.channel().dim_out() != d) {
    throw DimensionError("correlations_from_process: process is not on " + std::to_string(m) +
                         "-qubit systems");
  }
  CorrelationTable t(m);
  std::vector<Observable> strings;
  for (Index a = 0; a < t.strings(); ++a) strings.push_back(pauli_string(t.decode(a)));
  for (Index a = 0; a < t.strings(); ++a)
    for (Index b = 0; b < t.strings(); ++b)
      t.set(a, b,
            two_time_expectation(strings[static_cast<std::size_t>(a)],
                                 strings[static_cast<std::size_t>(b)], p));
  return t;
}

}  // namespace tempcompat
