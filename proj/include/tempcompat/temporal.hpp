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

// Temporal channels of bipartite operators, their dephasing and
// measure-and-prepare factors, and the compatibility test.
//
// Every side-B computation runs the side-A code on swap_factors(tau), so a
// side-B channel maps B to A.

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/LU>

#include "tempcompat/ensembles.hpp"
#include "tempcompat/sot.hpp"

namespace tempcompat {

struct Marginals {
  DensityMatrix a;
  DensityMatrix b;

  const DensityMatrix& on(Side s) const { return s == Side::A ? a : b; }
};

/// Checks that tau is Hermitian with unit trace and that both partial traces
/// are density matrices. Messages name the violated invariant.
inline Marginals validate_marginals(const BipartiteOperator& tau, const Tolerances& tol = {}) {
  const ComplexMatrix& m = tau.matrix();
  const double defect = hermiticity_defect(m);
  if (defect > tol.hermiticity * std::max(1.0, max_abs(m))) {
    throw InvariantError("state: not Hermitian (defect " + std::to_string(defect) + ")");
  }
  const double tr = m.trace().real();
  if (std::abs(tr - 1.0) > tol.trace) {
    throw InvariantError("state: trace is " + std::to_string(tr) + ", expected 1");
  }
  auto marginal = [&](Side traced) {
    const ComplexMatrix r = partial_trace(tau, traced);
    try {
      return DensityMatrix(ComplexMatrix(0.5 * (r + r.adjoint())), tol);
    } catch (const InvariantError& e) {
      throw InvariantError("marginal " + std::string(to_string(other(traced))) + ": " + e.what());
    }
  };
  return {marginal(Side::B), marginal(Side::A)};
}

namespace detail {

/// tau with the chosen side moved to factor A.
inline BipartiteOperator oriented(const BipartiteOperator& tau, Side side) {
  return side == Side::A ? tau : swap_factors(tau);
}

/// Eigenbasis of a density matrix, eigenvalues descending, with the support
/// cutoff applied.
struct Eigenframe {
  RealVector p;
  ComplexMatrix u;  // column i is |u_i>
  std::vector<bool> support;
  Index rank = 0;
};

inline Eigenframe eigenframe(const DensityMatrix& rho, const Tolerances& tol) {
  const SpectralDecomposition sd = eig_hermitian(rho.hermitian(), tol);
  Eigenframe f{sd.values, sd.basis, {}, 0};
  const double cutoff = tol.rank * std::max(f.p.size() ? f.p(0) : 0.0, 0.0);
  for (Index i = 0; i < f.p.size(); ++i) {
    f.support.push_back(f.p(i) > cutoff);
    f.rank += f.support.back() ? 1 : 0;
  }
  return f;
}

/// (V ⊗ 1) X (V ⊗ 1)^dagger.
inline ComplexMatrix conjugate_a(const ComplexMatrix& x, const ComplexMatrix& v, Index db) {
  const ComplexMatrix big = tensor(v, identity(db)).matrix();
  return big * x * big.adjoint();
}

/// Tr_A[tau (X ⊗ 1)] = sum_{a,c} X_{ca} tau_{(a,.),(c,.)}.
inline ComplexMatrix contract_a(const BipartiteOperator& tau, const ComplexMatrix& x) {
  const Index da = tau.dim_a();
  const Index db = tau.dim_b();
  ComplexMatrix out = ComplexMatrix::Zero(db, db);
  for (Index a = 0; a < da; ++a)
    for (Index c = 0; c < da; ++c) {
      if (x(c, a) == Complex(0.0)) continue;
      out += x(c, a) * tau.matrix().block(a * db, c * db, db, db);
    }
  return out;
}

/// Side-A temporal channel of an oriented operator.
inline SuperOp temporal_channel_a(const BipartiteOperator& tau, const DensityMatrix& rho,
                                  const Tolerances& tol) {
  const Index da = tau.dim_a();
  const Index db = tau.dim_b();
  const Eigenframe f = eigenframe(rho, tol);
  const ComplexMatrix rotated = conjugate_a(tau.matrix(), f.u.adjoint(), db);
  // Choi matrix in the eigenframe: block (i, j) is E(|u_i><u_j|).
  ComplexMatrix c = ComplexMatrix::Zero(da * db, da * db);
  for (Index i = 0; i < da; ++i)
    for (Index j = 0; j < da; ++j) {
      if (f.support[i] && f.support[j]) {
        c.block(i * db, j * db, db, db) =
            (2.0 / (f.p(i) + f.p(j))) * rotated.block(j * db, i * db, db, db);
      } else if (i == j) {
        c.block(i * db, i * db, db, db) = identity(db) / static_cast<double>(db);
      }
    }
  // |k><l| = sum_ij conj(U_ki) U_lj |u_i><u_j|
  ComplexMatrix choi = conjugate_a(c, f.u.conjugate(), db);
  choi = 0.5 * (choi + choi.adjoint()).eval();
  return SuperOp(BipartiteOperator(da, db, std::move(choi)));
}

}  // namespace detail

/// The HPTP map whose state over time reproduces tau: E ⋆ rho_A = tau for
/// side A, and F : B -> A with swap_factors(F ⋆ rho_B) = tau for side B.
/// Kernel directions of a rank-deficient marginal map to the maximally mixed
/// output on the diagonal and to zero off it.
inline SuperOp temporal_channel(const BipartiteOperator& tau, Side side,
                                const Tolerances& tol = {}) {
  const Marginals m = validate_marginals(tau, tol);
  return detail::temporal_channel_a(detail::oriented(tau, side), m.on(side), tol);
}

/// Independent dense solve of 1/2 {rho_A ⊗ 1, X} = tau (side A) or
/// 1/2 {1 ⊗ rho_B, X} = tau (side B) over row-major vectorizations. The
/// solution is J[E] for side A and J[F*] for side B.
inline BipartiteOperator sylvester_oracle(const BipartiteOperator& tau, Side side,
                                          const Tolerances& tol = {}) {
  const Marginals m = validate_marginals(tau, tol);
  const DensityMatrix& rho = m.on(side);
  if (!sqrt_pinv(rho, tol.rank).faithful()) {
    throw InvariantError("sylvester_oracle: marginal " + std::string(to_string(side)) +
                         " is not faithful");
  }
  const Index da = tau.dim_a();
  const Index db = tau.dim_b();
  const Index n = da * db;
  const ComplexMatrix a = side == Side::A ? tensor(rho.matrix(), identity(db)).matrix()
                                          : tensor(identity(da), rho.matrix()).matrix();
  // vec(AX) = (A ⊗ 1) vec X, vec(XA) = (1 ⊗ A^T) vec X
  const ComplexMatrix l =
      0.5 * (tensor(a, identity(n)).matrix() + tensor(identity(n), a.transpose()).matrix());
  ComplexVector rhs(n * n);
  for (Index r = 0; r < n; ++r)
    for (Index c = 0; c < n; ++c) rhs(r * n + c) = tau.matrix()(r, c);
  const ComplexVector x = l.partialPivLu().solve(rhs);
  ComplexMatrix out(n, n);
  for (Index r = 0; r < n; ++r)
    for (Index c = 0; c < n; ++c) out(r, c) = x(r * n + c);
  return {da, db, std::move(out)};
}

/// Whether the kernel of a rank-deficient state is sent to 1/m on the whole
/// space, or to the normalized kernel projection.
enum class KernelOutput { maximally_mixed, kernel };

/// D(A) = sum_{p_i, p_j > 0} 2 sqrt(p_i p_j) / (p_i + p_j) P_i A P_j + Tr[P⊥ A] K,
/// with P_i the spectral projectors of rho and K = 1/m or P⊥ / dim P⊥.
inline SuperOp dephasing_channel(const DensityMatrix& rho,
                                 KernelOutput kernel = KernelOutput::maximally_mixed,
                                 const Tolerances& tol = {}) {
  const Index d = rho.dim();
  const SpectralDecomposition sd = eig_hermitian(rho.hermitian(), tol);
  const double cutoff = tol.rank * std::max(sd.eigenvalues.front(), 0.0);
  std::vector<std::size_t> live;
  ComplexMatrix perp = ComplexMatrix::Zero(d, d);
  for (std::size_t k = 0; k < sd.projectors.size(); ++k) {
    if (sd.eigenvalues[k] > cutoff) {
      live.push_back(k);
    } else {
      perp += sd.projectors[k];
    }
  }
  const double kernel_dim = perp.trace().real();
  const ComplexMatrix sink = kernel == KernelOutput::maximally_mixed || kernel_dim < 0.5
                                 ? ComplexMatrix(identity(d) / static_cast<double>(d))
                                 : ComplexMatrix(perp / std::round(kernel_dim));
  return from_action(d, d, [&](const ComplexMatrix& x) {
    ComplexMatrix out = ComplexMatrix::Zero(d, d);
    for (std::size_t i : live)
      for (std::size_t j : live) {
        const double pi = sd.eigenvalues[i];
        const double pj = sd.eigenvalues[j];
        out += (2.0 * std::sqrt(pi * pj) / (pi + pj)) * sd.projectors[i] * x * sd.projectors[j];
      }
    return ComplexMatrix(out + (perp * x).trace() * sink);
  });
}

struct CorrelationMatrixCheck {
  bool ok = false;
  bool strict = false;
  double min_eigenvalue = 0.0;
};

/// PSD with unit diagonal; strict when lambda_min > tol.
inline CorrelationMatrixCheck correlation_matrix_check(const HermitianOperator& c,
                                                       double tol = Tolerances{}.psd) {
  const PsdCheck psd = is_psd(c, tol);
  bool unit = true;
  for (Index i = 0; i < c.dim(); ++i) unit = unit && std::abs(c.matrix()(i, i) - 1.0) <= tol;
  return {psd.psd && unit, psd.psd && unit && psd.min_eigenvalue > tol, psd.min_eigenvalue};
}

/// G_theta = t_theta rho^{-1/2} rho_theta rho^{-1/2} with rho the average;
/// P⊥ is appended when rho is rank-deficient.
inline std::vector<HermitianOperator> pgm(const StateEnsemble& e, const Tolerances& tol = {}) {
  double total = 0.0;
  for (double w : e.weights) {
    if (w < 0.0) throw InvariantError("pgm: negative weight " + std::to_string(w));
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-10) {
    throw InvariantError("pgm: weights sum to " + std::to_string(total) + ", expected 1");
  }
  const PseudoInverseSqrt s = sqrt_pinv(e.average(), tol.rank);
  std::vector<HermitianOperator> out;
  for (std::size_t k = 0; k < e.states.size(); ++k) {
    const ComplexMatrix g = e.weights[k] * s.inv_sqrt.matrix() * e.states[k].matrix() *
                            s.inv_sqrt.matrix();
    out.emplace_back(ComplexMatrix(0.5 * (g + g.adjoint())));
  }
  if (!s.faithful()) out.emplace_back(s.complement);
  return out;
}

/// A -> sum_k Tr[E_k A] sigma_k.
inline SuperOp measure_prepare(const std::vector<HermitianOperator>& povm,
                               const std::vector<ComplexMatrix>& states) {
  if (povm.empty() || povm.size() != states.size()) {
    throw DimensionError("measure_prepare: POVM and state lists differ in length");
  }
  const Index din = povm.front().dim();
  const Index dout = states.front().rows();
  return from_action(din, dout, [&](const ComplexMatrix& x) {
    ComplexMatrix out = ComplexMatrix::Zero(dout, dout);
    for (std::size_t k = 0; k < povm.size(); ++k) out += (povm[k].matrix() * x).trace() * states[k];
    return out;
  });
}

/// G(A) = Tr_A[tau ((rho^{-1/2} A rho^{-1/2}) ⊗ 1)] + Tr[P⊥ A] 1/n.
inline SuperOp pgm_map(const BipartiteOperator& tau, Side side, const Tolerances& tol = {}) {
  const Marginals m = validate_marginals(tau, tol);
  const BipartiteOperator t = detail::oriented(tau, side);
  const PseudoInverseSqrt s = sqrt_pinv(m.on(side), tol.rank);
  const Index din = t.dim_a();
  const Index dout = t.dim_b();
  const ComplexMatrix& r = s.inv_sqrt.matrix();
  return from_action(din, dout, [&](const ComplexMatrix& x) {
    return ComplexMatrix(detail::contract_a(t, r * x * r) +
                         (s.complement * x).trace() * identity(dout) / static_cast<double>(dout));
  });
}

/// Max-norm distance between the temporal channel and G ∘ D. On a
/// rank-deficient marginal D sends the kernel into itself, which is the
/// variant for which the factorization is exact.
inline double verify_decomposition(const BipartiteOperator& tau, Side side,
                                   const Tolerances& tol = {}) {
  const Marginals m = validate_marginals(tau, tol);
  const SuperOp e = temporal_channel(tau, side, tol);
  const SuperOp d = dephasing_channel(m.on(side), KernelOutput::kernel, tol);
  return choi_distance(e, compose(pgm_map(tau, side, tol), d));
}

/// (rho^{-1/2} ⊗ 1) tau (rho^{-1/2} ⊗ 1) for side A, mirrored for side B.
struct DistortedState {
  BipartiteOperator base;
  Side side = Side::A;
  SpectralDecomposition marginal_spectrum;
  BipartiteOperator distorted;
};

inline DistortedState distort(const BipartiteOperator& tau, Side side, const Tolerances& tol = {}) {
  const Marginals m = validate_marginals(tau, tol);
  const DensityMatrix& rho = m.on(side);
  const ComplexMatrix inv = sqrt_pinv(rho, tol.rank).inv_sqrt.matrix();
  const ComplexMatrix lift = side == Side::A ? tensor(inv, identity(tau.dim_b())).matrix()
                                             : tensor(identity(tau.dim_a()), inv).matrix();
  return {tau, side, eig_hermitian(rho.hermitian(), tol),
          BipartiteOperator(tau.dim_a(), tau.dim_b(), lift * tau.matrix() * lift)};
}

struct CompatibilityReport {
  Side side = Side::A;
  bool compatible = false;
  bool boundary = false;  // |lambda_min| within 10x the verdict threshold
  double test_min_eigenvalue = 0.0;
  double test_max_eigenvalue = 0.0;
  SuperOp channel;
  double reconstruction_residual = 0.0;
  CptpDiagnostics cptp;
  bool faithful_marginal = false;
  bool ppt = false;
  double ppt_min_eigenvalue = 0.0;
};

/// Positivity of (T ⊗ id)(tau) in the computational basis.
inline PsdCheck is_ppt(const BipartiteOperator& tau, double tol = Tolerances{}.psd) {
  const ComplexMatrix pt = partial_transpose(tau, Side::A).matrix();
  return is_psd(HermitianOperator(ComplexMatrix(0.5 * (pt + pt.adjoint())),
                                  std::max(Tolerances{}.hermiticity, tol)),
                tol);
}

/// Builds ((T ∘ D) ⊗ id)(tau_rho) with T the transpose in an eigenbasis of the
/// chosen marginal and checks it for positivity. The temporal channel's Choi
/// matrix is checked independently and the two verdicts must agree.
inline CompatibilityReport compatibility_test(const BipartiteOperator& tau, Side side,
                                              const Tolerances& tol = {}) {
  const Marginals m = validate_marginals(tau, tol);
  const BipartiteOperator t = detail::oriented(tau, side);
  const DensityMatrix& rho = m.on(side);
  const Index da = t.dim_a();
  const Index db = t.dim_b();
  const detail::Eigenframe f = detail::eigenframe(rho, tol);

  // Distortion and dephasing in the eigenframe, where D multiplies block
  // (i, j) by the harmonic-mean factor and the transpose swaps blocks.
  const ComplexMatrix inv = sqrt_pinv(rho, tol.rank).inv_sqrt.matrix();
  const ComplexMatrix lift = tensor(inv, identity(db)).matrix();
  const ComplexMatrix rotated =
      detail::conjugate_a(lift * t.matrix() * lift, f.u.adjoint(), db);
  ComplexMatrix test = ComplexMatrix::Zero(da * db, da * db);
  for (Index i = 0; i < da; ++i)
    for (Index j = 0; j < da; ++j) {
      if (!f.support[i] || !f.support[j]) continue;
      const double h = 2.0 * std::sqrt(f.p(i) * f.p(j)) / (f.p(i) + f.p(j));
      test.block(j * db, i * db, db, db) = h * rotated.block(i * db, j * db, db, db);
    }
  test = 0.5 * (test + test.adjoint()).eval();
  const PsdCheck check = is_psd(HermitianOperator(test), tol.verdict);

  CompatibilityReport r;
  r.side = side;
  r.test_min_eigenvalue = check.min_eigenvalue;
  r.test_max_eigenvalue = check.max_eigenvalue;
  r.compatible = check.psd;
  const double threshold = tol.verdict * std::max(1.0, check.max_eigenvalue);
  r.boundary = std::abs(check.min_eigenvalue) < 10.0 * threshold;
  r.faithful_marginal = f.rank == da;
  r.channel = detail::temporal_channel_a(t, rho, tol);
  r.cptp = is_cptp(r.channel, tol.verdict);
  const BipartiteOperator rebuilt = side == Side::A ? star_product(r.channel, rho)
                                                    : reverse_star(r.channel, rho);
  r.reconstruction_residual = max_abs_diff(rebuilt.matrix(), tau.matrix());
  const PsdCheck ppt = is_ppt(tau, tol.psd);
  r.ppt = ppt.psd;
  r.ppt_min_eigenvalue = ppt.min_eigenvalue;

  if (r.compatible != r.cptp.cptp && !r.boundary) {
    throw InconsistencyError(
        "compatibility_test: side " + std::string(to_string(side)) + " test matrix says " +
        (r.compatible ? "compatible" : "incompatible") + " (lambda_min " +
        std::to_string(r.test_min_eigenvalue) + ") but the temporal channel Choi matrix has " +
        "lambda_min " + std::to_string(r.cptp.choi_min_eigenvalue) + " and TP residual " +
        std::to_string(r.cptp.tp_residual));
  }
  return r;
}

struct Certificate {
  CompatibilityReport a;
  CompatibilityReport b;
  bool ppt = false;
  double ppt_min_eigenvalue = 0.0;

  bool compatible_both() const { return a.compatible && b.compatible; }
};

/// Both directions plus the PPT flag. A PPT operator that fails either
/// direction away from the boundary is reported as an inconsistency.
inline Certificate certify(const BipartiteOperator& tau, const Tolerances& tol = {}) {
  Certificate c{compatibility_test(tau, Side::A, tol), compatibility_test(tau, Side::B, tol),
                false, 0.0};
  c.ppt = c.a.ppt;
  c.ppt_min_eigenvalue = c.a.ppt_min_eigenvalue;
  const bool ppt_margin = c.ppt_min_eigenvalue > 10.0 * tol.psd;
  if (c.ppt && ppt_margin && !c.compatible_both() && !c.a.boundary && !c.b.boundary) {
    throw InconsistencyError("certify: PPT input reported incompatible");
  }
  return c;
}

}  // namespace tempcompat
