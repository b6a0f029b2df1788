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

// Petz recovery maps and Bayesian inverses of processes.

#include <optional>
#include <string>

#include "tempcompat/temporal.hpp"

namespace tempcompat {

/// B -> prior^{1/2} E*(E(prior)^{-1/2} B E(prior)^{-1/2}) prior^{1/2}, with
/// pseudoinverses on rank-deficient E(prior).
inline SuperOp petz_recovery(const SuperOp& e, const DensityMatrix& prior,
                             const Tolerances& tol = {}) {
  if (prior.dim() != e.dim_in()) {
    throw DimensionError("petz_recovery: prior has dimension " + std::to_string(prior.dim()) +
                         ", channel input is " + std::to_string(e.dim_in()));
  }
  const ComplexMatrix image = apply_channel(e, prior.matrix());
  DensityMatrix out;
  try {
    out = DensityMatrix(ComplexMatrix(0.5 * (image + image.adjoint())), tol);
  } catch (const InvariantError& err) {
    throw InvariantError(std::string("petz_recovery: image of the prior is invalid: ") +
                         err.what());
  }
  const ComplexMatrix root = sqrt_pinv(prior, tol.rank).sqrt.matrix();
  const ComplexMatrix inv = sqrt_pinv(out, tol.rank).inv_sqrt.matrix();
  const SuperOp adj = hs_adjoint(e);
  return from_action(e.dim_out(), e.dim_in(), [&](const ComplexMatrix& b) {
    return ComplexMatrix(root * apply_channel(adj, ComplexMatrix(inv * b * inv)) * root);
  });
}

struct BayesianInverse {
  std::optional<SuperOp> inverse;  // F : B -> A, present iff the report is compatible
  CompatibilityReport report;
};

/// The reverse temporal channel of E ⋆ rho when it is CPTP.
inline BayesianInverse bayesian_inverse(const Process& p, const Tolerances& tol = {}) {
  const BipartiteOperator tau = star_product(p);
  BayesianInverse out{std::nullopt, compatibility_test(tau, Side::B, tol)};
  if (out.report.compatible) out.inverse = out.report.channel;
  return out;
}

namespace detail {

inline void require_faithful(const DensityMatrix& rho, const Tolerances& tol, const char* who) {
  if (!sqrt_pinv(rho, tol.rank).faithful()) {
    throw InvariantError(std::string(who) + ": marginal is not faithful");
  }
}

}  // namespace detail

/// Max-norm distance between D ∘ F and petz(E, rho_A) ∘ D' over Choi
/// matrices, where E, F are the temporal channels of tau and D, D' the
/// dephasing channels of its marginals.
inline double verify_dfed(const BipartiteOperator& tau, const Tolerances& tol = {}) {
  const Marginals m = validate_marginals(tau, tol);
  detail::require_faithful(m.a, tol, "verify_dfed");
  detail::require_faithful(m.b, tol, "verify_dfed");
  const SuperOp d = dephasing_channel(m.a, KernelOutput::maximally_mixed, tol);
  const SuperOp d_prime = dephasing_channel(m.b, KernelOutput::maximally_mixed, tol);
  const SuperOp e = temporal_channel(tau, Side::A, tol);
  const SuperOp f = temporal_channel(tau, Side::B, tol);
  return choi_distance(compose(d, f), compose(petz_recovery(e, m.a, tol), d_prime));
}

/// Distance between the dephasing channel of rho and its own Petz map.
inline double petz_selfinverse_dephasing_check(const DensityMatrix& rho,
                                               const Tolerances& tol = {}) {
  detail::require_faithful(rho, tol, "petz_selfinverse_dephasing_check");
  const SuperOp d = dephasing_channel(rho, KernelOutput::maximally_mixed, tol);
  return choi_distance(petz_recovery(d, rho, tol), d);
}

}  // namespace tempcompat
