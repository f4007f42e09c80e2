#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "pmlfs/dataset.hpp"
#include "pmlfs/matrix.hpp"

namespace pmlfs {

struct HyperParams {
  double alpha = 1.0;  // label factorization weight
  double beta = 1.0;   // latent alignment weight
  double gamma = 1.0;  // row-sparsity weight on Q·R
  double eps_d = 1e-8;     // inside the reweighting D_ii = 1 / (2‖(QR)_i‖ + eps_d)
  double eps_div = 1e-12;  // added to every update denominator
  std::size_t max_iter = 500;
  double rel_tol = 1e-6;
  std::uint64_t seed = 0;
  /// Drop D from the Q and R updates, turning the sparsity term into a
  /// plain Frobenius penalty on Q·R.
  bool plain_frobenius_penalty = false;

  void validate() const;
};

/// The four terms of the objective, unweighted except where noted.
struct ObjectiveTerms {
  double feature = 0.0;    // ‖X − LQᵀ‖²
  double label = 0.0;      // α‖T − PR‖²
  double alignment = 0.0;  // β‖L − P‖²
  double sparsity = 0.0;   // γ‖QR‖₂,₁

  double total() const { return feature + label + alignment + sparsity; }
};

struct IterationLog {
  std::size_t iter = 0;
  ObjectiveTerms terms;
  double min_entry = 0.0;
  double max_entry = 0.0;
  /// Columns of Q whose entries are all below 1e-12.
  std::size_t collapsed_q_columns = 0;
};

/// Factor matrices of the joint factorization
///   X ≈ L·Qᵀ,  T ≈ P·R,  L ≈ P,
/// with T the disambiguated label matrix (starts at Y).
struct FactorState {
  Matrix l_mat;  // n×k, latent clusters of features
  Matrix q_mat;  // d×k, feature coefficients
  Matrix p_mat;  // n×k, latent clusters of labels
  Matrix r_mat;  // k×l, label coefficients
  Matrix t_mat;  // n×l, disambiguated labels
  /// Row reweighting used by the next sweep's Q and R updates.
  std::vector<double> d_weights;
  std::size_t iter = 0;
  std::vector<double> objective_trace;
  std::vector<IterationLog> log;

  std::size_t rank() const { return q_mat.cols(); }
};

/// Random factors uniform on (0.01, 1], T = Y. Requires 2 <= k <= min(n, d, l).
FactorState init_state(const PmlDataset& ds, std::size_t k, const HyperParams& hp);

ObjectiveTerms objective_terms(const FactorState& state, const PmlDataset& ds,
                               const HyperParams& hp);

/// Exact objective (true L2,1 norm, not its quadratic relaxation).
double objective(const FactorState& state, const PmlDataset& ds, const HyperParams& hp);

/// D_ii = 1 / (2‖(QR)_i·‖₂ + eps_d).
std::vector<double> reweight_d(const FactorState& state, const HyperParams& hp);

/// One pass of multiplicative updates in the order L, Q, P, R, T, followed
/// by a refresh of D and an objective evaluation. Throws NumericError if a
/// non-finite value appears.
FactorState update_sweep(FactorState state, const PmlDataset& ds, const HyperParams& hp);

/// Sweeps until the relative objective change drops below rel_tol or
/// max_iter sweeps have run.
FactorState fit(const PmlDataset& ds, std::size_t k, const HyperParams& hp);

/// Max over all factor entries of min(entry, |∂S/∂entry|), where S is the
/// relaxed objective with D frozen at `state.d_weights`. Zero exactly at a
/// KKT point of S.
double kkt_residual(const FactorState& state, const PmlDataset& ds, const HyperParams& hp);

}  // namespace pmlfs
