#include "pmlfs/factorization.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pmlfs/errors.hpp"
#include "pmlfs/rng.hpp"

namespace pmlfs {

void HyperParams::validate() const {
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!positive(alpha)) throw ConfigError("alpha must be strictly positive");
  if (!positive(beta)) throw ConfigError("beta must be strictly positive");
  if (!positive(gamma)) throw ConfigError("gamma must be strictly positive");
  if (!positive(eps_d)) throw ConfigError("eps_d must be strictly positive");
  if (!positive(eps_div)) throw ConfigError("eps_div must be strictly positive");
  if (!(rel_tol < 1.0)) throw ConfigError("rel_tol must be below 1");
}

namespace {

// Entry-wise a ⊙ num ⊘ (den + eps), in place on `a`.
void multiplicative_step(Matrix& a, const Matrix& num, const Matrix& den, double eps) {
  auto& v = a.data();
  const auto& nv = num.data();
  const auto& dv = den.data();
  for (std::size_t i = 0; i < v.size(); ++i) v[i] *= nv[i] / (dv[i] + eps);
}

void add_scaled(Matrix& a, double s, const Matrix& b) {
  auto& v = a.data();
  for (std::size_t i = 0; i < v.size(); ++i) v[i] += s * b.data()[i];
}

// diag(w)·a
Matrix scale_rows(const Matrix& a, const std::vector<double>& w) {
  Matrix out = a;
  for (std::size_t i = 0; i < out.rows(); ++i)
    for (double& v : out.row(i)) v *= w[i];
  return out;
}

const std::vector<double>& penalty_weights(const FactorState& state, const HyperParams& hp,
                                           std::vector<double>& ones) {
  if (!hp.plain_frobenius_penalty) return state.d_weights;
  ones.assign(state.q_mat.rows(), 1.0);
  return ones;
}

void check_finite(const Matrix& m, std::size_t iter, const char* name) {
  if (!all_finite(m)) throw NumericError(iter, name);
}

IterationLog make_log(const FactorState& s, const ObjectiveTerms& terms) {
  IterationLog log{s.iter, terms, 0.0, 0.0, 0};
  const Matrix* mats[] = {&s.l_mat, &s.q_mat, &s.p_mat, &s.r_mat, &s.t_mat};
  log.min_entry = min_entry(s.l_mat);
  log.max_entry = max_entry(s.l_mat);
  for (const Matrix* m : mats) {
    log.min_entry = std::min(log.min_entry, min_entry(*m));
    log.max_entry = std::max(log.max_entry, max_entry(*m));
  }
  for (std::size_t c = 0; c < s.q_mat.cols(); ++c) {
    bool collapsed = true;
    for (std::size_t i = 0; i < s.q_mat.rows() && collapsed; ++i) collapsed = s.q_mat(i, c) < 1e-12;
    if (collapsed) ++log.collapsed_q_columns;
  }
  return log;
}

void record(FactorState& state, const PmlDataset& ds, const HyperParams& hp) {
  const auto terms = objective_terms(state, ds, hp);
  state.objective_trace.push_back(terms.total());
  state.log.push_back(make_log(state, terms));
}

}  // namespace

FactorState init_state(const PmlDataset& ds, std::size_t k, const HyperParams& hp) {
  hp.validate();
  const std::size_t n = ds.n_instances(), d = ds.n_features(), l = ds.n_labels();
  if (k < 2) throw ConfigError("latent dimension must be at least 2");
  if (k > std::min({n, d, l})) {
    throw ConfigError("latent dimension " + std::to_string(k) + " exceeds min(n, d, l) = " +
                      std::to_string(std::min({n, d, l})));
  }
  require_nonnegative(ds.x, "X");

  Rng rng(hp.seed);
  // 1 - u with u in [0, 1) lands in (0, 1]; rescale to (0.01, 1].
  auto fill = [&rng](Matrix& m) {
    for (double& v : m.data()) v = 0.01 + 0.99 * (1.0 - rng.uniform());
  };
  FactorState s;
  s.l_mat = Matrix(n, k);
  s.q_mat = Matrix(d, k);
  s.p_mat = Matrix(n, k);
  s.r_mat = Matrix(k, l);
  fill(s.l_mat);
  fill(s.q_mat);
  fill(s.p_mat);
  fill(s.r_mat);
  s.t_mat = ds.y;
  s.d_weights = reweight_d(s, hp);
  record(s, ds, hp);
  return s;
}

ObjectiveTerms objective_terms(const FactorState& s, const PmlDataset& ds, const HyperParams& hp) {
  const Matrix qr = matmul(s.q_mat, s.r_mat);
  ObjectiveTerms t;
  t.feature = frobenius_sq(ds.x - matmul_nt(s.l_mat, s.q_mat));
  t.label = hp.alpha * frobenius_sq(s.t_mat - matmul(s.p_mat, s.r_mat));
  t.alignment = hp.beta * frobenius_sq(s.l_mat - s.p_mat);
  t.sparsity = hp.gamma * l21_norm(qr);
  return t;
}

double objective(const FactorState& state, const PmlDataset& ds, const HyperParams& hp) {
  return objective_terms(state, ds, hp).total();
}

std::vector<double> reweight_d(const FactorState& state, const HyperParams& hp) {
  auto norms = row_l2_norms(matmul(state.q_mat, state.r_mat));
  for (double& v : norms) v = 1.0 / (2.0 * v + hp.eps_d);
  return norms;
}

FactorState update_sweep(FactorState s, const PmlDataset& ds, const HyperParams& hp) {
  const double a = hp.alpha, b = hp.beta, g = hp.gamma, eps = hp.eps_div;
  const std::size_t it = s.iter + 1;
  std::vector<double> ones;
  const std::vector<double>& dw = penalty_weights(s, hp, ones);

  // L ← L ⊙ (XQ + βP) ⊘ (LQᵀQ + βL)
  {
    Matrix num = matmul(ds.x, s.q_mat);
    add_scaled(num, b, s.p_mat);
    Matrix den = matmul(s.l_mat, matmul_tn(s.q_mat, s.q_mat));
    add_scaled(den, b, s.l_mat);
    multiplicative_step(s.l_mat, num, den, eps);
    check_finite(s.l_mat, it, "L");
  }
  // Q ← Q ⊙ (XᵀL) ⊘ (QLᵀL + γ·D·QRRᵀ)
  {
    const Matrix num = matmul_tn(ds.x, s.l_mat);
    Matrix den = matmul(s.q_mat, matmul_tn(s.l_mat, s.l_mat));
    add_scaled(den, g, scale_rows(matmul(s.q_mat, matmul_nt(s.r_mat, s.r_mat)), dw));
    multiplicative_step(s.q_mat, num, den, eps);
    check_finite(s.q_mat, it, "Q");
  }
  // P ← P ⊙ (αTRᵀ + βL) ⊘ (αPRRᵀ + βP), with βL rather than 2βL
  {
    Matrix num = a * matmul_nt(s.t_mat, s.r_mat);
    add_scaled(num, b, s.l_mat);
    Matrix den = a * matmul(s.p_mat, matmul_nt(s.r_mat, s.r_mat));
    add_scaled(den, b, s.p_mat);
    multiplicative_step(s.p_mat, num, den, eps);
    check_finite(s.p_mat, it, "P");
  }
  // R ← R ⊙ (αPᵀT) ⊘ (αPᵀPR + γ·QᵀDQ·R)
  {
    const Matrix num = a * matmul_tn(s.p_mat, s.t_mat);
    Matrix den = a * matmul(matmul_tn(s.p_mat, s.p_mat), s.r_mat);
    add_scaled(den, g, matmul(matmul_tn(s.q_mat, scale_rows(s.q_mat, dw)), s.r_mat));
    multiplicative_step(s.r_mat, num, den, eps);
    check_finite(s.r_mat, it, "R");
  }
  // T ← T ⊙ (PR) ⊘ T
  {
    const Matrix pr = matmul(s.p_mat, s.r_mat);
    multiplicative_step(s.t_mat, pr, s.t_mat, eps);
    check_finite(s.t_mat, it, "T");
  }

  s.d_weights = reweight_d(s, hp);
  s.iter = it;
  record(s, ds, hp);
  if (!std::isfinite(s.objective_trace.back())) throw NumericError(it, "objective");
  return s;
}

FactorState fit(const PmlDataset& ds, std::size_t k, const HyperParams& hp) {
  FactorState s = init_state(ds, k, hp);
  while (s.iter < hp.max_iter) {
    const double prev = s.objective_trace.back();
    s = update_sweep(std::move(s), ds, hp);
    const double cur = s.objective_trace.back();
    if (std::abs(cur - prev) / std::max(prev, hp.eps_div) < hp.rel_tol) break;
  }
  return s;
}

double kkt_residual(const FactorState& s, const PmlDataset& ds, const HyperParams& hp) {
  const double a = hp.alpha, b = hp.beta, g = hp.gamma;
  std::vector<double> ones;
  const std::vector<double>& dw = penalty_weights(s, hp, ones);

  // Half-gradients of the relaxed objective; the factor 2 is applied below.
  Matrix grad_l = matmul(s.l_mat, matmul_tn(s.q_mat, s.q_mat)) - matmul(ds.x, s.q_mat);
  add_scaled(grad_l, b, s.l_mat - s.p_mat);

  Matrix grad_q = matmul(s.q_mat, matmul_tn(s.l_mat, s.l_mat)) - matmul_tn(ds.x, s.l_mat);
  add_scaled(grad_q, g, scale_rows(matmul(s.q_mat, matmul_nt(s.r_mat, s.r_mat)), dw));

  Matrix grad_p = a * (matmul(s.p_mat, matmul_nt(s.r_mat, s.r_mat)) - matmul_nt(s.t_mat, s.r_mat));
  add_scaled(grad_p, b, s.p_mat - s.l_mat);

  Matrix grad_r = a * (matmul(matmul_tn(s.p_mat, s.p_mat), s.r_mat) - matmul_tn(s.p_mat, s.t_mat));
  add_scaled(grad_r, g, matmul(matmul_tn(s.q_mat, scale_rows(s.q_mat, dw)), s.r_mat));

  const Matrix grad_t = a * (s.t_mat - matmul(s.p_mat, s.r_mat));

  double worst = 0.0;
  auto scan = [&worst](const Matrix& factor, const Matrix& half_grad) {
    for (std::size_t i = 0; i < factor.size(); ++i) {
      worst = std::max(worst, std::min(factor.data()[i], std::abs(2.0 * half_grad.data()[i])));
    }
  };
  scan(s.l_mat, grad_l);
  scan(s.q_mat, grad_q);
  scan(s.p_mat, grad_p);
  scan(s.r_mat, grad_r);
  scan(s.t_mat, grad_t);
  return worst;
}

}  // namespace pmlfs
