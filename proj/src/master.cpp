#include "mirrorvis/master.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

namespace mirrorvis::master {

namespace {

constexpr Real positivity_floor = -1e-6;

// rhs(rho) = k_left rho + rho k_right + eta_hat x rho x, with
// k_left = -i H - (eta_hat/2) x^2 and k_right its adjoint (full state) or
// the branch-B counterpart (off-diagonal block).
struct Generator {
  ComplexMatrix k_left, k_right, x;
  Real eta_hat = 0;

  void rhs(const ComplexMatrix& rho, ComplexMatrix& out, ComplexMatrix& tmp) const {
    out.noalias() = k_left * rho;
    out.noalias() += rho * k_right;
    if (eta_hat != 0) {
      tmp.noalias() = rho * x;
      out.noalias() += eta_hat * (x * tmp);
    }
  }
};

Generator make_od_generator(const core::SimParams& p) {
  const Complex i_unit(0, 1);
  const ComplexMatrix x =
      core::make_operator(core::OperatorKind::Position, p.n_trunc).entries;
  const ComplexMatrix ha =
      core::make_operator(core::OperatorKind::HamiltonianA, p.n_trunc, p.kappa).entries;
  const ComplexMatrix hb =
      core::make_operator(core::OperatorKind::HamiltonianB, p.n_trunc).entries;
  const ComplexMatrix x2 = (x * x).eval();
  Generator g;
  g.k_left = -i_unit * ha - 0.5 * p.eta_hat * x2;
  g.k_right = i_unit * hb - 0.5 * p.eta_hat * x2;
  g.x = x;
  g.eta_hat = p.eta_hat;
  return g;
}

Generator make_full_generator(const core::SimParams& p) {
  const int n = p.n_trunc;
  const Complex i_unit(0, 1);
  const ComplexMatrix x =
      core::make_operator(core::OperatorKind::Position, n).entries;
  const ComplexMatrix ha =
      core::make_operator(core::OperatorKind::HamiltonianA, n, p.kappa).entries;
  const ComplexMatrix hb =
      core::make_operator(core::OperatorKind::HamiltonianB, n).entries;

  ComplexMatrix h = ComplexMatrix::Zero(2 * n, 2 * n);
  h.topLeftCorner(n, n) = ha;
  h.bottomRightCorner(n, n) = hb;
  ComplexMatrix xf = ComplexMatrix::Zero(2 * n, 2 * n);
  xf.topLeftCorner(n, n) = x;
  xf.bottomRightCorner(n, n) = x;

  Generator g;
  g.k_left = -i_unit * h - 0.5 * p.eta_hat * (xf * xf).eval();
  g.k_right = g.k_left.adjoint();
  g.x = std::move(xf);
  g.eta_hat = p.eta_hat;
  return g;
}

struct Rk4 {
  Generator gen;
  ComplexMatrix k1, k2, k3, k4, tmp, work;

  Rk4(Generator g, Eigen::Index dim) : gen(std::move(g)) {
    for (ComplexMatrix* m : {&k1, &k2, &k3, &k4, &tmp, &work})
      m->setZero(dim, dim);
  }

  void step(ComplexMatrix& rho, Real h) {
    gen.rhs(rho, k1, tmp);
    work = rho + (0.5 * h) * k1;
    gen.rhs(work, k2, tmp);
    work = rho + (0.5 * h) * k2;
    gen.rhs(work, k3, tmp);
    work = rho + h * k3;
    gen.rhs(work, k4, tmp);
    rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
};

struct Monitor {
  bool spectrum = false;  // full state only; the od block has no spectrum contract
  int interval = 64;
  long counter = 0;

  void tick(const ComplexMatrix& rho) {
    if (++counter % interval != 0) return;
    if (!rho.allFinite()) throw NumericalFailure("integration produced non-finite entries");
    if (!spectrum) return;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(
        ComplexMatrix(0.5 * (rho + rho.adjoint())), Eigen::EigenvaluesOnly);
    const Real lo = es.eigenvalues().minCoeff();
    if (lo < positivity_floor) {
      std::ostringstream msg;
      msg << "density matrix lost positivity: min eigenvalue " << lo;
      throw NumericalFailure(msg.str());
    }
  }
};

void advance_n(Rk4& rk, ComplexMatrix& rho, Real h, long n_sub, Monitor& mon) {
  for (long s = 0; s < n_sub; ++s) {
    rk.step(rho, h);
    mon.tick(rho);
  }
}

long substeps_for(Real delta, Real step_ceiling) {
  return std::max(1L, std::lround(std::ceil(delta / step_ceiling - 1e-12)));
}

void advance_interval(Rk4& rk, ComplexMatrix& rho, Real t0, Real t1,
                      const IntegratorConfig& cfg, Monitor& mon) {
  const Real delta = t1 - t0;
  long n_sub = substeps_for(delta, cfg.step);
  if (cfg.scheme == Scheme::FixedRk4) {
    advance_n(rk, rho, delta / n_sub, n_sub, mon);
    return;
  }
  // Step doubling: recompute the interval at twice the resolution until the
  // endpoint stops moving by more than cfg.tol.
  const ComplexMatrix start = rho;
  ComplexMatrix coarse = start;
  advance_n(rk, coarse, delta / n_sub, n_sub, mon);
  for (;;) {
    n_sub *= 2;
    if (n_sub > (1L << 24)) throw NumericalFailure("step doubling failed to settle");
    ComplexMatrix fine = start;
    advance_n(rk, fine, delta / n_sub, n_sub, mon);
    const Real err = (fine - coarse).cwiseAbs().maxCoeff();
    if (err <= cfg.tol) {
      rho = std::move(fine);
      return;
    }
    coarse = std::move(fine);
  }
}

exact::VisibilityCurve integrate_common(const core::SimParams& p,
                                        const IntegratorConfig& cfg, bool full,
                                        ComplexMatrix* final_state) {
  core::validate(p);
  validate(cfg);
  const int n = p.n_trunc;
  const Eigen::Index dim = full ? 2 * n : n;
  Rk4 rk(full ? make_full_generator(p) : make_od_generator(p), dim);

  ComplexMatrix rho;
  if (full) {
    rho = initial_full_state(n);
  } else {
    rho = ComplexMatrix::Zero(n, n);
    rho(0, 0) = 1.0;  // 2 <A| rho_0 |B> = |0><0|
  }

  Monitor mon{full, cfg.positivity_check_interval, 0};
  exact::VisibilityCurve curve;
  curve.method = full ? exact::Method::MasterFull : exact::Method::MasterOd;
  curve.samples.reserve(static_cast<std::size_t>(p.t_grid.size()));
  for (Eigen::Index i = 0; i < p.t_grid.size(); ++i) {
    if (i > 0) advance_interval(rk, rho, p.t_grid[i - 1], p.t_grid[i], cfg, mon);
    if (!rho.allFinite()) throw NumericalFailure("integration produced non-finite entries");
    const Complex f = full ? extract_f(rho) : Complex(rho.trace());
    curve.samples.push_back({p.t_grid[i], f, std::abs(f)});
  }
  if (final_state) *final_state = std::move(rho);
  return curve;
}

}  // namespace

std::string_view to_string(Scheme s) {
  switch (s) {
    case Scheme::FixedRk4: return "fixed-rk4";
    case Scheme::Rk4StepDoubling: return "rk4-step-doubling";
  }
  return "unknown";
}

std::optional<Scheme> scheme_from_string(std::string_view name) {
  for (Scheme s : {Scheme::FixedRk4, Scheme::Rk4StepDoubling})
    if (name == to_string(s)) return s;
  return std::nullopt;
}

void validate(const IntegratorConfig& cfg) {
  if (!(cfg.step > 0) || !std::isfinite(cfg.step))
    throw InvalidParams("integrator step must be positive");
  if (!(cfg.tol > 0) || !std::isfinite(cfg.tol))
    throw InvalidParams("integrator tol must be positive");
  if (cfg.positivity_check_interval < 1)
    throw InvalidParams("positivity_check_interval must be at least 1");
}

ComplexMatrix initial_full_state(int n_trunc) {
  if (n_trunc < 2) throw InvalidParams("n_trunc must be at least 2");
  const int n = n_trunc;
  ComplexMatrix rho = ComplexMatrix::Zero(2 * n, 2 * n);
  rho(0, 0) = rho(0, n) = rho(n, 0) = rho(n, n) = 0.5;
  return rho;
}

Complex extract_f(const ComplexMatrix& rho_full) {
  const Eigen::Index dim = rho_full.rows();
  if (dim != rho_full.cols() || dim < 4 || dim % 2 != 0)
    throw InvalidParams("extract_f expects a 2N x 2N matrix");
  const Eigen::Index n = dim / 2;
  return 2.0 * rho_full.block(0, n, n, n).trace();
}

ComplexMatrix lindblad_rhs_full(const ComplexMatrix& rho, const core::SimParams& p) {
  core::validate(p);
  if (rho.rows() != 2 * p.n_trunc || rho.cols() != 2 * p.n_trunc)
    throw InvalidParams("rho dimensions disagree with n_trunc");
  Generator g = make_full_generator(p);
  ComplexMatrix out(rho.rows(), rho.cols()), tmp(rho.rows(), rho.cols());
  g.rhs(rho, out, tmp);
  return out;
}

ComplexMatrix lindblad_rhs_od(const ComplexMatrix& rho_od, const core::SimParams& p) {
  core::validate(p);
  if (rho_od.rows() != p.n_trunc || rho_od.cols() != p.n_trunc)
    throw InvalidParams("rho_od dimensions disagree with n_trunc");
  Generator g = make_od_generator(p);
  ComplexMatrix out(rho_od.rows(), rho_od.cols()), tmp(rho_od.rows(), rho_od.cols());
  g.rhs(rho_od, out, tmp);
  return out;
}

exact::VisibilityCurve integrate_full(const core::SimParams& p,
                                      const IntegratorConfig& cfg,
                                      ComplexMatrix* final_state) {
  return integrate_common(p, cfg, true, final_state);
}

exact::VisibilityCurve integrate_od(const core::SimParams& p,
                                    const IntegratorConfig& cfg,
                                    ComplexMatrix* final_state) {
  return integrate_common(p, cfg, false, final_state);
}

TruncationReport truncation_sweep(const core::SimParams& p,
                                  const IntegratorConfig& cfg,
                                  const std::vector<int>& n_list, Real tol) {
  if (n_list.size() < 2)
    throw InvalidParams("truncation sweep needs at least two truncations");
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    if (n_list[i] < 2) throw InvalidParams("truncations must be at least 2");
    if (i > 0 && n_list[i] <= n_list[i - 1])
      throw InvalidParams("truncations must be strictly ascending");
  }
  if (!(tol > 0)) throw InvalidParams("sweep tol must be positive");

  std::vector<std::vector<Complex>> f_by_n;
  f_by_n.reserve(n_list.size());
  for (int n : n_list) {
    core::SimParams q = p;
    q.n_trunc = n;
    const auto curve = integrate_od(q, cfg);
    std::vector<Complex> f;
    f.reserve(curve.samples.size());
    for (const auto& s : curve.samples) f.push_back(s.f);
    f_by_n.push_back(std::move(f));
  }

  TruncationReport report;
  for (std::size_t i = 0; i + 1 < n_list.size(); ++i) {
    Real max_diff = 0;
    for (std::size_t k = 0; k < f_by_n[i].size(); ++k)
      max_diff = std::max(max_diff, std::abs(f_by_n[i + 1][k] - f_by_n[i][k]));
    report.pairs.push_back({n_list[i], n_list[i + 1], max_diff});
    if (report.converged_n < 0 && max_diff < tol) report.converged_n = n_list[i];
  }
  return report;
}

}  // namespace mirrorvis::master
