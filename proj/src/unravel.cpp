#include "mirrorvis/unravel.hpp"

#include <cmath>
#include <vector>

#include "mirrorvis/rng.hpp"

namespace mirrorvis::unravel {

namespace {

constexpr int panel_width = 64;  // trajectories stepped together as columns

// Diagonal-band view of a dense operator. Our generators are pentadiagonal
// at worst, so applying bands instead of the dense matrix cuts the work per
// step by an order of magnitude; extraction from the dense form keeps the
// band set exact for any operator.
struct Band {
  int offset;           // column = row + offset
  ComplexVector coeff;  // indexed by row, only rows with a valid column used
};

std::vector<Band> bands_of(const ComplexMatrix& a) {
  const int dim = static_cast<int>(a.rows());
  std::vector<Band> bands;
  for (int d = -(dim - 1); d <= dim - 1; ++d) {
    const int r0 = std::max(0, -d);
    const int len = dim - std::abs(d);
    ComplexVector c = ComplexVector::Zero(dim);
    bool any = false;
    for (int i = 0; i < len; ++i) {
      const Complex v = a(r0 + i, r0 + i + d);
      c[r0 + i] = v;
      if (v != Complex(0, 0)) any = true;
    }
    if (any) bands.push_back({d, std::move(c)});
  }
  return bands;
}

// Linear unraveling: d phi = [-i H - (eta_hat/2) x^2] phi dt + sqrt(eta_hat) x phi dW.
struct LinearKernel {
  std::vector<Band> drift_a, drift_b, x;
  Real sqrt_eta;
  ComplexMatrix ka, kb, xa, xb;  // scratch panels

  LinearKernel(const core::SimParams& p, int width) {
    const Complex i_unit(0, 1);
    const ComplexMatrix xm =
        core::make_operator(core::OperatorKind::Position, p.n_trunc).entries;
    const ComplexMatrix x2 = (xm * xm).eval();
    const ComplexMatrix ha =
        core::make_operator(core::OperatorKind::HamiltonianA, p.n_trunc, p.kappa).entries;
    const ComplexMatrix hb =
        core::make_operator(core::OperatorKind::HamiltonianB, p.n_trunc).entries;
    drift_a = bands_of(-i_unit * ha - 0.5 * p.eta_hat * x2);
    drift_b = bands_of(-i_unit * hb - 0.5 * p.eta_hat * x2);
    x = bands_of(xm);
    sqrt_eta = std::sqrt(p.eta_hat);
    ka.setZero(p.n_trunc, width);
    kb.setZero(p.n_trunc, width);
    xa.setZero(p.n_trunc, width);
    xb.setZero(p.n_trunc, width);
  }

  // Advances every column by one step; dw[j] drives both branches of column j.
  void step_panel(ComplexMatrix& phi_a, ComplexMatrix& phi_b, Real h,
                  const RealVector& dw) {
    const int k = static_cast<int>(phi_a.cols());
    auto ka_block = ka.leftCols(k);
    auto kb_block = kb.leftCols(k);
    auto xa_block = xa.leftCols(k);
    auto xb_block = xb.leftCols(k);
    apply_panel(drift_a, phi_a, ka_block);
    apply_panel(drift_b, phi_b, kb_block);
    apply_panel(x, phi_a, xa_block);
    apply_panel(x, phi_b, xb_block);
    for (int j = 0; j < k; ++j) {
      const Real g = sqrt_eta * dw[j];
      phi_a.col(j) += h * ka_block.col(j) + g * xa_block.col(j);
      phi_b.col(j) += h * kb_block.col(j) + g * xb_block.col(j);
    }
  }

  template <class In, class Out>
  static void apply_panel(const std::vector<Band>& bands, const In& in, Out out) {
    out.setZero();
    const int dim = static_cast<int>(in.rows());
    for (const Band& b : bands) {
      const int r0 = std::max(0, -b.offset);
      const int len = dim - std::abs(b.offset);
      out.middleRows(r0, len).noalias() +=
          b.coeff.segment(r0, len).asDiagonal() * in.middleRows(r0 + b.offset, len);
    }
  }
};

// Norm-preserving unraveling on the product space:
// d psi = -i H psi dt + sqrt(eta_hat) (x - <x>) psi dW - (eta_hat/2) (x - <x>)^2 psi dt,
// renormalized after every step.
struct QmuplKernel {
  std::vector<Band> h_bands, x_bands;
  Real eta_hat, sqrt_eta;
  ComplexMatrix hpsi, v, w, xw;  // scratch panels

  QmuplKernel(const core::SimParams& p, int width) {
    const int n = p.n_trunc;
    const ComplexMatrix xm =
        core::make_operator(core::OperatorKind::Position, n).entries;
    const ComplexMatrix ha =
        core::make_operator(core::OperatorKind::HamiltonianA, n, p.kappa).entries;
    const ComplexMatrix hb =
        core::make_operator(core::OperatorKind::HamiltonianB, n).entries;
    ComplexMatrix h = ComplexMatrix::Zero(2 * n, 2 * n);
    h.topLeftCorner(n, n) = ha;
    h.bottomRightCorner(n, n) = hb;
    ComplexMatrix xf = ComplexMatrix::Zero(2 * n, 2 * n);
    xf.topLeftCorner(n, n) = xm;
    xf.bottomRightCorner(n, n) = xm;
    h_bands = bands_of(h);
    x_bands = bands_of(xf);
    eta_hat = p.eta_hat;
    sqrt_eta = std::sqrt(p.eta_hat);
    hpsi.setZero(2 * n, width);
    v.setZero(2 * n, width);
    w.setZero(2 * n, width);
    xw.setZero(2 * n, width);
  }

  void step_panel(ComplexMatrix& psi, Real h, const RealVector& dw) {
    const int k = static_cast<int>(psi.cols());
    const Complex i_unit(0, 1);
    auto hp = hpsi.leftCols(k);
    auto vp = v.leftCols(k);
    auto wp = w.leftCols(k);
    auto xwp = xw.leftCols(k);
    LinearKernel::apply_panel(h_bands, psi, hp);
    LinearKernel::apply_panel(x_bands, psi, vp);
    for (int j = 0; j < k; ++j) {
      const Real mean_x = psi.col(j).dot(vp.col(j)).real();
      wp.col(j) = vp.col(j) - mean_x * psi.col(j);
    }
    LinearKernel::apply_panel(x_bands, wp, xwp);
    for (int j = 0; j < k; ++j) {
      const Real mean_x = psi.col(j).dot(vp.col(j)).real();
      psi.col(j) += h * (-i_unit * hp.col(j) -
                         0.5 * eta_hat * (xwp.col(j) - mean_x * wp.col(j))) +
                    (sqrt_eta * dw[j]) * wp.col(j);
      const Real norm = psi.col(j).norm();
      if (!(norm > 0) || !std::isfinite(norm))
        throw NumericalFailure("trajectory norm became non-finite");
      psi.col(j) /= norm;
    }
  }
};

long substeps_for(Real delta, Real step_ceiling) {
  return std::max(1L, std::lround(std::ceil(delta / step_ceiling - 1e-12)));
}

struct Accumulator {
  // One slot per (record, trajectory); filled in trajectory order.
  std::vector<std::vector<Complex>> f_hat;
  std::vector<std::vector<Real>> norm2;

  Accumulator(std::size_t n_records, std::size_t n_traj)
      : f_hat(n_records, std::vector<Complex>(n_traj)),
        norm2(n_records, std::vector<Real>(n_traj)) {}
};

EnsembleEstimate reduce(const Accumulator& acc, const RealVector& times,
                        long n_traj, std::uint64_t seed, exact::Method method) {
  EnsembleEstimate est;
  est.n_traj = n_traj;
  est.seed = seed;
  est.method = method;
  const Real n = static_cast<Real>(n_traj);
  for (Eigen::Index r = 0; r < times.size(); ++r) {
    const auto& f = acc.f_hat[static_cast<std::size_t>(r)];
    const auto& n2 = acc.norm2[static_cast<std::size_t>(r)];
    Complex mean_f{0, 0};
    Real mean_n2 = 0;
    for (long j = 0; j < n_traj; ++j) {
      mean_f += f[static_cast<std::size_t>(j)];
      mean_n2 += n2[static_cast<std::size_t>(j)];
    }
    mean_f /= n;
    mean_n2 /= n;
    Real var_re = 0, var_im = 0, var_n2 = 0;
    if (n_traj > 1) {
      for (long j = 0; j < n_traj; ++j) {
        const Complex d = f[static_cast<std::size_t>(j)] - mean_f;
        var_re += d.real() * d.real();
        var_im += d.imag() * d.imag();
        const Real dn = n2[static_cast<std::size_t>(j)] - mean_n2;
        var_n2 += dn * dn;
      }
      const Real scale = 1.0 / (n * (n - 1.0));
      var_re *= scale;
      var_im *= scale;
      var_n2 *= scale;
    }
    EnsembleRecord rec;
    rec.t = times[r];
    rec.mean_f = mean_f;
    rec.stderr_f = std::sqrt(std::max(var_re, var_im));
    rec.mean_norm2 = mean_n2;
    rec.stderr_norm2 = std::sqrt(var_n2);
    est.records.push_back(rec);
  }
  return est;
}

void check_finite(const Complex& f) {
  if (!std::isfinite(f.real()) || !std::isfinite(f.imag()))
    throw NumericalFailure("trajectory produced a non-finite estimate");
}

}  // namespace

void validate(const TrajectoryConfig& cfg) {
  if (cfg.n_traj < 1) throw InvalidParams("n_traj must be at least 1");
  if (!(cfg.step > 0) || !std::isfinite(cfg.step))
    throw InvalidParams("trajectory step must be positive");
  if (cfg.record_times.size() == 0)
    throw InvalidParams("record_times must not be empty");
  if (cfg.record_times[0] < 0)
    throw InvalidParams("record_times must be non-negative");
  for (Eigen::Index i = 0; i + 1 < cfg.record_times.size(); ++i)
    if (!(cfg.record_times[i] < cfg.record_times[i + 1]))
      throw InvalidParams("record_times must be strictly ascending");
  if (!cfg.record_times.allFinite())
    throw InvalidParams("record_times must be finite");
}

StatePair step_linear(const StatePair& phi, Real dw, const core::SimParams& p,
                      Real step) {
  core::validate(p);
  if (!(step > 0) || !std::isfinite(step)) throw InvalidParams("step must be positive");
  if (!std::isfinite(dw)) throw InvalidParams("dw must be finite");
  if (phi.first.size() != p.n_trunc || phi.second.size() != p.n_trunc)
    throw InvalidParams("state dimensions disagree with n_trunc");

  LinearKernel kernel(p, 1);
  ComplexMatrix a = phi.first, b = phi.second;
  RealVector dwv(1);
  dwv[0] = dw;
  kernel.step_panel(a, b, step, dwv);
  return {MirrorState(a.col(0)), MirrorState(b.col(0))};
}

ComplexVector step_qmupl(const ComplexVector& psi, Real dw,
                         const core::SimParams& p, Real step) {
  core::validate(p);
  if (!(step > 0) || !std::isfinite(step)) throw InvalidParams("step must be positive");
  if (!std::isfinite(dw)) throw InvalidParams("dw must be finite");
  if (psi.size() != 2 * p.n_trunc)
    throw InvalidParams("state dimension disagrees with 2 n_trunc");
  if (std::abs(psi.norm() - 1.0) > 1e-6)
    throw InvalidParams("step_qmupl expects a normalized state");

  QmuplKernel kernel(p, 1);
  ComplexMatrix m = psi;
  RealVector dwv(1);
  dwv[0] = dw;
  kernel.step_panel(m, step, dwv);
  return ComplexVector(m.col(0));
}

EnsembleEstimate estimate_f_linear(const core::SimParams& p,
                                   const TrajectoryConfig& cfg) {
  core::validate(p);
  validate(cfg);
  const int n = p.n_trunc;
  const std::size_t n_records = static_cast<std::size_t>(cfg.record_times.size());
  Accumulator acc(n_records, static_cast<std::size_t>(cfg.n_traj));
  LinearKernel kernel(p, panel_width);

  for (long base = 0; base < cfg.n_traj; base += panel_width) {
    const int k = static_cast<int>(std::min<long>(panel_width, cfg.n_traj - base));
    ComplexMatrix phi_a = ComplexMatrix::Zero(n, k);
    ComplexMatrix phi_b = ComplexMatrix::Zero(n, k);
    phi_a.row(0).setOnes();
    phi_b.row(0).setOnes();
    std::vector<rng::NormalSampler> normals;
    normals.reserve(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j)
      normals.emplace_back(rng::substream(cfg.seed, static_cast<std::uint64_t>(base + j)));

    RealVector dw(k);
    Real t_now = 0;
    for (std::size_t r = 0; r < n_records; ++r) {
      const Real target = cfg.record_times[static_cast<Eigen::Index>(r)];
      if (target > t_now + 1e-12) {
        const long n_sub = substeps_for(target - t_now, cfg.step);
        const Real h = (target - t_now) / static_cast<Real>(n_sub);
        const Real sqrt_h = std::sqrt(h);
        for (long s = 0; s < n_sub; ++s) {
          for (int j = 0; j < k; ++j) dw[j] = sqrt_h * normals[static_cast<std::size_t>(j)]();
          kernel.step_panel(phi_a, phi_b, h, dw);
        }
        t_now = target;
      }
      for (int j = 0; j < k; ++j) {
        const Complex f = phi_b.col(j).dot(phi_a.col(j));
        check_finite(f);
        acc.f_hat[r][static_cast<std::size_t>(base + j)] = f;
        acc.norm2[r][static_cast<std::size_t>(base + j)] = phi_a.col(j).squaredNorm();
      }
    }
  }
  return reduce(acc, cfg.record_times, cfg.n_traj, cfg.seed,
                exact::Method::UnravelLinear);
}

EnsembleEstimate estimate_f_qmupl(const core::SimParams& p,
                                  const TrajectoryConfig& cfg) {
  core::validate(p);
  validate(cfg);
  const int n = p.n_trunc;
  const std::size_t n_records = static_cast<std::size_t>(cfg.record_times.size());
  Accumulator acc(n_records, static_cast<std::size_t>(cfg.n_traj));
  QmuplKernel kernel(p, panel_width);
  const Real inv_sqrt2 = 1.0 / std::sqrt(2.0);

  for (long base = 0; base < cfg.n_traj; base += panel_width) {
    const int k = static_cast<int>(std::min<long>(panel_width, cfg.n_traj - base));
    ComplexMatrix psi = ComplexMatrix::Zero(2 * n, k);
    psi.row(0).setConstant(inv_sqrt2);
    psi.row(n).setConstant(inv_sqrt2);
    std::vector<rng::NormalSampler> normals;
    normals.reserve(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j)
      normals.emplace_back(rng::substream(cfg.seed, static_cast<std::uint64_t>(base + j)));

    RealVector dw(k);
    Real t_now = 0;
    for (std::size_t r = 0; r < n_records; ++r) {
      const Real target = cfg.record_times[static_cast<Eigen::Index>(r)];
      if (target > t_now + 1e-12) {
        const long n_sub = substeps_for(target - t_now, cfg.step);
        const Real h = (target - t_now) / static_cast<Real>(n_sub);
        const Real sqrt_h = std::sqrt(h);
        for (long s = 0; s < n_sub; ++s) {
          for (int j = 0; j < k; ++j) dw[j] = sqrt_h * normals[static_cast<std::size_t>(j)]();
          kernel.step_panel(psi, h, dw);
        }
        t_now = target;
      }
      for (int j = 0; j < k; ++j) {
        const Complex f = 2.0 * psi.col(j).tail(n).dot(psi.col(j).head(n));
        check_finite(f);
        acc.f_hat[r][static_cast<std::size_t>(base + j)] = f;
        acc.norm2[r][static_cast<std::size_t>(base + j)] = psi.col(j).squaredNorm();
      }
    }
  }
  return reduce(acc, cfg.record_times, cfg.n_traj, cfg.seed,
                exact::Method::UnravelQmupl);
}

}  // namespace mirrorvis::unravel
