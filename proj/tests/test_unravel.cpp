#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mirrorvis/rng.hpp"
#include "mirrorvis/unravel.hpp"

using namespace mirrorvis;

namespace {

core::SimParams small_params(int n_trunc) {
  core::SimParams p;
  p.kappa = 0.25;
  p.eta_hat = 0.1;
  p.n_trunc = n_trunc;
  p.t_grid = RealVector::LinSpaced(2, 0.0, two_pi);
  return p;
}

}  // namespace

TEST_CASE("substreams are deterministic and decorrelated") {
  auto a1 = rng::substream(42, 0);
  auto a2 = rng::substream(42, 0);
  CHECK(a1() == a2());
  CHECK(a1() == a2());

  auto b = rng::substream(42, 1);
  auto c = rng::substream(43, 0);
  // Nearby seeds and indices must not collide after mixing.
  CHECK(rng::mix64(42 + 1 * 0x9E3779B97F4A7C15ULL) !=
        rng::mix64(42 + 2 * 0x9E3779B97F4A7C15ULL));
  CHECK(a1() != b());
  CHECK(a1() != c());
}

TEST_CASE("normal sampler moments") {
  rng::NormalSampler normal(rng::substream(7, 3));
  const long n = 200000;
  Real sum = 0, sum2 = 0;
  for (long i = 0; i < n; ++i) {
    const Real x = normal();
    sum += x;
    sum2 += x * x;
  }
  const Real mean = sum / n;
  const Real var = sum2 / n - mean * mean;
  CHECK(std::abs(mean) < 0.01);       // ~4.5 sigma of the sample mean
  CHECK(std::abs(var - 1.0) < 0.02);  // ~4.5 sigma of the sample variance
}

TEST_CASE("linear step against a hand-computed update") {
  // n = 2, kappa = 0.25, eta_hat = 0.1, h = 0.01, dw = 0.05, both branches
  // starting in the ground state. Drift is [-iH - (eta_hat/2) x^2] phi h,
  // noise is sqrt(eta_hat) x phi dw, and x^2 = identity at n = 2.
  auto p = small_params(2);
  MirrorState e0(2);
  e0 << Complex(1, 0), Complex(0, 0);
  const auto [phi_a, phi_b] = unravel::step_linear({e0, e0}, 0.05, p, 0.01);

  const Real noise = std::sqrt(0.1) * 0.05;
  CHECK(std::abs(phi_a[0] - Complex(0.9995, 0)) < 1e-15);
  CHECK(std::abs(phi_a[1] - Complex(noise, 0.0025)) < 1e-15);
  CHECK(std::abs(phi_b[0] - Complex(0.9995, 0)) < 1e-15);
  CHECK(std::abs(phi_b[1] - Complex(noise, 0)) < 1e-15);

  MirrorState wrong(3);
  wrong.setZero();
  CHECK_THROWS_AS(unravel::step_linear({wrong, wrong}, 0.0, p, 0.01), InvalidParams);
}

TEST_CASE("norm-preserving step against a hand-computed update") {
  // kappa = 0: both halves see the same Hamiltonian, <x> = 0 at the input
  // state, and the update reduces to [1 - (eta_hat/2) h] psi + noise x psi
  // followed by renormalization (x^2 = identity at n = 2).
  auto p = small_params(2);
  p.kappa = 0.0;
  ComplexVector psi(4);
  const Real s = 1.0 / std::sqrt(2.0);
  psi << Complex(s, 0), Complex(0, 0), Complex(s, 0), Complex(0, 0);

  const auto out = unravel::step_qmupl(psi, 0.05, p, 0.01);
  const Real a = 1.0 - 0.5 * 0.1 * 0.01;        // ground amplitude factor
  const Real b = std::sqrt(0.1) * 0.05;         // excited amplitude factor
  const Real norm = std::sqrt(a * a + b * b);   // pre-renormalization norm
  CHECK(std::abs(norm * norm - 0.99925025) < 1e-15);
  CHECK(std::abs(out[0] - Complex(s * a / norm, 0)) < 1e-14);
  CHECK(std::abs(out[1] - Complex(s * b / norm, 0)) < 1e-14);
  CHECK(std::abs(out[2] - out[0]) < 1e-15);
  CHECK(std::abs(out[3] - out[1]) < 1e-15);
  CHECK(std::abs(out.norm() - 1.0) < 1e-14);

  // Identical halves: the coherence estimate stays pinned at one.
  const Complex f_hat = 2.0 * out.tail(2).dot(out.head(2));
  CHECK(std::abs(f_hat - Complex(1, 0)) < 1e-14);

  ComplexVector odd(3);
  odd.setZero();
  CHECK_THROWS_AS(unravel::step_qmupl(odd, 0.0, p, 0.01), InvalidParams);
  ComplexVector unnormalized = 2.0 * psi;
  CHECK_THROWS_AS(unravel::step_qmupl(unnormalized, 0.0, p, 0.01), InvalidParams);
}

TEST_CASE("linear ensemble tracks the closed form within noise") {
  auto p = small_params(16);
  unravel::TrajectoryConfig cfg;
  cfg.n_traj = 512;
  cfg.step = two_pi / 2048;
  cfg.seed = 11;
  cfg.record_times = RealVector::LinSpaced(3, 0.0, two_pi / 2.0);

  const auto est = unravel::estimate_f_linear(p, cfg);
  REQUIRE(est.records.size() == 3);
  CHECK(est.method == exact::Method::UnravelLinear);
  CHECK(est.n_traj == 512);
  CHECK(est.records[0].mean_f == Complex(1, 0));
  CHECK(est.records[0].stderr_f == 0.0);

  for (const auto& rec : est.records) {
    const Complex f_ref = exact::f_exact(rec.t, p.kappa, p.eta_hat);
    // 5 sigma plus an Euler drift allowance for the finite step.
    CHECK(std::abs(rec.mean_f - f_ref) < 5.0 * rec.stderr_f + 2e-3);
    // Squared branch norms average to one along the trajectory.
    CHECK(std::abs(rec.mean_norm2 - 1.0) < 5.0 * rec.stderr_norm2 + 2e-3);
  }
}

TEST_CASE("norm-preserving ensemble tracks the closed form within noise") {
  auto p = small_params(16);
  unravel::TrajectoryConfig cfg;
  cfg.n_traj = 512;
  cfg.step = two_pi / 2048;
  cfg.seed = 11;
  cfg.record_times = RealVector::LinSpaced(3, 0.0, two_pi / 2.0);

  const auto est = unravel::estimate_f_qmupl(p, cfg);
  REQUIRE(est.records.size() == 3);
  CHECK(est.method == exact::Method::UnravelQmupl);

  for (const auto& rec : est.records) {
    const Complex f_ref = exact::f_exact(rec.t, p.kappa, p.eta_hat);
    CHECK(std::abs(rec.mean_f - f_ref) < 5.0 * rec.stderr_f + 2e-3);
    // Renormalized every substep, so the recorded norms are exactly one.
    CHECK(std::abs(rec.mean_norm2 - 1.0) < 1e-12);
    CHECK(rec.stderr_norm2 < 1e-12);
  }
}

TEST_CASE("noise-free limit is deterministic and tracks the unitary factor") {
  auto p = small_params(12);
  p.eta_hat = 0.0;
  unravel::TrajectoryConfig cfg;
  cfg.n_traj = 4;
  cfg.step = two_pi / 1024;
  cfg.seed = 2;
  cfg.record_times = RealVector::LinSpaced(2, 0.0, two_pi / 2.0);

  for (const auto est : {unravel::estimate_f_linear(p, cfg),
                         unravel::estimate_f_qmupl(p, cfg)}) {
    const auto& rec = est.records.back();
    CHECK(rec.stderr_f == 0.0);  // no noise term, identical trajectories
    // What is left is the first-order deterministic stepping error.
    CHECK(std::abs(rec.mean_f - exact::f_qm(rec.t, p.kappa)) < 0.05);
    CHECK(std::abs(rec.mean_f - exact::f_qm(rec.t, p.kappa)) > 1e-12);
  }
}

TEST_CASE("standard error scales as the inverse root of the ensemble size") {
  // Checked on the normalized estimator: its overlap is bounded by 1, so the
  // sample standard error concentrates and the ratio window is meaningful at
  // this ensemble size. The raw linear estimator's variance estimate is
  // itself heavy-tailed and needs far larger ensembles to settle.
  auto p = small_params(12);
  unravel::TrajectoryConfig cfg;
  cfg.step = two_pi / 1024;
  cfg.record_times = RealVector(1);
  cfg.record_times << 0.5 * two_pi;

  cfg.n_traj = 1024;
  cfg.seed = 21;
  const auto single = unravel::estimate_f_qmupl(p, cfg);
  cfg.n_traj = 2048;
  cfg.seed = 22;  // independent draw at twice the size
  const auto doubled = unravel::estimate_f_qmupl(p, cfg);

  const Real ratio = doubled.records[0].stderr_f / single.records[0].stderr_f;
  CHECK(ratio > 0.6);
  CHECK(ratio < 0.82);
}

TEST_CASE("pre-renormalization norm drift scales linearly with the step") {
  // One Euler update from a normalized state psi:
  //   |psi'|^2 = |v|^2 + 2 sqrt(eta h) xi Re<v, w> + eta h xi^2 |w|^2
  // with v = psi + h drift(psi), w = (x - <x>) psi and xi standard normal.
  // Re<psi, w> vanishes exactly, so the xi-linear coefficient is O(h^{3/2})
  // and the dominant fluctuation is the xi^2 term: std ~ sqrt(2) eta h
  // <(x-<x>)^2>. Quartering the step must quarter the drift std.
  const int n = 12;
  auto p = small_params(n);

  // March to a generic mid-trajectory state first.
  ComplexVector psi(2 * n);
  psi.setZero();
  psi[0] = psi[n] = Complex(1.0 / std::sqrt(2.0), 0);
  rng::NormalSampler normal(rng::substream(33, 0));
  const Real h_march = two_pi / 1024;
  for (int i = 0; i < 300; ++i)
    psi = unravel::step_qmupl(psi, std::sqrt(h_march) * normal(), p, h_march);

  const auto ha = core::make_operator(core::OperatorKind::HamiltonianA, n, p.kappa).entries;
  const auto hb = core::make_operator(core::OperatorKind::HamiltonianB, n).entries;
  const auto x = core::make_operator(core::OperatorKind::Position, n).entries;
  const auto apply_block = [&](const ComplexMatrix& a, const ComplexMatrix& b,
                               const ComplexVector& v) {
    ComplexVector out(2 * n);
    out.head(n) = a * v.head(n);
    out.tail(n) = b * v.tail(n);
    return out;
  };

  const ComplexVector xpsi = apply_block(x, x, psi);
  const Real m = psi.dot(xpsi).real();
  const ComplexVector w = xpsi - m * psi;
  const ComplexVector xw = apply_block(x, x, w) - m * w;
  const ComplexVector hpsi = apply_block(ha, hb, psi);

  // std over xi of |psi'|^2 - 1 for a quadratic a xi^2 + b xi + c is
  // sqrt(2 a^2 + b^2); no sampling needed.
  const auto drift_std = [&](Real h) {
    const ComplexVector v =
        psi + h * (Complex(0, -1) * hpsi - 0.5 * p.eta_hat * xw);
    const Real a = p.eta_hat * h * w.squaredNorm();
    const Real b = 2.0 * std::sqrt(p.eta_hat * h) * v.dot(w).real();
    return std::sqrt(2.0 * a * a + b * b);
  };

  const Real h = two_pi / 1024;
  const Real ratio = drift_std(h) / drift_std(h / 4.0);
  CHECK(ratio > 3.7);  // first power of the step; 3/2 power would give 8
  CHECK(ratio < 4.3);
}

TEST_CASE("reruns reproduce bit for bit, reseeding does not") {
  auto p = small_params(8);
  unravel::TrajectoryConfig cfg;
  cfg.n_traj = 64;
  cfg.step = two_pi / 512;
  cfg.seed = 5;
  cfg.record_times = RealVector::LinSpaced(2, 0.0, two_pi / 4.0);

  const auto run1 = unravel::estimate_f_linear(p, cfg);
  const auto run2 = unravel::estimate_f_linear(p, cfg);
  REQUIRE(run1.records.size() == run2.records.size());
  for (std::size_t i = 0; i < run1.records.size(); ++i) {
    CHECK(run1.records[i].mean_f == run2.records[i].mean_f);
    CHECK(run1.records[i].stderr_f == run2.records[i].stderr_f);
    CHECK(run1.records[i].mean_norm2 == run2.records[i].mean_norm2);
  }

  cfg.seed = 6;
  const auto run3 = unravel::estimate_f_linear(p, cfg);
  CHECK(run3.records.back().mean_f != run1.records.back().mean_f);
}

TEST_CASE("trajectory configuration validation") {
  unravel::TrajectoryConfig cfg;
  cfg.record_times = RealVector::LinSpaced(2, 0.0, 1.0);
  CHECK_NOTHROW(unravel::validate(cfg));

  auto bad = cfg;
  bad.n_traj = 0;
  CHECK_THROWS_AS(unravel::validate(bad), InvalidParams);
  bad = cfg;
  bad.step = 0;
  CHECK_THROWS_AS(unravel::validate(bad), InvalidParams);
  bad = cfg;
  bad.record_times = RealVector();
  CHECK_THROWS_AS(unravel::validate(bad), InvalidParams);
  bad = cfg;
  bad.record_times = RealVector::LinSpaced(2, -1.0, 1.0);
  CHECK_THROWS_AS(unravel::validate(bad), InvalidParams);
  bad = cfg;
  bad.record_times.resize(2);
  bad.record_times << 1.0, 1.0;
  CHECK_THROWS_AS(unravel::validate(bad), InvalidParams);
}
