// Copyright 2026 The phonon-sim Authors
// SPDX-License-Identifier: Apache-2.0

// End-to-end acceptance run: one PASS/FAIL line per criterion, exit status 1
// if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/tools/minima.hpp>
#include <fmt/format.h>

#include "../support/fc_oracle.hpp"
#include "phonon/cli.hpp"
#include "phonon/coupling.hpp"
#include "phonon/dynamics.hpp"
#include "phonon/gkp.hpp"
#include "phonon/hamiltonians.hpp"
#include "phonon/measurement.hpp"
#include "phonon/parallel.hpp"
#include "phonon/protocols.hpp"
#include "phonon/thermo.hpp"
#include "phonon/units.hpp"
#include "phonon/vibronic.hpp"

namespace {

using namespace phonon;
using units::kPi;
namespace fs = std::filesystem;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

CVector random_vector(int dim, int support, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  CVector v = CVector::Zero(dim);
  for (int n = 0; n < support; ++n) v[n] = Complex(g(rng), g(rng));
  return v / v.norm();
}

TrapGeometry yb_geometry() {
  TrapGeometry g{units::kYb171Mass, units::kElementaryCharge, 0.0, 0.0, units::khz_to_rad(587.0)};
  g.omega_x = g.omega_z / 0.556;
  g.omega_y = 1.05 * g.omega_x;
  return g;
}

// 1. Controlled beam splitter as a Fredkin gate, and parity through the ancilla.
Outcome cbs_fredkin() {
  const auto t0 = std::chrono::steady_clock::now();
  const TruthTable t = fredkin_truth_table(1.0, 5, 0);
  double dev = 0.0;
  double worst_success = 1.0;
  for (int q = 0; q < 2; ++q) {
    for (int n = 0; n < 2; ++n) {
      for (int m = 0; m < 2; ++m) {
        const int in = q * 4 + n * 2 + m;
        const int want = q == 1 ? q * 4 + m * 2 + n : in;
        for (int out = 0; out < 8; ++out) dev = std::max(dev, std::abs(t.probabilities(in, out) - (out == want ? 1.0 : 0.0)));
        worst_success = std::min(worst_success, t.probabilities(in, want));
      }
    }
  }
  std::mt19937_64 rng(2026);
  double parity_dev = 0.0;
  for (int k = 0; k < 200; ++k) {
    const CVector v = random_vector(5, 5, rng);
    double direct = 0.0;
    for (int n = 0; n < 5; ++n) direct += (n % 2 == 0 ? 1.0 : -1.0) * std::norm(v[n]);
    parity_dev = std::max(parity_dev, std::abs(cbs_ancilla_parity(v) - direct));
  }
  const double secs = seconds_since(t0);
  const bool ok = dev < 1e-9 && worst_success >= 1.0 - 1e-9 && parity_dev < 1e-9 && secs < 1.0;
  return {ok, fmt::format("table deviation {:.2e}, min success {:.12f}, parity deviation {:.2e}, {:.3f} s", dev,
                          worst_success, parity_dev, secs)};
}

// 2. Blue-sideband Rabi frequencies from fits to simulated flops.
Outcome sideband_ladder() {
  const double eta = 0.1;
  const double rabi = units::khz_to_rad(100.0);
  const ModeRegister reg(QubitSpec{}, {ModeSpec{units::khz_to_rad(1000.0), eta, 10}});
  const OperatorMatrix h = sideband(reg, SidebandKind::kBlue, 1, 0, {rabi, 0.0, 0.0});
  const Propagator prop(h);
  const int samples = 400;
  const double t_end = 6.0 * kPi / (eta * rabi);
  double worst = 0.0;
  for (int n = 0; n <= 5; ++n) {
    std::vector<double> ts;
    std::vector<double> ps;
    for (int k = 0; k < samples; ++k) {
      const double t = t_end * k / (samples - 1);
      ts.push_back(t);
      ps.push_back(population_up(prop.evolve(fock(reg, 0, {n}), t)));
    }
    auto cost = [&](double w) {
      double s = 0.0;
      for (std::size_t k = 0; k < ts.size(); ++k) s += std::pow(ps[k] - std::pow(std::sin(w * ts[k] / 2), 2), 2);
      return s;
    };
    // Coarse grid over a broad band, then Brent inside the best cell.
    const double lo = 0.1 * eta * rabi;
    const double hi = 5.0 * eta * rabi;
    const int grid = 4000;
    const double step = (hi - lo) / grid;
    int best = 0;
    for (int g = 1; g <= grid; ++g) {
      if (cost(lo + g * step) < cost(lo + best * step)) best = g;
    }
    const auto fit = boost::math::tools::brent_find_minima(cost, lo + (best - 1) * step, lo + (best + 1) * step, 52);
    const double want = std::sqrt(n + 1.0) * eta * rabi;
    worst = std::max(worst, std::abs(fit.first - want) / want);
  }
  return {worst < 1e-6, fmt::format("max relative error {:.2e} over n = 0..5", worst)};
}

// 3. Uniform blue sideband with the reference pulse parameters.
Outcome uniform_sideband() {
  const auto t0 = std::chrono::steady_clock::now();
  const ModeRegister reg = ModeRegister::with_dims({12});
  const StaPulseParams p = default_sta_params();
  const PulseSequence seq = uniform_bsb(reg, p);
  std::string list;
  double worst = 1.0;
  for (int n = 0; n <= 5; ++n) {
    const PulsedResult r = propagate_pulsed(seq, fock(reg, 0, {n}));
    const double f = std::norm(r.state[reg.index(1, {n + 1})]);
    worst = std::min(worst, f);
    list += fmt::format("{}{:.4f}", n == 0 ? "" : " ", f);
  }
  const double secs = seconds_since(t0);
  return {worst >= 0.99 && secs < 10.0,
          fmt::format("transfer n=0..5: {}; total {:.2f} pi-times; {:.2f} s", list,
                      seq.total_duration() / (kPi / p.omega0), secs)};
}

// 4. Phonon addition then subtraction.
Outcome phonon_arithmetic() {
  const ModeRegister reg = ModeRegister::with_dims({12});
  std::mt19937_64 rng(44);
  double worst_fid = 1.0;
  double worst_ratio = 0.0;
  for (int k = 0; k < 100; ++k) {
    // Qubit in |down>, motion supported on n < 8.
    CVector amps = CVector::Zero(reg.dimension());
    amps.head(12) = random_vector(12, 8, rng);
    const HybridState in = from_amplitudes(reg, amps);
    const HybridState added = phonon_add(in, 0);
    for (int n = 0; n < 8; ++n) {
      worst_ratio = std::max(worst_ratio, std::abs(added[reg.index(0, {n + 1})] - in[reg.index(0, {n})]));
    }
    const SubtractResult back = phonon_subtract_conditioned(added, 0);
    worst_fid = std::min(worst_fid, back.success ? fidelity(*back.state, in) : 0.0);
    // Direct subtraction: every surviving amplitude scales by the same factor.
    const SubtractResult sub = phonon_subtract_conditioned(in, 0);
    const double scale = 1.0 / std::sqrt(sub.success_probability);
    for (int n = 1; n < 8; ++n) {
      const Complex got = (*sub.state)[reg.index(0, {n - 1})];
      worst_ratio = std::max(worst_ratio, std::abs(got - scale * in[reg.index(0, {n})]));
    }
  }
  return {worst_fid > 1.0 - 1e-9 && worst_ratio < 1e-10,
          fmt::format("min fidelity 1 - {:.2e}, max amplitude deviation {:.2e}", 1.0 - worst_fid, worst_ratio)};
}

// 5. Population inversion of the sideband signal model.
Outcome measurement_round_trip() {
  const int n_max = 7;
  const RVector truth = thermal_weights(0.8, n_max + 1);
  const double rabi = units::khz_to_rad(10.0);
  const SignalModel model{2000.0, 0.7, 1.0};
  const RVector times = RVector::LinSpaced(200, 0.0, 400e-6);
  const RVector signal = bsb_signal(truth, times, rabi, model);
  const double clean = (invert_populations(signal, times, rabi, model, n_max).populations - truth).cwiseAbs().maxCoeff();
  std::vector<double> errors;
  for (int rep = 0; rep < 100; ++rep) {
    Rng rng = trajectory_rng(5, static_cast<std::uint64_t>(rep));
    const RVector noisy = add_shot_noise(signal, 10000, rng);
    errors.push_back((invert_populations(noisy, times, rabi, model, n_max).populations - truth).cwiseAbs().maxCoeff());
  }
  std::sort(errors.begin(), errors.end());
  const double p95 = errors[94];
  return {clean < 1e-6 && p95 < 0.03,
          fmt::format("noiseless max error {:.2e}; 10^4-shot 95th percentile {:.4f}", clean, p95)};
}

// 6. Avoided crossing and cross-Kerr shifts of the degenerate parametric coupling.
Outcome crossing_and_kerr() {
  const double xi = coupling_xi_d(yb_geometry()).xi_d;
  const auto gap = boost::math::tools::brent_find_minima([&](double d) { return parametric_pair_gap(xi, d); },
                                                         -5.0 * xi, 5.0 * xi, 52);
  const double gap_err = std::abs(gap.second - 2.0 * std::sqrt(2.0) * xi) / (2.0 * std::sqrt(2.0) * xi);
  const double delta = 20.0 * xi;
  double worst = 0.0;
  std::string list;
  for (int nb = 0; nb <= 3; ++nb) {
    const double pert = cross_kerr_shift(xi, delta, nb, ShiftMethod::kPerturbative);
    const double exact = cross_kerr_shift(xi, delta, nb, ShiftMethod::kExact);
    const double rel = std::abs(pert - exact) / std::abs(exact);
    worst = std::max(worst, rel);
    list += fmt::format("{}{:.2f}%", nb == 0 ? "" : " ", 100 * rel);
  }
  bool monotone = true;
  double last = 0.0;
  for (int nb = 0; nb <= 10; ++nb) {
    const double s = cross_kerr_shift(xi, delta, nb, ShiftMethod::kExact);
    if (nb > 0 && !(s < last)) monotone = false;
    last = s;
  }
  return {gap_err < 0.01 && worst < 0.05 && monotone,
          fmt::format("gap error {:.2e} at delta {:.2e} xi; |pert - exact|/|exact| n_b=0..3: {}; monotone to 10: {}",
                      gap_err, gap.first / xi, list, monotone ? "yes" : "no")};
}

// 7. Trilinear exchange and the Yb+ coupling estimate.
Outcome trilinear_exchange() {
  const TrilinearCoupling c = coupling_xi_n(yb_geometry());
  const double xi = c.xi_n;
  const ModeRegister reg = ModeRegister::with_dims({6, 6, 6});
  const Propagator prop(trilinear(reg, xi, 0.0, 0, 1, 2));
  std::mt19937_64 rng(7);
  CVector v = CVector::Zero(reg.dimension());
  std::normal_distribution<double> g;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    bool low = true;
    for (int m = 0; m < 3; ++m) low = low && reg.occupation_of(i, m) <= 1;
    if (low) v[i] = Complex(g(rng), g(rng));
  }
  const HybridState mixed = from_amplitudes(reg, v);
  const OperatorMatrix s_hw = number_op(reg, 0) + number_op(reg, 1);
  const OperatorMatrix s_hc = number_op(reg, 0) + number_op(reg, 2);
  const double hw0 = expectation(mixed, s_hw).real();
  const double hc0 = expectation(mixed, s_hc).real();
  double flop = 0.0;
  double drift = 0.0;
  for (int k = 0; k <= 200; ++k) {
    const double t = 2.0 * kPi / xi * k / 200;
    flop = std::max(flop, std::abs(phonon_distribution(prop.evolve(fock(reg, 0, {1, 0, 0}), t), 0)[1] -
                                   std::pow(std::cos(xi * t), 2)));
    const HybridState s = prop.evolve(mixed, t);
    drift = std::max({drift, std::abs(expectation(s, s_hw).real() - hw0), std::abs(expectation(s, s_hc).real() - hc0)});
  }
  const double exchange_hz = xi / kPi;
  const double orders = std::abs(std::log10(exchange_hz / 2801.0));
  return {flop < 1e-6 && drift < 1e-10 && orders < 0.5,
          fmt::format("cos^2 deviation {:.2e}, number-sum drift {:.2e}, exchange {:.1f} Hz vs 2801 Hz", flop, drift,
                      exchange_hz)};
}

// 8. NOON fringes and quantum Fisher information.
Outcome noon() {
  double k_err = 0.0;
  double c_err = 0.0;
  double q_err = 0.0;
  std::vector<double> phis;
  for (int i = 0; i < 241; ++i) phis.push_back(2.0 * kPi * i / 240);
  for (int n = 1; n <= 6; ++n) {
    const ModeRegister reg = ModeRegister::with_dims({n + 3, n + 3});
    const HybridState s = noon_state(reg, n, 0, 1);
    const FringeFit f = fit_fringe(phis, noon_parity_fringe(s, 0, 1, phis));
    k_err = std::max(k_err, std::abs(f.k - n));
    c_err = std::max(c_err, std::abs(f.contrast - 1.0));
    q_err = std::max(q_err, std::abs(qfi(s, half_number_difference(reg, 0, 1)) - n * n));
  }
  return {k_err < 1e-6 && c_err < 1e-6 && q_err < 1e-6,
          fmt::format("N = 1..6: max |k - N| {:.2e}, |C - 1| {:.2e}, |QFI - N^2| {:.2e}", k_err, c_err, q_err)};
}

// 9. Jarzynski equality over three temperatures and three ramp times.
Outcome jarzynski() {
  const auto t0 = std::chrono::steady_clock::now();
  const double table_beta_df[] = {-2.63, -2.13, -1.73};
  const double temps_nk[] = {316.0, 390.0, 480.0};
  bool ok = true;
  double worst_sigma = 0.0;
  double worst_df = 0.0;
  double worst_bdf = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (double tau_us : {5.0, 25.0, 45.0}) {
      ThermoParams p;
      p.mass = units::kYb171Mass;
      p.omega = units::khz_to_rad(10.0);
      p.force_max = force_for_displacement(p.mass, p.omega, std::sqrt(1.73));
      p.temperature = temps_nk[i] * 1e-9;
      p.protocol = WorkProtocol::kRamp;
      p.tau = tau_us * 1e-6;
      p.trials = 100000;
      const JarzynskiResult r = jarzynski_run(p, 7);
      const double sigma = std::abs(r.minus_log) / r.standard_error;
      const double df = -p.force_max * p.force_max / (2.0 * p.mass * p.omega * p.omega);
      worst_sigma = std::max(worst_sigma, sigma);
      worst_df = std::max(worst_df, std::abs(r.delta_f - df) / std::abs(df));
      worst_bdf = std::max(worst_bdf, std::abs(r.beta_delta_f - table_beta_df[i]));
      ok = ok && sigma < 3.0;
    }
  }
  const double secs = seconds_since(t0);
  ok = ok && worst_df < 1e-12 && worst_bdf < 0.005 && secs < 300.0;
  return {ok, fmt::format("max |-ln<e^(-beta W_diss)>| / SE {:.2f}; Delta F rel error {:.1e}; beta Delta F off table by "
                          "{:.4f}; {:.1f} s",
                          worst_sigma, worst_df, worst_bdf, secs)};
}

// 10. Absorption refrigerator over configurations with a hotter work mode.
Outcome refrigerator() {
  int cooled = 0;
  int total = 0;
  std::string failures;
  for (double nh : {0.2, 0.5, 1.0}) {
    for (double nw : {1.5, 2.0, 3.0}) {
      for (double nc : {0.5, 1.0, 2.0}) {
        if (!(nw > nh)) continue;
        FridgeConfig c;
        c.xi = 1.0;
        c.nbar_h = nh;
        c.nbar_w = nw;
        c.nbar_c = nc;
        c.t_max = 10.0;
        c.samples = 11;
        c.trajectories = 1;
        c.sample_dim = 60;
        const FridgeResult r = fridge_run(c, 1);
        ++total;
        if (r.infinite_time_n_c < r.initial_n_c) {
          ++cooled;
        } else if (failures.size() < 80) {
          failures += fmt::format(" ({},{},{})", nh, nw, nc);
        }
      }
    }
  }
  FridgeConfig vac;
  vac.t_max = 10.0;
  vac.trajectories = 1;
  const FridgeResult v = fridge_run(vac, 1);
  double vac_max = 0.0;
  for (std::size_t k = 0; k < v.times.size(); ++k) vac_max = std::max({vac_max, v.n_h[k], v.n_w[k], v.n_c[k]});
  return {cooled == total && vac_max == 0.0,
          fmt::format("cold mode cools in {}/{} configurations with nbar_w > nbar_h; not cooling (h,w,c):{}; vacuum "
                      "max occupation {}",
                      cooled, total, failures.empty() ? " none" : failures, vac_max)};
}

// 11. Vibronic Franck-Condon tables against the brute-force oracle.
Outcome vibronic() {
  const auto t0 = std::chrono::steady_clock::now();
  double dev = 0.0;
  double min_mass = 1.0;
  ProgressionWeights w[2];
  double combo_visible = 0.0;
  const DoktorovParams sets[2] = {so2_to_so2_cation(), so2_anion_to_so2()};
  for (int s = 0; s < 2; ++s) {
    const DoktorovParams& p = sets[s];
    const FcTable t = vibronic_fc(p, 29);
    const phonon::testing::Mat amp =
        phonon::testing::fc_amplitudes({p.omega_initial, p.omega_final, p.alpha, p.theta}, 80);
    for (int n1 = 0; n1 < 30; ++n1) {
      for (int n2 = 0; n2 < 30; ++n2) dev = std::max(dev, std::abs(t.at(n1, n2) - std::norm(amp(n1, n2))));
    }
    min_mass = std::min(min_mass, t.total);
    w[s] = progression_weights(t);
    if (s == 1) {
      // Strongest combination band relative to the strongest line.
      double strongest = 0.0;
      double combo = 0.0;
      for (int n1 = 0; n1 < 30; ++n1) {
        for (int n2 = 0; n2 < 30; ++n2) {
          strongest = std::max(strongest, t.at(n1, n2));
          if (n1 > 0 && n2 > 0) combo = std::max(combo, t.at(n1, n2));
        }
      }
      combo_visible = combo / strongest;
    }
  }
  const double secs = seconds_since(t0);
  const bool cation = w[0].mode2 > w[0].mode1 && w[0].mode2 > w[0].combination;
  const bool anion = w[1].mode1 > w[1].mode2 && w[1].mode1 > w[1].combination && combo_visible >= 0.01;
  return {dev < 1e-6 && min_mass >= 0.999 && cation && anion && secs < 30.0,
          fmt::format("oracle deviation {:.2e}; FC mass {:.6f}; cation mode1/mode2/comb {:.3f}/{:.3f}/{:.3f}; anion "
                      "{:.3f}/{:.3f}/{:.3f}, top combination line {:.2f} of strongest; {:.2f} s",
                      dev, min_mass, w[0].mode1, w[0].mode2, w[0].combination, w[1].mode1, w[1].mode2,
                      w[1].combination, combo_visible, secs)};
}

// 12. GKP logical operators and comb structure.
Outcome gkp() {
  const GkpParams p;
  const double anti = gkp_anticommutator_defect(p);
  const HybridState zero = gkp_prepare(p);
  const std::vector<double> peaks = marginal_peaks(gkp_marginal(zero, 0, Quadrature::kPosition));
  double spacing_err = 0.0;
  for (std::size_t i = 1; i < peaks.size(); ++i) spacing_err = std::max(spacing_err, std::abs(peaks[i] - peaks[i - 1] - p.spacing));
  bool monotone = true;
  double last = -2.0;
  std::string zs;
  for (double r : {0.5, 0.7, 0.9, 1.1}) {
    GkpParams q = p;
    q.squeeze = r;
    const double z = gkp_logical_expect(gkp_prepare(q), 0, q, Pauli::kZ).real();
    monotone = monotone && z > last;
    last = z;
    zs += fmt::format("{}{:.4f}", zs.empty() ? "" : " ", z);
  }
  const bool count_ok = peaks.size() == static_cast<std::size_t>(2 * p.half_width + 1);
  return {anti < 1e-10 && count_ok && spacing_err < 0.02 * p.spacing && monotone,
          fmt::format("anticommutator {:.2e}; {} peaks, spacing error {:.4f}; <Z_L> at r=0.5..1.1: {}", anti,
                      peaks.size(), spacing_err, zs)};
}

// 13. Byte-identical CLI output on repeated runs, with one and two worker threads.
std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism(const fs::path& configs) {
  const fs::path root = fs::temp_directory_path() / "phonon_acceptance_determinism";
  fs::remove_all(root);
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(configs)) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  int identical = 0;
  std::string bad;
  for (const fs::path& f : files) {
    const std::string name = f.stem().string();
    bool same = true;
    for (const char* run : {"a", "b"}) {
      ::setenv("PHONON_SIM_THREADS", run[0] == 'a' ? "1" : "2", 1);
      const std::string out = (root / run / name).string();
      const std::string cfg = f.string();
      const char* argv[] = {"phonon_sim", "run", cfg.c_str(), "--out", out.c_str()};
      std::ostringstream sink;
      if (run_cli(5, argv, sink, sink) != kExitOk) same = false;
    }
    ::unsetenv("PHONON_SIM_THREADS");
    int csvs = 0;
    for (const auto& e : fs::directory_iterator(root / "a" / name)) {
      const fs::path other = root / "b" / name / e.path().filename();
      if (e.path().extension() == ".csv") ++csvs;
      same = same && fs::exists(other) && slurp(e.path()) == slurp(other);
    }
    same = same && csvs > 0;
    if (same) {
      ++identical;
    } else {
      bad += " " + name;
    }
  }
  fs::remove_all(root);
  return {identical == static_cast<int>(files.size()) && !files.empty(),
          fmt::format("{}/{} configs byte-identical{}", identical, files.size(), bad.empty() ? "" : "; differ:" + bad)};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const fs::path configs = fs::path(PHONON_SOURCE_DIR) / "configs";
  const std::vector<Criterion> criteria{
      {"cbs-fredkin", cbs_fredkin},
      {"sideband-ladder", sideband_ladder},
      {"uniform-bsb", uniform_sideband},
      {"phonon-arithmetic", phonon_arithmetic},
      {"measurement-round-trip", measurement_round_trip},
      {"crossing-cross-kerr", crossing_and_kerr},
      {"trilinear", trilinear_exchange},
      {"noon", noon},
      {"jarzynski", jarzynski},
      {"refrigerator", refrigerator},
      {"vibronic", vibronic},
      {"gkp", gkp},
      {"determinism", [&] { return determinism(configs); }},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::cout << fmt::format("{} {:>2} {}: {} [{:.2f} s]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].name,
                             o.detail, seconds_since(t0))
              << std::flush;
  }
  std::cout << fmt::format("{}/{} criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
