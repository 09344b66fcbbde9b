// Copyright 2026 The phonon-sim Authors
// SPDX-License-Identifier: Apache-2.0

#include "phonon/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>

#include <fmt/format.h>

#include "phonon/dynamics.hpp"
#include "phonon/gkp.hpp"
#include "phonon/hamiltonians.hpp"
#include "phonon/measurement.hpp"
#include "phonon/parallel.hpp"
#include "phonon/protocols.hpp"
#include "phonon/thermo.hpp"
#include "phonon/units.hpp"
#include "phonon/vibronic.hpp"

namespace phonon {

namespace {

using units::kPi;

Json q(double value, const std::string& unit) { return Json{{"value", value}, {"unit", unit}}; }

ParamSpec p_int(std::string name, long def, std::string doc) {
  return {std::move(name), ParamType::kInt, Dimension::kNone, Json(def), {}, std::move(doc)};
}
ParamSpec p_num(std::string name, double def, std::string doc) {
  return {std::move(name), ParamType::kNumber, Dimension::kNone, Json(def), {}, std::move(doc)};
}
ParamSpec p_bool(std::string name, bool def, std::string doc) {
  return {std::move(name), ParamType::kBool, Dimension::kNone, Json(def), {}, std::move(doc)};
}
ParamSpec p_choice(std::string name, std::vector<std::string> choices, std::string doc) {
  Json def = choices.front();
  return {std::move(name), ParamType::kChoice, Dimension::kNone, def, std::move(choices), std::move(doc)};
}
ParamSpec p_qty(std::string name, Dimension d, Json def, std::string doc) {
  return {std::move(name), ParamType::kQuantity, d, std::move(def), {}, std::move(doc)};
}
ParamSpec p_qty_list(std::string name, Dimension d, Json def, std::string doc) {
  return {std::move(name), ParamType::kQuantityList, d, std::move(def), {}, std::move(doc)};
}
ParamSpec p_num_list(std::string name, Json def, std::string doc) {
  return {std::move(name), ParamType::kNumberList, Dimension::kNone, std::move(def), {}, std::move(doc)};
}
ParamSpec p_int_list(std::string name, Json def, std::string doc) {
  return {std::move(name), ParamType::kIntList, Dimension::kNone, std::move(def), {}, std::move(doc)};
}
ParamSpec p_objects(std::string name, std::string doc) {
  return {std::move(name), ParamType::kObjectList, Dimension::kNone, Json::array(), {}, std::move(doc)};
}

constexpr auto kFreq = Dimension::kAngularFrequency;
constexpr auto kTime = Dimension::kTime;
constexpr auto kAngle = Dimension::kAngle;

std::vector<double> linspace(double lo, double hi, long n) {
  if (n < 2) throw InvalidArgument("a scan needs at least 2 points");
  std::vector<double> out(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
  return out;
}

int as_int(long v, const std::string& what, long lo, long hi) {
  if (v < lo || v > hi) throw InvalidArgument(fmt::format("{} must lie in [{}, {}], got {}", what, lo, hi, v));
  return static_cast<int>(v);
}

// ---------------------------------------------------------------- cbs-truth-table

ResultBundle run_cbs(const ExperimentConfig& c, const ParamView& p) {
  const double xi = p.quantity("xi");
  const int dim = as_int(p.integer("dim"), "dim", 2, 40);
  const long shots = p.integer("shots");
  if (shots < 0) throw InvalidArgument("shots must be >= 0");
  const TruthTable t = fredkin_truth_table(xi, dim, shots, c.seed);

  ResultBundle b;
  Table table{"truth_table", {"input[1]", "q_in[1]", "n_in[1]", "m_in[1]", "output[1]", "q_out[1]", "n_out[1]",
                              "m_out[1]", "probability[1]", "expected[1]"}, {}};
  for (int i = 0; i < 8; ++i) {
    for (int o = 0; o < 8; ++o) {
      table.rows.push_back({double(i), double(i / 4), double(i / 2 % 2), double(i % 2), double(o), double(o / 4),
                            double(o / 2 % 2), double(o % 2), t.probabilities(i, o), t.expected(i, o)});
    }
  }
  b.tables.push_back(std::move(table));

  const int parity_dim = as_int(p.integer("parity_dim"), "parity_dim", 2, 20);
  const long states = p.integer("parity_states");
  if (states < 0) throw InvalidArgument("parity_states must be >= 0");
  Table parity{"ancilla_parity", {"state[1]", "direct[1]", "cbs_ancilla[1]"}, {}};
  double worst = 0.0;
  for (long s = 0; s < states; ++s) {
    Rng rng = trajectory_rng(c.seed, static_cast<std::uint64_t>(s) + 1000003);
    std::normal_distribution<double> g;
    CVector v(parity_dim);
    for (int n = 0; n < parity_dim; ++n) v[n] = Complex(g(rng), g(rng));
    v.normalize();
    double direct = 0.0;
    for (int n = 0; n < parity_dim; ++n) direct += (n % 2 == 0 ? 1.0 : -1.0) * std::norm(v[n]);
    const double via = cbs_ancilla_parity(v);
    worst = std::max(worst, std::abs(direct - via));
    parity.rows.push_back({double(s), direct, via});
  }
  b.tables.push_back(std::move(parity));

  b.metrics["max_deviation"] = t.max_deviation;
  b.metrics["min_success"] = t.min_success;
  b.metrics["ancilla_parity_max_error"] = worst;
  if (shots == 0) {
    b.check("truth_table_success", t.min_success, ">=", 1.0 - 1e-9);
  }
  b.check("ancilla_parity_error", worst, "<", 1e-9);
  return b;
}

// ---------------------------------------------------------------- uniform-bsb

ResultBundle run_uniform_bsb(const ExperimentConfig& c, const ParamView& p) {
  const ModeRegister reg = build_register(c.register_spec);
  const int mode = as_int(p.integer("mode"), "mode", 0, reg.num_modes() - 1);
  StaPulseParams sta;
  sta.omega0 = p.quantity("omega0");
  sta.beta = p.number("beta");
  sta.delta0 = p.number("delta0_ratio") * sta.omega0;
  sta.half_duration = p.quantity("half_duration");
  sta.mode = mode;
  sta.mid_inversion = p.flag("mid_inversion");
  const int n_max = as_int(p.integer("n_max"), "n_max", 0, reg.mode_dim(mode) - 2);
  StepControl control;
  control.tolerance = p.number("tolerance");
  PropagationOptions options;
  options.leakage_threshold = p.number("leakage_threshold");

  const PulseSequence seq = uniform_bsb(reg, sta);
  const OperatorMatrix up = embed(qubit_ops::projector_up(), Slot::qubit(), reg);
  ResultBundle b;
  Table transfer{"transfer", {"n[1]", "transfer_probability[1]", "steps[1]"}, {}};
  Table trace{"population_trace", {"n[1]", "time[s]", "population_up[1]"}, {}};
  double worst = 1.0;
  for (int n = 0; n <= n_max; ++n) {
    std::vector<int> occ(static_cast<std::size_t>(reg.num_modes()), 0);
    occ[static_cast<std::size_t>(mode)] = n;
    const HybridState in = fock(reg, 0, occ);
    const PulsedResult r = propagate_pulsed(seq, in, control, options, {up});
    occ[static_cast<std::size_t>(mode)] = n + 1;
    const double f = std::norm(r.state[reg.index(1, occ)]);
    worst = std::min(worst, f);
    transfer.rows.push_back({double(n), f, double(r.steps)});
    for (const auto& s : r.trajectory) trace.rows.push_back({double(n), s.time, s.values[0].real()});
  }
  b.tables.push_back(std::move(transfer));
  b.tables.push_back(std::move(trace));
  const double pi_time = kPi / sta.omega0;
  b.metrics["total_duration_s"] = seq.total_duration();
  b.metrics["duration_over_pi_time"] = seq.total_duration() / pi_time;
  b.metrics["min_transfer"] = worst;
  b.check("min_transfer", worst, ">=", 0.99);
  return b;
}

// ---------------------------------------------------------------- crossing-scan

ResultBundle run_crossing(const ExperimentConfig&, const ParamView& p) {
  const double xi = p.quantity("xi_d");
  const auto deltas = linspace(p.quantity("delta_min"), p.quantity("delta_max"), p.integer("points"));
  const int dim_a = as_int(p.integer("dim_a"), "dim_a", 2, 30);
  const int dim_b = as_int(p.integer("dim_b"), "dim_b", 3, 60);
  const ModeRegister reg = ModeRegister::with_dims({dim_a, dim_b});
  const Eigen::Index i10 = reg.index(0, {1, 0});
  const Eigen::Index i02 = reg.index(0, {0, 2});

  ResultBundle b;
  Table levels{"levels", {"delta[rad/s]", "energy_lower[rad/s]", "energy_upper[rad/s]", "gap[rad/s]"}, {}};
  double min_gap = INFINITY;
  double at = 0.0;
  for (double d : deltas) {
    // 2 n_a + n_b = 2 closes on {|1,0>, |0,2>}.
    const CMatrix h = degenerate_parametric(reg, xi, d, 0, 1).dense();
    Eigen::Matrix2cd block;
    block << h(i10, i10), h(i10, i02), h(i02, i10), h(i02, i02);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(block);
    const double gap = es.eigenvalues()[1] - es.eigenvalues()[0];
    if (gap < min_gap) {
      min_gap = gap;
      at = d;
    }
    levels.rows.push_back({d, es.eigenvalues()[0], es.eigenvalues()[1], gap});
  }
  b.tables.push_back(std::move(levels));
  const double expected = 2.0 * std::sqrt(2.0) * xi;
  const double exact_min = parametric_pair_gap(xi, 0.0, dim_a, dim_b);
  b.metrics["min_gap_on_grid"] = min_gap;
  b.metrics["min_gap_delta"] = at;
  b.metrics["gap_at_resonance"] = exact_min;
  b.metrics["two_sqrt2_xi"] = expected;
  b.check("gap_relative_error", std::abs(exact_min - expected) / expected, "<", 0.01);
  return b;
}

// ---------------------------------------------------------------- kerr-peaks

ResultBundle run_kerr(const ExperimentConfig&, const ParamView& p) {
  const double xi = p.quantity("xi");
  const double delta = p.quantity("delta");
  const int nb_max = as_int(p.integer("n_b_max"), "n_b_max", 0, 40);
  const int dim_a = as_int(p.integer("dim_a"), "dim_a", 3, 20);
  const int dim_b = as_int(p.integer("dim_b"), "dim_b", nb_max + 3, 80);
  const double rabi = p.quantity("probe_rabi");
  const double probe_time = p.quantity("probe_time");
  const auto detunings = linspace(p.quantity("scan_min"), p.quantity("scan_max"), p.integer("scan_points"));

  ResultBundle b;
  Table shifts{"shifts", {"n_b[1]", "perturbative[rad/s]", "exact[rad/s]", "peak[rad/s]"}, {}};
  Table peaks{"probe_scan", {"n_b[1]", "laser_detuning[rad/s]", "population_up[1]"}, {}};
  const ModeRegister reg = ModeRegister::with_dims({dim_a, dim_b});
  PropagationOptions options;
  options.leakage_threshold = p.number("leakage_threshold");
  std::vector<double> exact, pert, peak;
  for (int nb = 0; nb <= nb_max; ++nb) {
    exact.push_back(cross_kerr_shift(xi, delta, nb, ShiftMethod::kExact));
    pert.push_back(cross_kerr_shift(xi, delta, nb, ShiftMethod::kPerturbative));
    const HybridState in = fock(reg, 0, {0, nb});
    const auto scan = sideband_spectrum_scan(
        [&](double d) { return parametric_sideband_probe(reg, xi, delta, d, rabi, 0, 1); }, detunings, in,
        probe_time, options);
    double best = -1.0;
    double where = 0.0;
    for (const auto& s : scan) {
      peaks.rows.push_back({double(nb), s.detuning, s.population_up});
      if (s.population_up > best) {
        best = s.population_up;
        where = s.detuning;
      }
    }
    peak.push_back(where);
    shifts.rows.push_back({double(nb), pert.back(), exact.back(), where});
  }
  b.tables.push_back(std::move(shifts));
  b.tables.push_back(std::move(peaks));

  double worst = 0.0;
  for (int nb = 0; nb <= std::min(nb_max, 3); ++nb) worst = std::max(worst, std::abs(pert[nb] - exact[nb]) / std::abs(exact[nb]));
  bool monotone = true;
  for (int nb = 1; nb <= nb_max; ++nb) monotone = monotone && (exact[nb] - exact[nb - 1]) * (exact[1] - exact[0]) > 0;
  const double resolution = detunings.size() > 1 ? detunings[1] - detunings[0] : 0.0;
  double peak_error = 0.0;
  for (int nb = 0; nb <= nb_max; ++nb) peak_error = std::max(peak_error, std::abs(peak[nb] - exact[nb]));
  b.metrics["perturbative_relative_error_nb_le_3"] = worst;
  b.metrics["exact_monotone"] = monotone;
  b.metrics["peak_max_deviation"] = peak_error;
  b.metrics["scan_resolution"] = resolution;
  b.check("perturbative_vs_exact", worst, "<", 0.05);
  b.check("exact_monotone", monotone ? 1.0 : 0.0, "==", 1.0);
  b.check("peak_vs_exact", peak_error, "<=", resolution);
  return b;
}

// ---------------------------------------------------------------- noon

ResultBundle run_noon(const ExperimentConfig& c, const ParamView& p) {
  const ModeRegister reg = build_register(c.register_spec);
  if (reg.num_modes() < 2) throw InvalidArgument("noon needs a register with at least two modes");
  const int n = as_int(p.integer("n"), "n", 1, 1000);
  const double phi_s = p.quantity("phi_s");
  const auto phis = linspace(0.0, 2.0 * kPi, p.integer("points"));
  const HybridState s = noon_state(reg, n, 0, 1, phi_s);
  const auto fringe = noon_parity_fringe(s, 0, 1, phis);
  const FringeFit fit = fit_fringe(phis, fringe, p.number("k_max"));
  const double f = qfi(s, half_number_difference(reg, 0, 1));

  ResultBundle b;
  Table t{"fringe", {"phi[rad]", "parity[1]"}, {}};
  for (std::size_t i = 0; i < phis.size(); ++i) t.rows.push_back({phis[i], fringe[i]});
  b.tables.push_back(std::move(t));
  b.metrics["fit_k"] = fit.k;
  b.metrics["fit_contrast"] = fit.contrast;
  b.metrics["fit_phase"] = fit.phase;
  b.metrics["fit_offset"] = fit.offset;
  b.metrics["fit_rms_residual"] = fit.rms_residual;
  b.metrics["qfi"] = f;
  b.metrics["heisenberg_limit"] = double(n) * n;
  b.check("fit_k_error", std::abs(fit.k - n), "<", 1e-6);
  b.check("contrast_error", std::abs(fit.contrast - 1.0), "<", 1e-6);
  b.check("qfi_error", std::abs(f - double(n) * n), "<", 1e-6);
  return b;
}

// ---------------------------------------------------------------- gkp

ResultBundle run_gkp(const ExperimentConfig&, const ParamView& p) {
  GkpParams g;
  g.spacing = p.number("spacing");
  g.squeeze = p.number("squeeze");
  g.half_width = as_int(p.integer("half_width"), "half_width", 0, 20);
  g.envelope_variance = p.number("envelope_variance");
  g.dim = as_int(p.integer("dim"), "dim", 4, 400);
  g.leakage_threshold = p.number("leakage_threshold");
  const double half_range = p.number("half_range");
  const int samples = as_int(p.integer("samples"), "samples", 3, 100001);

  const HybridState s = gkp_prepare(g);
  ResultBundle b;
  for (const auto& [name, which] : {std::pair{"x", Pauli::kX}, {"y", Pauli::kY}, {"z", Pauli::kZ}}) {
    const Complex v = gkp_logical_expect(s, 0, g, which);
    b.metrics[fmt::format("logical_{}_re", name)] = v.real();
    b.metrics[fmt::format("logical_{}_im", name)] = v.imag();
  }
  const double anti = gkp_anticommutator_defect(g);
  b.metrics["anticommutator_defect"] = anti;

  std::vector<double> peaks;
  for (const auto& [name, quad] : {std::pair{"position", Quadrature::kPosition}, {"momentum", Quadrature::kMomentum}}) {
    const Marginal m = gkp_marginal(s, 0, quad, half_range, samples);
    Table t{std::string("marginal_") + name, {std::string(name) + "[1]", "density[1]"}, {}};
    for (std::size_t i = 0; i < m.points.size(); ++i) t.rows.push_back({m.points[i], m.density[i]});
    b.tables.push_back(std::move(t));
    if (quad == Quadrature::kPosition) peaks = marginal_peaks(m);
  }
  b.metrics["position_peaks"] = peaks;
  double spacing_error = 0.0;
  for (std::size_t i = 1; i < peaks.size(); ++i) spacing_error = std::max(spacing_error, std::abs(peaks[i] - peaks[i - 1] - g.spacing));
  b.metrics["peak_spacing_max_error"] = spacing_error;

  Table scan{"z_vs_squeeze", {"squeeze[1]", "logical_z[1]"}, {}};
  bool monotone = true;
  double last = -INFINITY;
  for (double r : p.numbers("squeeze_scan")) {
    GkpParams gr = g;
    gr.squeeze = r;
    const double z = gkp_logical_expect(gkp_prepare(gr), 0, gr, Pauli::kZ).real();
    monotone = monotone && z > last;
    last = z;
    scan.rows.push_back({r, z});
  }
  b.tables.push_back(std::move(scan));
  b.metrics["z_monotone_in_squeeze"] = monotone;
  const double grid_step = 2.0 * half_range / (samples - 1);
  b.check("anticommutator_defect", anti, "<", 1e-10);
  b.check("position_peak_count", double(peaks.size()), "==", double(2 * g.half_width + 1));
  b.check("peak_spacing_error", spacing_error, "<", 0.05 * g.spacing + grid_step);
  b.check("z_monotone_in_squeeze", monotone ? 1.0 : 0.0, "==", 1.0);
  return b;
}

// ---------------------------------------------------------------- jarzynski

ResultBundle run_jarzynski(const ExperimentConfig& c, const ParamView& p) {
  ThermoParams t;
  t.mass = p.quantity("mass");
  t.omega = p.quantity("omega");
  t.force_max = force_for_displacement(t.mass, t.omega, std::sqrt(p.number("alpha0_squared")));
  t.temperature = p.quantity("temperature");
  const std::string protocol = p.choice("protocol");
  t.protocol = protocol == "ramp" ? WorkProtocol::kRamp
               : protocol == "sudden" ? WorkProtocol::kSudden
                                      : WorkProtocol::kAdiabatic;
  t.tau = p.quantity("tau");
  t.trials = p.integer("trials");
  t.dim = as_int(p.integer("dim"), "dim", 4, 400);
  t.leakage_threshold = p.number("leakage_threshold");
  const JarzynskiResult r = jarzynski_run(t, c.seed);

  const double quantum = units::kHbar * t.omega;
  std::map<long, long> histogram;
  for (double w : r.work) ++histogram[std::lround((w - r.delta_f) / quantum)];
  ResultBundle b;
  Table h{"work_histogram", {"quanta[hbar*omega]", "work[J]", "count[1]"}, {}};
  for (const auto& [k, n] : histogram) h.rows.push_back({double(k), k * quantum + r.delta_f, double(n)});
  b.tables.push_back(std::move(h));
  b.metrics["beta_delta_f"] = r.beta_delta_f;
  b.metrics["delta_f_J"] = r.delta_f;
  b.metrics["delta_f_analytic_J"] = free_energy_change(t);
  b.metrics["estimator"] = r.estimator;
  b.metrics["exp_minus_beta_delta_f"] = std::exp(-r.beta_delta_f);
  b.metrics["dissipated_average"] = r.dissipated;
  b.metrics["minus_log"] = r.minus_log;
  b.metrics["standard_error"] = r.standard_error;
  b.metrics["exact_dissipated_average"] = r.exact;
  b.metrics["thermal_tail"] = r.thermal_tail;
  b.metrics["trials"] = t.trials;
  b.check("minus_log_over_standard_error", std::abs(r.minus_log) / std::max(r.standard_error, 1e-300), "<", 3.0);
  return b;
}

// ---------------------------------------------------------------- fridge

ResultBundle run_fridge(const ExperimentConfig& c, const ParamView& p) {
  FridgeConfig f;
  f.xi = p.quantity("xi");
  f.detuning = p.quantity("detuning");
  f.nbar_h = p.number("nbar_h");
  f.nbar_w = p.number("nbar_w");
  f.nbar_c = p.number("nbar_c");
  f.work_state = p.choice("work_state") == "thermal" ? WorkModeState::kThermal : WorkModeState::kSqueezed;
  f.t_max = p.quantity("t_max");
  f.samples = as_int(p.integer("samples"), "samples", 2, 1000000);
  f.trajectories = p.integer("trajectories");
  f.sample_dim = as_int(p.integer("sample_dim"), "sample_dim", 2, 400);
  const FridgeResult r = fridge_run(f, c.seed);

  ResultBundle b;
  Table t{"occupations",
          {"time[s]", "n_h[1]", "n_w[1]", "n_c[1]", "traj_n_h[1]", "traj_n_w[1]", "traj_n_c[1]"},
          {}};
  for (std::size_t i = 0; i < r.times.size(); ++i) {
    t.rows.push_back({r.times[i], r.n_h[i], r.n_w[i], r.n_c[i], r.traj_n_h[i], r.traj_n_w[i], r.traj_n_c[i]});
  }
  b.tables.push_back(std::move(t));
  b.metrics["initial_n_c"] = r.initial_n_c;
  b.metrics["time_average_n_c"] = r.time_average_n_c;
  b.metrics["infinite_time_n_c"] = r.infinite_time_n_c;
  b.metrics["trajectory_time_average_n_c"] = r.traj_time_average_n_c;
  b.metrics["min_n_c"] = r.min_n_c;
  b.metrics["t_min_s"] = r.t_min;
  b.metrics["truncated_weight"] = r.truncated_weight;
  b.metrics["norm_defect"] = r.norm_defect;
  b.metrics["refrigeration_condition"] = r.refrigeration_condition;
  b.check("norm_defect", r.norm_defect, "<", 1e-10);
  if (r.refrigeration_condition) b.check("cooling", r.time_average_n_c - r.initial_n_c, "<", 0.0);
  return b;
}

// ---------------------------------------------------------------- vibronic

ResultBundle run_vibronic(const ExperimentConfig& c, const ParamView& p) {
  const std::string preset = p.choice("preset");
  const bool custom = preset == "custom";
  for (const char* key : {"omega_initial", "omega_final", "alpha", "theta"}) {
    if (p.has(key) != custom) {
      throw InvalidArgument(custom ? fmt::format("vibronic: custom preset needs '{}'", key)
                                   : fmt::format("vibronic: '{}' is fixed by preset '{}'", key, preset));
    }
  }
  DoktorovParams d;
  if (custom) {
    d = {p.quantities("omega_initial"), p.quantities("omega_final"), p.numbers("alpha"), p.quantity("theta")};
  } else {
    d = preset == "so2-cation" ? so2_to_so2_cation() : so2_anion_to_so2();
  }
  const int n_max = as_int(p.integer("n_max"), "n_max", 0, 200);
  const FcTable fc = vibronic_fc(d, n_max, as_int(p.integer("padding"), "padding", 2, 200), p.number("leakage_threshold"));
  std::vector<double> finals;
  for (double w : d.omega_final) finals.push_back(units::rad_to_wavenumber(w));
  const Spectrum s = vibronic_spectrum(fc, finals, p.quantity_in("fwhm", "cm^-1"), p.quantity_in("spectrum_min", "cm^-1"),
                                       p.quantity_in("spectrum_max", "cm^-1"), p.quantity_in("spectrum_step", "cm^-1"),
                                       p.number("min_intensity"));
  const auto counts = vibronic_sample(fc, p.integer("shots"), c.seed);
  const ProgressionWeights w = progression_weights(fc);

  ResultBundle b;
  Table sticks{"sticks", {"position[cm^-1]", "intensity[1]", "n1[1]", "n2[1]"}, {}};
  for (std::size_t i = 0; i < s.stick_position.size(); ++i) {
    sticks.rows.push_back({s.stick_position[i], s.stick_intensity[i], double(s.stick_n1[i]), double(s.stick_n2[i])});
  }
  Table trace{"spectrum", {"position[cm^-1]", "intensity[1]"}, {}};
  for (std::size_t i = 0; i < s.grid.size(); ++i) trace.rows.push_back({s.grid[i], s.trace[i]});
  Table samples{"samples", {"n1[1]", "n2[1]", "count[1]", "probability[1]"}, {}};
  for (int n1 = 0; n1 < fc.size; ++n1) {
    for (int n2 = 0; n2 < fc.size; ++n2) {
      const long k = counts[static_cast<std::size_t>(n1 * fc.size + n2)];
      if (k > 0) samples.rows.push_back({double(n1), double(n2), double(k), fc.at(n1, n2)});
    }
  }
  b.tables.push_back(std::move(sticks));
  b.tables.push_back(std::move(trace));
  b.tables.push_back(std::move(samples));
  b.metrics["fc_total"] = fc.total;
  b.metrics["origin_weight"] = w.origin;
  b.metrics["mode1_progression_weight"] = w.mode1;
  b.metrics["mode2_progression_weight"] = w.mode2;
  b.metrics["combination_weight"] = w.combination;
  b.metrics["final_frequencies_cm-1"] = finals;
  b.check("fc_total", fc.total, ">=", 0.999);
  return b;
}

// ---------------------------------------------------------------- wigner-q-scan

HybridState scan_state(const ModeRegister& reg, const ParamView& p, double threshold) {
  const std::string type = p.choice("state");
  const int d = reg.mode_dim(0);
  const Complex alpha(p.number("alpha_re"), p.number("alpha_im"));
  if (type == "fock") {
    std::vector<int> occ(static_cast<std::size_t>(reg.num_modes()), 0);
    occ[0] = as_int(p.integer("fock_n"), "fock_n", 0, d - 1);
    return fock(reg, 0, occ);
  }
  if (type == "coherent") return coherent(reg, {alpha}, 0, threshold);
  if (type == "squeezed") return squeezed(reg, {p.number("squeeze")}, 0, threshold);
  // Even cat or (|0> + |1>)/sqrt 2.
  CVector v = CVector::Zero(d);
  if (type == "cat") {
    const int work = d + 40;
    const CVector plus = displacement_matrix(work, alpha).col(0) + displacement_matrix(work, -alpha).col(0);
    const double tail = plus.tail(work - d + 2).squaredNorm() / plus.squaredNorm();
    if (threshold > 0 && tail > threshold) throw LeakageError("cat state exceeds the mode truncation", tail);
    v = plus.head(d);
  } else {
    v[0] = 1.0;
    v[1] = 1.0;
  }
  CVector qubit(2);
  qubit << 1.0, 0.0;
  return product_state(reg, qubit, {v.normalized()});
}

ResultBundle run_phase_space(const ExperimentConfig& c, const ParamView& p) {
  const ModeRegister reg = build_register(c.register_spec);
  if (reg.num_modes() != 1) throw InvalidArgument("wigner-q-scan needs a single-mode register");
  const double threshold = p.number("leakage_threshold");
  const HybridState s = scan_state(reg, p, threshold);
  const double r = p.number("half_range");
  const auto axis = linspace(-r, r, p.integer("points"));
  std::vector<Complex> grid;
  for (double x : axis) {
    for (double y : axis) grid.emplace_back(x, y);
  }
  const double cell = (axis[1] - axis[0]) * (axis[1] - axis[0]);
  const std::string quantity = p.choice("quantity");
  ResultBundle b;
  auto emit = [&](const PhaseSpaceGrid& g, const std::string& name) {
    Table t{name, {"re_alpha[1]", "im_alpha[1]", g.quantity + "[1]"}, {}};
    double integral = 0.0;
    for (std::size_t i = 0; i < g.points.size(); ++i) {
      t.rows.push_back({g.points[i].real(), g.points[i].imag(), g.values[i]});
      integral += g.values[i] * cell;
    }
    b.metrics[name + "_integral"] = integral;
    b.metrics[name + "_max"] = *std::max_element(g.values.begin(), g.values.end());
    b.metrics[name + "_min"] = *std::min_element(g.values.begin(), g.values.end());
    b.tables.push_back(std::move(t));
  };
  if (quantity != "wigner") emit(q_function(s, 0, grid), "q_function");
  if (quantity != "q") {
    const WignerMethod method = p.choice("method") == "parity" ? WignerMethod::kParity : WignerMethod::kCbsAncilla;
    const PhaseSpaceGrid w = wigner(s, 0, grid, method, threshold);
    b.metrics["wigner_working_dim"] = w.working_dim;
    emit(w, "wigner");
  }

  const long settings = p.integer("reconstruct_settings");
  if (settings > 0) {
    const int rdim = as_int(p.integer("reconstruct_dim"), "reconstruct_dim", 2, reg.mode_dim(0));
    const auto alphas = ring_displacements(static_cast<int>(settings), p.number("reconstruct_amplitude"));
    const CMatrix rho = mode_density(s, 0);
    const auto measured = displaced_populations(rho, alphas, rdim);
    const DensityReconstruction rec = reconstruct_density(measured, alphas, rdim, p.integer("reconstruct_iterations"));
    // The prepared states are pure, so the top eigenvector of rho is the truth.
    const Eigen::SelfAdjointEigenSolver<CMatrix> es(rho);
    const CVector psi = es.eigenvectors().col(rho.rows() - 1).head(rdim);
    const double fid = psi.dot(rec.rho * psi).real();
    Table t{"reconstruction", {"row[1]", "col[1]", "re[1]", "im[1]"}, {}};
    for (int i = 0; i < rdim; ++i) {
      for (int j = 0; j < rdim; ++j) t.rows.push_back({double(i), double(j), rec.rho(i, j).real(), rec.rho(i, j).imag()});
    }
    b.tables.push_back(std::move(t));
    b.metrics["reconstruction_fidelity"] = fid;
    b.metrics["reconstruction_iterations"] = rec.iterations;
    b.metrics["reconstruction_converged"] = rec.converged;
    b.metrics["reconstruction_last_change"] = rec.last_change;
    b.check("reconstruction_fidelity", fid, ">", 0.999);
  }
  return b;
}

// ---------------------------------------------------------------- custom-sequence

// Reads one segment object and rejects keys it did not consume.
class SegmentReader {
 public:
  SegmentReader(const Json& obj, std::string ctx) : obj_(obj), ctx_(std::move(ctx)) {}

  double quantity(const std::string& key, Dimension d, std::optional<double> def = std::nullopt) {
    used_.insert(key);
    if (!obj_.contains(key)) {
      if (def) return *def;
      throw InvalidArgument(fmt::format("{}: missing '{}'", ctx_, key));
    }
    return quantity_to_si(obj_.at(key), d, ctx_ + "." + key);
  }
  double number(const std::string& key, std::optional<double> def = std::nullopt) {
    used_.insert(key);
    if (!obj_.contains(key)) {
      if (def) return *def;
      throw InvalidArgument(fmt::format("{}: missing '{}'", ctx_, key));
    }
    if (!obj_.at(key).is_number()) throw InvalidArgument(fmt::format("{}.{}: expected a number", ctx_, key));
    return obj_.at(key).get<double>();
  }
  int integer(const std::string& key, std::optional<int> def = std::nullopt) {
    used_.insert(key);
    if (!obj_.contains(key)) {
      if (def) return *def;
      throw InvalidArgument(fmt::format("{}: missing '{}'", ctx_, key));
    }
    if (!obj_.at(key).is_number_integer()) throw InvalidArgument(fmt::format("{}.{}: expected an integer", ctx_, key));
    return obj_.at(key).get<int>();
  }
  std::string text(const std::string& key, std::optional<std::string> def = std::nullopt) {
    used_.insert(key);
    if (!obj_.contains(key)) {
      if (def) return *def;
      throw InvalidArgument(fmt::format("{}: missing '{}'", ctx_, key));
    }
    if (!obj_.at(key).is_string()) throw InvalidArgument(fmt::format("{}.{}: expected a string", ctx_, key));
    return obj_.at(key).get<std::string>();
  }
  bool flag(const std::string& key, bool def) {
    used_.insert(key);
    if (!obj_.contains(key)) return def;
    if (!obj_.at(key).is_boolean()) throw InvalidArgument(fmt::format("{}.{}: expected true or false", ctx_, key));
    return obj_.at(key).get<bool>();
  }
  std::vector<int> modes(std::size_t count) {
    used_.insert("modes");
    if (!obj_.contains("modes") || !obj_.at("modes").is_array() || obj_.at("modes").size() != count) {
      throw InvalidArgument(fmt::format("{}: 'modes' must list {} mode indices", ctx_, count));
    }
    std::vector<int> out;
    for (const auto& m : obj_.at("modes")) {
      if (!m.is_number_integer()) throw InvalidArgument(ctx_ + ": mode indices must be integers");
      out.push_back(m.get<int>());
    }
    return out;
  }
  void finish() const {
    for (const auto& [key, value] : obj_.items()) {
      if (!used_.count(key)) throw InvalidArgument(fmt::format("{}: unknown key '{}'", ctx_, key));
    }
  }

 private:
  const Json& obj_;
  std::string ctx_;
  std::set<std::string> used_;
};

PulseSequence parse_segment(const ModeRegister& reg, const Json& obj, const std::string& ctx) {
  SegmentReader r(obj, ctx);
  const std::string type = r.text("type");
  auto require_mode = [&](int m) {
    if (m < 0 || m >= reg.num_modes()) throw InvalidArgument(fmt::format("{}: mode {} is out of range", ctx, m));
    return m;
  };
  auto duration = [&] {
    const double t = r.quantity("duration", kTime);
    if (!(t > 0)) throw InvalidArgument(ctx + ": duration must be > 0");
    return t;
  };
  PulseSequence seq;
  if (type == "uniform_bsb") {
    StaPulseParams s = default_sta_params();
    s.omega0 = r.quantity("omega0", kFreq, s.omega0);
    s.beta = r.number("beta", s.beta);
    s.delta0 = r.number("delta0_ratio", s.delta0 / default_sta_params().omega0) * s.omega0;
    s.half_duration = r.quantity("half_duration", kTime, s.half_duration);
    s.mode = require_mode(r.integer("mode", 0));
    s.mid_inversion = r.flag("mid_inversion", true);
    r.finish();
    return uniform_bsb(reg, s);
  }
  std::optional<OperatorMatrix> h;
  if (type == "carrier") {
    h = carrier(reg, {r.quantity("rabi", kFreq), r.quantity("phase", kAngle, 0.0), r.quantity("detuning", kFreq, 0.0)});
  } else if (type == "sideband") {
    const std::string kind = r.text("kind", "blue");
    if (kind != "blue" && kind != "red") throw InvalidArgument(ctx + ": kind must be blue or red");
    const DriveParams d{r.quantity("rabi", kFreq), r.quantity("phase", kAngle, 0.0), r.quantity("detuning", kFreq, 0.0)};
    const int order = r.integer("order", 1);
    const int mode = require_mode(r.integer("mode", 0));
    std::optional<double> eta;
    if (obj.contains("eta")) eta = r.number("eta");
    h = sideband(reg, kind == "blue" ? SidebandKind::kBlue : SidebandKind::kRed, order, mode, d, eta);
  } else if (type == "cbs") {
    const auto m = r.modes(2);
    h = cbs(reg, r.quantity("xi", kFreq), r.quantity("upsilon", kAngle, 0.0), require_mode(m[0]), require_mode(m[1]),
            r.integer("control_level", 1));
  } else if (type == "rotation") {
    const auto m = r.modes(2);
    h = mode_rotation(reg, r.quantity("rate", kFreq), r.quantity("phase", kAngle, 0.0), require_mode(m[0]), require_mode(m[1]));
  } else if (type == "spin_displacement") {
    const std::string axis = r.text("axis", "x");
    const Axis a = axis == "x" ? Axis::kX : axis == "y" ? Axis::kY : axis == "z" ? Axis::kZ
                                                                    : throw InvalidArgument(ctx + ": axis must be x, y or z");
    h = spin_displacement(reg, r.quantity("rate", kFreq), r.quantity("phase", kAngle, 0.0), a, require_mode(r.integer("mode", 0)));
  } else if (type == "spin_squeeze") {
    h = spin_squeeze(reg, r.quantity("rate", kFreq), r.quantity("phase", kAngle, 0.0), require_mode(r.integer("mode", 0)));
  } else if (type == "dipole_exchange") {
    const auto m = r.modes(2);
    h = dipole_exchange(reg, r.quantity("omega_c", kFreq), require_mode(m[0]), require_mode(m[1]));
  } else if (type == "parametric") {
    const auto m = r.modes(2);
    h = degenerate_parametric(reg, r.quantity("xi", kFreq), r.quantity("detuning", kFreq, 0.0), require_mode(m[0]),
                              require_mode(m[1]));
  } else if (type == "trilinear") {
    const auto m = r.modes(3);
    h = trilinear(reg, r.quantity("xi", kFreq), r.quantity("detuning", kFreq, 0.0), require_mode(m[0]), require_mode(m[1]),
                  require_mode(m[2]));
  } else {
    throw InvalidArgument(fmt::format("{}: unknown segment type '{}'", ctx, type));
  }
  const double t = duration();
  r.finish();
  seq.segments.push_back(PulseSegment::constant(*h, t, type));
  return seq;
}

ResultBundle run_custom(const ExperimentConfig& c, const ParamView& p) {
  const ModeRegister reg = build_register(c.register_spec);
  const int qubit = as_int(p.integer("initial_qubit"), "initial_qubit", 0, 1);
  std::vector<int> occ;
  for (long n : p.integers("initial_fock")) occ.push_back(static_cast<int>(n));
  if (occ.empty()) occ.assign(static_cast<std::size_t>(reg.num_modes()), 0);
  if (static_cast<int>(occ.size()) != reg.num_modes()) throw InvalidArgument("initial_fock needs one entry per mode");
  HybridState s = fock(reg, qubit, occ);

  const Json& list = p.raw("segments");
  if (list.empty()) throw InvalidArgument("custom-sequence needs at least one segment");
  std::vector<PulseSequence> parsed;
  for (std::size_t i = 0; i < list.size(); ++i) parsed.push_back(parse_segment(reg, list[i], fmt::format("segments[{}]", i)));

  StepControl control;
  control.tolerance = p.number("tolerance");
  PropagationOptions options;
  options.leakage_threshold = p.number("leakage_threshold");
  std::vector<OperatorMatrix> numbers;
  for (int m = 0; m < reg.num_modes(); ++m) numbers.push_back(number_op(reg, m));

  ResultBundle b;
  Table t{"segments", {"segment[1]", "time[s]", "population_up[1]"}, {}};
  for (int m = 0; m < reg.num_modes(); ++m) t.columns.push_back(fmt::format("mean_n{}[1]", m));
  t.columns.push_back("leakage[1]");
  auto record = [&](double index, double time) {
    std::vector<double> row{index, time, population_up(s)};
    for (const auto& n : numbers) row.push_back(expectation(s, n).real());
    row.push_back(leakage(s));
    t.rows.push_back(std::move(row));
  };
  double time = 0.0;
  record(0, 0.0);
  for (std::size_t i = 0; i < parsed.size(); ++i) {
    const PulseSequence& seq = parsed[i];
    if (seq.segments.size() == 1 && seq.segments[0].is_static()) {
      s = propagate_static(seq.segments[0].static_part, seq.segments[0].duration, s, options);
    } else {
      s = propagate_pulsed(seq, s, control, options).state;
    }
    time += seq.total_duration();
    record(double(i + 1), time);
  }
  b.tables.push_back(std::move(t));

  Table final{"final_populations", {"qubit[1]"}, {}};
  for (int m = 0; m < reg.num_modes(); ++m) final.columns.push_back(fmt::format("n{}[1]", m));
  final.columns.push_back("probability[1]");
  const double floor = p.number("population_floor");
  for (Eigen::Index i = 0; i < reg.dimension(); ++i) {
    const double prob = std::norm(s[i]);
    if (prob <= floor) continue;
    std::vector<double> row{double(reg.qubit_of(i))};
    for (int n : reg.occupations_of(i)) row.push_back(n);
    row.push_back(prob);
    final.rows.push_back(std::move(row));
  }
  b.tables.push_back(std::move(final));
  b.metrics["final_population_up"] = population_up(s);
  b.metrics["final_leakage"] = leakage(s);
  b.metrics["total_duration_s"] = time;
  b.metrics["norm_error"] = std::abs(s.norm() - 1.0);
  b.check("norm_error", std::abs(s.norm() - 1.0), "<", 1e-10);
  return b;
}

// ---------------------------------------------------------------- registry

struct Entry {
  KindSchema schema;
  std::function<ResultBundle(const ExperimentConfig&, const ParamView&)> run;
};

const std::vector<Entry>& entries() {
  static const std::vector<Entry> list = [] {
    std::vector<Entry> e;
    e.push_back({{"cbs-truth-table", "Fredkin truth table from one controlled beam-splitter pulse, plus ancilla parity checks",
                  false, "shots",
                  {p_qty("xi", kFreq, q(1.0, "rad/s"), "CBS coupling strength; the pulse lasts pi / (2 xi)"),
                   p_int("dim", 5, "Fock levels per mode"),
                   p_int("shots", 0, "samples per input row; 0 gives exact probabilities"),
                   p_int("parity_states", 20, "random states for the ancilla parity check"),
                   p_int("parity_dim", 6, "Fock levels of the random parity states")}},
                 run_cbs});
    e.push_back({{"uniform-bsb", "Shortcut-to-adiabaticity blue-sideband transfer |down,n> -> |up,n+1>", true, "",
                  {p_qty("omega0", kFreq, q(38.5, "kHz"), "peak sideband Rabi rate (includes eta)"),
                   p_num("beta", 0.075, "counter-diabatic weight"),
                   p_num("delta0_ratio", 1.6, "detuning amplitude in units of omega0"),
                   p_qty("half_duration", kTime, q(45.5, "us"), "duration T of each half"),
                   p_bool("mid_inversion", true, "invert and mirror the drive halfway; false runs one passage over 2T"),
                   p_int("mode", 0, "driven mode"), p_int("n_max", 5, "largest initial phonon number"),
                   p_num("tolerance", 1e-10, "integrator error bound per segment"),
                   p_num("leakage_threshold", kDefaultLeakageThreshold, "truncation guard; <= 0 disables")}},
                 run_uniform_bsb});
    e.push_back({{"crossing-scan", "Avoided crossing of |1_a,0_b> and |0_a,2_b> under degenerate parametric coupling", false,
                  "",
                  {p_qty("xi_d", kFreq, q(1.0, "kHz"), "parametric coupling strength"),
                   p_qty("delta_min", kFreq, q(-10.0, "kHz"), "scan start"),
                   p_qty("delta_max", kFreq, q(10.0, "kHz"), "scan end"), p_int("points", 201, "scan points"),
                   p_int("dim_a", 4, "Fock levels of mode a"), p_int("dim_b", 6, "Fock levels of mode b")}},
                 run_crossing});
    e.push_back({{"kerr-peaks", "Cross-Kerr shift of the mode-a blue sideband versus the mode-b phonon number", false, "",
                  {p_qty("xi", kFreq, q(1.0, "kHz"), "parametric coupling strength"),
                   p_qty("delta", kFreq, q(20.0, "kHz"), "parametric detuning 2 omega_b - omega_a"),
                   p_int("n_b_max", 10, "largest mode-b phonon number"), p_int("dim_a", 8, "Fock levels of mode a"),
                   p_int("dim_b", 24, "Fock levels of mode b"),
                   p_qty("probe_rabi", kFreq, q(0.05, "kHz"), "probe sideband Rabi rate"),
                   p_qty("probe_time", kTime, q(10.0, "ms"), "probe duration"),
                   p_qty("scan_min", kFreq, q(-15.0, "kHz"), "laser detuning scan start"),
                   p_qty("scan_max", kFreq, q(1.0, "kHz"), "laser detuning scan end"),
                   p_int("scan_points", 401, "scan points"),
                   p_num("leakage_threshold", kDefaultLeakageThreshold, "truncation guard; <= 0 disables")}},
                 run_kerr});
    e.push_back({{"noon", "NOON-state parity fringe, fitted oscillation order and quantum Fisher information", true, "",
                  {p_int("n", 3, "phonon number N"), p_qty("phi_s", kAngle, q(0.0, "rad"), "relative phase of |0,N>"),
                   p_int("points", 181, "fringe phases over [0, 2 pi]"),
                   p_num("k_max", 10.0, "largest oscillation order searched by the fit")}},
                 run_noon});
    e.push_back({{"gkp", "Approximate square-lattice GKP |0>_L: logical expectations and quadrature marginals", false, "",
                  {p_num("spacing", 2.0 * std::sqrt(kPi), "lattice spacing l in position units"),
                   p_num("squeeze", 0.9, "squeeze parameter r of each tooth"),
                   p_int("half_width", 1, "teeth k = -K..K"), p_num("envelope_variance", 10.0, "Gaussian envelope variance"),
                   p_int("dim", 80, "Fock levels"), p_num("half_range", 8.0, "marginal grid half width"),
                   p_int("samples", 1601, "marginal grid points"),
                   p_num_list("squeeze_scan", Json{0.5, 0.7, 0.9, 1.1}, "squeeze values for the <Z_L> scan"),
                   p_num("leakage_threshold", kDefaultLeakageThreshold, "truncation guard; <= 0 disables")}},
                 run_gkp});
    e.push_back({{"jarzynski", "Two-point work statistics of a dragged oscillator", false, "trials",
                  {p_qty("mass", Dimension::kMass, q(170.936323, "amu"), "ion mass"),
                   p_qty("omega", kFreq, q(10.0, "kHz"), "trap frequency"),
                   p_num("alpha0_squared", 1.73, "|alpha0|^2 of the final displacement, sets f_max"),
                   p_qty("temperature", Dimension::kTemperature, q(316.0, "nK"), "initial temperature"),
                   p_choice("protocol", {"ramp", "sudden", "adiabatic"}, "force protocol"),
                   p_qty("tau", kTime, q(25.0, "us"), "ramp duration"), p_int("trials", 100000, "Monte Carlo trials"),
                   p_int("dim", 64, "Fock levels"),
                   p_num("leakage_threshold", kDefaultLeakageThreshold, "truncation guard; <= 0 disables")}},
                 run_jarzynski});
    e.push_back({{"fridge", "Three-mode trilinear absorption refrigerator from thermal initial states", false, "trajectories",
                  {p_qty("xi", kFreq, q(1.0, "rad/s"), "trilinear coupling"),
                   p_qty("detuning", kFreq, q(0.0, "rad/s"), "omega_h - omega_w - omega_c"),
                   p_num("nbar_h", 0.2, "hot-mode mean occupation"), p_num("nbar_w", 2.0, "work-mode mean occupation"),
                   p_num("nbar_c", 1.0, "cold-mode mean occupation"),
                   p_choice("work_state", {"thermal", "squeezed"}, "work-mode initial state"),
                   p_qty("t_max", kTime, q(100.0, "s"), "final time"), p_int("samples", 401, "time points"),
                   p_int("trajectories", 2000, "sampled trajectories"),
                   p_int("sample_dim", 60, "thermal sampling cutoff per mode")}},
                 run_fridge});
    e.push_back({{"vibronic", "Franck-Condon profile through the Doktorov decomposition", false, "shots",
                  {p_choice("preset", {"so2-cation", "so2-anion", "custom"}, "parameter set"),
                   p_qty_list("omega_initial", kFreq, Json(), "initial frequencies (custom only)"),
                   p_qty_list("omega_final", kFreq, Json(), "final frequencies (custom only)"),
                   p_num_list("alpha", Json(), "dimensionless displacements (custom only)"),
                   p_qty("theta", kAngle, Json(), "Duschinsky rotation angle (custom only)"),
                   p_int("n_max", 29, "largest phonon number per mode in the table"),
                   p_int("padding", 20, "extra Fock levels per mode"),
                   p_qty("fwhm", kFreq, q(50.0, "cm^-1"), "Gaussian broadening, full width at half maximum"),
                   p_qty("spectrum_min", kFreq, q(-500.0, "cm^-1"), "spectrum grid start"),
                   p_qty("spectrum_max", kFreq, q(5000.0, "cm^-1"), "spectrum grid end"),
                   p_qty("spectrum_step", kFreq, q(5.0, "cm^-1"), "spectrum grid step"),
                   p_num("min_intensity", 1e-6, "smallest listed stick"), p_int("shots", 10000, "sampled transitions"),
                   p_num("leakage_threshold", kDefaultLeakageThreshold, "truncation guard; <= 0 disables")}},
                 run_vibronic});
    e.push_back({{"wigner-q-scan", "Q and Wigner functions on a phase-space grid, optional density reconstruction", true, "",
                  {p_choice("state", {"coherent", "fock", "squeezed", "cat", "superposition01"}, "mode state"),
                   p_num("alpha_re", 1.0, "coherent or cat amplitude, real part"),
                   p_num("alpha_im", 0.0, "coherent or cat amplitude, imaginary part"),
                   p_int("fock_n", 1, "Fock state index"), p_num("squeeze", 0.5, "squeeze parameter"),
                   p_choice("quantity", {"both", "wigner", "q"}, "functions to evaluate"),
                   p_choice("method", {"parity", "cbs"}, "Wigner parity route"),
                   p_num("half_range", 3.0, "grid half width in alpha"), p_int("points", 41, "grid points per axis"),
                   p_int("reconstruct_settings", 0, "displacement settings for reconstruction; 0 skips it"),
                   p_num("reconstruct_amplitude", 0.8, "displacement amplitude"),
                   p_int("reconstruct_dim", 6, "reconstructed dimension"),
                   p_int("reconstruct_iterations", 20000, "iteration cap"),
                   p_num("leakage_threshold", kDefaultLeakageThreshold, "truncation guard; <= 0 disables")}},
                 run_phase_space});
    e.push_back({{"custom-sequence", "User pulse sequence on a register from a Fock initial state", true, "",
                  {p_int("initial_qubit", 0, "0 = down, 1 = up"),
                   p_int_list("initial_fock", Json::array(), "occupation per mode (default vacuum)"),
                   p_objects("segments",
                             "objects with 'type' (carrier, sideband, cbs, rotation, spin_displacement, spin_squeeze, "
                             "dipole_exchange, parametric, trilinear, uniform_bsb), a 'duration' and type-specific rates"),
                   p_num("tolerance", 1e-10, "integrator error bound per segment"),
                   p_num("population_floor", 1e-12, "smallest listed final population"),
                   p_num("leakage_threshold", kDefaultLeakageThreshold, "truncation guard; <= 0 disables")}},
                 run_custom});
    return e;
  }();
  return list;
}

}  // namespace

void ResultBundle::check(const std::string& name, double value, const std::string& relation, double limit) {
  bool pass = false;
  if (relation == "<") pass = value < limit;
  else if (relation == "<=") pass = value <= limit;
  else if (relation == ">") pass = value > limit;
  else if (relation == ">=") pass = value >= limit;
  else if (relation == "==") pass = value == limit;
  else throw InvalidArgument("unknown relation " + relation);
  checks.push_back({name, value, relation, limit, pass});
}

bool ResultBundle::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

const std::vector<KindSchema>& experiment_registry() {
  static const std::vector<KindSchema> schemas = [] {
    std::vector<KindSchema> out;
    for (const auto& e : entries()) out.push_back(e.schema);
    return out;
  }();
  return schemas;
}

ResultBundle run_experiment(const ExperimentConfig& config) {
  for (const auto& e : entries()) {
    if (e.schema.kind == config.kind) return e.run(config, ParamView(e.schema, config.params));
  }
  throw InvalidArgument(fmt::format("unknown experiment kind '{}'", config.kind));
}

std::string format_csv(const Table& table) {
  std::string out;
  for (std::size_t i = 0; i < table.columns.size(); ++i) out += (i ? "," : "") + table.columns[i];
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      // Normalize negative zero so sign noise never shows up in diffs.
      out += fmt::format("{}", row[i] == 0.0 ? 0.0 : row[i]);
    }
    out += '\n';
  }
  return out;
}

}  // namespace phonon
