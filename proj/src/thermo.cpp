// Copyright 2026 The phonon-sim Authors
// SPDX-License-Identifier: Apache-2.0

#include "phonon/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <random>
#include <utility>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "phonon/dynamics.hpp"
#include "phonon/errors.hpp"
#include "phonon/hamiltonians.hpp"
#include "phonon/parallel.hpp"
#include "phonon/units.hpp"

namespace phonon {

namespace {

using units::kBoltzmann;
using units::kHbar;

double coupling_rate(const ThermoParams& p) {
  const double x0 = std::sqrt(kHbar / (2.0 * p.mass * p.omega));
  return p.force_max * x0 / kHbar;
}

// Unnormalized geometric weights p_n = (1 - q) q^n for n < dim, q = nbar / (1 + nbar).
RVector geometric_weights(double nbar, int dim) {
  RVector w(dim);
  const double q = nbar / (1.0 + nbar);
  double v = 1.0 - q;
  for (int n = 0; n < dim; ++n) {
    w[n] = v;
    v *= q;
  }
  return w;
}

// Squeezed-vacuum occupation distribution with mean nbar, for n < dim.
RVector squeezed_weights(double nbar, int dim) {
  RVector w = RVector::Zero(dim);
  const double r = std::asinh(std::sqrt(nbar));
  const double t = std::tanh(r);
  for (int k = 0; 2 * k < dim; ++k) {
    if (t == 0.0 && k > 0) break;
    const double log_p = std::lgamma(2.0 * k + 1) - 2.0 * k * std::log(2.0) - 2.0 * std::lgamma(k + 1.0) +
                         (k > 0 ? 2.0 * k * std::log(t) : 0.0) - std::log(std::cosh(r));
    w[2 * k] = std::exp(log_p);
  }
  return w;
}

int sample_index(const std::vector<double>& cumulative, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, cumulative.back());
  const double x = u(rng);
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), x);
  return static_cast<int>(std::min<std::ptrdiff_t>(it - cumulative.begin(),
                                                   static_cast<std::ptrdiff_t>(cumulative.size()) - 1));
}

std::vector<double> cumulative_of(const RVector& w) {
  std::vector<double> c(static_cast<std::size_t>(w.size()));
  double s = 0.0;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    s += w[i];
    c[static_cast<std::size_t>(i)] = s;
  }
  return c;
}

// One invariant block of the trilinear Hamiltonian: fixed A = n_h + n_w, B = n_h + n_c,
// basis ordered by n_h = 0..min(A, B).
struct TrilinearBlock {
  int a = 0;
  int b = 0;
  Eigen::VectorXd energies;
  Eigen::MatrixXd vectors;  // real symmetric tridiagonal H

  TrilinearBlock(int a_, int b_, double xi, double delta) : a(a_), b(b_) {
    const int s = std::min(a, b) + 1;
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(s, s);
    for (int nh = 0; nh < s; ++nh) {
      h(nh, nh) = delta * nh;
      if (nh + 1 < s) {
        const double v = xi * std::sqrt(static_cast<double>(nh + 1) * (a - nh) * (b - nh));
        h(nh + 1, nh) = v;
        h(nh, nh + 1) = v;
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    energies = es.eigenvalues();
    vectors = es.eigenvectors();
  }

  // <n_h>(t) for the input basis state with n_h = start; returns the largest norm drift.
  double occupation_h(int start, const std::vector<double>& times, std::vector<double>& out) const {
    const Eigen::Index s = energies.size();
    const Eigen::VectorXd c = vectors.row(start).transpose();
    out.assign(times.size(), 0.0);
    double drift = 0.0;
    for (std::size_t k = 0; k < times.size(); ++k) {
      Eigen::VectorXcd phased(s);
      for (Eigen::Index j = 0; j < s; ++j) phased[j] = c[j] * std::exp(Complex(0.0, -energies[j] * times[k]));
      const Eigen::VectorXcd psi = vectors.cast<Complex>() * phased;
      double nh = 0.0;
      for (Eigen::Index j = 0; j < s; ++j) nh += static_cast<double>(j) * std::norm(psi[j]);
      out[k] = nh;
      drift = std::max(drift, std::abs(psi.squaredNorm() - 1.0));
    }
    return drift;
  }
};

double grid_average(const std::vector<double>& t, const std::vector<double>& y) {
  if (t.size() < 2 || t.back() <= t.front()) return y.front();
  double s = 0.0;
  for (std::size_t i = 1; i < t.size(); ++i) s += 0.5 * (y[i] + y[i - 1]) * (t[i] - t[i - 1]);
  return s / (t.back() - t.front());
}

}  // namespace

void validate(const ThermoParams& p) {
  if (!(p.mass > 0) || !(p.omega > 0)) throw InvalidArgument("mass and trap frequency must be > 0");
  if (!(p.temperature > 0)) throw InvalidArgument("temperature must be > 0");
  if (!(p.tau >= 0)) throw InvalidArgument("ramp duration must be >= 0");
  if (p.protocol == WorkProtocol::kRamp && !(p.tau > 0)) throw InvalidArgument("ramp protocol needs tau > 0");
  if (p.trials < 1) throw InvalidArgument("trials must be >= 1");
  if (p.dim < 4) throw InvalidArgument("dimension must be >= 4");
  if (!std::isfinite(p.force_max)) throw InvalidArgument("force must be finite");
}

double force_for_displacement(double mass, double omega, double alpha0) {
  const double x0 = std::sqrt(kHbar / (2.0 * mass * omega));
  return alpha0 * kHbar * omega / x0;
}

double free_energy_change(const ThermoParams& p) {
  return -p.force_max * p.force_max / (2.0 * p.mass * p.omega * p.omega);
}

double inverse_temperature(const ThermoParams& p) { return 1.0 / (kBoltzmann * p.temperature); }

Eigen::MatrixXd work_transition_matrix(const ThermoParams& p) {
  validate(p);
  const int d = p.dim;
  const double g = coupling_rate(p);
  const Complex alpha_f(-g / p.omega, 0.0);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(d, d);
  if (p.protocol == WorkProtocol::kAdiabatic || g == 0.0) return Eigen::MatrixXd::Identity(d, d);

  // Final eigenstates are D(alpha_f)|m>; populations come from undisplacing in a padded space.
  const int work = d + 40;
  const CMatrix undisplace = displacement_matrix(work, -alpha_f);
  auto fill_row = [&](int n, const CVector& mode_state) {
    CVector padded = CVector::Zero(work);
    padded.head(d) = mode_state;
    const CVector back = undisplace * padded;
    for (int m = 0; m < d; ++m) out(n, m) = std::norm(back[m]);
  };

  if (p.protocol == WorkProtocol::kSudden) {
    for (int n = 0; n < d; ++n) fill_row(n, CVector::Unit(d, n));
    return out;
  }

  const ModeRegister reg = ModeRegister::with_dims({d});
  const OperatorMatrix h0 = number_op(reg, 0) * p.omega;
  const OperatorMatrix x = raise_op(reg, 0) + lower_op(reg, 0);
  PulseSegment seg{h0, {}, p.tau, "force ramp"};
  const double tau = p.tau;
  seg.modulated.push_back({x, [g, tau](double t) { return Complex(g * t / tau, 0.0); }, false});
  const PulseSequence seq{{seg}};
  PropagationOptions opts;
  opts.leakage_threshold = 0.0;  // checked per row against the row's own tail below
  std::vector<CVector> rows(static_cast<std::size_t>(d));
  parallel_for(rows.size(), [&](std::size_t n) {
    const HybridState in = fock(reg, 0, {static_cast<int>(n)});
    rows[n] = propagate_pulsed(seq, in, {}, opts).state.amplitudes().head(d);
  });
  for (int n = 0; n < d; ++n) fill_row(n, rows[static_cast<std::size_t>(n)]);
  return out;
}

JarzynskiResult jarzynski_run(const ThermoParams& p, std::uint64_t seed) {
  validate(p);
  const double beta = inverse_temperature(p);
  const double hw = kHbar * p.omega;
  const double nbar = 1.0 / std::expm1(beta * hw);
  JarzynskiResult r;
  r.delta_f = free_energy_change(p);
  r.beta_delta_f = beta * r.delta_f;

  const RVector weights = geometric_weights(nbar, p.dim);
  r.thermal_tail = std::max(0.0, 1.0 - weights.sum());
  // Rows whose thermal weight matters must not leak past the truncation.
  const Eigen::MatrixXd pmn = work_transition_matrix(p);
  for (int n = 0; n < p.dim; ++n) {
    const double lost = 1.0 - pmn.row(n).sum();
    if (weights[n] > 1e-12 && p.leakage_threshold > 0 && lost > p.leakage_threshold) {
      throw LeakageError(fmt::format("work statistics leak {:.3e} from Fock {}; increase dim", lost, n), lost);
    }
  }

  r.exact = 0.0;
  for (int n = 0; n < p.dim; ++n) {
    for (int m = 0; m < p.dim; ++m) r.exact += weights[n] * pmn(n, m) * std::exp(-beta * hw * (m - n));
  }
  r.exact /= weights.sum();

  const std::vector<double> initial = cumulative_of(weights);
  std::vector<std::vector<double>> final_rows(static_cast<std::size_t>(p.dim));
  for (int n = 0; n < p.dim; ++n) final_rows[static_cast<std::size_t>(n)] = cumulative_of(pmn.row(n).transpose());

  r.work.assign(static_cast<std::size_t>(p.trials), 0.0);
  parallel_for(r.work.size(), [&](std::size_t i) {
    Rng rng = trajectory_rng(seed, i);
    const int n = sample_index(initial, rng);
    const int m = sample_index(final_rows[static_cast<std::size_t>(n)], rng);
    r.work[i] = hw * (m - n) + r.delta_f;
  });

  // Sums in trial order keep the result independent of the thread count.
  double s = 0.0;
  double s2 = 0.0;
  double e = 0.0;
  for (double w : r.work) {
    const double y = std::exp(-beta * (w - r.delta_f));
    s += y;
    s2 += y * y;
    e += std::exp(-beta * w);
  }
  const double n = static_cast<double>(p.trials);
  r.dissipated = s / n;
  r.estimator = e / n;
  r.minus_log = -std::log(r.dissipated);
  const double var = std::max(0.0, s2 / n - r.dissipated * r.dissipated) * n / std::max(1.0, n - 1.0);
  r.standard_error = std::sqrt(var / n) / r.dissipated;
  return r;
}

void validate(const FridgeConfig& c) {
  if (!(c.xi > 0)) throw InvalidArgument("trilinear rate must be > 0");
  if (!(c.nbar_h >= 0) || !(c.nbar_w >= 0) || !(c.nbar_c >= 0)) throw InvalidArgument("occupations must be >= 0");
  if (!(c.t_max >= 0)) throw InvalidArgument("t_max must be >= 0");
  if (c.samples < 2) throw InvalidArgument("need at least 2 time samples");
  if (c.trajectories < 1) throw InvalidArgument("trajectories must be >= 1");
  if (c.sample_dim < 2) throw InvalidArgument("sample_dim must be >= 2");
}

RVector work_mode_distribution(const FridgeConfig& c) {
  return c.work_state == WorkModeState::kSqueezed ? squeezed_weights(c.nbar_w, c.sample_dim)
                                                  : geometric_weights(c.nbar_w, c.sample_dim);
}

bool refrigeration_condition(double nbar_h, double nbar_w, double nbar_c) {
  return nbar_w * nbar_c * (1.0 + nbar_h) > nbar_h * (1.0 + nbar_w) * (1.0 + nbar_c);
}

FridgeResult fridge_run(const FridgeConfig& c, std::uint64_t seed) {
  validate(c);
  const int d = c.sample_dim;
  const RVector ph = geometric_weights(c.nbar_h, d);
  const RVector pw = work_mode_distribution(c);
  const RVector pc = geometric_weights(c.nbar_c, d);

  FridgeResult r;
  r.refrigeration_condition = refrigeration_condition(c.nbar_h, c.nbar_w, c.nbar_c);
  for (int s = 0; s < c.samples; ++s) r.times.push_back(c.t_max * s / (c.samples - 1));
  const std::size_t nt = r.times.size();

  // Initial Fock inputs that enter the exact average, and the trajectory draws.
  struct Input {
    int nh, nw, nc;
    double weight;
  };
  std::vector<Input> inputs;
  double kept = 0.0;
  for (int nh = 0; nh < d; ++nh) {
    for (int nw = 0; nw < d; ++nw) {
      for (int nc = 0; nc < d; ++nc) {
        const double w = ph[nh] * pw[nw] * pc[nc];
        if (w < 1e-14) continue;
        inputs.push_back({nh, nw, nc, w});
        kept += w;
      }
    }
  }
  r.truncated_weight = std::max(0.0, 1.0 - kept);

  const std::vector<double> ch = cumulative_of(ph);
  const std::vector<double> cw = cumulative_of(pw);
  const std::vector<double> cc = cumulative_of(pc);
  std::vector<Input> draws(static_cast<std::size_t>(c.trajectories));
  for (std::size_t i = 0; i < draws.size(); ++i) {
    Rng rng = trajectory_rng(seed, i);
    const int nh = sample_index(ch, rng);
    const int nw = sample_index(cw, rng);
    const int nc = sample_index(cc, rng);
    draws[i] = {nh, nw, nc, 1.0};
  }

  // Diagonalize every block that is needed, once.
  std::map<std::pair<int, int>, std::size_t> block_index;
  std::vector<std::pair<int, int>> keys;
  auto note = [&](const Input& in) {
    const std::pair<int, int> key{in.nh + in.nw, in.nh + in.nc};
    if (block_index.emplace(key, keys.size()).second) keys.push_back(key);
  };
  for (const Input& in : inputs) note(in);
  for (const Input& in : draws) note(in);
  std::vector<std::optional<TrilinearBlock>> blocks(keys.size());
  parallel_for(keys.size(), [&](std::size_t k) { blocks[k].emplace(keys[k].first, keys[k].second, c.xi, c.detuning); });

  auto block_of = [&](const Input& in) -> const TrilinearBlock& {
    return *blocks[block_index.at({in.nh + in.nw, in.nh + in.nc})];
  };

  // Exact average. Inside a block the initial state is diagonal with weights p, so
  // <n_h>(t) = sum_kl C_kl cos((E_k - E_l) t) with C = (V^T P V) o (V^T N V).
  std::vector<RVector> block_weights(keys.size());
  double m_h = 0.0;
  double m_w = 0.0;
  double m_c = 0.0;
  for (const Input& in : inputs) {
    const std::size_t k = block_index.at({in.nh + in.nw, in.nh + in.nc});
    RVector& bw = block_weights[k];
    if (bw.size() == 0) bw = RVector::Zero(blocks[k]->energies.size());
    const double w = in.weight / kept;
    bw[in.nh] += w;
    m_h += w * in.nh;
    m_w += w * in.nw;
    m_c += w * in.nc;
  }
  const double dt = nt > 1 ? r.times[1] - r.times[0] : 0.0;
  std::vector<std::vector<double>> partial(keys.size());
  std::vector<double> dephased(keys.size(), 0.0);
  parallel_for(keys.size(), [&](std::size_t k) {
    if (block_weights[k].size() == 0) return;
    const TrilinearBlock& b = *blocks[k];
    const Eigen::Index n = b.energies.size();
    const RVector levels = RVector::LinSpaced(n, 0.0, static_cast<double>(n - 1));
    const Eigen::MatrixXd mp = b.vectors.transpose() * block_weights[k].asDiagonal() * b.vectors;
    const Eigen::MatrixXd mn = b.vectors.transpose() * levels.asDiagonal() * b.vectors;
    const Eigen::MatrixXd coeff = mp.cwiseProduct(mn);
    std::vector<double>& out = partial[k];
    out.assign(nt, coeff.trace());
    dephased[k] = coeff.trace();
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = i + 1; j < n; ++j) {
        // Uniform grid: advance the phase by one fixed rotation per sample.
        const Complex step = std::polar(1.0, (b.energies[i] - b.energies[j]) * dt);
        Complex z(1.0, 0.0);
        const double c2 = 2.0 * coeff(i, j);
        for (std::size_t t = 0; t < nt; ++t) {
          out[t] += c2 * z.real();
          z *= step;
        }
      }
    }
  });
  r.n_h.assign(nt, 0.0);
  double inf_h = 0.0;
  for (std::size_t k = 0; k < keys.size(); ++k) {
    if (partial[k].empty()) continue;
    for (std::size_t t = 0; t < nt; ++t) r.n_h[t] += partial[k][t];
    inf_h += dephased[k];
  }
  r.n_w.resize(nt);
  r.n_c.resize(nt);
  for (std::size_t t = 0; t < nt; ++t) {
    r.n_w[t] = m_w - (r.n_h[t] - m_h);
    r.n_c[t] = m_c - (r.n_h[t] - m_h);
  }
  const double inf_c = m_c - (inf_h - m_h);

  // Trajectories.
  std::vector<std::vector<double>> traj(draws.size());
  std::vector<double> drift(draws.size());
  parallel_for(draws.size(), [&](std::size_t i) {
    drift[i] = block_of(draws[i]).occupation_h(draws[i].nh, r.times, traj[i]);
  });
  r.traj_n_h.assign(nt, 0.0);
  r.traj_n_w.assign(nt, 0.0);
  r.traj_n_c.assign(nt, 0.0);
  const double inv = 1.0 / static_cast<double>(draws.size());
  for (std::size_t i = 0; i < draws.size(); ++i) {
    const Input& in = draws[i];
    for (std::size_t k = 0; k < nt; ++k) {
      const double shift = traj[i][k] - in.nh;
      r.traj_n_h[k] += inv * traj[i][k];
      r.traj_n_w[k] += inv * (in.nw - shift);
      r.traj_n_c[k] += inv * (in.nc - shift);
    }
    r.norm_defect = std::max(r.norm_defect, drift[i]);
  }

  r.initial_n_c = r.n_c.front();
  r.time_average_n_c = grid_average(r.times, r.n_c);
  r.traj_time_average_n_c = grid_average(r.times, r.traj_n_c);
  r.infinite_time_n_c = inf_c;
  const auto it = std::min_element(r.n_c.begin(), r.n_c.end());
  r.min_n_c = *it;
  r.t_min = r.times[static_cast<std::size_t>(it - r.n_c.begin())];
  return r;
}

}  // namespace phonon
