// Copyright 2026 The phonon-sim Authors
// SPDX-License-Identifier: Apache-2.0

#include "phonon/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "phonon/errors.hpp"
#include "phonon/hamiltonians.hpp"
#include "phonon/nnls.hpp"
#include "phonon/parallel.hpp"
#include "phonon/units.hpp"

namespace phonon {

namespace {

using units::kPi;

double gamma_n(const SignalModel& m, int n) {
  return m.gamma0 * std::pow(static_cast<double>(n + 1), m.gamma_exponent);
}

Eigen::MatrixXd design_matrix(const RVector& times, double rabi, const SignalModel& m, int n_max) {
  Eigen::MatrixXd a(times.size(), n_max + 1);
  for (Eigen::Index i = 0; i < times.size(); ++i) {
    const double t = times[i];
    for (int n = 0; n <= n_max; ++n) {
      const double w = 2.0 * std::sqrt(static_cast<double>(n + 1)) * rabi;
      a(i, n) = 0.5 * (1.0 - std::exp(-gamma_n(m, n) * t) * m.contrast * std::cos(w * t));
    }
  }
  return a;
}

void check_times(const RVector& times) {
  if (times.size() == 0) throw InvalidArgument("time grid is empty");
  for (Eigen::Index i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) throw InvalidArgument("times must be strictly increasing");
  }
}

// Amplitudes <n|alpha> for n < dim.
CVector coherent_amplitudes(Complex alpha, int dim) {
  CVector c(dim);
  c[0] = std::exp(-0.5 * std::norm(alpha));
  for (int n = 1; n < dim; ++n) c[n] = c[n - 1] * alpha / std::sqrt(static_cast<double>(n));
  return c;
}

CMatrix pad_density(const CMatrix& rho, int dim) {
  CMatrix out = CMatrix::Zero(dim, dim);
  out.topLeftCorner(rho.rows(), rho.cols()) = rho;
  return out;
}

double top_two_population(const CMatrix& rho) {
  const Eigen::Index d = rho.rows();
  return rho(d - 1, d - 1).real() + rho(d - 2, d - 2).real();
}

double parity_of(const CMatrix& rho) {
  double p = 0.0;
  for (Eigen::Index n = 0; n < rho.rows(); ++n) p += (n % 2 == 0 ? 1.0 : -1.0) * rho(n, n).real();
  return p;
}

// Qubit + mode + vacuum ancilla circuit, kept for reuse over a grid.
class CbsParityCircuit {
 public:
  explicit CbsParityCircuit(int dim)
      : reg_(ModeRegister::with_dims({dim, dim})),
        open_(carrier(reg_, {1.0, 0.0, 0.0})),
        close_(carrier(reg_, {1.0, kPi, 0.0})),
        parity_(cbs(reg_, 1.0, 0.0, 0, 1, 1)) {}

  double operator()(const CVector& mode_state) const {
    const int d = reg_.mode_dim(0);
    if (mode_state.size() != d) throw InvalidArgument("mode state length differs from circuit dimension");
    CVector psi = CVector::Zero(reg_.dimension());
    for (int n = 0; n < d; ++n) psi[reg_.index(0, {n, 0})] = mode_state[n];
    psi.normalize();
    psi = open_.apply(psi, kPi / 2.0);
    // Two CBS pulses of duration pi / (2 xi) with xi = 1.
    psi = parity_.apply(psi, kPi);
    psi = close_.apply(psi, kPi / 2.0);
    const Eigen::Index half = reg_.qubit_stride();
    return psi.head(half).squaredNorm() - psi.tail(half).squaredNorm();
  }

 private:
  ModeRegister reg_;
  Propagator open_;
  Propagator close_;
  Propagator parity_;
};

}  // namespace

void validate(const SignalModel& model) {
  if (!(model.gamma0 >= 0)) throw InvalidArgument("gamma0 must be >= 0");
  if (!(model.contrast > 0 && model.contrast <= 1)) throw InvalidArgument("contrast must be in (0, 1]");
  if (!std::isfinite(model.gamma_exponent)) throw InvalidArgument("gamma exponent must be finite");
}

RVector bsb_signal(const RVector& populations, const RVector& times, double rabi,
                   const SignalModel& model) {
  validate(model);
  check_times(times);
  if (populations.size() == 0) throw InvalidArgument("population vector is empty");
  return design_matrix(times, rabi, model, static_cast<int>(populations.size()) - 1) * populations;
}

InversionResult invert_populations(const RVector& signal, const RVector& times, double rabi,
                                   const SignalModel& model, int n_max) {
  validate(model);
  check_times(times);
  if (signal.size() != times.size()) throw InvalidArgument("signal and time grid lengths differ");
  if (n_max < 0) throw InvalidArgument("n_max must be >= 0");
  if (times.size() < 2 * (n_max + 1)) {
    throw InvalidArgument(fmt::format("{} samples cannot resolve {} populations; need at least {}",
                                      times.size(), n_max + 1, 2 * (n_max + 1)));
  }
  const Eigen::MatrixXd a = design_matrix(times, rabi, model, n_max);
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  const RVector sv = svd.singularValues();
  const double cond = sv[sv.size() - 1] > 0 ? sv[0] / sv[sv.size() - 1] : INFINITY;
  if (!(cond < 1e10)) {
    throw InvalidArgument(fmt::format("population design is ill conditioned (condition {:.3e})", cond));
  }

  NnlsResult fit = nnls(a, signal);
  if (fit.x.sum() > 1.0 + 1e-12) {
    // Pin the total to 1 with a heavily weighted extra row.
    const double w = 1e6 * std::max(1.0, a.norm());
    Eigen::MatrixXd aa(a.rows() + 1, a.cols());
    aa << a, Eigen::RowVectorXd::Constant(a.cols(), w);
    RVector bb(signal.size() + 1);
    bb << signal, w;
    fit = nnls(aa, bb);
  }
  return {fit.x, (a * fit.x - signal).norm(), cond};
}

RVector add_shot_noise(const RVector& probabilities, int shots, Rng& rng) {
  if (shots <= 0) throw InvalidArgument("shots must be > 0");
  RVector out(probabilities.size());
  for (Eigen::Index i = 0; i < probabilities.size(); ++i) {
    const double p = std::clamp(probabilities[i], 0.0, 1.0);
    std::binomial_distribution<int> dist(shots, p);
    out[i] = static_cast<double>(dist(rng)) / shots;
  }
  return out;
}

QubitReadout qubit_readout(const HybridState& state, Rng& rng, double contrast) {
  if (!(contrast > 0 && contrast <= 1)) throw InvalidArgument("contrast must be in (0, 1]");
  const Eigen::Vector2d p = qubit_populations(state);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  if (u(rng) < contrast * p[1]) return {1, project_qubit(state, 1), true};
  const double missed = (1.0 - contrast) * p[1];
  if (missed <= 0 || u(rng) * (p[0] + missed) < p[0]) return {0, project_qubit(state, 0), false};
  return {0, project_qubit(state, 1), false};
}

PhononCounter PhononCounter::ideal(const ModeRegister& reg, int mode) {
  if (mode < 0 || mode >= reg.num_modes()) throw InvalidArgument("readout mode out of range");
  const Eigen::Index dim = reg.dimension();
  const Eigen::Index up = reg.qubit_stride();
  const Eigen::Index step = reg.stride(mode);
  const int top = reg.mode_dim(mode) - 1;
  // Forward transfer |down, n> -> |up, n+1>, |up, n+1> -> -|down, n>.
  CMatrix bsb = CMatrix::Identity(dim, dim);
  for (Eigen::Index i = 0; i < up; ++i) {
    if (reg.occupation_of(i, mode) >= top) continue;
    const Eigen::Index j = i + up + step;
    bsb(i, i) = 0.0;
    bsb(j, j) = 0.0;
    bsb(j, i) = 1.0;
    bsb(i, j) = -1.0;
  }
  const CMatrix pi_pulse = carrier(reg, {1.0, 0.0, 0.0}).dense();
  return PhononCounter(reg, mode, bsb.adjoint() * unitary_from_hermitian(pi_pulse, kPi));
}

PhononCounter PhononCounter::simulated(const ModeRegister& reg, int mode, const StaPulseParams& params,
                                       const StepControl& control) {
  if (mode < 0 || mode >= reg.num_modes()) throw InvalidArgument("readout mode out of range");
  StaPulseParams p = params;
  p.mode = mode;
  const PulseSequence inverse = reversed(uniform_bsb(reg, p));
  const Eigen::Index dim = reg.dimension();
  CMatrix back(dim, dim);
  PropagationOptions opts;
  opts.leakage_threshold = 0.0;  // basis columns at the cutoff are expected
  std::vector<CVector> cols(static_cast<std::size_t>(dim));
  parallel_for(cols.size(), [&](std::size_t c) {
    const HybridState basis(reg, CVector::Unit(dim, static_cast<Eigen::Index>(c)));
    cols[c] = propagate_pulsed(inverse, basis, control, opts).state.amplitudes();
  });
  for (Eigen::Index c = 0; c < dim; ++c) back.col(c) = cols[static_cast<std::size_t>(c)];
  const CMatrix pi_pulse = carrier(reg, {1.0, 0.0, 0.0}).dense();
  return PhononCounter(reg, mode, back * unitary_from_hermitian(pi_pulse, kPi));
}

namespace {

PhononReadout count_once(const HybridState& state, const PhononCounter& counter, Rng& rng,
                         int max_reps, double contrast) {
  if (!(state.reg() == counter.reg())) throw InvalidArgument("state and counter registers differ");
  if (max_reps < 1) throw InvalidArgument("max_reps must be >= 1");
  PhononReadout out;
  HybridState current = state;
  for (int rep = 1; rep <= max_reps; ++rep) {
    current = HybridState(state.reg(), counter.repetition() * current.amplitudes());
    QubitReadout r = qubit_readout(current, rng, contrast);
    if (r.bit == 1) {
      const int n = rep - 1;
      out.record.qubit_bit = 1;
      out.record.phonon_counts = {n};
      out.record.repetitions_used = {rep};
      out.record.motion_destroyed = true;
      if (n < state.reg().mode_dim(counter.mode())) {
        const RVector dist = phonon_distribution(state, counter.mode());
        if (dist[n] > 1e-300) out.collapsed = project_mode(state, counter.mode(), n);
      }
      return out;
    }
    current = std::move(r.state);
  }
  out.record.qubit_bit = 0;
  out.record.phonon_counts = {-1};
  out.record.repetitions_used = {max_reps};
  out.record.truncated = true;
  return out;
}

}  // namespace

PhononReadout projective_phonon_readout(const HybridState& state, const PhononCounter& counter,
                                        std::uint64_t seed, int max_reps, double contrast) {
  Rng rng(seed);
  PhononReadout out = count_once(state, counter, rng, max_reps, contrast);
  out.record.rng_seed = seed;
  return out;
}

PhononReadout sequential_phonon_readout(const HybridState& state,
                                        const std::vector<PhononCounter>& counters,
                                        std::uint64_t seed, int max_reps, double contrast) {
  if (counters.empty()) throw InvalidArgument("no modes to read out");
  Rng rng(seed);
  PhononReadout out;
  out.record.rng_seed = seed;
  std::optional<HybridState> current = state;
  for (const PhononCounter& c : counters) {
    if (!current) {
      out.record.phonon_counts.push_back(-1);
      out.record.repetitions_used.push_back(0);
      continue;
    }
    PhononReadout one = count_once(*current, c, rng, max_reps, contrast);
    out.record.phonon_counts.push_back(one.record.phonon_counts[0]);
    out.record.repetitions_used.push_back(one.record.repetitions_used[0]);
    out.record.truncated = out.record.truncated || one.record.truncated;
    out.record.motion_destroyed = out.record.motion_destroyed || one.record.motion_destroyed;
    out.record.qubit_bit = one.record.qubit_bit;
    current = std::move(one.collapsed);
  }
  out.collapsed = std::move(current);
  return out;
}

std::vector<long> phonon_histogram(const HybridState& state, const PhononCounter& counter, long shots,
                                   std::uint64_t seed, int max_reps, double contrast) {
  if (shots <= 0) throw InvalidArgument("shots must be > 0");
  std::vector<int> outcome(static_cast<std::size_t>(shots));
  parallel_for(outcome.size(), [&](std::size_t i) {
    Rng rng = trajectory_rng(seed, i);
    outcome[i] = count_once(state, counter, rng, max_reps, contrast).record.phonon_counts[0];
  });
  std::vector<long> hist(static_cast<std::size_t>(max_reps) + 1, 0);
  for (int n : outcome) ++hist[n < 0 ? hist.size() - 1 : static_cast<std::size_t>(n)];
  return hist;
}

PhaseSpaceGrid q_function(const HybridState& state, int mode, const std::vector<Complex>& points) {
  const CMatrix rho = mode_density(state, mode);
  const int d = static_cast<int>(rho.rows());
  PhaseSpaceGrid g{points, {}, "Q", d};
  g.values.reserve(points.size());
  for (const Complex& a : points) {
    const CVector c = coherent_amplitudes(a, d);
    g.values.push_back(c.dot(rho * c).real() / kPi);
  }
  return g;
}

PhaseSpaceGrid wigner(const HybridState& state, int mode, const std::vector<Complex>& points,
                      WignerMethod method, double leakage_threshold, int max_dim) {
  const CMatrix rho = mode_density(state, mode);
  const int d = static_cast<int>(rho.rows());
  int work = std::max(d + 10, 16);
  std::vector<CMatrix> shifted;
  while (true) {
    if (work > max_dim) {
      throw LeakageError(fmt::format("Wigner grid needs more than {} Fock levels", max_dim), 1.0);
    }
    const CMatrix padded = pad_density(rho, work);
    shifted.clear();
    double worst = 0.0;
    for (const Complex& a : points) {
      const CMatrix dm = displacement_matrix(work, -a);
      shifted.push_back(dm * padded * dm.adjoint());
      worst = std::max(worst, top_two_population(shifted.back()));
    }
    if (leakage_threshold <= 0 || worst <= leakage_threshold) break;
    work += std::max(10, work / 2);
  }

  PhaseSpaceGrid g{points, std::vector<double>(points.size()), "W", work};
  if (method == WignerMethod::kParity) {
    for (std::size_t i = 0; i < points.size(); ++i) g.values[i] = 2.0 / kPi * parity_of(shifted[i]);
    return g;
  }
  const CbsParityCircuit circuit(work);
  const CMatrix padded = pad_density(rho, work);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(padded);
  for (std::size_t i = 0; i < points.size(); ++i) {
    const CMatrix dm = displacement_matrix(work, -points[i]);
    double p = 0.0;
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
      const double w = es.eigenvalues()[k];
      if (w <= 1e-15) continue;
      p += w * circuit(dm * es.eigenvectors().col(k));
    }
    g.values[i] = 2.0 / kPi * p;
  }
  return g;
}

double cbs_ancilla_parity(const CVector& mode_state) {
  return CbsParityCircuit(static_cast<int>(mode_state.size()))(mode_state);
}

std::vector<RVector> displaced_populations(const CMatrix& rho, const std::vector<Complex>& alphas,
                                           int n_meas, int pad) {
  if (n_meas < 1) throw InvalidArgument("n_meas must be >= 1");
  const int work = static_cast<int>(rho.rows()) + std::max(pad, n_meas);
  const CMatrix padded = pad_density(rho, work);
  std::vector<RVector> out;
  for (const Complex& a : alphas) {
    const CMatrix dm = displacement_matrix(work, a);
    const CMatrix s = dm * padded * dm.adjoint();
    RVector p(n_meas);
    for (int n = 0; n < n_meas; ++n) p[n] = s(n, n).real();
    out.push_back(p);
  }
  return out;
}

std::vector<Complex> ring_displacements(int count, double amplitude) {
  if (count < 1) throw InvalidArgument("need at least one displacement");
  std::vector<Complex> out;
  for (int k = 0; k < count; ++k) out.push_back(std::polar(amplitude, 2.0 * kPi * k / count));
  return out;
}

double trace_distance(const CMatrix& a, const CMatrix& b) {
  const CMatrix diff = 0.5 * ((a - b) + (a - b).adjoint());
  return 0.5 * Eigen::SelfAdjointEigenSolver<CMatrix>(diff, Eigen::EigenvaluesOnly).eigenvalues().cwiseAbs().sum();
}

DensityReconstruction reconstruct_density(const std::vector<RVector>& measured,
                                          const std::vector<Complex>& alphas, int dim,
                                          int max_iterations, double tolerance, int pad) {
  if (measured.size() != alphas.size()) throw InvalidArgument("one population vector per displacement");
  if (alphas.size() < 8) throw InvalidArgument("reconstruction needs at least 8 displacement settings");
  if (dim < 2) throw InvalidArgument("reconstruction dimension must be >= 2");

  // POVM vectors u_{k,n} = P D(alpha_k)^dagger |n>, so p_{k,n} = u^dagger rho u.
  std::vector<CVector> u;
  std::vector<double> f;
  for (std::size_t k = 0; k < alphas.size(); ++k) {
    const int work = dim + std::max(pad, static_cast<int>(measured[k].size()));
    const CMatrix dag = displacement_matrix(work, alphas[k]).adjoint();
    for (Eigen::Index n = 0; n < measured[k].size(); ++n) {
      u.push_back(dag.col(n).head(dim));
      f.push_back(std::max(0.0, measured[k][n]));
    }
  }
  CMatrix g = CMatrix::Zero(dim, dim);
  for (const CVector& v : u) g += v * v.adjoint();
  Eigen::SelfAdjointEigenSolver<CMatrix> ges(g);
  if (ges.eigenvalues().minCoeff() <= 1e-12) {
    throw InvalidArgument("displacement settings do not span the reconstruction space");
  }
  const CMatrix g_inv_sqrt =
      ges.eigenvectors() * ges.eigenvalues().cwiseInverse().cwiseSqrt().asDiagonal() * ges.eigenvectors().adjoint();

  DensityReconstruction out;
  out.rho = CMatrix::Identity(dim, dim) / static_cast<double>(dim);
  for (int it = 0; it < max_iterations; ++it) {
    CMatrix r = CMatrix::Zero(dim, dim);
    for (std::size_t i = 0; i < u.size(); ++i) {
      if (f[i] == 0.0) continue;
      const double p = std::max(u[i].dot(out.rho * u[i]).real(), 1e-300);
      r += (f[i] / p) * (u[i] * u[i].adjoint());
    }
    CMatrix next = g_inv_sqrt * r * out.rho * r * g_inv_sqrt;
    next = 0.5 * (next + next.adjoint()).eval();
    next /= next.trace().real();
    out.last_change = trace_distance(next, out.rho);
    out.rho = std::move(next);
    out.iterations = it + 1;
    if (out.last_change < tolerance) {
      out.converged = true;
      break;
    }
  }
  return out;
}

}  // namespace phonon
