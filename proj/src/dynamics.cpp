// Copyright 2026 The phonon-sim Authors
// SPDX-License-Identifier: Apache-2.0

#include "phonon/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <limits>
#include <optional>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "phonon/errors.hpp"
#include "phonon/parallel.hpp"

namespace phonon {

namespace {

const Complex kI(0.0, 1.0);

double one_norm(const SparseMatrix& m) {
  double best = 0.0;
  for (int k = 0; k < m.outerSize(); ++k) {
    double col = 0.0;
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) col += std::abs(it.value());
    best = std::max(best, col);
  }
  return best;
}

// Connected components of the nonzero pattern, each sorted ascending.
std::vector<std::vector<Eigen::Index>> components(const SparseMatrix& m) {
  const Eigen::Index n = m.rows();
  std::vector<Eigen::Index> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](Eigen::Index x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (int k = 0; k < m.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) {
      if (it.value() == Complex(0.0, 0.0)) continue;
      const Eigen::Index a = find(it.row());
      const Eigen::Index b = find(it.col());
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  }
  std::vector<std::vector<Eigen::Index>> groups;
  std::vector<Eigen::Index> slot(n, -1);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index r = find(i);
    if (slot[r] < 0) {
      slot[r] = static_cast<Eigen::Index>(groups.size());
      groups.emplace_back();
    }
    groups[slot[r]].push_back(i);
  }
  return groups;
}

void require_hermitian(const OperatorMatrix& h) {
  if (!h.hermitian()) {
    throw InvalidArgument(fmt::format("Hamiltonian is not hermitian (defect {:.3e})", h.hermiticity_defect()));
  }
}

}  // namespace

CVector expmv_taylor(const std::function<CVector(const CVector&)>& apply, double norm, double t,
                     const CVector& v, double tolerance) {
  const double scaled = norm * std::abs(t);
  if (scaled == 0.0) return v;
  const auto substeps = static_cast<long>(std::ceil(scaled));
  const double dt = t / static_cast<double>(substeps);
  CVector out = v;
  for (long s = 0; s < substeps; ++s) {
    CVector term = out;
    CVector sum = out;
    bool converged = false;
    for (int k = 1; k <= 80; ++k) {
      term = apply(term) * (-kI * dt / static_cast<double>(k));
      sum += term;
      if (term.lpNorm<Eigen::Infinity>() <= tolerance * sum.lpNorm<Eigen::Infinity>()) {
        converged = true;
        break;
      }
    }
    if (!converged) throw ConvergenceError("Taylor series for exp(-iHt)v did not converge");
    out = std::move(sum);
  }
  return out;
}

Propagator::Propagator(const OperatorMatrix& h, const PropagationOptions& options)
    : h_(h), options_(options) {
  require_hermitian(h_);
  const SparseMatrix& m = h_.matrix();
  for (auto& idx : components(m)) {
    Block b;
    const auto n = static_cast<Eigen::Index>(idx.size());
    b.dense = n <= options_.dense_threshold;
    if (b.dense) {
      CMatrix sub = CMatrix::Zero(n, n);
      for (Eigen::Index c = 0; c < n; ++c) {
        for (SparseMatrix::InnerIterator it(m, idx[c]); it; ++it) {
          // Explicit zeros may link rows outside the component.
          if (it.value() == Complex(0.0, 0.0)) continue;
          const auto pos = std::lower_bound(idx.begin(), idx.end(), it.row());
          sub(pos - idx.begin(), c) = it.value();
        }
      }
      if (n == 1) {
        b.energies = Eigen::VectorXd::Constant(1, sub(0, 0).real());
        b.vectors = CMatrix::Identity(1, 1);
      } else {
        Eigen::SelfAdjointEigenSolver<CMatrix> es(sub);
        if (es.info() != Eigen::Success) throw ConvergenceError("block eigendecomposition failed");
        b.energies = es.eigenvalues();
        b.vectors = es.eigenvectors();
      }
    } else {
      std::vector<Eigen::Triplet<Complex>> trips;
      for (Eigen::Index c = 0; c < n; ++c) {
        for (SparseMatrix::InnerIterator it(m, idx[c]); it; ++it) {
          if (it.value() == Complex(0.0, 0.0)) continue;
          const auto pos = std::lower_bound(idx.begin(), idx.end(), it.row());
          trips.emplace_back(pos - idx.begin(), c, it.value());
        }
      }
      b.sub.resize(n, n);
      b.sub.setFromTriplets(trips.begin(), trips.end());
    }
    b.indices = std::move(idx);
    blocks_.push_back(std::move(b));
  }
}

Eigen::Index Propagator::largest_block() const {
  Eigen::Index best = 0;
  for (const Block& b : blocks_) best = std::max<Eigen::Index>(best, static_cast<Eigen::Index>(b.indices.size()));
  return best;
}

CVector Propagator::apply(const CVector& v, double t) const {
  if (v.size() != h_.dimension()) throw InvalidArgument("vector length does not match Hamiltonian");
  CVector out(v.size());
  for (const Block& b : blocks_) {
    const auto n = static_cast<Eigen::Index>(b.indices.size());
    CVector x(n);
    for (Eigen::Index i = 0; i < n; ++i) x[i] = v[b.indices[i]];
    CVector y;
    if (b.dense) {
      CVector c = b.vectors.adjoint() * x;
      for (Eigen::Index k = 0; k < n; ++k) c[k] *= std::exp(-kI * (b.energies[k] * t));
      y = b.vectors * c;
    } else {
      const SparseMatrix& sub = b.sub;
      y = expmv_taylor([&sub](const CVector& u) { return CVector(sub * u); }, one_norm(sub), t, x,
                       options_.taylor_tolerance);
    }
    for (Eigen::Index i = 0; i < n; ++i) out[b.indices[i]] = y[i];
  }
  return out;
}

HybridState Propagator::evolve(const HybridState& state, double t) const {
  if (!(state.reg() == h_.reg())) throw InvalidArgument("state and Hamiltonian registers differ");
  HybridState out(state.reg(), apply(state.amplitudes(), t));
  check_leakage(out, options_.leakage_threshold, "static propagation");
  return out;
}

CMatrix Propagator::unitary(double t) const {
  const Eigen::Index n = h_.dimension();
  CMatrix u(n, n);
  for (Eigen::Index c = 0; c < n; ++c) u.col(c) = apply(CVector::Unit(n, c), t);
  return u;
}

HybridState propagate_static(const OperatorMatrix& h, double t, const HybridState& state,
                             const PropagationOptions& options) {
  return Propagator(h, options).evolve(state, t);
}

std::vector<HybridState> propagate_batch(const OperatorMatrix& h, double t,
                                         const std::vector<HybridState>& states,
                                         const PropagationOptions& options) {
  const Propagator prop(h, options);
  std::vector<std::optional<HybridState>> slots(states.size());
  parallel_for(states.size(), [&](std::size_t i) { slots[i].emplace(prop.evolve(states[i], t)); });
  std::vector<HybridState> out;
  out.reserve(states.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

PulseSegment PulseSegment::constant(OperatorMatrix h, double duration, std::string label) {
  return PulseSegment{std::move(h), {}, duration, std::move(label)};
}

OperatorMatrix PulseSegment::hamiltonian_at(double t) const {
  SparseMatrix m = static_part.matrix();
  for (const ModulatedTerm& term : modulated) {
    const Complex f = term.envelope(t);
    if (term.add_adjoint) {
      m += term.op.matrix() * f + SparseMatrix(term.op.matrix().adjoint()) * std::conj(f);
    } else {
      m += term.op.matrix() * Complex(f.real(), 0.0);
    }
  }
  return OperatorMatrix(static_part.reg(), std::move(m));
}

double PulseSequence::total_duration() const {
  double t = 0.0;
  for (const PulseSegment& s : segments) t += s.duration;
  return t;
}

PulseSequence reversed(const PulseSequence& seq) {
  PulseSequence out;
  for (auto it = seq.segments.rbegin(); it != seq.segments.rend(); ++it) {
    PulseSegment s{it->static_part * -1.0, {}, it->duration, it->label + "^dag"};
    for (const ModulatedTerm& term : it->modulated) {
      const double d = it->duration;
      auto f = term.envelope;
      s.modulated.push_back({term.op, [f, d](double t) { return -f(d - t); }, term.add_adjoint});
    }
    out.segments.push_back(std::move(s));
  }
  return out;
}

namespace {

// Fourth-order commutator-free Magnus stepper for one modulated segment: two
// exponentials of fixed combinations of H sampled at the Gauss nodes.
class SegmentStepper {
 public:
  explicit SegmentStepper(const PulseSegment& seg, double tolerance)
      : seg_(seg), tolerance_(tolerance) {
    static_norm_ = one_norm(seg.static_part.matrix());
    for (const ModulatedTerm& term : seg.modulated) {
      if (!term.add_adjoint && !term.op.hermitian()) {
        throw InvalidArgument("unpaired modulated term must be hermitian");
      }
      adjoints_.push_back(SparseMatrix(term.op.matrix().adjoint()));
      norms_.push_back(one_norm(term.op.matrix()) + (term.add_adjoint ? one_norm(adjoints_.back()) : 0.0));
    }
  }

  CVector step(double t, double h, const CVector& v) const {
    static const double kNode = std::sqrt(3.0) / 6.0;
    static const double kHeavy = 0.25 + kNode;
    static const double kLight = 0.25 - kNode;
    const std::vector<Complex> f1 = sample(t + (0.5 - kNode) * h);
    const std::vector<Complex> f2 = sample(t + (0.5 + kNode) * h);
    const CVector u = exp_combination(f1, f2, kHeavy, kLight, h, v);
    return exp_combination(f1, f2, kLight, kHeavy, h, u);
  }

 private:
  std::vector<Complex> sample(double t) const {
    std::vector<Complex> f(seg_.modulated.size());
    for (std::size_t k = 0; k < f.size(); ++k) {
      f[k] = seg_.modulated[k].envelope(t);
      if (!std::isfinite(f[k].real()) || !std::isfinite(f[k].imag())) {
        throw InvalidArgument(fmt::format("envelope of segment '{}' is not finite at t = {}", seg_.label, t));
      }
    }
    return f;
  }

  // exp(-i h (w1 H(t1) + w2 H(t2))) v.
  CVector exp_combination(const std::vector<Complex>& f1, const std::vector<Complex>& f2, double w1,
                          double w2, double h, const CVector& v) const {
    const double ws = w1 + w2;
    std::vector<Complex> g(f1.size());
    double norm = std::abs(ws) * static_norm_;
    for (std::size_t k = 0; k < g.size(); ++k) {
      g[k] = w1 * f1[k] + w2 * f2[k];
      norm += std::abs(g[k]) * norms_[k];
    }
    auto apply = [&](const CVector& u) {
      CVector y = ws * (seg_.static_part.matrix() * u);
      for (std::size_t k = 0; k < g.size(); ++k) {
        const ModulatedTerm& term = seg_.modulated[k];
        if (term.add_adjoint) {
          y += g[k] * (term.op.matrix() * u) + std::conj(g[k]) * (adjoints_[k] * u);
        } else {
          y += g[k].real() * (term.op.matrix() * u);
        }
      }
      return y;
    };
    return expmv_taylor(apply, norm, h, v, tolerance_);
  }

  const PulseSegment& seg_;
  double tolerance_;
  double static_norm_ = 0.0;
  std::vector<SparseMatrix> adjoints_;
  std::vector<double> norms_;
};

std::vector<Complex> measure(const CVector& v, const std::vector<OperatorMatrix>& obs) {
  std::vector<Complex> out;
  for (const OperatorMatrix& o : obs) {
    const Complex x = v.dot(o.apply(v));
    out.push_back(o.hermitian() ? Complex(x.real(), 0.0) : x);
  }
  return out;
}

}  // namespace

PulsedResult propagate_pulsed(const PulseSequence& seq, const HybridState& state,
                              const StepControl& control, const PropagationOptions& options,
                              const std::vector<OperatorMatrix>& observables) {
  if (seq.segments.empty()) throw InvalidArgument("pulse sequence is empty");
  PulsedResult result{state, 0, 0, 0.0, {}};
  CVector psi = state.amplitudes();
  double t0 = 0.0;
  if (!observables.empty()) result.trajectory.push_back({0.0, measure(psi, observables)});

  for (const PulseSegment& seg : seq.segments) {
    if (!(seg.duration > 0)) throw InvalidArgument(fmt::format("segment '{}' has non-positive duration", seg.label));
    if (!(seg.static_part.reg() == state.reg())) throw InvalidArgument("segment register differs from state");
    require_hermitian(seg.static_part);

    if (seg.is_static()) {
      psi = Propagator(seg.static_part, options).apply(psi, seg.duration);
      result.steps += 1;
      t0 += seg.duration;
      if (!observables.empty()) result.trajectory.push_back({t0, measure(psi, observables)});
      check_leakage(HybridState(state.reg(), psi), options.leakage_threshold, "pulsed propagation");
      continue;
    }

    const SegmentStepper stepper(seg, options.taylor_tolerance);
    const double d = seg.duration;
    const double h_max = control.max_step > 0 ? std::min(control.max_step, d) : d;
    const double h_min = control.min_step > 0 ? control.min_step : d * 1e-12;
    double h = control.adaptive ? std::min(h_max, d / 16.0) : h_max;
    double t = 0.0;
    while (d - t > 1e-12 * d) {
      if (result.steps + result.rejected >= control.max_steps) {
        throw ConvergenceError(fmt::format("step limit {} reached in segment '{}'", control.max_steps, seg.label));
      }
      h = std::min(h, d - t);
      // Snap the final sliver onto the segment end.
      if (d - t - h < 1e-12 * d) h = d - t;
      if (!control.adaptive) {
        psi = stepper.step(t, h, psi);
        t += h;
        ++result.steps;
        if (!observables.empty()) result.trajectory.push_back({t0 + t, measure(psi, observables)});
        continue;
      }
      const CVector full = stepper.step(t, h, psi);
      const CVector half = stepper.step(t + 0.5 * h, 0.5 * h, stepper.step(t, 0.5 * h, psi));
      const double err = (half - full).norm() / 15.0;
      // Differences at rounding level are accepted regardless of h.
      const double allowed = std::max(control.tolerance * h / d, 64.0 * std::numeric_limits<double>::epsilon());
      if (err <= allowed || h <= h_min) {
        if (err > allowed) {
          throw ConvergenceError(fmt::format("step control failed in segment '{}' at t = {:.3e} s", seg.label, t));
        }
        psi = half;
        t += h;
        ++result.steps;
        result.error_estimate += err;
        if (!observables.empty()) result.trajectory.push_back({t0 + t, measure(psi, observables)});
      } else {
        ++result.rejected;
      }
      const double ratio = err > 0 ? allowed / err : 1e9;
      h *= std::clamp(0.9 * std::pow(ratio, 0.2), 0.2, 4.0);
      h = std::min(h, h_max);
    }
    t0 += d;
    check_leakage(HybridState(state.reg(), psi), options.leakage_threshold, "pulsed propagation");
  }
  result.state = HybridState(state.reg(), psi);
  return result;
}

std::vector<ScanPoint> sideband_spectrum_scan(const std::function<OperatorMatrix(double)>& builder,
                                              const std::vector<double>& detunings,
                                              const HybridState& state, double duration,
                                              const PropagationOptions& options) {
  std::vector<ScanPoint> out(detunings.size());
  parallel_for(detunings.size(), [&](std::size_t i) {
    const OperatorMatrix h = builder(detunings[i]);
    out[i] = {detunings[i], population_up(propagate_static(h, duration, state, options))};
  });
  return out;
}

}  // namespace phonon
