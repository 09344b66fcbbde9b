// Copyright 2026 The phonon-sim Authors
// SPDX-License-Identifier: Apache-2.0

#include "phonon/hilbert.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "phonon/errors.hpp"
#include "phonon/hamiltonians.hpp"

namespace phonon {

namespace {

constexpr double kHermitianTolerance = 1e-12;

double max_abs_entry(const SparseMatrix& m) {
  double best = 0.0;
  for (int k = 0; k < m.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) best = std::max(best, std::abs(it.value()));
  }
  return best;
}

void require_same_register(const ModeRegister& a, const ModeRegister& b, const char* what) {
  if (!(a == b)) throw InvalidArgument(fmt::format("{}: register mismatch", what));
}

}  // namespace

ModeRegister::ModeRegister(QubitSpec qubit, std::vector<ModeSpec> modes)
    : qubit_(qubit), modes_(std::move(modes)) {
  if (qubit_.splitting < 0) throw InvalidArgument("qubit splitting must be >= 0");
  strides_.assign(modes_.size(), 1);
  Eigen::Index total = 1;
  for (int m = num_modes() - 1; m >= 0; --m) {
    const ModeSpec& spec = modes_[m];
    if (spec.dim < 2) throw InvalidArgument(fmt::format("mode {}: dim must be >= 2", m));
    if (!(spec.frequency > 0)) throw InvalidArgument(fmt::format("mode {}: frequency must be > 0", m));
    if (!(spec.lamb_dicke > 0 && spec.lamb_dicke < 1)) {
      throw InvalidArgument(fmt::format("mode {}: lamb_dicke must lie in (0, 1)", m));
    }
    strides_[m] = total;
    total *= spec.dim;
  }
  dimension_ = 2 * total;
}

ModeRegister ModeRegister::with_dims(const std::vector<int>& dims) {
  std::vector<ModeSpec> modes;
  for (int d : dims) modes.push_back(ModeSpec{1.0, 0.1, d});
  return ModeRegister(QubitSpec{}, std::move(modes));
}

int ModeRegister::mode_dim(int mode) const {
  if (mode < 0 || mode >= num_modes()) throw InvalidArgument(fmt::format("mode {} out of range", mode));
  return modes_[mode].dim;
}

Eigen::Index ModeRegister::stride(int mode) const {
  if (mode < 0 || mode >= num_modes()) throw InvalidArgument(fmt::format("mode {} out of range", mode));
  return strides_[mode];
}

Eigen::Index ModeRegister::index(int qubit, const std::vector<int>& occupations) const {
  if (qubit != 0 && qubit != 1) throw InvalidArgument("qubit level must be 0 or 1");
  if (static_cast<int>(occupations.size()) != num_modes()) {
    throw InvalidArgument("occupation list length must equal the number of modes");
  }
  Eigen::Index i = qubit * qubit_stride();
  for (int m = 0; m < num_modes(); ++m) {
    if (occupations[m] < 0 || occupations[m] >= modes_[m].dim) {
      throw InvalidArgument(fmt::format("occupation {} outside mode {} (dim {})", occupations[m], m,
                                        modes_[m].dim));
    }
    i += occupations[m] * strides_[m];
  }
  return i;
}

int ModeRegister::qubit_of(Eigen::Index i) const { return static_cast<int>(i / qubit_stride()); }

int ModeRegister::occupation_of(Eigen::Index i, int mode) const {
  return static_cast<int>((i / stride(mode)) % modes_[mode].dim);
}

std::vector<int> ModeRegister::occupations_of(Eigen::Index i) const {
  std::vector<int> out(modes_.size());
  for (int m = 0; m < num_modes(); ++m) out[m] = static_cast<int>((i / strides_[m]) % modes_[m].dim);
  return out;
}

std::vector<int> ModeRegister::lamb_dicke_warnings() const {
  std::vector<int> out;
  for (int m = 0; m < num_modes(); ++m) {
    const double d = modes_[m].dim;
    if (modes_[m].lamb_dicke * d * d >= 1.0) out.push_back(m);
  }
  return out;
}

bool ModeRegister::operator==(const ModeRegister& other) const {
  if (qubit_.splitting != other.qubit_.splitting || modes_.size() != other.modes_.size()) return false;
  for (std::size_t m = 0; m < modes_.size(); ++m) {
    const ModeSpec& a = modes_[m];
    const ModeSpec& b = other.modes_[m];
    if (a.dim != b.dim || a.frequency != b.frequency || a.lamb_dicke != b.lamb_dicke) return false;
  }
  return true;
}

HybridState::HybridState(ModeRegister reg, CVector amplitudes)
    : reg_(std::move(reg)), amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() != reg_.dimension()) {
    throw InvalidArgument(fmt::format("amplitude vector has length {}, register needs {}",
                                      amplitudes_.size(), reg_.dimension()));
  }
  const double n = amplitudes_.norm();
  if (!(n > 0) || !std::isfinite(n)) throw InvalidArgument("state has zero or non-finite norm");
  amplitudes_ /= n;
}

OperatorMatrix::OperatorMatrix(ModeRegister reg, SparseMatrix matrix)
    : reg_(std::move(reg)), matrix_(std::move(matrix)) {
  if (matrix_.rows() != reg_.dimension() || matrix_.cols() != reg_.dimension()) {
    throw InvalidArgument("operator dimension does not match register");
  }
  matrix_.makeCompressed();
  hermitian_ = hermiticity_defect() < kHermitianTolerance;
}

OperatorMatrix::OperatorMatrix(ModeRegister reg, SparseMatrix matrix, bool hermitian)
    : OperatorMatrix(std::move(reg), std::move(matrix)) {
  if (hermitian && !hermitian_) {
    throw InvalidArgument(fmt::format("operator flagged hermitian has |M - M^dag| = {:.3e}",
                                      hermiticity_defect()));
  }
  hermitian_ = hermitian;
}

OperatorMatrix OperatorMatrix::zero(const ModeRegister& reg) {
  return OperatorMatrix(reg, SparseMatrix(reg.dimension(), reg.dimension()), true);
}

OperatorMatrix OperatorMatrix::identity(const ModeRegister& reg) {
  SparseMatrix id(reg.dimension(), reg.dimension());
  id.setIdentity();
  return OperatorMatrix(reg, std::move(id), true);
}

OperatorMatrix OperatorMatrix::adjoint() const {
  SparseMatrix adj = matrix_.adjoint();
  return OperatorMatrix(reg_, std::move(adj));
}

double OperatorMatrix::hermiticity_defect() const {
  SparseMatrix diff = matrix_ - SparseMatrix(matrix_.adjoint());
  return max_abs_entry(diff);
}

OperatorMatrix OperatorMatrix::operator+(const OperatorMatrix& other) const {
  require_same_register(reg_, other.reg_, "operator sum");
  return OperatorMatrix(reg_, SparseMatrix(matrix_ + other.matrix_));
}

OperatorMatrix OperatorMatrix::operator-(const OperatorMatrix& other) const {
  require_same_register(reg_, other.reg_, "operator difference");
  return OperatorMatrix(reg_, SparseMatrix(matrix_ - other.matrix_));
}

OperatorMatrix OperatorMatrix::operator*(const OperatorMatrix& other) const {
  require_same_register(reg_, other.reg_, "operator product");
  return OperatorMatrix(reg_, SparseMatrix((matrix_ * other.matrix_).pruned()));
}

OperatorMatrix OperatorMatrix::operator*(Complex s) const {
  return OperatorMatrix(reg_, SparseMatrix(matrix_ * s));
}

OperatorMatrix OperatorMatrix::operator*(double s) const {
  return OperatorMatrix(reg_, SparseMatrix(matrix_ * Complex(s, 0.0)));
}

OperatorMatrix operator*(double s, const OperatorMatrix& op) { return op * s; }
OperatorMatrix operator*(Complex s, const OperatorMatrix& op) { return op * s; }

OperatorMatrix commutator(const OperatorMatrix& a, const OperatorMatrix& b) { return a * b - b * a; }

Ladder mode_ladder(int dim) {
  if (dim < 2) throw InvalidArgument(fmt::format("invalid dimension {}: need dim >= 2", dim));
  Ladder l;
  l.raise = CMatrix::Zero(dim, dim);
  for (int n = 0; n + 1 < dim; ++n) l.raise(n + 1, n) = std::sqrt(static_cast<double>(n + 1));
  l.lower = l.raise.adjoint();
  l.number = CMatrix::Zero(dim, dim);
  l.parity = CMatrix::Zero(dim, dim);
  for (int n = 0; n < dim; ++n) {
    l.number(n, n) = static_cast<double>(n);
    l.parity(n, n) = (n % 2 == 0) ? 1.0 : -1.0;
  }
  return l;
}

namespace qubit_ops {
CMatrix sigma_plus() {
  CMatrix m = CMatrix::Zero(2, 2);
  m(1, 0) = 1.0;
  return m;
}
CMatrix sigma_minus() { return sigma_plus().adjoint(); }
CMatrix sigma_x() { return sigma_plus() + sigma_minus(); }
CMatrix sigma_y() { return Complex(0, -1) * (sigma_plus() - sigma_minus()); }
CMatrix sigma_z() {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = -1.0;
  m(1, 1) = 1.0;
  return m;
}
CMatrix projector_up() {
  CMatrix m = CMatrix::Zero(2, 2);
  m(1, 1) = 1.0;
  return m;
}
CMatrix projector_down() {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = 1.0;
  return m;
}
}  // namespace qubit_ops

OperatorMatrix embed_product(const std::vector<std::pair<CMatrix, Slot>>& factors,
                             const ModeRegister& reg) {
  // Each factor acts on one digit of the row-major index; slots must be distinct.
  struct Factor {
    const CMatrix* op;
    Eigen::Index stride;
    int dim;
  };
  std::vector<Factor> fs;
  std::vector<int> seen;
  for (const auto& [op, slot] : factors) {
    const int key = slot.is_qubit() ? -1 : slot.mode;
    if (!slot.is_qubit() && (slot.mode < 0 || slot.mode >= reg.num_modes())) {
      throw InvalidArgument(fmt::format("slot mode {} out of range", slot.mode));
    }
    if (std::find(seen.begin(), seen.end(), key) != seen.end()) {
      throw InvalidArgument("embed_product: repeated slot");
    }
    seen.push_back(key);
    const int dim = slot.is_qubit() ? 2 : reg.mode_dim(slot.mode);
    if (op.rows() != dim || op.cols() != dim) {
      throw InvalidArgument(fmt::format("factor is {}x{}, slot needs {}x{}", op.rows(), op.cols(), dim, dim));
    }
    fs.push_back({&op, slot.is_qubit() ? reg.qubit_stride() : reg.stride(slot.mode), dim});
  }

  const Eigen::Index n = reg.dimension();
  std::vector<Eigen::Triplet<Complex>> triplets;
  for (Eigen::Index col = 0; col < n; ++col) {
    // Expand the column's image digit by digit.
    std::vector<std::pair<Eigen::Index, Complex>> images{{col, Complex(1.0, 0.0)}};
    for (const Factor& f : fs) {
      std::vector<std::pair<Eigen::Index, Complex>> next;
      for (const auto& [row, amp] : images) {
        const int k = static_cast<int>((row / f.stride) % f.dim);
        const Eigen::Index base = row - k * f.stride;
        for (int kp = 0; kp < f.dim; ++kp) {
          const Complex v = (*f.op)(kp, k);
          if (v != Complex(0.0, 0.0)) next.emplace_back(base + kp * f.stride, amp * v);
        }
      }
      images = std::move(next);
    }
    for (const auto& [row, amp] : images) triplets.emplace_back(row, col, amp);
  }
  SparseMatrix m(n, n);
  m.setFromTriplets(triplets.begin(), triplets.end());
  return OperatorMatrix(reg, std::move(m));
}

OperatorMatrix embed(const CMatrix& op, Slot slot, const ModeRegister& reg) {
  return embed_product({{op, slot}}, reg);
}

OperatorMatrix lower_op(const ModeRegister& reg, int mode) {
  return embed(mode_ladder(reg.mode_dim(mode)).lower, Slot::of_mode(mode), reg);
}
OperatorMatrix raise_op(const ModeRegister& reg, int mode) {
  return embed(mode_ladder(reg.mode_dim(mode)).raise, Slot::of_mode(mode), reg);
}
OperatorMatrix number_op(const ModeRegister& reg, int mode) {
  return embed(mode_ladder(reg.mode_dim(mode)).number, Slot::of_mode(mode), reg);
}
OperatorMatrix parity_op(const ModeRegister& reg, int mode) {
  return embed(mode_ladder(reg.mode_dim(mode)).parity, Slot::of_mode(mode), reg);
}

HybridState vacuum(const ModeRegister& reg) {
  return fock(reg, 0, std::vector<int>(reg.num_modes(), 0));
}

HybridState fock(const ModeRegister& reg, int qubit, const std::vector<int>& occupations) {
  CVector amps = CVector::Zero(reg.dimension());
  amps[reg.index(qubit, occupations)] = 1.0;
  return HybridState(reg, std::move(amps));
}

HybridState from_amplitudes(const ModeRegister& reg, const CVector& amplitudes) {
  return HybridState(reg, amplitudes);
}

HybridState product_state(const ModeRegister& reg, const CVector& qubit,
                          const std::vector<CVector>& mode_states) {
  if (qubit.size() != 2) throw InvalidArgument("qubit vector must have length 2");
  if (static_cast<int>(mode_states.size()) != reg.num_modes()) {
    throw InvalidArgument("need one vector per mode");
  }
  CVector amps = qubit;
  for (int m = 0; m < reg.num_modes(); ++m) {
    if (mode_states[m].size() != reg.mode_dim(m)) {
      throw InvalidArgument(fmt::format("mode {} vector has wrong length", m));
    }
    CVector next(amps.size() * mode_states[m].size());
    for (Eigen::Index i = 0; i < amps.size(); ++i) {
      next.segment(i * mode_states[m].size(), mode_states[m].size()) = amps[i] * mode_states[m];
    }
    amps = std::move(next);
  }
  return HybridState(reg, std::move(amps));
}

namespace {

HybridState single_mode_product(const ModeRegister& reg, int qubit,
                                const std::vector<CVector>& mode_states, double threshold,
                                const char* what) {
  CVector q = CVector::Zero(2);
  if (qubit != 0 && qubit != 1) throw InvalidArgument("qubit level must be 0 or 1");
  q[qubit] = 1.0;
  HybridState s = product_state(reg, q, mode_states);
  check_leakage(s, threshold, what);
  return s;
}

}  // namespace

HybridState coherent(const ModeRegister& reg, const std::vector<Complex>& alphas, int qubit,
                     double leakage_threshold) {
  if (static_cast<int>(alphas.size()) != reg.num_modes()) throw InvalidArgument("need one alpha per mode");
  std::vector<CVector> modes;
  for (int m = 0; m < reg.num_modes(); ++m) {
    const int d = reg.mode_dim(m);
    CVector v = CVector::Zero(d);
    v[0] = 1.0;
    modes.push_back(displacement_matrix(d, alphas[m]) * v);
  }
  return single_mode_product(reg, qubit, modes, leakage_threshold, "coherent state");
}

HybridState squeezed(const ModeRegister& reg, const std::vector<double>& rs, int qubit,
                     double leakage_threshold) {
  if (static_cast<int>(rs.size()) != reg.num_modes()) throw InvalidArgument("need one r per mode");
  std::vector<CVector> modes;
  for (int m = 0; m < reg.num_modes(); ++m) {
    const int d = reg.mode_dim(m);
    CVector v = CVector::Zero(d);
    v[0] = 1.0;
    modes.push_back(squeeze_matrix(d, rs[m]) * v);
  }
  return single_mode_product(reg, qubit, modes, leakage_threshold, "squeezed state");
}

RVector thermal_weights(double nbar, int dim) {
  if (nbar < 0) throw InvalidArgument("mean occupation must be >= 0");
  if (dim < 1) throw InvalidArgument("thermal weights need dim >= 1");
  RVector w = RVector::Zero(dim);
  if (nbar == 0.0) {
    w[0] = 1.0;
    return w;
  }
  const double q = nbar / (1.0 + nbar);
  double p = 1.0;
  for (int n = 0; n < dim; ++n, p *= q) w[n] = p;
  return w / w.sum();
}

int sample_thermal_occupation(double nbar, int dim, Rng& rng) {
  const RVector w = thermal_weights(nbar, dim);
  std::discrete_distribution<int> dist(w.data(), w.data() + w.size());
  return dist(rng);
}

HybridState sample_thermal(const ModeRegister& reg, const std::vector<double>& nbars, Rng& rng,
                           int qubit) {
  if (static_cast<int>(nbars.size()) != reg.num_modes()) throw InvalidArgument("need one nbar per mode");
  std::vector<int> occ(reg.num_modes());
  for (int m = 0; m < reg.num_modes(); ++m) occ[m] = sample_thermal_occupation(nbars[m], reg.mode_dim(m), rng);
  return fock(reg, qubit, occ);
}

Complex expectation(const HybridState& state, const OperatorMatrix& op) {
  require_same_register(state.reg(), op.reg(), "expectation");
  const Complex v = state.amplitudes().dot(op.apply(state.amplitudes()));
  return op.hermitian() ? Complex(v.real(), 0.0) : v;
}

Complex inner(const HybridState& a, const HybridState& b) {
  require_same_register(a.reg(), b.reg(), "inner product");
  return a.amplitudes().dot(b.amplitudes());
}

double fidelity(const HybridState& a, const HybridState& b) { return std::norm(inner(a, b)); }

RVector phonon_distribution(const HybridState& state, int mode) {
  const ModeRegister& reg = state.reg();
  RVector p = RVector::Zero(reg.mode_dim(mode));
  for (Eigen::Index i = 0; i < reg.dimension(); ++i) {
    p[reg.occupation_of(i, mode)] += std::norm(state[i]);
  }
  return p;
}

Eigen::Vector2d qubit_populations(const HybridState& state) {
  const Eigen::Index half = state.reg().qubit_stride();
  return {state.amplitudes().head(half).squaredNorm(), state.amplitudes().tail(half).squaredNorm()};
}

double population_up(const HybridState& state) { return qubit_populations(state)[1]; }

CMatrix mode_density(const HybridState& state, int mode) {
  const ModeRegister& reg = state.reg();
  const int d = reg.mode_dim(mode);
  const Eigen::Index stride = reg.stride(mode);
  CMatrix rho = CMatrix::Zero(d, d);
  // Sum over the environment index: rows with digit k in this mode.
  for (Eigen::Index i = 0; i < reg.dimension(); ++i) {
    const int k = reg.occupation_of(i, mode);
    if (k != 0) continue;
    for (int a = 0; a < d; ++a) {
      const Complex ca = state[i + a * stride];
      if (ca == Complex(0.0, 0.0)) continue;
      for (int b = 0; b < d; ++b) rho(a, b) += ca * std::conj(state[i + b * stride]);
    }
  }
  return rho;
}

double leakage(const HybridState& state) {
  const ModeRegister& reg = state.reg();
  double total = 0.0;
  for (Eigen::Index i = 0; i < reg.dimension(); ++i) {
    for (int m = 0; m < reg.num_modes(); ++m) {
      if (reg.occupation_of(i, m) >= reg.mode_dim(m) - 2) {
        total += std::norm(state[i]);
        break;
      }
    }
  }
  return total;
}

void check_leakage(const HybridState& state, double threshold, const std::string& context) {
  if (threshold <= 0) return;
  const double l = leakage(state);
  if (l > threshold) {
    throw LeakageError(fmt::format("{}: truncation leakage {:.3e} exceeds threshold {:.1e}; "
                                   "increase the mode dimension",
                                   context, l, threshold),
                       l);
  }
}

HybridState project_qubit(const HybridState& state, int qubit) {
  if (qubit != 0 && qubit != 1) throw InvalidArgument("qubit level must be 0 or 1");
  const Eigen::Index half = state.reg().qubit_stride();
  CVector amps = CVector::Zero(state.reg().dimension());
  amps.segment(qubit * half, half) = state.amplitudes().segment(qubit * half, half);
  if (amps.norm() == 0.0) throw InvalidArgument("projection onto an empty qubit branch");
  return HybridState(state.reg(), std::move(amps));
}

HybridState project_mode(const HybridState& state, int mode, int n) {
  const ModeRegister& reg = state.reg();
  if (n < 0 || n >= reg.mode_dim(mode)) throw InvalidArgument("occupation out of range");
  CVector amps = CVector::Zero(reg.dimension());
  for (Eigen::Index i = 0; i < reg.dimension(); ++i) {
    if (reg.occupation_of(i, mode) == n) amps[i] = state[i];
  }
  if (amps.norm() == 0.0) throw InvalidArgument("projection onto an empty Fock branch");
  return HybridState(reg, std::move(amps));
}

}  // namespace phonon
