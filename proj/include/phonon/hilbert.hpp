// Copyright 2026 The phonon-sim Authors
// SPDX-License-Identifier: Apache-2.0

// Truncated Fock-space core.
//
// A register is one qubit followed by an ordered list of bosonic modes. Basis
// states |q, n_1, ..., n_M> are indexed row-major in that order, so the qubit
// digit is the slowest and the last mode is the fastest. Qubit index 0 is
// |down>, index 1 is |up> (the bright state).

#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace phonon {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<Complex>;
using Rng = std::mt19937_64;

inline constexpr double kDefaultLeakageThreshold = 1e-6;

struct ModeSpec {
  double frequency = 1.0;   // rad/s
  double lamb_dicke = 0.1;  // eta
  int dim = 2;              // Fock levels 0..dim-1
};

struct QubitSpec {
  double splitting = 0.0;  // rad/s, bookkeeping only
};

class ModeRegister {
 public:
  ModeRegister() = default;
  ModeRegister(QubitSpec qubit, std::vector<ModeSpec> modes);

  // Register whose modes only carry truncation sizes (frequency 1, eta 0.1).
  static ModeRegister with_dims(const std::vector<int>& dims);

  const QubitSpec& qubit() const { return qubit_; }
  const std::vector<ModeSpec>& modes() const { return modes_; }
  int num_modes() const { return static_cast<int>(modes_.size()); }
  int mode_dim(int mode) const;
  Eigen::Index dimension() const { return dimension_; }

  // Index stride of a mode digit; the qubit stride is dimension()/2.
  Eigen::Index stride(int mode) const;
  Eigen::Index qubit_stride() const { return dimension_ / 2; }

  Eigen::Index index(int qubit, const std::vector<int>& occupations) const;
  int qubit_of(Eigen::Index i) const;
  int occupation_of(Eigen::Index i, int mode) const;
  std::vector<int> occupations_of(Eigen::Index i) const;

  // Modes with eta*dim^2 >= 1, outside the Lamb-Dicke regime.
  std::vector<int> lamb_dicke_warnings() const;

  bool operator==(const ModeRegister& other) const;

 private:
  QubitSpec qubit_;
  std::vector<ModeSpec> modes_;
  std::vector<Eigen::Index> strides_;
  Eigen::Index dimension_ = 2;
};

// A tensor factor of the register.
struct Slot {
  int mode = -1;  // -1 selects the qubit
  static Slot qubit() { return Slot{-1}; }
  static Slot of_mode(int m) { return Slot{m}; }
  bool is_qubit() const { return mode < 0; }
};

class HybridState {
 public:
  // Normalizes the amplitudes; throws on a zero vector or size mismatch.
  HybridState(ModeRegister reg, CVector amplitudes);

  const ModeRegister& reg() const { return reg_; }
  const CVector& amplitudes() const { return amplitudes_; }
  Complex operator[](Eigen::Index i) const { return amplitudes_[i]; }
  double norm() const { return amplitudes_.norm(); }

 private:
  ModeRegister reg_;
  CVector amplitudes_;
};

class OperatorMatrix {
 public:
  OperatorMatrix(ModeRegister reg, SparseMatrix matrix);
  // With hermitian=true the matrix is checked to 1e-12 and rejected otherwise.
  OperatorMatrix(ModeRegister reg, SparseMatrix matrix, bool hermitian);

  static OperatorMatrix zero(const ModeRegister& reg);
  static OperatorMatrix identity(const ModeRegister& reg);

  const ModeRegister& reg() const { return reg_; }
  const SparseMatrix& matrix() const { return matrix_; }
  bool hermitian() const { return hermitian_; }
  Eigen::Index dimension() const { return matrix_.rows(); }

  OperatorMatrix adjoint() const;
  CMatrix dense() const { return CMatrix(matrix_); }
  CVector apply(const CVector& v) const { return matrix_ * v; }
  // Largest entry of M - M^dagger.
  double hermiticity_defect() const;

  OperatorMatrix operator+(const OperatorMatrix& other) const;
  OperatorMatrix operator-(const OperatorMatrix& other) const;
  OperatorMatrix operator*(const OperatorMatrix& other) const;
  OperatorMatrix operator*(Complex s) const;
  OperatorMatrix operator*(double s) const;

 private:
  ModeRegister reg_;
  SparseMatrix matrix_;
  bool hermitian_ = false;
};

OperatorMatrix operator*(double s, const OperatorMatrix& op);
OperatorMatrix operator*(Complex s, const OperatorMatrix& op);

// Commutator AB - BA.
OperatorMatrix commutator(const OperatorMatrix& a, const OperatorMatrix& b);

struct Ladder {
  CMatrix lower;
  CMatrix raise;
  CMatrix number;
  CMatrix parity;
};

Ladder mode_ladder(int dim);

// Qubit matrices in the (down, up) basis. sigma_z is |up><up| - |down><down|.
namespace qubit_ops {
CMatrix sigma_plus();   // |up><down|
CMatrix sigma_minus();  // |down><up|
CMatrix sigma_x();
CMatrix sigma_y();
CMatrix sigma_z();
CMatrix projector_up();
CMatrix projector_down();
}  // namespace qubit_ops

OperatorMatrix embed(const CMatrix& op, Slot slot, const ModeRegister& reg);
// Product of single-factor operators on distinct slots.
OperatorMatrix embed_product(const std::vector<std::pair<CMatrix, Slot>>& factors,
                             const ModeRegister& reg);

// Shorthands for embedded ladder operators.
OperatorMatrix lower_op(const ModeRegister& reg, int mode);
OperatorMatrix raise_op(const ModeRegister& reg, int mode);
OperatorMatrix number_op(const ModeRegister& reg, int mode);
OperatorMatrix parity_op(const ModeRegister& reg, int mode);

// State constructors. The qubit argument is 0 (down) or 1 (up).
HybridState vacuum(const ModeRegister& reg);
HybridState fock(const ModeRegister& reg, int qubit, const std::vector<int>& occupations);
HybridState from_amplitudes(const ModeRegister& reg, const CVector& amplitudes);
// Product state from one qubit vector and one vector per mode.
HybridState product_state(const ModeRegister& reg, const CVector& qubit,
                          const std::vector<CVector>& mode_states);
// D(alpha_m) applied to vacuum in each mode, qubit in the given level.
HybridState coherent(const ModeRegister& reg, const std::vector<Complex>& alphas,
                     int qubit = 0, double leakage_threshold = kDefaultLeakageThreshold);
// S(r_m) applied to vacuum in each mode.
HybridState squeezed(const ModeRegister& reg, const std::vector<double>& rs, int qubit = 0,
                     double leakage_threshold = kDefaultLeakageThreshold);

// Truncated Boltzmann weights for mean occupation nbar, renormalized over 0..dim-1.
RVector thermal_weights(double nbar, int dim);
// One Fock state per mode drawn from thermal_weights.
HybridState sample_thermal(const ModeRegister& reg, const std::vector<double>& nbars, Rng& rng,
                           int qubit = 0);
// Draw a single occupation from thermal_weights (used by trajectory samplers).
int sample_thermal_occupation(double nbar, int dim, Rng& rng);

Complex expectation(const HybridState& state, const OperatorMatrix& op);
Complex inner(const HybridState& a, const HybridState& b);
double fidelity(const HybridState& a, const HybridState& b);
RVector phonon_distribution(const HybridState& state, int mode);
// (P_down, P_up).
Eigen::Vector2d qubit_populations(const HybridState& state);
double population_up(const HybridState& state);
// Reduced density matrix of one mode.
CMatrix mode_density(const HybridState& state, int mode);

// Total population with any mode in its top two Fock levels.
double leakage(const HybridState& state);
// Throws LeakageError when leakage(state) exceeds threshold; threshold <= 0 disables.
void check_leakage(const HybridState& state, double threshold, const std::string& context);

// Projects onto the given qubit level and renormalizes; throws if the branch is empty.
HybridState project_qubit(const HybridState& state, int qubit);
// Projects one mode onto occupation n and renormalizes.
HybridState project_mode(const HybridState& state, int mode, int n);

}  // namespace phonon
