// Copyright 2026 The lindvar Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace lindvar {

using cplx = std::complex<double>;
using Mask = std::uint64_t;

/// Largest register a PauliString can address (one machine word per mask).
inline constexpr unsigned kMaxQubits = 64;

/// Coefficients with magnitude below this are dropped when a PauliSum is
/// canonicalized.
inline constexpr double kDropTolerance = 1e-14;

/// A Hermitian Pauli word in symplectic form.
///
/// Qubit q carries X if bit q of the x mask is set, Z if bit q of the z mask
/// is set and Y if both are set (Y = iXZ). Qubit 0 is the least significant
/// bit of a computational-basis index everywhere in this library.
class PauliString {
 public:
  PauliString() = default;
  explicit PauliString(unsigned n_qubits);
  PauliString(unsigned n_qubits, Mask x_mask, Mask z_mask);

  /// Parses a label such as "XIZY". Character k addresses qubit k.
  static PauliString from_label(std::string_view label);

  /// Single-qubit Pauli `letter` ('I', 'X', 'Y' or 'Z') on `qubit`.
  static PauliString single(unsigned n_qubits, unsigned qubit, char letter);

  unsigned n_qubits() const { return n_qubits_; }
  Mask x_mask() const { return x_; }
  Mask z_mask() const { return z_; }

  unsigned weight() const;
  unsigned num_y() const;
  bool is_identity() const { return x_ == 0 && z_ == 0; }

  /// Letter acting on `qubit`.
  char letter(unsigned qubit) const;
  std::string to_label() const;

  /// Sign picked up under transposition (equivalently complex conjugation):
  /// Y^T = -Y while X and Z are real symmetric.
  int transpose_sign() const { return (num_y() & 1U) ? -1 : 1; }

  friend bool operator==(const PauliString& a, const PauliString& b) {
    return a.n_qubits_ == b.n_qubits_ && a.x_ == b.x_ && a.z_ == b.z_;
  }
  friend bool operator!=(const PauliString& a, const PauliString& b) { return !(a == b); }
  friend bool operator<(const PauliString& a, const PauliString& b) {
    if (a.x_ != b.x_) return a.x_ < b.x_;
    return a.z_ < b.z_;
  }

 private:
  unsigned n_qubits_ = 0;
  Mask x_ = 0;
  Mask z_ = 0;
};

/// `high` placed on qubits [low.n_qubits(), low.n_qubits() + high.n_qubits())
/// and `low` on the remaining low-order qubits, i.e. the Kronecker product
/// high (x) low in the qubit-0-least-significant ordering.
PauliString tensor(const PauliString& high, const PauliString& low);

/// Product a*b = phase * product with phase in {1, i, -1, -i}.
struct PauliProduct {
  int phase_power = 0;  // phase = i^phase_power
  PauliString product;

  cplx phase() const;
};

PauliProduct pauli_mul(const PauliString& a, const PauliString& b);

/// True iff the symplectic product of a and b is even.
bool commutes(const PauliString& a, const PauliString& b);

Eigen::MatrixXcd dense(const PauliString& p);

/// Complex-weighted sum of PauliStrings, kept canonical: terms are sorted,
/// unique by string, and coefficients below kDropTolerance are removed.
class PauliSum {
 public:
  struct Term {
    cplx coeff;
    PauliString string;
  };

  PauliSum() = default;
  explicit PauliSum(unsigned n_qubits);
  PauliSum(unsigned n_qubits, std::vector<Term> terms);
  PauliSum(const PauliString& p, cplx coeff = 1.0);

  static PauliSum identity(unsigned n_qubits, cplx coeff = 1.0);

  unsigned n_qubits() const { return n_qubits_; }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  /// Coefficient of `p`, zero if absent.
  cplx coefficient(const PauliString& p) const;

  void add_term(cplx coeff, const PauliString& p);

  PauliSum adjoint() const;
  PauliSum transpose() const;
  PauliSum conjugate() const;

  /// All coefficients real to within `tol`.
  bool is_hermitian(double tol = 1e-12) const;

  /// Largest coefficient magnitude, zero for the empty sum.
  double max_abs_coeff() const;

  PauliSum& operator+=(const PauliSum& other);
  PauliSum& operator-=(const PauliSum& other);
  PauliSum& operator*=(cplx s);

  friend PauliSum operator+(PauliSum a, const PauliSum& b) { return a += b; }
  friend PauliSum operator-(PauliSum a, const PauliSum& b) { return a -= b; }
  friend PauliSum operator*(PauliSum a, cplx s) { return a *= s; }
  friend PauliSum operator*(cplx s, PauliSum a) { return a *= s; }
  friend PauliSum operator*(const PauliSum& a, const PauliSum& b);

 private:
  void canonicalize();

  unsigned n_qubits_ = 0;
  std::vector<Term> terms_;
};

/// `high` (x) `low` with `high` on the upper qubits.
PauliSum tensor(const PauliSum& high, const PauliSum& low);

/// [a, b] = ab - ba.
PauliSum commutator(const PauliSum& a, const PauliSum& b);

/// Splits S into (Hermitian part, generator of anti-Hermitian part) so that
/// S = first - i * second with both parts Hermitian.
std::pair<PauliSum, PauliSum> split_hermitian(const PauliSum& s);

Eigen::MatrixXcd dense(const PauliSum& s);

}  // namespace lindvar

template <>
struct std::hash<lindvar::PauliString> {
  std::size_t operator()(const lindvar::PauliString& p) const noexcept {
    return std::hash<std::uint64_t>{}(p.x_mask() * 0x9E3779B97F4A7C15ULL ^ p.z_mask());
  }
};
