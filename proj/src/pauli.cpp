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

#include "lindvar/pauli.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace lindvar {

namespace {

Mask full_mask(unsigned n) { return n >= 64 ? ~Mask{0} : ((Mask{1} << n) - 1); }

void check_qubits(unsigned n) {
  if (n == 0 || n > kMaxQubits) {
    throw std::invalid_argument("PauliString: qubit count must be in [1, 64], got " +
                                std::to_string(n));
  }
}

void check_same(unsigned a, unsigned b, const char* what) {
  if (a != b) {
    throw std::invalid_argument(std::string(what) + ": qubit-count mismatch (" +
                                std::to_string(a) + " vs " + std::to_string(b) + ")");
  }
}

cplx i_power(int k) {
  switch (k & 3) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

}  // namespace

PauliString::PauliString(unsigned n_qubits) : n_qubits_(n_qubits) { check_qubits(n_qubits); }

PauliString::PauliString(unsigned n_qubits, Mask x_mask, Mask z_mask)
    : n_qubits_(n_qubits), x_(x_mask), z_(z_mask) {
  check_qubits(n_qubits);
  if (((x_mask | z_mask) & ~full_mask(n_qubits)) != 0) {
    throw std::invalid_argument("PauliString: mask has bits beyond the register");
  }
}

PauliString PauliString::from_label(std::string_view label) {
  PauliString p(static_cast<unsigned>(label.size()));
  for (unsigned q = 0; q < label.size(); ++q) {
    const Mask bit = Mask{1} << q;
    switch (label[q]) {
      case 'I': break;
      case 'X': p.x_ |= bit; break;
      case 'Y': p.x_ |= bit; p.z_ |= bit; break;
      case 'Z': p.z_ |= bit; break;
      default:
        throw std::invalid_argument("PauliString: bad letter '" + std::string(1, label[q]) +
                                    "' in label " + std::string(label));
    }
  }
  return p;
}

PauliString PauliString::single(unsigned n_qubits, unsigned qubit, char letter) {
  if (qubit >= n_qubits) throw std::invalid_argument("PauliString::single: qubit out of range");
  std::string label(n_qubits, 'I');
  label[qubit] = letter;
  return from_label(label);
}

unsigned PauliString::weight() const { return static_cast<unsigned>(std::popcount(x_ | z_)); }

unsigned PauliString::num_y() const { return static_cast<unsigned>(std::popcount(x_ & z_)); }

char PauliString::letter(unsigned qubit) const {
  const bool x = (x_ >> qubit) & 1U;
  const bool z = (z_ >> qubit) & 1U;
  if (x && z) return 'Y';
  if (x) return 'X';
  if (z) return 'Z';
  return 'I';
}

std::string PauliString::to_label() const {
  std::string s(n_qubits_, 'I');
  for (unsigned q = 0; q < n_qubits_; ++q) s[q] = letter(q);
  return s;
}

PauliString tensor(const PauliString& high, const PauliString& low) {
  const unsigned shift = low.n_qubits();
  return PauliString(high.n_qubits() + low.n_qubits(), (high.x_mask() << shift) | low.x_mask(),
                     (high.z_mask() << shift) | low.z_mask());
}

cplx PauliProduct::phase() const { return i_power(phase_power); }

PauliProduct pauli_mul(const PauliString& a, const PauliString& b) {
  check_same(a.n_qubits(), b.n_qubits(), "pauli_mul");
  const Mask x = a.x_mask() ^ b.x_mask();
  const Mask z = a.z_mask() ^ b.z_mask();
  // a = i^{|xa&za|} X^xa Z^za; moving Z^za past X^xb costs (-1)^{|za&xb|}.
  const int e = std::popcount(a.x_mask() & a.z_mask()) + std::popcount(b.x_mask() & b.z_mask()) +
                2 * std::popcount(a.z_mask() & b.x_mask()) - std::popcount(x & z);
  return {((e % 4) + 4) % 4, PauliString(a.n_qubits(), x, z)};
}

bool commutes(const PauliString& a, const PauliString& b) {
  check_same(a.n_qubits(), b.n_qubits(), "commutes");
  const int s = std::popcount(a.x_mask() & b.z_mask()) + std::popcount(a.z_mask() & b.x_mask());
  return (s & 1) == 0;
}

Eigen::MatrixXcd dense(const PauliString& p) {
  const Eigen::Index dim = Eigen::Index{1} << p.n_qubits();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  const cplx base = i_power(static_cast<int>(p.num_y()));
  for (Eigen::Index i = 0; i < dim; ++i) {
    const auto col = static_cast<Mask>(i);
    const double sign = (std::popcount(col & p.z_mask()) & 1) ? -1.0 : 1.0;
    m(static_cast<Eigen::Index>(col ^ p.x_mask()), i) = sign * base;
  }
  return m;
}

PauliSum::PauliSum(unsigned n_qubits) : n_qubits_(n_qubits) { check_qubits(n_qubits); }

PauliSum::PauliSum(unsigned n_qubits, std::vector<Term> terms)
    : n_qubits_(n_qubits), terms_(std::move(terms)) {
  check_qubits(n_qubits);
  for (const auto& t : terms_) check_same(t.string.n_qubits(), n_qubits, "PauliSum");
  canonicalize();
}

PauliSum::PauliSum(const PauliString& p, cplx coeff) : n_qubits_(p.n_qubits()) {
  terms_.push_back({coeff, p});
  canonicalize();
}

PauliSum PauliSum::identity(unsigned n_qubits, cplx coeff) {
  return PauliSum(PauliString(n_qubits), coeff);
}

cplx PauliSum::coefficient(const PauliString& p) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), p,
                             [](const Term& t, const PauliString& s) { return t.string < s; });
  if (it != terms_.end() && it->string == p) return it->coeff;
  return 0.0;
}

void PauliSum::add_term(cplx coeff, const PauliString& p) {
  check_same(p.n_qubits(), n_qubits_, "PauliSum::add_term");
  auto it = std::lower_bound(terms_.begin(), terms_.end(), p,
                             [](const Term& t, const PauliString& s) { return t.string < s; });
  if (it != terms_.end() && it->string == p) {
    it->coeff += coeff;
    if (std::abs(it->coeff) < kDropTolerance) terms_.erase(it);
  } else if (std::abs(coeff) >= kDropTolerance) {
    terms_.insert(it, {coeff, p});
  }
}

PauliSum PauliSum::adjoint() const {
  PauliSum out = *this;
  for (auto& t : out.terms_) t.coeff = std::conj(t.coeff);
  return out;
}

PauliSum PauliSum::transpose() const {
  PauliSum out = *this;
  for (auto& t : out.terms_) t.coeff *= static_cast<double>(t.string.transpose_sign());
  return out;
}

PauliSum PauliSum::conjugate() const {
  PauliSum out = *this;
  for (auto& t : out.terms_) {
    t.coeff = std::conj(t.coeff) * static_cast<double>(t.string.transpose_sign());
  }
  return out;
}

bool PauliSum::is_hermitian(double tol) const {
  return std::all_of(terms_.begin(), terms_.end(),
                     [tol](const Term& t) { return std::abs(t.coeff.imag()) <= tol; });
}

double PauliSum::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& t : terms_) m = std::max(m, std::abs(t.coeff));
  return m;
}

PauliSum& PauliSum::operator+=(const PauliSum& other) {
  if (n_qubits_ == 0) n_qubits_ = other.n_qubits_;
  check_same(n_qubits_, other.n_qubits_, "PauliSum::operator+=");
  terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
  canonicalize();
  return *this;
}

PauliSum& PauliSum::operator-=(const PauliSum& other) { return *this += other * cplx(-1.0); }

PauliSum& PauliSum::operator*=(cplx s) {
  for (auto& t : terms_) t.coeff *= s;
  canonicalize();
  return *this;
}

PauliSum operator*(const PauliSum& a, const PauliSum& b) {
  check_same(a.n_qubits_, b.n_qubits_, "PauliSum product");
  std::vector<PauliSum::Term> out;
  out.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& ta : a.terms_) {
    for (const auto& tb : b.terms_) {
      const auto prod = pauli_mul(ta.string, tb.string);
      out.push_back({ta.coeff * tb.coeff * prod.phase(), prod.product});
    }
  }
  return PauliSum(a.n_qubits_, std::move(out));
}

void PauliSum::canonicalize() {
  std::sort(terms_.begin(), terms_.end(),
            [](const Term& a, const Term& b) { return a.string < b.string; });
  std::vector<Term> merged;
  merged.reserve(terms_.size());
  for (const auto& t : terms_) {
    if (!merged.empty() && merged.back().string == t.string) {
      merged.back().coeff += t.coeff;
    } else {
      merged.push_back(t);
    }
  }
  std::erase_if(merged, [](const Term& t) { return std::abs(t.coeff) < kDropTolerance; });
  terms_ = std::move(merged);
}

PauliSum tensor(const PauliSum& high, const PauliSum& low) {
  const unsigned n = high.n_qubits() + low.n_qubits();
  std::vector<PauliSum::Term> out;
  out.reserve(high.size() * low.size());
  for (const auto& th : high.terms()) {
    for (const auto& tl : low.terms()) out.push_back({th.coeff * tl.coeff, tensor(th.string, tl.string)});
  }
  return PauliSum(n, std::move(out));
}

PauliSum commutator(const PauliSum& a, const PauliSum& b) { return a * b - b * a; }

std::pair<PauliSum, PauliSum> split_hermitian(const PauliSum& s) {
  PauliSum herm(s.n_qubits());
  PauliSum anti(s.n_qubits());
  for (const auto& t : s.terms()) {
    herm.add_term(t.coeff.real(), t.string);
    anti.add_term(-t.coeff.imag(), t.string);
  }
  return {std::move(herm), std::move(anti)};
}

Eigen::MatrixXcd dense(const PauliSum& s) {
  const Eigen::Index dim = Eigen::Index{1} << s.n_qubits();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& t : s.terms()) m += t.coeff * dense(t.string);
  return m;
}

}  // namespace lindvar
