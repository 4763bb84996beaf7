#pragma once

// Small dense complex vectors and matrices for Nt = 2..8 antennas.
//
// Storage is inline (no heap) so channel sets and codebooks stay cheap to copy
// and trivially thread-safe. Two products are provided and must not be mixed up:
//   dot(a, b)      = a* b   (Hermitian inner product)
//   bilinear(a, b) = a^T b  (plain transpose, as in the h^T f signal model)

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>

#include "wyner/errors.hpp"

namespace wyner {

using cplx = std::complex<double>;

inline constexpr std::size_t kMinAntennas = 2;
inline constexpr std::size_t kMaxAntennas = 8;

inline void check_antennas(std::size_t nt) {
  if (nt < kMinAntennas || nt > kMaxAntennas) {
    throw DomainError("antenna count must be in [2, 8], got " + std::to_string(nt));
  }
}

class CVec {
 public:
  explicit CVec(std::size_t n) : size_(static_cast<std::uint8_t>(n)) { check_antennas(n); }

  CVec(std::initializer_list<cplx> values) : CVec(values.size()) {
    std::copy(values.begin(), values.end(), data_.begin());
  }

  explicit CVec(std::span<const cplx> values) : CVec(values.size()) {
    std::copy(values.begin(), values.end(), data_.begin());
  }

  std::size_t size() const noexcept { return size_; }

  cplx& operator[](std::size_t i) noexcept { return data_[i]; }
  const cplx& operator[](std::size_t i) const noexcept { return data_[i]; }

  cplx* begin() noexcept { return data_.data(); }
  cplx* end() noexcept { return data_.data() + size_; }
  const cplx* begin() const noexcept { return data_.data(); }
  const cplx* end() const noexcept { return data_.data() + size_; }

  std::span<const cplx> span() const noexcept { return {data_.data(), size_}; }

  double squared_norm() const noexcept {
    double s = 0.0;
    for (std::size_t i = 0; i < size_; ++i) s += std::norm(data_[i]);
    return s;
  }
  double norm() const noexcept { return std::sqrt(squared_norm()); }

  CVec conj() const {
    CVec out(size_);
    for (std::size_t i = 0; i < size_; ++i) out[i] = std::conj(data_[i]);
    return out;
  }

  /// Unit-norm copy. Throws DegenerateChannel for the zero vector.
  CVec normalized() const {
    const double n = norm();
    if (!(n > 0.0)) throw DegenerateChannel("cannot normalize a zero vector");
    return *this * (1.0 / n);
  }

  CVec& operator+=(const CVec& o) {
    for (std::size_t i = 0; i < size_; ++i) data_[i] += o[i];
    return *this;
  }
  CVec& operator-=(const CVec& o) {
    for (std::size_t i = 0; i < size_; ++i) data_[i] -= o[i];
    return *this;
  }
  CVec& operator*=(cplx s) {
    for (std::size_t i = 0; i < size_; ++i) data_[i] *= s;
    return *this;
  }

  friend CVec operator+(CVec a, const CVec& b) { return a += b; }
  friend CVec operator-(CVec a, const CVec& b) { return a -= b; }
  friend CVec operator*(CVec a, cplx s) { return a *= s; }
  friend CVec operator*(cplx s, CVec a) { return a *= s; }
  friend CVec operator*(CVec a, double s) { return a *= cplx(s, 0.0); }
  friend CVec operator*(double s, CVec a) { return a *= cplx(s, 0.0); }

  friend bool operator==(const CVec& a, const CVec& b) noexcept {
    return a.size_ == b.size_ && std::equal(a.begin(), a.end(), b.begin());
  }

 private:
  std::array<cplx, kMaxAntennas> data_{};
  std::uint8_t size_;
};

inline void require_same_size(const CVec& a, const CVec& b) {
  if (a.size() != b.size()) {
    throw ShapeError("vector length mismatch: " + std::to_string(a.size()) + " vs " +
                     std::to_string(b.size()));
  }
}

/// a* b
inline cplx dot(const CVec& a, const CVec& b) {
  require_same_size(a, b);
  cplx s{};
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

/// a^T b
inline cplx bilinear(const CVec& a, const CVec& b) {
  require_same_size(a, b);
  cplx s{};
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

/// Rotates `v` so its first entry with modulus above `tol` is real and positive.
/// Fixes a representative of the Grassmannian class {e^{j theta} v}.
inline CVec phase_normalized(const CVec& v, double tol = 1e-12) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double m = std::abs(v[i]);
    if (m > tol) {
      CVec out = v * (std::conj(v[i]) / m);
      out[i] = cplx(out[i].real(), 0.0);  // drop rounding residue
      return out;
    }
  }
  return v;
}

/// Distance between the lines spanned by two unit vectors: sqrt(1 - |a* b|^2).
inline double chordal_distance(const CVec& a, const CVec& b) {
  const double c = std::norm(dot(a, b));
  return std::sqrt(std::max(0.0, 1.0 - c));
}

class CMat {
 public:
  explicit CMat(std::size_t n) : n_(static_cast<std::uint8_t>(n)) { check_antennas(n); }

  static CMat identity(std::size_t n) {
    CMat m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  /// a b*
  static CMat outer(const CVec& a, const CVec& b) {
    require_same_size(a, b);
    CMat m(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < a.size(); ++j) m(i, j) = a[i] * std::conj(b[j]);
    return m;
  }

  std::size_t size() const noexcept { return n_; }

  cplx& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * kMaxAntennas + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const noexcept {
    return data_[r * kMaxAntennas + c];
  }

  bool is_hermitian(double tol = 1e-12) const noexcept {
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j)
        if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > tol) return false;
    return true;
  }

  CVec operator*(const CVec& v) const {
    if (v.size() != n_) throw ShapeError("matrix/vector size mismatch");
    CVec out(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      cplx s{};
      for (std::size_t j = 0; j < n_; ++j) s += (*this)(i, j) * v[j];
      out[i] = s;
    }
    return out;
  }

  CMat operator*(const CMat& o) const {
    if (o.n_ != n_) throw ShapeError("matrix size mismatch");
    CMat out(n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t k = 0; k < n_; ++k)
        for (std::size_t j = 0; j < n_; ++j) out(i, j) += (*this)(i, k) * o(k, j);
    return out;
  }

  CMat& operator+=(const CMat& o) {
    if (o.n_ != n_) throw ShapeError("matrix size mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  CMat& operator*=(cplx s) {
    for (auto& x : data_) x *= s;
    return *this;
  }

  friend CMat operator+(CMat a, const CMat& b) { return a += b; }
  friend CMat operator*(CMat a, cplx s) { return a *= s; }
  friend CMat operator*(double s, CMat a) { return a *= cplx(s, 0.0); }

 private:
  std::array<cplx, kMaxAntennas * kMaxAntennas> data_{};
  std::uint8_t n_;
};

}  // namespace wyner
