#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace flock {

/// Euclidean vector in 2 or 3 dimensions. Components are always finite;
/// any operation that would store a NaN or infinity throws std::domain_error.
class Vector {
 public:
  Vector() = default;

  Vector(double x, double y) : c_{x, y, 0.0}, dim_(2) { check(); }
  Vector(double x, double y, double z) : c_{x, y, z}, dim_(3) { check(); }

  static Vector zero(int dim) {
    if (dim != 2 && dim != 3) {
      throw std::invalid_argument("Vector dimension must be 2 or 3");
    }
    Vector v;
    v.dim_ = dim;
    return v;
  }

  int dim() const { return dim_; }
  double operator[](int k) const { return c_[static_cast<std::size_t>(k)]; }
  double x() const { return c_[0]; }
  double y() const { return c_[1]; }
  double z() const { return c_[2]; }

  double dot(const Vector& o) const {
    double s = 0.0;
    for (int k = 0; k < dim_; ++k) s += c_[k] * o.c_[k];
    return s;
  }
  double squared_norm() const { return dot(*this); }
  double norm() const { return std::sqrt(squared_norm()); }
  bool is_zero() const { return c_[0] == 0.0 && c_[1] == 0.0 && c_[2] == 0.0; }

  Vector& operator+=(const Vector& o) {
    for (int k = 0; k < 3; ++k) c_[k] += o.c_[k];
    return check();
  }
  Vector& operator-=(const Vector& o) {
    for (int k = 0; k < 3; ++k) c_[k] -= o.c_[k];
    return check();
  }
  Vector& operator*=(double a) {
    for (int k = 0; k < 3; ++k) c_[k] *= a;
    return check();
  }

  friend Vector operator+(Vector a, const Vector& b) { return a += b; }
  friend Vector operator-(Vector a, const Vector& b) { return a -= b; }
  friend Vector operator*(Vector a, double s) { return a *= s; }
  friend Vector operator*(double s, Vector a) { return a *= s; }
  friend Vector operator-(Vector a) { return a *= -1.0; }

  friend bool operator==(const Vector& a, const Vector& b) {
    return a.dim_ == b.dim_ && a.c_ == b.c_;
  }

 private:
  Vector& check() {
    for (double v : c_) {
      if (!std::isfinite(v)) throw std::domain_error("non-finite vector component");
    }
    return *this;
  }

  std::array<double, 3> c_{};
  int dim_ = 2;
};

inline double norm(const Vector& v) { return v.norm(); }
inline double distance(const Vector& a, const Vector& b) { return (b - a).norm(); }

}  // namespace flock
