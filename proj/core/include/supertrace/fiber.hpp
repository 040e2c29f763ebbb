#pragma once

#include <compare>
#include <cstdint>
#include <map>

#include "supertrace/rational.hpp"

namespace supertrace {

/// Position (k, i) in the n-fold sum of l2(Z). Components are 0-based here;
/// documents and reports use 1-based components.
struct FiberIndex {
  std::int64_t k = 0;
  int i = 0;

  friend auto operator<=>(const FiberIndex&, const FiberIndex&) = default;
};

/// A finitely supported vector in the n-fold sum of l2(Z). Zero entries are
/// never stored, so `entries()` is exactly the support.
class Fiber {
 public:
  using Map = std::map<FiberIndex, Complex>;

  Fiber() = default;

  void set(const FiberIndex& idx, Complex value);
  void add(const FiberIndex& idx, Complex value);
  Complex at(const FiberIndex& idx) const;

  const Map& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  double norm_sq() const;

  Fiber& operator+=(const Fiber& other);
  Fiber& operator*=(Complex c);
  friend Fiber operator+(Fiber a, const Fiber& b) { return a += b; }
  friend Fiber operator*(Complex c, Fiber a) { return a *= c; }

  friend bool operator==(const Fiber&, const Fiber&) = default;

 private:
  Map entries_;
};

/// <u, v> = sum u(x) conj(v(x)).
Complex fiber_inner(const Fiber& u, const Fiber& v);
Fiber basis_fiber(std::int64_t k, int i);
/// delta_{(0,l)} + alpha * delta_{(k,j)}; k must be nonzero.
Fiber special_fiber(std::int64_t k, int l, int j, Complex alpha);

}  // namespace supertrace
