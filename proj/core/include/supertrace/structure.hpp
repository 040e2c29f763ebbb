#pragma once

#include <string>
#include <vector>

#include "supertrace/fiber.hpp"
#include "supertrace/rational.hpp"

namespace supertrace {

/// Permutative affine structure on the n-fold sum of L2(R): scale N, a
/// permutation sigma of the components and angles theta_k in [-pi, pi) with
/// N * theta_k == theta_{sigma(k)} (mod 2pi). Components are 0-based.
struct AffineStructure {
  int n = 1;
  long scale = 2;
  std::vector<int> sigma{0};
  std::vector<RationalPi> theta{RationalPi()};

  /// n = 1, sigma = id, theta = 0.
  static AffineStructure classical(long scale = 2);
  /// n copies, sigma = id, all theta = 0.
  static AffineStructure amplified(int n, long scale = 2);

  int sigma_inv(int i) const;
  /// sigma^m(i) for any integer m.
  int sigma_pow(int i, long m) const;
  /// c_i = (theta_i - N * theta_{sigma^{-1}(i)}) / (2pi), an integer on valid structures.
  Integer lattice_offset(int i) const;

  friend bool operator==(const AffineStructure&, const AffineStructure&) = default;
};

struct Violation {
  int index = -1;  // 0-based component, -1 for structure-wide problems
  std::string message;
  Rational defect{0};  // N*theta_k - theta_sigma(k), reduced to [-1, 1), in units of pi
};

std::vector<Violation> validate_structure(const AffineStructure& a);
/// Throws InvalidStructure describing the first violation.
void require_valid(const AffineStructure& a);

struct Cycle {
  std::vector<int> members;  // in sigma order starting from the smallest index
  int theta_orbit_length = 0;
  /// The theta orbit under theta -> N*theta (mod 2pi) is strictly shorter than the cycle.
  bool orbit_shorter() const { return theta_orbit_length < static_cast<int>(members.size()); }
};

std::vector<Cycle> cycle_decomposition(const AffineStructure& a);

/// theta_k = 2*pi*k/p reduced to [-pi, pi), sigma(k) = N*k mod p (k = 1..p, p -> p).
/// Throws NotCoprime when gcd(N, p) != 1.
AffineStructure build_oversampling_structure(long scale, long p);

/// (lambda(s) v)(k, i) = v(k - s, i).
Fiber shift_lambda(std::int64_t s, const Fiber& v);
/// Component i of the result is component sigma^{-1}(i) of v.
Fiber perm_S(const AffineStructure& a, const Fiber& v);
Fiber perm_S_adjoint(const AffineStructure& a, const Fiber& v);
/// D_l moves (s, i) to (l + c_i + N*s, i); see lattice_offset.
Fiber op_D(const AffineStructure& a, long l, const Fiber& v);
Fiber op_D_adjoint(const AffineStructure& a, long l, const Fiber& v);

}  // namespace supertrace
