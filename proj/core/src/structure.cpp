#include "supertrace/structure.hpp"

#include <numeric>

#include "supertrace/errors.hpp"

namespace supertrace {

namespace {

Rational reduce_mod2(const Rational& q) { return RationalPi(q).reduced().coeff(); }

long positive_mod(long a, long m) {
  long r = a % m;
  return r < 0 ? r + m : r;
}

std::int64_t checked_component_shift(const AffineStructure& a, int i, long l, std::int64_t s) {
  return l + to_int64(a.lattice_offset(i)) + a.scale * s;
}

}  // namespace

AffineStructure AffineStructure::classical(long scale) { return amplified(1, scale); }

AffineStructure AffineStructure::amplified(int n, long scale) {
  AffineStructure a;
  a.n = n;
  a.scale = scale;
  a.sigma.resize(static_cast<std::size_t>(n));
  std::iota(a.sigma.begin(), a.sigma.end(), 0);
  a.theta.assign(static_cast<std::size_t>(n), RationalPi());
  return a;
}

int AffineStructure::sigma_inv(int i) const {
  for (int k = 0; k < n; ++k) {
    if (sigma[static_cast<std::size_t>(k)] == i) return k;
  }
  fail(ErrorCode::InvalidStructure, "sigma is not a permutation");
}

int AffineStructure::sigma_pow(int i, long m) const {
  int cur = i;
  if (m >= 0) {
    for (long t = 0; t < m; ++t) cur = sigma[static_cast<std::size_t>(cur)];
  } else {
    for (long t = 0; t < -m; ++t) cur = sigma_inv(cur);
  }
  return cur;
}

Integer AffineStructure::lattice_offset(int i) const {
  const int j = sigma_inv(i);
  const Rational d = (theta[static_cast<std::size_t>(i)].coeff() -
                      scale * theta[static_cast<std::size_t>(j)].coeff()) /
                     2;
  if (d.get_den() != 1) {
    fail(ErrorCode::InvalidStructure,
         "N*theta_{sigma^-1(i)} != theta_i mod 2pi at component " + std::to_string(i + 1));
  }
  return d.get_num();
}

std::vector<Violation> validate_structure(const AffineStructure& a) {
  std::vector<Violation> out;
  if (a.n < 1) out.push_back({-1, "n must be positive", 0});
  if (a.scale < 2) out.push_back({-1, "scale N must be >= 2", 0});
  if (static_cast<int>(a.sigma.size()) != a.n || static_cast<int>(a.theta.size()) != a.n) {
    out.push_back({-1, "sigma and theta must have n entries", 0});
    return out;
  }
  std::vector<int> seen(static_cast<std::size_t>(a.n), 0);
  bool bijective = true;
  for (int k = 0; k < a.n; ++k) {
    const int img = a.sigma[static_cast<std::size_t>(k)];
    if (img < 0 || img >= a.n || seen[static_cast<std::size_t>(img)]++ > 0) {
      out.push_back({k, "sigma is not a bijection at index " + std::to_string(k + 1), 0});
      bijective = false;
    }
  }
  for (int k = 0; k < a.n; ++k) {
    const RationalPi& t = a.theta[static_cast<std::size_t>(k)];
    if (t < RationalPi(-1, 1) || !(t < RationalPi(1, 1))) {
      out.push_back({k, "theta_" + std::to_string(k + 1) + " = " + t.str() + "pi outside [-pi, pi)",
                     0});
    }
  }
  if (!bijective) return out;
  for (int k = 0; k < a.n; ++k) {
    const Rational lhs = a.scale * a.theta[static_cast<std::size_t>(k)].coeff();
    const Rational rhs = a.theta[static_cast<std::size_t>(a.sigma[static_cast<std::size_t>(k)])].coeff();
    const Rational defect = reduce_mod2(Rational(lhs - rhs));
    if (sgn(defect) != 0) {
      out.push_back({k,
                     "N*theta_" + std::to_string(k + 1) + " != theta_" +
                         std::to_string(a.sigma[static_cast<std::size_t>(k)] + 1) +
                         " mod 2pi (defect " + format_rational(defect) + "pi)",
                     defect});
    }
  }
  return out;
}

void require_valid(const AffineStructure& a) {
  const auto v = validate_structure(a);
  if (!v.empty()) fail(ErrorCode::InvalidStructure, v.front().message);
}

std::vector<Cycle> cycle_decomposition(const AffineStructure& a) {
  require_valid(a);
  std::vector<Cycle> out;
  std::vector<bool> done(static_cast<std::size_t>(a.n), false);
  for (int start = 0; start < a.n; ++start) {
    if (done[static_cast<std::size_t>(start)]) continue;
    Cycle c;
    int cur = start;
    do {
      c.members.push_back(cur);
      done[static_cast<std::size_t>(cur)] = true;
      cur = a.sigma[static_cast<std::size_t>(cur)];
    } while (cur != start);
    const RationalPi t0 = a.theta[static_cast<std::size_t>(start)];
    RationalPi t = (t0 * Rational(a.scale)).reduced();
    int len = 1;
    while (t != t0) {
      t = (t * Rational(a.scale)).reduced();
      ++len;
    }
    c.theta_orbit_length = len;
    out.push_back(std::move(c));
  }
  return out;
}

AffineStructure build_oversampling_structure(long scale, long p) {
  if (scale < 2 || p < 1) fail(ErrorCode::InvalidArgument, "need N >= 2 and p >= 1");
  if (std::gcd(scale, p) != 1) {
    fail(ErrorCode::NotCoprime,
         "gcd(" + std::to_string(scale) + ", " + std::to_string(p) + ") != 1");
  }
  AffineStructure a;
  a.n = static_cast<int>(p);
  a.scale = scale;
  a.sigma.resize(static_cast<std::size_t>(p));
  a.theta.resize(static_cast<std::size_t>(p));
  for (long k = 1; k <= p; ++k) {
    const auto idx = static_cast<std::size_t>(k - 1);
    a.theta[idx] = RationalPi(2 * k, p).reduced();
    long img = positive_mod(scale * k, p);
    if (img == 0) img = p;
    a.sigma[idx] = static_cast<int>(img - 1);
  }
  require_valid(a);
  return a;
}

Fiber shift_lambda(std::int64_t s, const Fiber& v) {
  Fiber out;
  for (const auto& [idx, val] : v.entries()) out.set({idx.k + s, idx.i}, val);
  return out;
}

Fiber perm_S(const AffineStructure& a, const Fiber& v) {
  Fiber out;
  for (const auto& [idx, val] : v.entries()) {
    out.set({idx.k, a.sigma[static_cast<std::size_t>(idx.i)]}, val);
  }
  return out;
}

Fiber perm_S_adjoint(const AffineStructure& a, const Fiber& v) {
  Fiber out;
  for (const auto& [idx, val] : v.entries()) out.set({idx.k, a.sigma_inv(idx.i)}, val);
  return out;
}

Fiber op_D(const AffineStructure& a, long l, const Fiber& v) {
  Fiber out;
  for (const auto& [idx, val] : v.entries()) {
    out.set({checked_component_shift(a, idx.i, l, idx.k), idx.i}, val);
  }
  return out;
}

Fiber op_D_adjoint(const AffineStructure& a, long l, const Fiber& v) {
  Fiber out;
  for (const auto& [idx, val] : v.entries()) {
    const std::int64_t rest = idx.k - l - to_int64(a.lattice_offset(idx.i));
    if (rest % a.scale != 0) continue;
    out.set({rest / a.scale, idx.i}, val);
  }
  return out;
}

}  // namespace supertrace
