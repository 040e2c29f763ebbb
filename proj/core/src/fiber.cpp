#include "supertrace/fiber.hpp"

#include "supertrace/errors.hpp"

namespace supertrace {

void Fiber::set(const FiberIndex& idx, Complex value) {
  if (value == Complex{}) {
    entries_.erase(idx);
  } else {
    entries_[idx] = value;
  }
}

void Fiber::add(const FiberIndex& idx, Complex value) {
  if (value == Complex{}) return;
  auto [it, inserted] = entries_.try_emplace(idx, value);
  if (!inserted) {
    it->second += value;
    if (it->second == Complex{}) entries_.erase(it);
  }
}

Complex Fiber::at(const FiberIndex& idx) const {
  auto it = entries_.find(idx);
  return it == entries_.end() ? Complex{} : it->second;
}

double Fiber::norm_sq() const {
  double total = 0.0;
  for (const auto& [idx, v] : entries_) total += std::norm(v);
  return total;
}

Fiber& Fiber::operator+=(const Fiber& other) {
  for (const auto& [idx, v] : other.entries_) add(idx, v);
  return *this;
}

Fiber& Fiber::operator*=(Complex c) {
  if (c == Complex{}) {
    entries_.clear();
    return *this;
  }
  for (auto& [idx, v] : entries_) v *= c;
  return *this;
}

Complex fiber_inner(const Fiber& u, const Fiber& v) {
  const auto& small = u.size() <= v.size() ? u : v;
  const bool u_small = &small == &u;
  Complex total{};
  for (const auto& [idx, a] : small.entries()) {
    const Complex b = (u_small ? v : u).at(idx);
    if (b == Complex{}) continue;
    total += u_small ? a * std::conj(b) : b * std::conj(a);
  }
  return total;
}

Fiber basis_fiber(std::int64_t k, int i) {
  Fiber f;
  f.set({k, i}, 1.0);
  return f;
}

Fiber special_fiber(std::int64_t k, int l, int j, Complex alpha) {
  if (k == 0) fail(ErrorCode::InvalidIndex, "special fiber requires k != 0");
  Fiber f = basis_fiber(0, l);
  f.add({k, j}, alpha);
  return f;
}

}  // namespace supertrace
