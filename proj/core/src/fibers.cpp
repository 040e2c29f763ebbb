#include "supertrace/fibers.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <set>

#include "supertrace/errors.hpp"

namespace supertrace {

bool VectorFunction::is_modulation_free() const {
  return std::all_of(components.begin(), components.end(),
                     [](const StepSpectrum& s) { return s.is_modulation_free(); });
}

bool VectorFunction::is_zero() const {
  return std::all_of(components.begin(), components.end(),
                     [](const StepSpectrum& s) { return s.is_zero(); });
}

RationalPi VectorFunction::outer_radius() const {
  RationalPi r;
  for (const auto& c : components) r = std::max(r, c.outer_radius());
  return r;
}

RationalPi VectorFunction::inner_radius() const {
  bool any = false;
  RationalPi r;
  for (const auto& c : components) {
    if (c.is_zero()) continue;
    r = any ? std::min(r, c.inner_radius()) : c.inner_radius();
    any = true;
  }
  return r;
}

double l2_norm_sq(const VectorFunction& v) {
  double total = 0.0;
  for (const auto& c : v.components) total += l2_norm_sq(c);
  return total;
}

Rational l2_norm_sq_exact(const VectorFunction& v) {
  Rational total(0);
  for (const auto& c : v.components) total += l2_norm_sq_exact(c);
  return total;
}

void require_modulation_free(const std::vector<VectorFunction>& family, const std::string& what) {
  for (const auto& f : family) {
    if (!f.is_modulation_free()) {
      fail(ErrorCode::ModeUnsupported,
           what + ": exact mode needs modulation-free input ('" + f.label + "' is modulated)");
    }
  }
}

void require_compatible(const std::vector<VectorFunction>& family, const AffineStructure& a) {
  for (const auto& f : family) {
    if (f.size() != a.n) {
      fail(ErrorCode::InvalidArgument, "function '" + f.label + "' has " +
                                           std::to_string(f.size()) + " components, structure has " +
                                           std::to_string(a.n));
    }
  }
}

FiberOperator FiberOperator::rank_one(Fiber f) {
  if (f.empty()) fail(ErrorCode::InvalidArgument, "rank-one operator needs a nonzero vector");
  return FiberOperator(RankOne{std::move(f)});
}

FiberOperator FiberOperator::matrix(std::map<std::pair<FiberIndex, FiberIndex>, Complex> entries) {
  std::erase_if(entries, [](const auto& kv) { return kv.second == Complex{}; });
  return FiberOperator(Matrix{std::move(entries)});
}

FiberOperator FiberOperator::elementary(const FiberIndex& from, const FiberIndex& to) {
  return matrix({{{to, from}, Complex{1.0, 0.0}}});
}

FiberOperator FiberOperator::conjugated(FiberOperator inner, AffineStructure structure,
                                        std::vector<FiberMap> maps) {
  return FiberOperator(Conjugated{std::make_shared<const FiberOperator>(std::move(inner)),
                                  std::move(structure), std::move(maps)});
}

Fiber apply_map(const AffineStructure& a, const FiberMap& m, const Fiber& v) {
  switch (m.kind) {
    case FiberMap::Kind::Shift: return shift_lambda(m.param, v);
    case FiberMap::Kind::Permute: return perm_S(a, v);
    case FiberMap::Kind::Dilate: return op_D(a, m.param, v);
  }
  return v;
}

Fiber apply_map_adjoint(const AffineStructure& a, const FiberMap& m, const Fiber& v) {
  switch (m.kind) {
    case FiberMap::Kind::Shift: return shift_lambda(-m.param, v);
    case FiberMap::Kind::Permute: return perm_S_adjoint(a, v);
    case FiberMap::Kind::Dilate: return op_D_adjoint(a, m.param, v);
  }
  return v;
}

Fiber FiberOperator::apply(const Fiber& v) const {
  struct Visitor {
    const Fiber& v;
    Fiber operator()(const Identity&) const { return v; }
    Fiber operator()(const RankOne& r) const { return fiber_inner(v, r.f) * Fiber(r.f); }
    Fiber operator()(const Matrix& m) const {
      Fiber out;
      for (const auto& [rc, value] : m.entries) {
        const Complex x = v.at(rc.second);
        if (x != Complex{}) out.add(rc.first, value * x);
      }
      return out;
    }
    Fiber operator()(const Conjugated& c) const {
      Fiber w = v;
      for (const auto& m : c.maps) w = apply_map(c.structure, m, w);
      w = c.inner->apply(w);
      for (auto it = c.maps.rbegin(); it != c.maps.rend(); ++it) {
        w = apply_map_adjoint(c.structure, *it, w);
      }
      return w;
    }
  };
  return std::visit(Visitor{v}, rep_);
}

Complex FiberOperator::form(const Fiber& v) const {
  if (is_identity()) return v.norm_sq();
  if (const auto* r = std::get_if<RankOne>(&rep_)) return std::norm(fiber_inner(v, r->f));
  return fiber_inner(apply(v), v);
}

Fiber fiber(const VectorFunction& phi, const AffineStructure& a, const RationalPi& xi) {
  Fiber out;
  const int n = std::min(phi.size(), a.n);
  for (int i = 0; i < n; ++i) {
    const RationalPi base = xi - a.theta[static_cast<std::size_t>(i)];
    for (const auto& seg : phi.components[static_cast<std::size_t>(i)].segments()) {
      // base + 2k*pi in [left, right)
      const Integer k_lo = ceil_of(Rational((seg.left.coeff() - base.coeff()) / 2));
      const Integer k_end = ceil_of(Rational((seg.right.coeff() - base.coeff()) / 2));
      for (Integer k = k_lo; k < k_end; ++k) {
        const RationalPi x = base + two_pi_times(k);
        Complex value = seg.piece.value;
        if (sgn(seg.piece.modulation) != 0) {
          value *= unit_phase(Rational(seg.piece.modulation * x.coeff()));
        }
        out.set({to_int64(k), i}, value);
      }
    }
  }
  return out;
}

std::vector<RationalPi> fiber_breakpoints(const std::vector<VectorFunction>& family,
                                          const AffineStructure& a) {
  std::set<RationalPi> pts;
  for (const auto& phi : family) {
    const int n = std::min(phi.size(), a.n);
    for (int i = 0; i < n; ++i) {
      for (const auto& b : phi.components[static_cast<std::size_t>(i)].breakpoints()) {
        pts.insert((b + a.theta[static_cast<std::size_t>(i)]).reduced());
      }
    }
  }
  return {pts.begin(), pts.end()};
}

std::vector<Cell> lattice_cells(const std::vector<RationalPi>& points_mod_2pi,
                                const RationalPi& lo, const RationalPi& hi) {
  std::vector<RationalPi> cuts;
  if (lo < hi) {
    const Integer k_lo = floor_of(Rational((lo.coeff() - 1) / 2));
    const Integer k_hi = ceil_of(Rational((hi.coeff() + 1) / 2));
    for (Integer k = k_lo; k <= k_hi; ++k) {
      const RationalPi shift = two_pi_times(k);
      for (const auto& p : points_mod_2pi) {
        RationalPi q = p + shift;
        if (lo < q && q < hi) cuts.push_back(std::move(q));
      }
    }
  }
  return cells_from_points(std::move(cuts), lo, hi);
}

std::vector<Cell> fiber_cells(const std::vector<VectorFunction>& family, const AffineStructure& a,
                              const RationalPi& lo, const RationalPi& hi) {
  return lattice_cells(fiber_breakpoints(family, a), lo, hi);
}

VectorFunction apply_multiplier(const PeriodicStep& f, const VectorFunction& phi,
                                const AffineStructure& a) {
  require_compatible({phi}, a);
  VectorFunction out;
  out.label = phi.label;
  out.components.reserve(phi.components.size());
  for (int i = 0; i < a.n; ++i) {
    const auto& comp = phi.components[static_cast<std::size_t>(i)];
    if (comp.is_zero()) {
      out.components.emplace_back();
      continue;
    }
    const RationalPi& t = a.theta[static_cast<std::size_t>(i)];
    const StepSpectrum window = f.extend(comp.support_begin() + t, comp.support_end() + t);
    out.components.push_back(pointwise_product(comp, translate_arg(window, t)));
  }
  return out;
}

std::vector<VectorFunction> inverse_dilate_generators(const std::vector<VectorFunction>& family,
                                                      const AffineStructure& a) {
  require_compatible(family, a);
  const double amplitude = 1.0 / std::sqrt(static_cast<double>(a.scale));
  const Rational inv_scale = make_rational(1, a.scale);
  std::vector<VectorFunction> out;
  out.reserve(family.size() * static_cast<std::size_t>(a.scale));
  for (const auto& phi : family) {
    for (long r = 0; r < a.scale; ++r) {
      VectorFunction g;
      g.label = phi.label + "[U^-1 T^" + std::to_string(r) + "]";
      for (int i = 0; i < a.n; ++i) {
        const int j = a.sigma_inv(i);
        const Complex factor =
            amplitude * unit_phase(Rational(r * a.theta[static_cast<std::size_t>(j)].coeff()));
        g.components.push_back(
            modulate(dilate_arg(phi.components[static_cast<std::size_t>(j)], inv_scale), factor,
                     make_rational(r, a.scale)));
      }
      out.push_back(std::move(g));
    }
  }
  return out;
}

VectorFunction dilated_generator(const VectorFunction& psi, const AffineStructure& a, long m) {
  VectorFunction g;
  g.label = psi.label + "[N^" + std::to_string(m) + "]";
  const Rational factor = rational_pow(a.scale, m);
  for (int i = 0; i < a.n; ++i) {
    g.components.push_back(
        dilate_arg(psi.components[static_cast<std::size_t>(a.sigma_pow(i, m))], factor));
  }
  return g;
}

std::vector<QuasiAffineGenerator> quasi_affine_family(const std::vector<VectorFunction>& psis,
                                                      const AffineStructure& a, long max_level) {
  if (max_level < 0) fail(ErrorCode::InvalidArgument, "level bound must be >= 0");
  require_compatible(psis, a);
  std::vector<QuasiAffineGenerator> out;
  for (std::size_t src = 0; src < psis.size(); ++src) {
    const auto& psi = psis[src];
    for (long m = -max_level; m <= 0; ++m) {
      // components psi_{sigma^{-m}(i)}(N^{-m} xi)
      VectorFunction g = dilated_generator(psi, a, -m);
      g.label = psi.label + "[m=" + std::to_string(m) + "]";
      out.push_back({std::move(g), src, m, 0});
    }
    for (long m = 1; m <= max_level; ++m) {
      const Rational shrink = rational_pow(a.scale, -m);
      const long count = rational_pow(a.scale, m).get_num().get_si();
      const double amplitude = std::pow(static_cast<double>(a.scale), -0.5 * static_cast<double>(m));
      for (long r = 0; r < count; ++r) {
        VectorFunction g;
        g.label = psi.label + "[m=" + std::to_string(m) + ",r=" + std::to_string(r) + "]";
        for (int i = 0; i < a.n; ++i) {
          const int src_comp = a.sigma_pow(i, -m);
          const Complex factor =
              amplitude *
              unit_phase(Rational(r * a.theta[static_cast<std::size_t>(src_comp)].coeff()));
          g.components.push_back(
              modulate(dilate_arg(psi.components[static_cast<std::size_t>(src_comp)], shrink),
                       factor, Rational(r * shrink)));
        }
        out.push_back({std::move(g), src, m, r});
      }
    }
  }
  return out;
}

std::vector<VectorFunction> quasi_affine_generators(const std::vector<VectorFunction>& psis,
                                                    const AffineStructure& a, long max_level) {
  std::vector<VectorFunction> out;
  for (auto& q : quasi_affine_family(psis, a, max_level)) out.push_back(std::move(q.function));
  return out;
}

FrameBounds fiber_frame_bounds(const std::vector<Fiber>& fibers, double rel_tol) {
  std::map<FiberIndex, Eigen::Index> rows;
  for (const auto& f : fibers) {
    for (const auto& [idx, v] : f.entries()) rows.try_emplace(idx, 0);
  }
  if (rows.empty()) return {};
  Eigen::Index next = 0;
  for (auto& [idx, row] : rows) row = next++;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(next, static_cast<Eigen::Index>(fibers.size()));
  for (std::size_t c = 0; c < fibers.size(); ++c) {
    for (const auto& [idx, v] : fibers[c].entries()) {
      m(rows.at(idx), static_cast<Eigen::Index>(c)) = v;
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return {};
  FrameBounds out;
  out.upper = sv(0) * sv(0);
  for (Eigen::Index k = 0; k < sv.size(); ++k) {
    if (sv(k) > rel_tol * sv(0)) {
      ++out.rank;
      out.lower = sv(k) * sv(k);
    }
  }
  return out;
}

FrameBounds fiber_frame_bounds(const std::vector<VectorFunction>& family, const AffineStructure& a,
                               const RationalPi& xi, double rel_tol) {
  std::vector<Fiber> fibers;
  fibers.reserve(family.size());
  for (const auto& phi : family) fibers.push_back(fiber(phi, a, xi));
  return fiber_frame_bounds(fibers, rel_tol);
}

}  // namespace supertrace
