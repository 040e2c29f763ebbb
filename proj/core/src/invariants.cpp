#include "supertrace/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "supertrace/errors.hpp"

namespace supertrace {

namespace {

const RationalPi kMinusPi(-1, 1);
const RationalPi kPi(1, 1);

// Offset of grid points inside each step, chosen to stay off rational breakpoints.
const Rational kGridOffset = make_rational(1, 1024) + make_rational(1, 9973);

std::vector<Fiber> fibers_at(const SISpace& v, const AffineStructure& a, const RationalPi& xi) {
  std::vector<Fiber> out;
  out.reserve(v.generators().size());
  for (const auto& phi : v.generators()) out.push_back(fiber(phi, a, xi));
  return out;
}

double max_abs_value(const StepSpectrum& s) {
  double m = 0.0;
  for (const auto& seg : s.segments()) m = std::max(m, std::abs(seg.piece.value));
  return m;
}

ExactResidual compare_exact(const StepSpectrum& lhs, const StepSpectrum& rhs) {
  ExactResidual out;
  const StepSpectrum diff = add(lhs, scale(rhs, Complex{-1.0, 0.0}));
  out.max_residual = max_abs_value(diff);
  if (lhs.is_zero() && rhs.is_zero()) return out;
  RationalPi lo, hi;
  bool first = true;
  for (const auto* s : {&lhs, &rhs}) {
    if (s->is_zero()) continue;
    lo = first ? s->support_begin() : std::min(lo, s->support_begin());
    hi = first ? s->support_end() : std::max(hi, s->support_end());
    first = false;
  }
  out.cells_checked = static_cast<long>(common_refinement({lhs, rhs}, lo, hi).size());
  return out;
}

}  // namespace

bool SISpace::is_zero() const {
  return std::all_of(generators_.begin(), generators_.end(),
                     [](const VectorFunction& g) { return g.is_zero(); });
}

Tagged<double> local_trace_vector(const SISpace& v, const AffineStructure& a, const Fiber& f,
                                  const RationalPi& xi) {
  Tagged<double> out;
  out.unverified = !v.ntf_verified();
  for (const auto& phi : v.generators()) out.value += std::norm(fiber_inner(f, fiber(phi, a, xi)));
  return out;
}

Tagged<Complex> local_trace_operator(const SISpace& v, const AffineStructure& a,
                                     const FiberOperator& t, const RationalPi& xi) {
  Tagged<Complex> out;
  out.unverified = !v.ntf_verified();
  for (const auto& phi : v.generators()) out.value += t.form(fiber(phi, a, xi));
  return out;
}

Complex dual_gramian_entry(const SISpace& v, const AffineStructure& a, const FiberIndex& row,
                           const FiberIndex& col, const RationalPi& xi) {
  Complex total{};
  for (const auto& phi : v.generators()) {
    const Fiber f = fiber(phi, a, xi);
    total += f.at(row) * std::conj(f.at(col));
  }
  return total;
}

StepSpectrum spectral_function(const SISpace& v, const AffineStructure& a, int i) {
  if (i < 0 || i >= a.n) fail(ErrorCode::InvalidIndex, "component out of range");
  std::vector<StepSpectrum> terms;
  for (const auto& phi : v.generators()) {
    terms.push_back(translate_arg(modulus_squared(phi.components.at(static_cast<std::size_t>(i))),
                                  -a.theta[static_cast<std::size_t>(i)]));
  }
  return sum(terms);
}

PeriodicStep dimension_function(const SISpace& v, const AffineStructure& a) {
  PeriodicStep total;
  for (int i = 0; i < a.n; ++i) total = add(total, periodize(spectral_function(v, a, i)));
  return total;
}

int multiplicity_at(const SISpace& v, const AffineStructure& a, const RationalPi& xi,
                    double rel_tol) {
  return fiber_frame_bounds(fibers_at(v, a, xi), rel_tol).rank;
}

std::vector<VectorFunction> extract_quasi_orthogonal(const SISpace& v, const AffineStructure& a,
                                                     double rel_tol) {
  require_modulation_free(v.generators(), "extract_quasi_orthogonal");
  require_compatible(v.generators(), a);
  std::vector<std::vector<std::vector<RawPiece>>> pieces;  // [output][component]
  for (const Cell& cell : fiber_cells(v.generators(), a, kMinusPi, kPi)) {
    const std::vector<Fiber> fibers = fibers_at(v, a, cell.mid);
    double scale_norm = 0.0;
    for (const auto& f : fibers) scale_norm = std::max(scale_norm, std::sqrt(f.norm_sq()));
    if (scale_norm == 0.0) continue;
    std::vector<Fiber> basis;
    for (const auto& f : fibers) {
      Fiber w = f;
      for (const auto& e : basis) w += (-fiber_inner(w, e)) * Fiber(e);
      const double norm = std::sqrt(w.norm_sq());
      if (norm <= rel_tol * scale_norm) continue;
      basis.push_back(Complex{1.0 / norm, 0.0} * std::move(w));
    }
    if (pieces.size() < basis.size()) {
      pieces.resize(basis.size(), std::vector<std::vector<RawPiece>>(static_cast<std::size_t>(a.n)));
    }
    for (std::size_t j = 0; j < basis.size(); ++j) {
      for (const auto& [idx, value] : basis[j].entries()) {
        const RationalPi shift = two_pi_times(idx.k) - a.theta[static_cast<std::size_t>(idx.i)];
        pieces[j][static_cast<std::size_t>(idx.i)].push_back(
            RawPiece{cell.left + shift, cell.right + shift, value, Rational(0)});
      }
    }
  }
  std::vector<VectorFunction> out;
  for (std::size_t j = 0; j < pieces.size(); ++j) {
    VectorFunction g;
    g.label = "qo" + std::to_string(j + 1);
    for (auto& raw : pieces[j]) g.components.push_back(make_step_spectrum(std::move(raw)));
    out.push_back(std::move(g));
  }
  return out;
}

std::vector<RationalPi> grid_points(const RationalPi& lo, const RationalPi& hi, int count) {
  if (count <= 0) fail(ErrorCode::InvalidArgument, "grid needs at least one point");
  if (!(lo < hi)) fail(ErrorCode::InvalidArgument, "grid window is empty");
  std::vector<RationalPi> out;
  out.reserve(static_cast<std::size_t>(count));
  const Rational step = Rational(hi.coeff() - lo.coeff()) / count;
  for (int t = 0; t < count; ++t) {
    out.push_back(lo + RationalPi(Rational(step * (t + kGridOffset))));
  }
  return out;
}

std::vector<RationalPi> seeded_points(const RationalPi& lo, const RationalPi& hi, int count,
                                      std::uint64_t seed) {
  if (count <= 0) fail(ErrorCode::InvalidArgument, "grid needs at least one point");
  if (!(lo < hi)) fail(ErrorCode::InvalidArgument, "grid window is empty");
  constexpr long kDen = 9973;
  std::mt19937_64 rng(seed);
  std::vector<RationalPi> out;
  out.reserve(static_cast<std::size_t>(count));
  const Rational step = Rational(hi.coeff() - lo.coeff()) / count;
  for (int t = 0; t < count; ++t) {
    const long u = 1 + static_cast<long>(rng() % (kDen - 1));
    out.push_back(lo + RationalPi(Rational(step * (t + make_rational(u, kDen)))));
  }
  return out;
}

double dilation_check(const SISpace& v, const AffineStructure& a, const FiberOperator& t,
                      int grid_count) {
  const SISpace dilated(inverse_dilate_generators(v.generators(), a));
  std::vector<FiberOperator> conjugated;
  for (long l = 0; l < a.scale; ++l) {
    conjugated.push_back(FiberOperator::conjugated(
        t, a, {{FiberMap::Kind::Permute, 0}, {FiberMap::Kind::Dilate, l}}));
  }
  double worst = 0.0;
  for (const RationalPi& xi : grid_points(kMinusPi, kPi, grid_count)) {
    const Complex lhs = local_trace_operator(dilated, a, t, xi).value;
    Complex rhs{};
    for (long l = 0; l < a.scale; ++l) {
      const RationalPi x = (xi + two_pi_times(l)) / Rational(a.scale);
      rhs += local_trace_operator(v, a, conjugated[static_cast<std::size_t>(l)], x).value;
    }
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

ExactResidual spectral_dilation_check(const SISpace& v, const AffineStructure& a) {
  require_modulation_free(v.generators(), "spectral_dilation_check");
  const SISpace dilated(inverse_dilate_generators(v.generators(), a));
  const Rational inv_scale = make_rational(1, a.scale);
  ExactResidual out;
  for (int j = 0; j < a.n; ++j) {
    const int src = a.sigma_inv(j);
    const RationalPi shift = (-a.theta[static_cast<std::size_t>(j)] +
                              a.theta[static_cast<std::size_t>(src)] * Rational(a.scale)) *
                             inv_scale;
    const StepSpectrum rhs =
        dilate_arg(translate_arg(spectral_function(v, a, src), shift), inv_scale);
    const ExactResidual r = compare_exact(spectral_function(dilated, a, j), rhs);
    out.max_residual = std::max(out.max_residual, r.max_residual);
    out.cells_checked += r.cells_checked;
  }
  return out;
}

ExactResidual dim_dilation_check(const SISpace& v, const AffineStructure& a) {
  require_modulation_free(v.generators(), "dim_dilation_check");
  const SISpace dilated(inverse_dilate_generators(v.generators(), a));
  const Rational inv_scale = make_rational(1, a.scale);
  const StepSpectrum ext = dimension_function(v, a).extend(kMinusPi, RationalPi(2, 1));
  std::vector<StepSpectrum> terms;
  for (long l = 0; l < a.scale; ++l) {
    terms.push_back(dilate_arg(translate_arg(ext, two_pi_times(l) * inv_scale), inv_scale));
  }
  const StepSpectrum rhs = restrict_to(sum(terms), kMinusPi, kPi);
  const StepSpectrum lhs = dimension_function(dilated, a).window();
  ExactResidual out;
  out.max_residual = max_abs_value(add(lhs, scale(rhs, Complex{-1.0, 0.0})));
  out.cells_checked = static_cast<long>(common_refinement({lhs, rhs}, kMinusPi, kPi).size());
  return out;
}

LimitProbe scaling_limit_probe(const SISpace& v, const AffineStructure& a, int i,
                               const RationalPi& xi, long m_max, double tol) {
  if (xi.is_zero()) fail(ErrorCode::InvalidPoint, "the limit probe needs xi != 0");
  if (i < 0 || i >= a.n) fail(ErrorCode::InvalidIndex, "component out of range");
  if (m_max < 0) fail(ErrorCode::InvalidArgument, "m_max must be >= 0");
  LimitProbe out;
  for (long m = 0; m <= m_max; ++m) {
    const RationalPi x = xi * rational_pow(a.scale, -m);
    double value = 0.0;
    for (const auto& phi : v.generators()) {
      value += std::norm(phi.components.at(static_cast<std::size_t>(i))(x));
    }
    out.values.push_back(value);
  }
  for (long m = m_max; m >= 0; --m) {
    if (std::abs(out.values[static_cast<std::size_t>(m)] - 1.0) > tol) break;
    out.settled_at = m;
  }
  return out;
}

}  // namespace supertrace
