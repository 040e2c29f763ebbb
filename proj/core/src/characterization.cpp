#include "supertrace/characterization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <tuple>

#include "supertrace/errors.hpp"

namespace supertrace {

namespace {

const RationalPi kMinusPi(-1, 1);
const RationalPi kPi(1, 1);

// Lexicographic rank of a failure: equation, i, j, k/s, cell or point.
using WitnessKey = std::tuple<int, int, int, long, long>;

class Recorder {
 public:
  Recorder(Mode mode, double tol) : tol_(tol) {
    report_.mode = mode;
    report_.tolerance = tol;
  }

  void begin_point(const RationalPi& xi) {
    point_xi_ = xi;
    point_max_ = 0.0;
  }
  void end_point() { report_.samples.push_back({point_xi_, point_max_}); }

  template <typename MakeWitness>
  void observe(const WitnessKey& key, Complex value, Complex target, MakeWitness&& make) {
    const double residual = std::abs(value - target);
    const bool bad = !(residual <= tol_);
    const double shown = std::isnan(residual) ? std::numeric_limits<double>::infinity() : residual;
    point_max_ = std::max(point_max_, shown);
    report_.max_residual = std::max(report_.max_residual, shown);
    if (bad && (!best_ || key < *best_)) {
      best_ = key;
      Witness w = make();
      w.value = value;
      report_.witness = std::move(w);
    }
  }

  void note(std::string text) { report_.notes.push_back(std::move(text)); }

  CheckReport finish() {
    report_.cells_checked = static_cast<long>(report_.samples.size());
    report_.passed = !best_.has_value();
    return std::move(report_);
  }

 private:
  double tol_;
  CheckReport report_;
  std::optional<WitnessKey> best_;
  RationalPi point_xi_;
  double point_max_ = 0.0;
};

Witness make_witness(std::string equation, const RationalPi& xi, int i, int j,
                     std::string index_name = {}, long index = 0) {
  Witness w;
  w.equation = std::move(equation);
  w.xi = xi;
  w.i = i;
  w.j = j;
  w.index_name = std::move(index_name);
  w.index = index;
  return w;
}

struct Radii {
  RationalPi inner;  // over nonzero components
  RationalPi outer;
  bool all_zero = true;
};

Radii radii_of(const std::vector<VectorFunction>& psis) {
  Radii out;
  for (const auto& psi : psis) {
    for (const auto& c : psi.components) {
      if (c.is_zero()) continue;
      out.inner = out.all_zero ? c.inner_radius() : std::min(out.inner, c.inner_radius());
      out.outer = std::max(out.outer, c.outer_radius());
      out.all_zero = false;
    }
  }
  return out;
}

std::vector<RationalPi> all_breakpoints(const std::vector<VectorFunction>& psis) {
  std::set<RationalPi> pts;
  for (const auto& psi : psis) {
    for (const auto& c : psi.components) {
      for (const auto& b : c.breakpoints()) pts.insert(b);
    }
  }
  return {pts.begin(), pts.end()};
}

// Power table N^m for m in [lo, hi].
class Powers {
 public:
  Powers(long scale, long lo, long hi) : lo_(lo) {
    for (long m = lo; m <= hi; ++m) table_.push_back(rational_pow(scale, m));
  }
  const Rational& operator()(long m) const { return table_[static_cast<std::size_t>(m - lo_)]; }

 private:
  long lo_;
  std::vector<Rational> table_;
};

struct Point {
  RationalPi xi;
  std::optional<std::pair<RationalPi, RationalPi>> cell;
};

std::vector<Point> points_on(const std::vector<std::pair<RationalPi, RationalPi>>& intervals,
                             const std::vector<RationalPi>& cuts, Mode mode, int grid_count) {
  std::vector<Point> out;
  for (const auto& [lo, hi] : intervals) {
    if (!(lo < hi)) continue;
    if (mode == Mode::Exact) {
      for (const Cell& c : cells_from_points(cuts, lo, hi)) {
        out.push_back({c.mid, std::make_pair(c.left, c.right)});
      }
    } else {
      for (const RationalPi& x : grid_points(lo, hi, grid_count)) out.push_back({x, std::nullopt});
    }
  }
  return out;
}

struct SuperWaveletRun {
  const AffineStructure& a;
  const std::vector<VectorFunction>& psis;
  CheckOptions options;
  std::string suffix;
  // Pair filter: nullopt means every i <= j (or every pair with all_pairs).
  std::optional<std::pair<int, int>> only_pair;

  Complex component(const VectorFunction& psi, int c, const RationalPi& x) const {
    return psi.components[static_cast<std::size_t>(c)](x);
  }

  std::vector<std::pair<int, int>> pairs() const {
    if (only_pair) return {*only_pair};
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i < a.n; ++i) {
      for (int j = options.all_pairs ? 0 : i; j < a.n; ++j) out.emplace_back(i, j);
    }
    return out;
  }

  Complex scale_sum(int i, int j, const RationalPi& xi, long m_lo, long m_hi,
                    const Powers& pw) const {
    Complex total{};
    for (const auto& psi : psis) {
      for (long m = m_lo; m <= m_hi; ++m) {
        const RationalPi x = xi * pw(m);
        const Complex u = component(psi, a.sigma_pow(i, m), x);
        if (u == Complex{}) continue;
        total += u * std::conj(component(psi, a.sigma_pow(j, m), x));
      }
    }
    return total;
  }

  Complex offset_sum(int i, int j, const RationalPi& off, const RationalPi& xi, long m_max,
                     const Powers& pw) const {
    Complex total{};
    for (const auto& psi : psis) {
      for (long m = 0; m <= m_max; ++m) {
        const Complex u = component(psi, a.sigma_pow(i, m), xi * pw(m));
        if (u == Complex{}) continue;
        total += u * std::conj(component(psi, a.sigma_pow(j, m), (xi + off) * pw(m)));
      }
    }
    return total;
  }

  CheckReport run() const {
    const Mode mode = options.mode;
    if (mode == Mode::Exact) require_modulation_free(psis, "check_super_wavelet");
    const Radii rad = radii_of(psis);
    if (mode == Mode::Exact && !rad.all_zero && rad.inner.is_zero()) {
      fail(ErrorCode::ZeroInnerRadius,
           "exact mode needs every support bounded away from 0; use grid mode");
    }
    const bool truncated = rad.inner.is_zero();
    const Rational N(a.scale);
    const std::vector<RationalPi> bps = all_breakpoints(psis);
    Recorder rec(mode, options.effective_tolerance());
    const int half_grid = std::max(1, options.grid_points / 2);

    // Scale sums on a fundamental annulus; other points follow by dilation covariance.
    {
      const RationalPi base = truncated ? kPi : rad.inner;
      long m_lo = -options.grid_levels;
      long m_hi = options.grid_levels;
      if (!truncated) {
        m_lo = ceil_log(Rational(rad.inner.coeff() / (base.coeff() * N)), a.scale);
        m_hi = floor_log(Rational(rad.outer.coeff() / base.coeff()), a.scale);
      }
      std::vector<RationalPi> cuts;
      if (mode == Mode::Exact) {
        for (long m = m_lo; m <= m_hi; ++m) {
          const Rational shrink = rational_pow(a.scale, -m);
          for (const auto& b : bps) cuts.push_back(b * shrink);
        }
      }
      const std::vector<Point> pts =
          points_on({{-(base * N), -base}, {base, base * N}}, cuts, mode, half_grid);
      const long max_orbit = static_cast<long>(a.n) * a.n + 1;
      const Powers pw(a.scale, std::min(m_lo, 0L) - max_orbit, std::max(m_hi, 0L) + max_orbit);
      const std::string eq = "scale-sum" + suffix;
      for (const auto& [i, j] : pairs()) {
        if (a.theta[static_cast<std::size_t>(i)] != a.theta[static_cast<std::size_t>(j)]) continue;
        const Complex target = i == j ? Complex{1.0, 0.0} : Complex{};
        int pi = i;
        int pj = j;
        long k = 0;
        do {
          for (std::size_t c = 0; c < pts.size(); ++c) {
            const Point& p = pts[c];
            const RationalPi shown = p.xi * pw(k);
            rec.begin_point(shown);
            const Complex value = scale_sum(pi, pj, p.xi, m_lo, m_hi, pw);
            rec.observe({0, i, j, 0, k * static_cast<long>(pts.size()) + static_cast<long>(c)},
                        value, target, [&] {
                          Witness w = make_witness(eq, shown, i, j);
                          if (p.cell) w.cell = std::make_pair(p.cell->first * pw(k), p.cell->second * pw(k));
                          return w;
                        });
            rec.end_point();
          }
          pi = a.sigma_inv(pi);
          pj = a.sigma_inv(pj);
          ++k;
        } while (pi != i || pj != j);
      }
    }

    // Offset sums for s outside NZ.
    if (!rad.all_zero) {
      const RationalPi R = rad.outer;
      const std::string eq = "offset-sum" + suffix;
      for (const auto& [i, j] : pairs()) {
        const RationalPi c = (a.theta[static_cast<std::size_t>(a.sigma_inv(i))] -
                              a.theta[static_cast<std::size_t>(a.sigma_inv(j))]) *
                             N;
        const long s_lo = to_int64(ceil_of(Rational((-2 * R.coeff() - c.coeff()) / 2)));
        const long s_hi = to_int64(floor_of(Rational((2 * R.coeff() - c.coeff()) / 2)));
        for (long s = s_lo; s <= s_hi; ++s) {
          if (s % a.scale == 0) continue;
          const RationalPi off = c + two_pi_times(s);
          if (off.is_zero()) fail(ErrorCode::InvalidStructure, "offset vanishes for s outside NZ");
          RationalPi delta;
          long m_max = options.grid_levels;
          if (!truncated) {
            // Below delta no term can be nonzero: |xi| >= r / N^m and |xi + off| <= R / N^m.
            delta = off.abs() * Rational(rad.inner.coeff() / (rad.inner.coeff() + R.coeff()));
            m_max = floor_log(Rational(R.coeff() / delta.coeff()), a.scale);
          }
          const Powers pw(a.scale, 0, m_max);
          std::vector<RationalPi> cuts;
          if (mode == Mode::Exact) {
            for (long m = 0; m <= m_max; ++m) {
              const Rational shrink = rational_pow(a.scale, -m);
              for (const auto& b : bps) {
                cuts.push_back(b * shrink);
                cuts.push_back(b * shrink - off);
              }
            }
          }
          std::vector<std::pair<RationalPi, RationalPi>> domain;
          if (truncated) {
            domain = {{-R, R}};
          } else {
            domain = {{-R, -delta}, {delta, R}};
          }
          const std::vector<Point> pts =
              points_on(domain, cuts, mode, truncated ? options.grid_points : half_grid);
          for (std::size_t ci = 0; ci < pts.size(); ++ci) {
            const Point& p = pts[ci];
            rec.begin_point(p.xi);
            const Complex value = offset_sum(i, j, off, p.xi, m_max, pw);
            rec.observe({1, i, j, s, static_cast<long>(ci)}, value, Complex{}, [&] {
              Witness w = make_witness(eq, p.xi, i, j, "s", s);
              w.cell = p.cell;
              return w;
            });
            rec.end_point();
          }
        }
      }
    }

    if (!only_pair && !options.all_pairs && a.n > 1) {
      rec.note("pairs with i > j skipped by conjugate symmetry: " +
               std::to_string(a.n * (a.n - 1) / 2));
    }
    if (truncated) {
      rec.note("grid mode truncation: scale levels m in [-" + std::to_string(options.grid_levels) +
               ", " + std::to_string(options.grid_levels) + "]");
    }
    return rec.finish();
  }
};

std::vector<std::pair<RationalPi, RationalPi>> window_minus_ball(const RationalPi& lo,
                                                                 const RationalPi& hi,
                                                                 const RationalPi& center,
                                                                 const RationalPi& eps) {
  std::vector<std::pair<RationalPi, RationalPi>> out;
  if (!(lo < hi)) return out;
  const RationalPi cut_lo = std::min(hi, center - eps);
  const RationalPi cut_hi = std::max(lo, center + eps);
  if (eps.coeff() <= 0 || !(cut_lo < cut_hi)) {
    out.emplace_back(lo, hi);
    return out;
  }
  if (lo < cut_lo) out.emplace_back(lo, cut_lo);
  if (cut_hi < hi) out.emplace_back(cut_hi, hi);
  return out;
}

VectorFunction scalar(const StepSpectrum& s, std::string label) {
  VectorFunction v;
  v.components.push_back(s);
  v.label = std::move(label);
  return v;
}

}  // namespace

std::string_view to_string(Mode mode) { return mode == Mode::Exact ? "exact" : "grid"; }

Mode parse_mode(std::string_view text) {
  if (text == "exact") return Mode::Exact;
  if (text == "grid") return Mode::Grid;
  fail(ErrorCode::InvalidArgument, "mode must be exact or grid, got '" + std::string(text) + "'");
}

std::string_view to_string(SystemTag tag) {
  switch (tag) {
    case SystemTag::Candidate: return "candidate";
    case SystemTag::VerifiedNtf: return "verified-NTF";
    case SystemTag::VerifiedOrthonormal: return "verified-orthonormal";
  }
  return "candidate";
}

WaveletSystem::WaveletSystem(AffineStructure structure, std::vector<VectorFunction> psis)
    : structure_(std::move(structure)), psis_(std::move(psis)) {
  require_valid(structure_);
  require_compatible(psis_, structure_);
}

CheckReport certify_ntf_generator(SISpace& v, const AffineStructure& a, double tol) {
  require_compatible(v.generators_, a);
  bool exact = true;
  for (const auto& g : v.generators_) exact = exact && g.is_modulation_free();
  Recorder rec(exact ? Mode::Exact : Mode::Grid, tol);
  std::vector<RationalPi> pts;
  if (exact) {
    for (const Cell& c : fiber_cells(v.generators_, a, kMinusPi, kPi)) pts.push_back(c.mid);
  } else {
    pts = grid_points(kMinusPi, kPi, kDefaultGridPoints);
  }
  for (std::size_t p = 0; p < pts.size(); ++p) {
    rec.begin_point(pts[p]);
    const FrameBounds fb = fiber_frame_bounds(v.generators_, a, pts[p]);
    if (fb.rank > 0) {
      const auto make = [&] { return make_witness("frame-bounds", pts[p], 0, 0); };
      rec.observe({0, 0, 0, 0, static_cast<long>(p)}, fb.lower, 1.0, make);
      rec.observe({0, 0, 0, 1, static_cast<long>(p)}, fb.upper, 1.0, make);
    }
    rec.end_point();
  }
  CheckReport report = rec.finish();
  v.ntf_verified_ = report.passed;
  return report;
}

CheckReport check_ntf_translates(const std::vector<VectorFunction>& family,
                                 const AffineStructure& a, const RationalPi& lo,
                                 const RationalPi& hi, const CheckOptions& options) {
  require_compatible(family, a);
  if (!(lo < hi)) fail(ErrorCode::InvalidArgument, "window is empty");
  std::vector<RationalPi> pts;
  if (options.mode == Mode::Exact) {
    require_modulation_free(family, "check_ntf_translates");
    for (const Cell& c : fiber_cells(family, a, lo, hi)) pts.push_back(c.mid);
  } else {
    pts = grid_points(lo, hi, options.grid_points);
  }
  Recorder rec(options.mode, options.effective_tolerance());
  for (std::size_t p = 0; p < pts.size(); ++p) {
    rec.begin_point(pts[p]);
    std::vector<Fiber> fibers;
    std::set<std::int64_t> ks{0};
    for (const auto& phi : family) {
      fibers.push_back(fiber(phi, a, pts[p]));
      for (const auto& [idx, value] : fibers.back().entries()) ks.insert(idx.k);
    }
    for (int i = 0; i < a.n; ++i) {
      for (int j = 0; j < a.n; ++j) {
        for (const std::int64_t k : ks) {
          Complex value{};
          for (const auto& f : fibers) value += f.at({0, i}) * std::conj(f.at({k, j}));
          const Complex target = (i == j && k == 0) ? Complex{1.0, 0.0} : Complex{};
          rec.observe({0, i, j, static_cast<long>(k), static_cast<long>(p)}, value, target,
                      [&] { return make_witness("translates", pts[p], i, j, "k", static_cast<long>(k)); });
        }
      }
    }
    rec.end_point();
  }
  rec.note("window-relative check on [" + lo.str() + ", " + hi.str() + ")pi with " +
           std::to_string(family.size()) + " generators");
  return rec.finish();
}

CheckReport check_super_wavelet(const WaveletSystem& w, const CheckOptions& options) {
  return SuperWaveletRun{w.structure(), w.psis(), options, "", std::nullopt}.run();
}

CheckReport verify_wavelet_system(WaveletSystem& w, const CheckOptions& options) {
  CheckReport report = check_super_wavelet(w, options);
  if (!report.passed) {
    w.tag_ = SystemTag::Candidate;
    return report;
  }
  const bool unit_norms = std::all_of(w.psis_.begin(), w.psis_.end(), [&](const VectorFunction& p) {
    return std::abs(l2_norm_sq(p) - 1.0) <= report.tolerance;
  });
  w.tag_ = unit_norms ? SystemTag::VerifiedOrthonormal : SystemTag::VerifiedNtf;
  return report;
}

CheckReport check_wavelet_scalar(const std::vector<StepSpectrum>& psis, long scale,
                                 const CheckOptions& options) {
  std::vector<VectorFunction> vs;
  for (std::size_t l = 0; l < psis.size(); ++l) vs.push_back(scalar(psis[l], "psi" + std::to_string(l + 1)));
  return check_super_wavelet(WaveletSystem(AffineStructure::classical(scale), std::move(vs)),
                             options);
}

CheckReport check_strong_disjointness(const std::vector<StepSpectrum>& psis,
                                      const std::vector<StepSpectrum>& others, long scale,
                                      const CheckOptions& options) {
  if (psis.size() != others.size()) {
    fail(ErrorCode::CardinalityMismatch, "strong disjointness needs lists of equal length (" +
                                             std::to_string(psis.size()) + " vs " +
                                             std::to_string(others.size()) + ")");
  }
  const AffineStructure a = AffineStructure::amplified(2, scale);
  std::vector<VectorFunction> pairs;
  for (std::size_t l = 0; l < psis.size(); ++l) {
    VectorFunction v;
    v.components = {psis[l], others[l]};
    v.label = "pair" + std::to_string(l + 1);
    pairs.push_back(std::move(v));
  }
  CheckReport report = SuperWaveletRun{a, pairs, options, "-cross", std::make_pair(0, 1)}.run();
  const bool other_zero = std::all_of(others.begin(), others.end(),
                                      [](const StepSpectrum& s) { return s.is_zero(); });
  if (other_zero) report.notes.push_back("second list is zero: not a wavelet input");
  return report;
}

SISpace core_space(const WaveletSystem& w, long max_level) {
  std::vector<VectorFunction> gens;
  for (const auto& psi : w.psis()) {
    for (long m = 1; m <= max_level; ++m) gens.push_back(dilated_generator(psi, w.structure(), m));
  }
  return SISpace(std::move(gens));
}

ScalingSpectral scaling_spectral_function(const WaveletSystem& w, int i, const RationalPi& lo,
                                          const RationalPi& hi, const RationalPi& eps) {
  const AffineStructure& a = w.structure();
  if (i < 0 || i >= a.n) fail(ErrorCode::InvalidIndex, "component out of range");
  if (!(lo < hi)) fail(ErrorCode::InvalidArgument, "window is empty");
  const RationalPi& theta = a.theta[static_cast<std::size_t>(i)];
  if (eps.coeff() <= 0 && lo <= theta && theta <= hi) {
    fail(ErrorCode::WindowTouchesAccumulationPoint,
         "window meets theta_" + std::to_string(i + 1) + " = " + theta.str() + "pi; use eps > 0");
  }
  ScalingSpectral out;
  out.unverified = !w.verified();
  const auto parts = window_minus_ball(lo, hi, theta, eps);
  Rational kept(0);
  RationalPi nearest;
  bool first = true;
  for (const auto& [p, q] : parts) {
    kept += q.coeff() - p.coeff();
    RationalPi d;
    if (theta < p) d = p - theta;
    else if (q <= theta) d = theta - q;
    nearest = first ? d : std::min(nearest, d);
    first = false;
  }
  out.excluded_measure = Rational(hi.coeff() - lo.coeff()) - kept;
  if (parts.empty()) return out;
  if (nearest.is_zero()) {
    fail(ErrorCode::WindowTouchesAccumulationPoint,
         "window reaches theta_" + std::to_string(i + 1) + " = " + theta.str() + "pi");
  }
  const Radii rad = radii_of(w.psis());
  if (rad.all_zero) return out;
  const long m_max = floor_log(Rational(rad.outer.coeff() / nearest.coeff()), a.scale);
  std::vector<StepSpectrum> terms;
  for (const auto& psi : w.psis()) {
    for (long m = 1; m <= m_max; ++m) {
      const StepSpectrum term = translate_arg(
          dilate_arg(modulus_squared(psi.components[static_cast<std::size_t>(a.sigma_pow(i, m))]),
                     rational_pow(a.scale, m)),
          -theta);
      for (const auto& [p, q] : parts) terms.push_back(restrict_to(term, p, q));
    }
  }
  out.value = sum(terms);
  return out;
}

CheckReport gripenberg_weiss_residual(const WaveletSystem& w,
                                      const std::vector<VectorFunction>& phis,
                                      const RationalPi& lo, const RationalPi& hi,
                                      const RationalPi& eps) {
  const AffineStructure& a = w.structure();
  require_compatible(phis, a);
  const SISpace scaling_space(phis);
  Recorder rec(Mode::Exact, kExactTolerance);
  for (int i = 0; i < a.n; ++i) {
    const ScalingSpectral rhs = scaling_spectral_function(w, i, lo, hi, eps);
    const StepSpectrum full = spectral_function(scaling_space, a, i);
    const auto parts = window_minus_ball(lo, hi, a.theta[static_cast<std::size_t>(i)], eps);
    long cell_index = 0;
    for (const auto& [p, q] : parts) {
      const StepSpectrum lhs = restrict_to(full, p, q);
      for (const Cell& c : common_refinement({lhs, rhs.value}, p, q)) {
        rec.begin_point(c.mid);
        rec.observe({0, i, i, 0, cell_index++}, lhs(c.mid), rhs.value(c.mid), [&] {
          Witness wt = make_witness("gripenberg-weiss", c.mid, i, i);
          wt.cell = std::make_pair(c.left, c.right);
          return wt;
        });
        rec.end_point();
      }
    }
  }
  rec.note("conditional on semi-orthogonality");
  if (!w.verified()) rec.note("wavelet system not verified");
  return rec.finish();
}

DimensionSample wavelet_dimension_at(const WaveletSystem& w, const RationalPi& xi,
                                     double rel_tol) {
  const AffineStructure& a = w.structure();
  DimensionSample out;
  out.xi = xi;
  const Radii rad = radii_of(w.psis());
  if (rad.all_zero) return out;
  const RationalPi reach = rad.outer / Rational(a.scale);
  for (const auto& psi : w.psis()) {
    for (int i = 0; i < a.n; ++i) {
      const RationalPi base = xi - a.theta[static_cast<std::size_t>(i)];
      const Integer k_lo = ceil_of(Rational((-reach.coeff() - base.coeff()) / 2));
      const Integer k_hi = floor_of(Rational((reach.coeff() - base.coeff()) / 2));
      for (Integer k = k_lo; k <= k_hi; ++k) {
        const RationalPi y = base + two_pi_times(k);
        if (y.is_zero()) {
          if (rad.inner.is_zero()) {
            fail(ErrorCode::InvalidPoint, "lattice point hits 0 where the support touches 0");
          }
          continue;
        }
        const Rational ay = abs_of(y.coeff());
        const long m_hi = floor_log(Rational(rad.outer.coeff() / ay), a.scale);
        long m_lo = 1;
        if (!rad.inner.is_zero()) {
          m_lo = std::max(m_lo, ceil_log(Rational(rad.inner.coeff() / ay), a.scale));
        }
        for (long m = m_lo; m <= m_hi; ++m) {
          const Complex v = psi.components[static_cast<std::size_t>(a.sigma_pow(i, m))](
              y * rational_pow(a.scale, m));
          out.value += std::norm(v);
        }
        out.max_level = std::max(out.max_level, m_hi);
      }
    }
  }
  if (out.max_level >= 1) {
    out.rank = multiplicity_at(core_space(w, out.max_level), a, xi, rel_tol);
  }
  return out;
}

std::vector<DimensionSample> wavelet_dimension_function(const WaveletSystem& w,
                                                        const std::vector<RationalPi>& points,
                                                        double rel_tol) {
  std::vector<DimensionSample> out;
  out.reserve(points.size());
  for (const auto& xi : points) out.push_back(wavelet_dimension_at(w, xi, rel_tol));
  return out;
}

LowerBoundProbe lower_bound_probe(const WaveletSystem& w, const RationalPi& alpha0,
                                  const RationalPi& xi0, long depth, double tol) {
  if (xi0.is_zero()) fail(ErrorCode::InvalidPoint, "the probe needs xi0 != 0");
  if (depth < 1) fail(ErrorCode::InvalidArgument, "depth must be >= 1");
  const AffineStructure& a = w.structure();
  LowerBoundProbe out;
  for (const auto& t : a.theta) out.cardinality += t == alpha0 ? 1 : 0;
  for (long m = 1; m <= depth; ++m) {
    const RationalPi x = alpha0 + xi0 * rational_pow(a.scale, -m);
    out.values.push_back(wavelet_dimension_at(w, x).value);
  }
  const std::size_t tail = static_cast<std::size_t>((depth + 1) / 2);
  out.tail_max = *std::max_element(out.values.end() - static_cast<std::ptrdiff_t>(tail), out.values.end());
  out.passed = out.tail_max >= out.cardinality - tol;
  out.hypothesis_unmet = !w.verified();
  return out;
}

WaveletSystem oversample(const std::vector<StepSpectrum>& psis, long scale, long p,
                         const std::vector<std::string>& labels) {
  AffineStructure a = build_oversampling_structure(scale, p);
  std::vector<VectorFunction> out;
  for (std::size_t l = 0; l < psis.size(); ++l) {
    VectorFunction v;
    v.components.assign(static_cast<std::size_t>(p), dilate_arg(psis[l], Rational(p)));
    const std::string base = l < labels.size() ? labels[l] : "psi" + std::to_string(l + 1);
    v.label = "eta(" + base + ")";
    out.push_back(std::move(v));
  }
  return WaveletSystem(std::move(a), std::move(out));
}

CheckReport offset_set_check(long scale, long p, long bound) {
  if (scale < 2 || p < 1) fail(ErrorCode::InvalidArgument, "need N >= 2 and p >= 1");
  if (std::gcd(scale, p) != 1) {
    fail(ErrorCode::NotCoprime, "gcd(" + std::to_string(scale) + ", " + std::to_string(p) + ") != 1");
  }
  if (bound < 1) fail(ErrorCode::InvalidArgument, "bound must be >= 1");
  const long s_bound = (bound + scale * (p - 1) + p - 1) / p;
  std::set<long> reachable;
  for (long l = -(p - 1); l <= p - 1; ++l) {
    for (long s = -s_bound; s <= s_bound; ++s) {
      if (s % scale == 0) continue;
      const long q = scale * l + p * s;
      if (q >= -bound && q <= bound) reachable.insert(q);
    }
  }
  Recorder rec(Mode::Exact, kExactTolerance);
  for (long q = -bound; q <= bound; ++q) {
    const RationalPi xi = two_pi_times(q);
    rec.begin_point(xi);
    const double lhs = q % scale != 0 ? 1.0 : 0.0;
    const double rhs = reachable.count(q) ? 1.0 : 0.0;
    rec.observe({0, 0, 0, q, 0}, rhs, lhs, [&] { return make_witness("offset-set", xi, 0, 0, "q", q); });
    rec.end_point();
  }
  rec.note("s range |s| <= " + std::to_string(s_bound));
  return rec.finish();
}

}  // namespace supertrace
