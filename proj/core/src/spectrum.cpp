#include "supertrace/spectrum.hpp"

#include <algorithm>
#include <cmath>

#include "supertrace/errors.hpp"

namespace supertrace {

namespace {

Complex piece_value(const Piece& p, const RationalPi& x) {
  if (sgn(p.modulation) == 0) return p.value;
  return p.value * unit_phase(Rational(p.modulation * x.coeff()));
}

std::vector<RationalPi> sorted_unique(std::vector<RationalPi> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

// Sums the pieces active on each elementary interval of the union of all
// endpoints. `combine` receives the list of active pieces (one per input
// that is nonzero there) and returns the resulting piece, if any.
template <class Combine>
StepSpectrum sweep(const std::vector<const StepSpectrum*>& inputs, Combine combine) {
  std::vector<RationalPi> ends;
  for (const auto* s : inputs) {
    for (const auto& seg : s->segments()) {
      ends.push_back(seg.left);
      ends.push_back(seg.right);
    }
  }
  ends = sorted_unique(std::move(ends));
  std::vector<Segment> out;
  std::vector<std::size_t> cursor(inputs.size(), 0);
  std::vector<const Piece*> active(inputs.size());
  for (std::size_t e = 0; e + 1 < ends.size(); ++e) {
    const RationalPi& lo = ends[e];
    for (std::size_t k = 0; k < inputs.size(); ++k) {
      const auto& segs = inputs[k]->segments();
      while (cursor[k] < segs.size() && segs[cursor[k]].right <= lo) ++cursor[k];
      active[k] = (cursor[k] < segs.size() && segs[cursor[k]].left <= lo)
                      ? &segs[cursor[k]].piece
                      : nullptr;
    }
    std::optional<Piece> p = combine(active);
    if (p) out.push_back(Segment{lo, ends[e + 1], std::move(*p)});
  }
  return StepSpectrum::from_sorted_segments(std::move(out));
}

std::optional<Piece> add_pieces(const std::vector<const Piece*>& active) {
  const Piece* first = nullptr;
  Complex total{0.0, 0.0};
  for (const Piece* p : active) {
    if (p == nullptr) continue;
    if (first == nullptr) {
      first = p;
    } else if (p->modulation != first->modulation) {
      fail(ErrorCode::ModulationConflict,
           "cannot add pieces with modulations " + format_rational(first->modulation) + " and " +
               format_rational(p->modulation));
    }
    total += p->value;
  }
  if (first == nullptr) return std::nullopt;
  return Piece{total, first->modulation};
}

}  // namespace

bool StepSpectrum::is_modulation_free() const {
  return std::all_of(segments_.begin(), segments_.end(),
                     [](const Segment& s) { return sgn(s.piece.modulation) == 0; });
}

std::vector<RationalPi> StepSpectrum::breakpoints() const {
  std::vector<RationalPi> pts;
  pts.reserve(2 * segments_.size());
  for (const auto& seg : segments_) {
    if (pts.empty() || pts.back() != seg.left) pts.push_back(seg.left);
    pts.push_back(seg.right);
  }
  return pts;
}

RationalPi StepSpectrum::outer_radius() const {
  if (segments_.empty()) return {};
  return std::max(segments_.front().left.abs(), segments_.back().right.abs());
}

RationalPi StepSpectrum::inner_radius() const {
  if (segments_.empty()) return {};
  RationalPi best = segments_.front().left.abs();
  for (const auto& seg : segments_) {
    if (seg.left <= RationalPi() && RationalPi() <= seg.right) return {};
    best = std::min({best, seg.left.abs(), seg.right.abs()});
  }
  return best;
}

RationalPi StepSpectrum::support_begin() const {
  return segments_.empty() ? RationalPi() : segments_.front().left;
}

RationalPi StepSpectrum::support_end() const {
  return segments_.empty() ? RationalPi() : segments_.back().right;
}

const Piece* StepSpectrum::piece_at(const RationalPi& x) const {
  auto it = std::upper_bound(segments_.begin(), segments_.end(), x,
                             [](const RationalPi& v, const Segment& s) { return v < s.right; });
  if (it == segments_.end() || x < it->left) return nullptr;
  return &it->piece;
}

Complex StepSpectrum::operator()(const RationalPi& x) const {
  const Piece* p = piece_at(x);
  return p == nullptr ? Complex{} : piece_value(*p, x);
}

StepSpectrum StepSpectrum::from_sorted_segments(std::vector<Segment> segments) {
  StepSpectrum out;
  for (auto& seg : segments) {
    if (seg.piece.value == Complex{} || !(seg.left < seg.right)) continue;
    if (!out.segments_.empty()) {
      Segment& prev = out.segments_.back();
      if (prev.right == seg.left && prev.piece == seg.piece) {
        prev.right = std::move(seg.right);
        continue;
      }
    }
    out.segments_.push_back(std::move(seg));
  }
  return out;
}

StepSpectrum make_step_spectrum(std::vector<RawPiece> raw) {
  for (const auto& r : raw) {
    if (!(r.left < r.right)) {
      fail(ErrorCode::InvalidArgument,
           "empty interval [" + r.left.str() + ", " + r.right.str() + ")");
    }
  }
  std::sort(raw.begin(), raw.end(),
            [](const RawPiece& a, const RawPiece& b) { return a.left < b.left; });
  std::vector<Segment> segs;
  segs.reserve(raw.size());
  for (std::size_t k = 0; k < raw.size(); ++k) {
    if (k > 0 && raw[k].left < raw[k - 1].right) {
      fail(ErrorCode::OverlappingPieces, "[" + raw[k - 1].left.str() + ", " +
                                             raw[k - 1].right.str() + ") and [" +
                                             raw[k].left.str() + ", " + raw[k].right.str() + ")");
    }
    segs.push_back(Segment{raw[k].left, raw[k].right, Piece{raw[k].value, raw[k].modulation}});
  }
  return StepSpectrum::from_sorted_segments(std::move(segs));
}

StepSpectrum indicator(const RationalPi& a, const RationalPi& b, Complex value) {
  return make_step_spectrum({RawPiece{a, b, value, 0}});
}

Complex evaluate(const StepSpectrum& s, const RationalPi& x) { return s(x); }

StepSpectrum dilate_arg(const StepSpectrum& s, const Rational& c) {
  if (sgn(c) <= 0) fail(ErrorCode::InvalidArgument, "dilation factor must be positive");
  std::vector<Segment> out;
  out.reserve(s.segments().size());
  for (const auto& seg : s.segments()) {
    out.push_back(Segment{seg.left / c, seg.right / c,
                          Piece{seg.piece.value, Rational(seg.piece.modulation * c)}});
  }
  return StepSpectrum::from_sorted_segments(std::move(out));
}

StepSpectrum translate_arg(const StepSpectrum& s, const RationalPi& a) {
  std::vector<Segment> out;
  out.reserve(s.segments().size());
  for (const auto& seg : s.segments()) {
    Piece p = seg.piece;
    if (sgn(p.modulation) != 0) p.value *= unit_phase(Rational(p.modulation * a.coeff()));
    out.push_back(Segment{seg.left - a, seg.right - a, std::move(p)});
  }
  return StepSpectrum::from_sorted_segments(std::move(out));
}

StepSpectrum pointwise_product_conj(const StepSpectrum& s1, const StepSpectrum& s2) {
  return sweep({&s1, &s2}, [](const std::vector<const Piece*>& act) -> std::optional<Piece> {
    if (act[0] == nullptr || act[1] == nullptr) return std::nullopt;
    return Piece{act[0]->value * std::conj(act[1]->value),
                 Rational(act[0]->modulation - act[1]->modulation)};
  });
}

StepSpectrum pointwise_product(const StepSpectrum& s1, const StepSpectrum& s2) {
  return sweep({&s1, &s2}, [](const std::vector<const Piece*>& act) -> std::optional<Piece> {
    if (act[0] == nullptr || act[1] == nullptr) return std::nullopt;
    return Piece{act[0]->value * act[1]->value,
                 Rational(act[0]->modulation + act[1]->modulation)};
  });
}

StepSpectrum modulus_squared(const StepSpectrum& s) {
  std::vector<Segment> out;
  out.reserve(s.segments().size());
  for (const auto& seg : s.segments()) {
    out.push_back(Segment{seg.left, seg.right, Piece{std::norm(seg.piece.value), 0}});
  }
  return StepSpectrum::from_sorted_segments(std::move(out));
}

StepSpectrum add(const StepSpectrum& s1, const StepSpectrum& s2) {
  return sweep({&s1, &s2}, add_pieces);
}

StepSpectrum sum(const std::vector<StepSpectrum>& terms) {
  std::vector<const StepSpectrum*> ptrs;
  ptrs.reserve(terms.size());
  for (const auto& t : terms) {
    if (!t.is_zero()) ptrs.push_back(&t);
  }
  if (ptrs.empty()) return {};
  if (ptrs.size() == 1) return *ptrs.front();
  return sweep(ptrs, add_pieces);
}

StepSpectrum scale(const StepSpectrum& s, Complex c) { return modulate(s, c, 0); }

StepSpectrum modulate(const StepSpectrum& s, Complex factor, const Rational& extra_modulation) {
  std::vector<Segment> out;
  out.reserve(s.segments().size());
  for (const auto& seg : s.segments()) {
    out.push_back(Segment{seg.left, seg.right,
                          Piece{seg.piece.value * factor,
                                Rational(seg.piece.modulation + extra_modulation)}});
  }
  return StepSpectrum::from_sorted_segments(std::move(out));
}

StepSpectrum restrict_to(const StepSpectrum& s, const RationalPi& a, const RationalPi& b) {
  std::vector<Segment> out;
  for (const auto& seg : s.segments()) {
    RationalPi lo = std::max(seg.left, a);
    RationalPi hi = std::min(seg.right, b);
    if (lo < hi) out.push_back(Segment{std::move(lo), std::move(hi), seg.piece});
  }
  return StepSpectrum::from_sorted_segments(std::move(out));
}

PeriodicStep::PeriodicStep(StepSpectrum window) : window_(std::move(window)) {
  if (!window_.is_zero() &&
      (window_.support_begin() < RationalPi(-1, 1) || RationalPi(1, 1) < window_.support_end())) {
    fail(ErrorCode::InvalidArgument, "periodic window must lie in [-pi, pi)");
  }
  if (!window_.is_modulation_free()) {
    fail(ErrorCode::ModulatedInput, "periodic step functions carry no modulation");
  }
}

PeriodicStep PeriodicStep::constant(Complex value) {
  return PeriodicStep(indicator(RationalPi(-1, 1), RationalPi(1, 1), value));
}

Complex PeriodicStep::operator()(const RationalPi& x) const { return window_(x.reduced()); }

StepSpectrum PeriodicStep::extend(const RationalPi& a, const RationalPi& b) const {
  if (!(a < b)) return {};
  // translates window + 2k*pi meeting [a, b)
  const Integer k_lo = floor_of(Rational((a.coeff() - 1) / 2));
  const Integer k_hi = ceil_of(Rational((b.coeff() + 1) / 2));
  std::vector<Segment> segs;
  for (Integer k = k_lo; k <= k_hi; ++k) {
    const RationalPi shift = two_pi_times(k);
    for (const auto& seg : window_.segments()) {
      RationalPi lo = std::max(seg.left + shift, a);
      RationalPi hi = std::min(seg.right + shift, b);
      if (lo < hi) segs.push_back(Segment{std::move(lo), std::move(hi), seg.piece});
    }
  }
  return StepSpectrum::from_sorted_segments(std::move(segs));
}

PeriodicStep periodize(const StepSpectrum& s) {
  if (!s.is_modulation_free()) fail(ErrorCode::ModulatedInput, "periodize needs modulation 0");
  const RationalPi lo(-1, 1);
  const RationalPi hi(1, 1);
  std::vector<StepSpectrum> parts;
  for (const auto& seg : s.segments()) {
    // k with [l + 2k, r + 2k) meeting [-1, 1) in units of pi
    const Integer k_lo = floor_of(Rational((-1 - seg.right.coeff()) / 2));
    const Integer k_hi = ceil_of(Rational((1 - seg.left.coeff()) / 2));
    for (Integer k = k_lo; k <= k_hi; ++k) {
      const RationalPi shift = two_pi_times(k);
      RationalPi a = std::max(seg.left + shift, lo);
      RationalPi b = std::min(seg.right + shift, hi);
      if (a < b) {
        parts.push_back(StepSpectrum::from_sorted_segments({Segment{a, b, seg.piece}}));
      }
    }
  }
  return PeriodicStep(sum(parts));
}

PeriodicStep add(const PeriodicStep& a, const PeriodicStep& b) {
  return PeriodicStep(add(a.window(), b.window()));
}

std::vector<Cell> cells_from_points(std::vector<RationalPi> points, const RationalPi& a,
                                    const RationalPi& b) {
  std::vector<Cell> cells;
  if (!(a < b)) return cells;
  std::vector<RationalPi> cuts;
  cuts.reserve(points.size() + 2);
  cuts.push_back(a);
  for (auto& p : points) {
    if (a < p && p < b) cuts.push_back(std::move(p));
  }
  cuts.push_back(b);
  cuts = sorted_unique(std::move(cuts));
  cells.reserve(cuts.size() - 1);
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    RationalPi mid((cuts[k].coeff() + cuts[k + 1].coeff()) / 2);
    cells.push_back(Cell{cuts[k], cuts[k + 1], std::move(mid)});
  }
  return cells;
}

std::vector<Cell> common_refinement(const std::vector<StepSpectrum>& spectra, const RationalPi& a,
                                    const RationalPi& b) {
  std::vector<RationalPi> pts;
  for (const auto& s : spectra) {
    for (auto& p : s.breakpoints()) pts.push_back(std::move(p));
  }
  return cells_from_points(std::move(pts), a, b);
}

double l2_norm_sq(const StepSpectrum& s) {
  double total = 0.0;
  for (const auto& seg : s.segments()) {
    total += std::norm(seg.piece.value) * Rational(seg.right.coeff() - seg.left.coeff()).get_d() / 2.0;
  }
  return total;
}

Rational l2_norm_sq_exact(const StepSpectrum& s) {
  Rational total(0);
  for (const auto& seg : s.segments()) {
    total += Rational(std::norm(seg.piece.value)) * (seg.right.coeff() - seg.left.coeff()) / 2;
  }
  return total;
}

Rational support_measure(const StepSpectrum& s) {
  Rational total(0);
  for (const auto& seg : s.segments()) total += seg.right.coeff() - seg.left.coeff();
  return total;
}

std::pair<long, long> dilation_levels(const RationalPi& inner, const RationalPi& outer,
                                      const RationalPi& min_abs, const RationalPi& max_abs,
                                      long scale) {
  if (inner.is_zero() || min_abs.is_zero()) {
    fail(ErrorCode::ZeroInnerRadius, "dilation level range is infinite at the origin");
  }
  return {ceil_log(Rational(inner.coeff() / max_abs.coeff()), scale),
          floor_log(Rational(outer.coeff() / min_abs.coeff()), scale)};
}

}  // namespace supertrace
