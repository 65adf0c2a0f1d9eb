#ifndef FRACQP_ENVELOPE_HPP
#define FRACQP_ENVELOPE_HPP

// Exact lower envelope over delta in [0, inf) of lines
//   value(delta) = p - delta * q.
// The envelope function is canonical: it is the pointwise minimum of every
// line ever offered, independent of offer order. Accepted insertions are
// rare in the intended workload (streams of mostly-dominated candidates),
// so each one rebuilds the hull in O(size).

#include <algorithm>
#include <cstdint>
#include <limits>
#include <vector>

namespace fracqp::detail {

class LowerEnvelope {
public:
  struct Line {
    double q;  // value slope is -q
    double p;
    std::uint64_t ordinal;
    std::int64_t payload;
  };

  bool empty() const { return lines_.empty(); }
  std::size_t size() const { return lines_.size(); }
  const std::vector<Line>& lines() const { return lines_; }

  // True iff the line drops strictly below the envelope somewhere on
  // [0, inf). The difference (p - dq) - env(d) is convex piecewise linear
  // with slope q_m - q on piece m, so over [0, inf) it is minimized at the
  // junction where the piece slopes cross q (clamped to 0), or at infinity
  // when q exceeds every piece slope.
  bool would_improve(double q, double p) const {
    if (lines_.empty()) return true;
    if (q > lines_.back().q) return true;
    const int m = lower_bound_q(q);
    const double d0 = std::max(0.0, piece_start(m));
    return p - d0 * q < value_at(d0);
  }

  bool offer(double q, double p, std::uint64_t ordinal, std::int64_t payload) {
    if (!lines_.empty()) {
      {
        const Line& l = lines_[cached_];
        if (p >= l.p && q <= l.q) return false;
      }
      if (q <= lines_.back().q) {
        const int m = lower_bound_q(q);
        if (p >= lines_[m].p && q <= lines_[m].q) {
          cached_ = m;
          return false;
        }
        const double d0 = std::max(0.0, piece_start(m));
        if (!(p - d0 * q < value_at(d0))) return false;
      }
    }
    insert_line({q, p, ordinal, payload});
    return true;
  }

  // Active line at delta (>= 0); breakpoint ties go to the smaller-q piece.
  int active_piece(double delta) const {
    int lo = 0, hi = static_cast<int>(lines_.size()) - 1;
    while (lo < hi) {
      const int mid = (lo + hi) / 2;
      if (piece_start(mid + 1) < delta)
        lo = mid + 1;
      else
        hi = mid;
    }
    return lo;
  }

  double value_at(double delta) const {
    const Line& l = lines_[active_piece(delta)];
    return l.p - delta * l.q;
  }

  void merge_from(const LowerEnvelope& other) {
    for (const Line& l : other.lines_) offer(l.q, l.p, l.ordinal, l.payload);
  }

private:
  // Start of piece m's activity window (-inf for the first piece).
  double piece_start(int m) const {
    if (m == 0) return -std::numeric_limits<double>::infinity();
    const Line& a = lines_[m - 1];
    const Line& b = lines_[m];
    return (b.p - a.p) / (b.q - a.q);
  }

  int lower_bound_q(double q) const {
    int lo = 0, hi = static_cast<int>(lines_.size());
    while (lo < hi) {
      const int mid = (lo + hi) / 2;
      if (lines_[mid].q < q)
        lo = mid + 1;
      else
        hi = mid;
    }
    return lo;
  }

  // b contributes nothing beyond the envelope of {a, c} (q_a < q_b < q_c).
  static bool useless(const Line& a, const Line& b, const Line& c) {
    return (b.p - a.p) * (c.q - a.q) >= (c.p - a.p) * (b.q - a.q);
  }

  void insert_line(const Line& nl) {
    const int m = lower_bound_q(nl.q);
    if (m < static_cast<int>(lines_.size()) && lines_[m].q == nl.q) {
      if (nl.p < lines_[m].p ||
          (nl.p == lines_[m].p && nl.ordinal < lines_[m].ordinal))
        lines_[m] = nl;
      else
        return;
    } else {
      lines_.insert(lines_.begin() + m, nl);
    }
    rebuild();
    cached_ = 0;
  }

  void rebuild() {
    hull_.clear();
    for (const Line& l : lines_) {
      while (hull_.size() >= 2 &&
             useless(hull_[hull_.size() - 2], hull_.back(), l))
        hull_.pop_back();
      // A lone predecessor with no window left of delta=0 is dominated.
      if (hull_.size() == 1 && hull_.back().p >= l.p) hull_.pop_back();
      hull_.push_back(l);
    }
    lines_.swap(hull_);
  }

  std::vector<Line> lines_;  // hull lines sorted by q ascending
  std::vector<Line> hull_;
  mutable int cached_ = 0;
};

}  // namespace fracqp::detail

#endif
