#ifndef FRACQP_CELL_WALK_HPP
#define FRACQP_CELL_WALK_HPP

// Sign-cell enumeration for central hyperplane arrangements.
//
// Cells are found by slicing the central arrangement in R^k (k = rank of
// the generators) with a generic affine hyperplane and walking every line
// spanned by a (k-2)-subset of the sliced hyperplanes. Segment endpoints
// are the candidate directions from (k-1)-subsets of the original
// hyperplanes; the signs of the line-defining (and line-contained)
// hyperplanes are branched both ways around each segment. Antipodal cells
// are implicit (the slice meets one cone of each pair).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "fracqp/forms.hpp"

namespace fracqp::detail {

struct CellGens {
  int n = 0;  // generators (one per hypercube coordinate)
  int r = 0;  // ambient dimension
  std::vector<double> rows;  // row-major n x r

  const double* row(int i) const {
    return rows.data() + static_cast<std::size_t>(i) * r;
  }
  double* row(int i) {
    return rows.data() + static_cast<std::size_t>(i) * r;
  }
};

class CellWalker {
public:
  // The walk reaches one cone of each antipodal pair. Sign-symmetric
  // objectives need nothing else; emit_antipodes delivers the mirrored
  // candidate too (for linear lifts).
  CellWalker(const CellGens& gens, int max_branch_bits,
             bool emit_antipodes = false)
      : g_(gens),
        max_branch_bits_(max_branch_bits),
        emit_antipodes_(emit_antipodes) {}

  // Visitor: void operator()(const CellWalker&, const double* y,
  //                          std::uint64_t ordinal)
  // where y has r accumulated generator sums for the candidate cell.
  template <class Visitor>
  void run(Visitor&& vis);

  // Sign vector of the candidate currently being visited. Coordinates with
  // all-zero generators are +1 (-1 in mirrored candidates).
  void materialize(SignVector& out) const {
    out.assign(sigma_.begin(), sigma_.end());
    for (std::size_t b = 0; b < branch_.size(); ++b)
      out[branch_[b]] = (cur_mask_ >> b) & 1u ? -1 : +1;
    if (mirrored_)
      for (auto& s : out) s = -s;
  }

  int rank() const { return k_; }

private:
  static constexpr double kDirTol = 1e-12;

  template <class Visitor>
  void walk_line(const std::vector<int>& subset, const std::vector<double>& z0,
                 const std::vector<double>& u, Visitor& vis);

  template <class Visitor>
  void visit_branches(const double* ywalk, Visitor& vis);

  bool solve_line(const std::vector<int>& subset, std::vector<double>& z0,
                  std::vector<double>& u) const;

  const CellGens& g_;
  int max_branch_bits_;
  bool emit_antipodes_;
  bool mirrored_ = false;

  int k_ = 0;               // rank of the generator set
  int d_ = 0;               // slice dimension (k - 1)
  std::vector<int> active_;  // generators with a nonzero row
  std::vector<double> adir_;  // n x d slice normals (normalized rows)
  std::vector<double> boff_;  // n slice offsets
  std::vector<int> slicers_;  // active generators with nonzero slice normal

  SignVector sigma_;
  std::vector<int> branch_;          // branched generator indices
  std::vector<double> branch_dy_;    // 2^|branch| x r sign-combination sums
  std::uint32_t cur_mask_ = 0;
  std::uint64_t ordinal_ = 0;
  std::vector<double> ybuf_;

  struct Event {
    double t;
    int j;
    std::int8_t init_sign;
  };
  std::vector<Event> events_;
};

template <class Visitor>
void CellWalker::run(Visitor&& vis) {
  const int n = g_.n, r = g_.r;
  sigma_.assign(n, +1);
  branch_.clear();
  cur_mask_ = 0;
  ordinal_ = 0;
  ybuf_.assign(r, 0.0);

  active_.clear();
  for (int i = 0; i < n; ++i) {
    const double* w = g_.row(i);
    bool nz = false;
    for (int j = 0; j < r; ++j) nz = nz || w[j] != 0.0;
    if (nz) active_.push_back(i);
  }
  if (active_.empty()) {
    std::vector<double> y(r, 0.0);
    vis(*this, y.data(), ordinal_++);
    if (emit_antipodes_) {
      mirrored_ = true;
      vis(*this, y.data(), ordinal_++);
      mirrored_ = false;
    }
    return;
  }

  // Orthonormal basis of the generator span (modified Gram-Schmidt).
  std::vector<std::vector<double>> basis;
  for (int i : active_) {
    std::vector<double> v(g_.row(i), g_.row(i) + r);
    const double orig = std::sqrt(dot(v, v));
    for (const auto& b : basis) {
      const double c = dot(b, v);
      for (int j = 0; j < r; ++j) v[j] -= c * b[j];
    }
    const double nrm = std::sqrt(dot(v, v));
    if (nrm > 1e-12 * (1.0 + orig)) {
      for (int j = 0; j < r; ++j) v[j] /= nrm;
      basis.push_back(std::move(v));
      if (static_cast<int>(basis.size()) == r) break;
    }
  }
  k_ = static_cast<int>(basis.size());

  // Normalized generator coordinates in the span basis.
  std::vector<double> vhat(static_cast<std::size_t>(n) * k_, 0.0);
  for (int i : active_) {
    double* vi = vhat.data() + static_cast<std::size_t>(i) * k_;
    const double* w = g_.row(i);
    if (k_ == r) {
      std::copy(w, w + r, vi);
    } else {
      for (int j = 0; j < k_; ++j) vi[j] = dot(basis[j], {w, w + r});
    }
    double nrm = 0.0;
    for (int j = 0; j < k_; ++j) nrm += vi[j] * vi[j];
    nrm = std::sqrt(nrm);
    for (int j = 0; j < k_; ++j) vi[j] /= nrm;
  }

  if (k_ == 1) {
    // Two global cells.
    std::vector<double> y(r, 0.0);
    for (int i : active_) {
      sigma_[i] = vhat[static_cast<std::size_t>(i) * k_] > 0.0 ? +1 : -1;
      const double* w = g_.row(i);
      for (int j = 0; j < r; ++j) y[j] += sigma_[i] > 0 ? w[j] : -w[j];
    }
    vis(*this, y.data(), ordinal_++);
    for (int i : active_) sigma_[i] = -sigma_[i];
    for (int j = 0; j < r; ++j) y[j] = -y[j];
    vis(*this, y.data(), ordinal_++);
    return;
  }

  d_ = k_ - 1;

  // Generic slice direction: square roots of primes are Q-independent, so
  // rational generator data cannot be accidentally orthogonal to it.
  static const double kPrimes[] = {1.0, 2.0, 3.0, 5.0, 7.0, 11.0, 13.0, 17.0};
  std::vector<double> gdir(k_);
  double gn = 0.0;
  for (int j = 0; j < k_; ++j) {
    gdir[j] = std::sqrt(kPrimes[j]);
    gn += gdir[j] * gdir[j];
  }
  gn = std::sqrt(gn);
  for (int j = 0; j < k_; ++j) gdir[j] /= gn;

  // Orthonormal complement of gdir.
  std::vector<std::vector<double>> ubasis;
  for (int e = 0; e < k_ && static_cast<int>(ubasis.size()) < d_; ++e) {
    std::vector<double> v(k_, 0.0);
    v[e] = 1.0;
    double c = dot(v, gdir);
    for (int j = 0; j < k_; ++j) v[j] -= c * gdir[j];
    for (const auto& b : ubasis) {
      c = dot(b, v);
      for (int j = 0; j < k_; ++j) v[j] -= c * b[j];
    }
    const double nrm = std::sqrt(dot(v, v));
    if (nrm > 1e-8) {
      for (int j = 0; j < k_; ++j) v[j] /= nrm;
      ubasis.push_back(std::move(v));
    }
  }

  // Slice hyperplanes a_i^T z = b_i with phi_i(z) = a_i^T z - b_i matching
  // the sign of vhat_i^T c on the positive side of the slice.
  adir_.assign(static_cast<std::size_t>(n) * d_, 0.0);
  boff_.assign(n, 0.0);
  slicers_.clear();
  for (int i : active_) {
    const double* vi = vhat.data() + static_cast<std::size_t>(i) * k_;
    double* ai = adir_.data() + static_cast<std::size_t>(i) * d_;
    double an = 0.0;
    for (int j = 0; j < d_; ++j) {
      ai[j] = dot(ubasis[j], {vi, vi + k_});
      an += ai[j] * ai[j];
    }
    boff_[i] = -dot(gdir, {vi, vi + k_});
    if (std::sqrt(an) > kDirTol)
      slicers_.push_back(i);
    else
      sigma_[i] = -boff_[i] > 0.0 ? +1 : -1;  // parallel to the slice
  }

  if (d_ == 1) {
    std::vector<double> z0{0.0}, u{1.0};
    walk_line({}, z0, u, vis);
    return;
  }

  // All (d-1)-subsets of the slicer hyperplanes.
  const int m = static_cast<int>(slicers_.size());
  const int ss = d_ - 1;
  if (m < ss) return;  // rank condition makes this unreachable
  std::vector<int> comb(ss);
  for (int i = 0; i < ss; ++i) comb[i] = i;
  std::vector<double> z0(d_), u(d_);
  std::vector<int> subset(ss);
  for (;;) {
    for (int i = 0; i < ss; ++i) subset[i] = slicers_[comb[i]];
    if (solve_line(subset, z0, u)) walk_line(subset, z0, u, vis);
    int i = ss - 1;
    while (i >= 0 && comb[i] == m - ss + i) --i;
    if (i < 0) break;
    ++comb[i];
    for (int j = i + 1; j < ss; ++j) comb[j] = comb[j - 1] + 1;
  }
}

inline bool CellWalker::solve_line(const std::vector<int>& subset,
                                   std::vector<double>& z0,
                                   std::vector<double>& u) const {
  const int rows = static_cast<int>(subset.size());
  const int cols = d_;
  // Augmented system [A | b] with complete pivoting.
  std::vector<double> mat(static_cast<std::size_t>(rows) * (cols + 1));
  for (int s = 0; s < rows; ++s) {
    const double* ai = adir_.data() + static_cast<std::size_t>(subset[s]) * d_;
    for (int c = 0; c < cols; ++c) mat[static_cast<std::size_t>(s) * (cols + 1) + c] = ai[c];
    mat[static_cast<std::size_t>(s) * (cols + 1) + cols] = boff_[subset[s]];
  }
  auto at = [&](int rr, int cc) -> double& {
    return mat[static_cast<std::size_t>(rr) * (cols + 1) + cc];
  };
  std::vector<int> pivot_col(rows, -1);
  std::vector<bool> used(cols, false);
  for (int s = 0; s < rows; ++s) {
    int pr = -1, pc = -1;
    double best = 0.0;
    for (int rr = s; rr < rows; ++rr)
      for (int cc = 0; cc < cols; ++cc)
        if (!used[cc] && std::abs(at(rr, cc)) > best) {
          best = std::abs(at(rr, cc));
          pr = rr;
          pc = cc;
        }
    if (best <= kDirTol) return false;  // dependent subset: no line
    if (pr != s)
      for (int cc = 0; cc <= cols; ++cc) std::swap(at(s, cc), at(pr, cc));
    used[pc] = true;
    pivot_col[s] = pc;
    for (int rr = 0; rr < rows; ++rr) {
      if (rr == s) continue;
      const double f = at(rr, pc) / at(s, pc);
      if (f == 0.0) continue;
      for (int cc = 0; cc <= cols; ++cc) at(rr, cc) -= f * at(s, cc);
    }
  }
  int free_col = -1;
  for (int cc = 0; cc < cols; ++cc)
    if (!used[cc]) free_col = cc;
  // Null direction: free coordinate 1, pivots back-substituted.
  std::fill(u.begin(), u.end(), 0.0);
  std::fill(z0.begin(), z0.end(), 0.0);
  u[free_col] = 1.0;
  for (int s = 0; s < rows; ++s) {
    const int pc = pivot_col[s];
    u[pc] = -at(s, free_col) / at(s, pc);
    z0[pc] = at(s, cols) / at(s, pc);
  }
  double nrm = std::sqrt(dot(u, u));
  int amax = 0;
  for (int cc = 1; cc < cols; ++cc)
    if (std::abs(u[cc]) > std::abs(u[amax])) amax = cc;
  const double flip = u[amax] > 0.0 ? 1.0 : -1.0;
  for (int cc = 0; cc < cols; ++cc) u[cc] *= flip / nrm;
  return true;
}

template <class Visitor>
void CellWalker::visit_branches(const double* ywalk, Visitor& vis) {
  const int r = g_.r;
  const std::size_t nb = std::size_t{1} << branch_.size();
  for (std::size_t mask = 0; mask < nb; ++mask) {
    cur_mask_ = static_cast<std::uint32_t>(mask);
    const double* dy = branch_dy_.data() + mask * r;
    for (int j = 0; j < r; ++j) ybuf_[j] = ywalk[j] + dy[j];
    vis(*this, ybuf_.data(), ordinal_++);
    if (emit_antipodes_) {
      for (int j = 0; j < r; ++j) ybuf_[j] = -ybuf_[j];
      mirrored_ = true;
      vis(*this, ybuf_.data(), ordinal_++);
      mirrored_ = false;
    }
  }
}

template <class Visitor>
void CellWalker::walk_line(const std::vector<int>& subset,
                           const std::vector<double>& z0,
                           const std::vector<double>& u, Visitor& vis) {
  const int r = g_.r;
  const double zscale = 1.0 + std::sqrt(dot(z0, z0));

  events_.clear();
  branch_.assign(subset.begin(), subset.end());
  for (int i : slicers_) {
    if (std::find(subset.begin(), subset.end(), i) != subset.end()) continue;
    const double* ai = adir_.data() + static_cast<std::size_t>(i) * d_;
    double den = 0.0, num = -boff_[i];
    for (int j = 0; j < d_; ++j) {
      den += ai[j] * u[j];
      num += ai[j] * z0[j];
    }
    if (std::abs(den) <= kDirTol) {
      if (std::abs(num) <= kDirTol * zscale) {
        if (static_cast<int>(branch_.size()) < max_branch_bits_)
          branch_.push_back(i);  // line lies inside the hyperplane
        else
          sigma_[i] = +1;
      } else {
        sigma_[i] = num > 0.0 ? +1 : -1;
      }
    } else {
      events_.push_back({-num / den, i, den > 0.0 ? std::int8_t{-1} : std::int8_t{+1}});
    }
  }
  std::sort(events_.begin(), events_.end(), [](const Event& a, const Event& b) {
    return a.t < b.t || (a.t == b.t && a.j < b.j);
  });

  // Base accumulation excludes branched generators; their sign
  // combinations are added per visit.
  std::vector<double> y(r, 0.0);
  for (const Event& e : events_) sigma_[e.j] = e.init_sign;
  for (int i : active_) {
    if (std::find(branch_.begin(), branch_.end(), i) != branch_.end()) continue;
    const double* w = g_.row(i);
    if (sigma_[i] > 0)
      for (int j = 0; j < r; ++j) y[j] += w[j];
    else
      for (int j = 0; j < r; ++j) y[j] -= w[j];
  }

  const std::size_t nb = std::size_t{1} << branch_.size();
  branch_dy_.assign(nb * r, 0.0);
  for (std::size_t mask = 0; mask < nb; ++mask) {
    double* dy = branch_dy_.data() + mask * r;
    for (std::size_t b = 0; b < branch_.size(); ++b) {
      const double* w = g_.row(branch_[b]);
      const double s = (mask >> b) & 1u ? -1.0 : 1.0;
      for (int j = 0; j < r; ++j) dy[j] += s * w[j];
    }
  }

  visit_branches(y.data(), vis);
  for (const Event& e : events_) {
    sigma_[e.j] = -sigma_[e.j];
    const double* w = g_.row(e.j);
    const double s = 2.0 * sigma_[e.j];
    for (int j = 0; j < r; ++j) y[j] += s * w[j];
    visit_branches(y.data(), vis);
  }
}

}  // namespace fracqp::detail

#endif
