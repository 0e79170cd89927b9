#include "cy/hermitian.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace cy {

HermMat HermMat::identity(int n) {
  HermMat h(n);
  for (int i = 0; i < n; ++i) h.diag(i) = 1.0;
  return h;
}

cplx HermMat::at(int i, int j) const {
  if (i == j) return cplx(diag_[i], 0.0);
  if (i > j) return lower_[idx(i, j)];
  return std::conj(lower_[idx(j, i)]);
}

HermMat HermMat::operator+(const HermMat& o) const {
  HermMat out(n_);
  for (int i = 0; i < n_; ++i) out.diag_[i] = diag_[i] + o.diag_[i];
  for (size_t k = 0; k < lower_.size(); ++k) out.lower_[k] = lower_[k] + o.lower_[k];
  return out;
}

HermMat HermMat::operator-(const HermMat& o) const {
  HermMat out(n_);
  for (int i = 0; i < n_; ++i) out.diag_[i] = diag_[i] - o.diag_[i];
  for (size_t k = 0; k < lower_.size(); ++k) out.lower_[k] = lower_[k] - o.lower_[k];
  return out;
}

HermMat HermMat::scaled(double s) const {
  HermMat out(n_);
  for (int i = 0; i < n_; ++i) out.diag_[i] = diag_[i] * s;
  for (size_t k = 0; k < lower_.size(); ++k) out.lower_[k] = lower_[k] * s;
  return out;
}

double HermMat::trace() const {
  double t = 0.0;
  for (double d : diag_) t += d;
  return t;
}

double HermMat::det() const {
  if (n_ == 1) return diag_[0];
  if (n_ == 2) return diag_[0] * diag_[1] - std::norm(at(1, 0));
  if (n_ == 3) {
    cplx a = at(0, 0), b = at(0, 1), c = at(0, 2);
    cplx d = at(1, 0), e = at(1, 1), f = at(1, 2);
    cplx g = at(2, 0), h = at(2, 1), i = at(2, 2);
    return (a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)).real();
  }
  // LU without pivoting is fine at desk scale for the (near-)PD inputs we see.
  std::vector<cplx> m(static_cast<size_t>(n_) * n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) m[static_cast<size_t>(i) * n_ + j] = at(i, j);
  cplx det(1.0, 0.0);
  for (int col = 0; col < n_; ++col) {
    cplx piv = m[static_cast<size_t>(col) * n_ + col];
    det *= piv;
    if (std::abs(piv) < 1e-300) return 0.0;
    for (int r = col + 1; r < n_; ++r) {
      cplx f = m[static_cast<size_t>(r) * n_ + col] / piv;
      for (int j = col; j < n_; ++j)
        m[static_cast<size_t>(r) * n_ + j] -= f * m[static_cast<size_t>(col) * n_ + j];
    }
  }
  return det.real();
}

double HermMat::max_abs() const {
  double m = 0.0;
  for (double d : diag_) m = std::max(m, std::fabs(d));
  for (const cplx& z : lower_) m = std::max(m, std::abs(z));
  return m;
}

HermEig herm_eigen(const HermMat& a) {
  const int n = a.dim();
  std::vector<cplx> m(static_cast<size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m[static_cast<size_t>(j) * n + i] = a.at(i, j);
  std::vector<cplx> v(static_cast<size_t>(n) * n, cplx(0, 0));
  for (int i = 0; i < n; ++i) v[static_cast<size_t>(i) * n + i] = 1.0;
  auto M = [&](int i, int j) -> cplx& { return m[static_cast<size_t>(j) * n + i]; };
  auto V = [&](int i, int j) -> cplx& { return v[static_cast<size_t>(j) * n + i]; };

  const double scale = std::max(a.max_abs(), 1e-300);
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off = std::max(off, std::abs(M(p, q)));
    if (off <= 1e-15 * scale) break;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) {
        cplx apq = M(p, q);
        double fabs_apq = std::abs(apq);
        if (fabs_apq <= 1e-300) continue;
        // unitary 2x2 rotation diagonalizing [[app, apq],[conj(apq), aqq]]
        double app = M(p, p).real(), aqq = M(q, q).real();
        cplx phase = apq / fabs_apq;
        double theta = (aqq - app) / (2.0 * fabs_apq);
        double t = (theta >= 0 ? 1.0 : -1.0) /
                   (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        cplx s = t * c * phase;
        for (int k = 0; k < n; ++k) {  // columns: M <- M R
          cplx mkp = M(k, p), mkq = M(k, q);
          M(k, p) = c * mkp - std::conj(s) * mkq;
          M(k, q) = s * mkp + c * mkq;
        }
        for (int k = 0; k < n; ++k) {  // rows: M <- R^dag M
          cplx mpk = M(p, k), mqk = M(q, k);
          M(p, k) = c * mpk - s * mqk;
          M(q, k) = std::conj(s) * mpk + c * mqk;
        }
        for (int k = 0; k < n; ++k) {
          cplx vkp = V(k, p), vkq = V(k, q);
          V(k, p) = c * vkp - std::conj(s) * vkq;
          V(k, q) = s * vkp + c * vkq;
        }
      }
  }
  HermEig out;
  out.w.resize(n);
  for (int i = 0; i < n; ++i) out.w[i] = M(i, i).real();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) { return out.w[i] < out.w[j]; });
  HermEig sorted;
  sorted.w.resize(n);
  sorted.v.resize(static_cast<size_t>(n) * n);
  for (int j = 0; j < n; ++j) {
    sorted.w[j] = out.w[order[j]];
    for (int i = 0; i < n; ++i)
      sorted.v[static_cast<size_t>(j) * n + i] = v[static_cast<size_t>(order[j]) * n + i];
  }
  return sorted;
}

std::vector<cplx> cholesky(const HermMat& a) {
  const int n = a.dim();
  std::vector<cplx> L(static_cast<size_t>(n) * n, cplx(0, 0));
  auto at = [&](int i, int j) -> cplx& { return L[static_cast<size_t>(j) * n + i]; };
  for (int j = 0; j < n; ++j) {
    double s = a.diag(j);
    for (int k = 0; k < j; ++k) s -= std::norm(at(j, k));
    if (s <= 0.0) throw NotPositiveDefinite("cholesky pivot " + std::to_string(s));
    at(j, j) = std::sqrt(s);
    for (int i = j + 1; i < n; ++i) {
      cplx v = a.at(i, j);
      for (int k = 0; k < j; ++k) v -= at(i, k) * std::conj(at(j, k));
      at(i, j) = v / at(j, j).real();
    }
  }
  return L;
}

Diagonalization simultaneous_diagonalize(const HermMat& h0, const HermMat& ha) {
  if (h0.dim() != ha.dim()) throw DimensionMismatch("simultaneous_diagonalize");
  const int n = h0.dim();
  std::vector<cplx> L = cholesky(h0);  // throws unless h0 PD
  auto Lat = [&](int i, int j) { return L[static_cast<size_t>(j) * n + i]; };

  // M = L^{-1} ha L^{-dagger}
  std::vector<cplx> W(static_cast<size_t>(n) * n);
  auto Wat = [&](int i, int j) -> cplx& { return W[static_cast<size_t>(j) * n + i]; };
  // solve L W = ha  (column by column, forward substitution)
  for (int col = 0; col < n; ++col)
    for (int i = 0; i < n; ++i) {
      cplx v = ha.at(i, col);
      for (int k = 0; k < i; ++k) v -= Lat(i, k) * Wat(k, col);
      Wat(i, col) = v / Lat(i, i).real();
    }
  // solve M L^dagger = W  => M = W L^{-dagger}; row by row back substitution
  std::vector<cplx> Mfull(static_cast<size_t>(n) * n);
  auto Mat_ = [&](int i, int j) -> cplx& { return Mfull[static_cast<size_t>(j) * n + i]; };
  for (int row = 0; row < n; ++row)
    for (int j = 0; j < n; ++j) {
      cplx v = Wat(row, j);
      for (int k = 0; k < j; ++k) v -= Mat_(row, k) * std::conj(Lat(j, k));
      Mat_(row, j) = v / Lat(j, j).real();
    }
  HermMat M(n);
  for (int i = 0; i < n; ++i) M.diag(i) = Mat_(i, i).real();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j) M.lower(i, j) = (Mat_(i, j) + std::conj(Mat_(j, i))) * 0.5;

  HermEig e = herm_eigen(M);
  if (e.w.front() <= 0.0) throw NotPositiveDefinite("second form in simultaneous_diagonalize");

  Diagonalization out;
  out.n = n;
  out.a = e.w;
  // basis = L^{-dagger} U, column by column: solve L^dagger b = u
  out.basis.resize(static_cast<size_t>(n) * n);
  for (int col = 0; col < n; ++col) {
    for (int i = n - 1; i >= 0; --i) {
      cplx v = e.v[static_cast<size_t>(col) * n + i];
      for (int k = i + 1; k < n; ++k)
        v -= std::conj(Lat(k, i)) * out.basis[static_cast<size_t>(col) * n + k];
      out.basis[static_cast<size_t>(col) * n + i] = v / Lat(i, i).real();
    }
  }
  return out;
}

NormIdentities pointwise_norm_identities(const Diagonalization& d) {
  NormIdentities out{0.0, 0.0, 0.0};
  for (double aj : d.a) {
    out.da_norm_sq += 2.0 * (aj - 1.0) * (aj - 1.0);
    out.h_norm_sq += 2.0 * aj * aj;
    out.hinv_norm_sq += 2.0 / (aj * aj);
  }
  return out;
}

}  // namespace cy
