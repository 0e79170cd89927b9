#include "cy/calculus.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <map>
#include <thread>
#include <tuple>

namespace cy {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kPi = 3.1415926535897932384626433832795;
}

int max_threads() {
  static int cached = [] {
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw < 1) hw = 1;
    if (const char* env = std::getenv("CY_THREADS")) {
      int cap = std::atoi(env);
      if (cap >= 1 && cap < hw) hw = cap;
      if (cap >= 1 && cap > hw) hw = cap;  // explicit request wins either way
    }
    return hw;
  }();
  return cached;
}

void parallel_ranges(std::size_t n, const std::function<void(std::size_t, std::size_t)>& f) {
  int t = max_threads();
  if (t <= 1 || n < 1024) {
    f(0, n);
    return;
  }
  std::size_t chunk = (n + t - 1) / t;
  std::vector<std::thread> workers;
  for (int i = 0; i < t; ++i) {
    std::size_t b = static_cast<std::size_t>(i) * chunk;
    if (b >= n) break;
    std::size_t e = std::min(n, b + chunk);
    workers.emplace_back([&f, b, e] { f(b, e); });
  }
  for (auto& w : workers) w.join();
}

DiffEngine::DiffEngine(const TorusGrid& g, Scheme s) : grid_(g), scheme_(s), fft_(g) {
  freq_.resize(g.m);
  for (int t = 0; t < g.m; ++t) freq_[t] = (t == g.m / 2) ? 0.0 : static_cast<double>(g.freq(t));
}

// ---- spectral machinery ------------------------------------------------

std::vector<cplx> DiffEngine::spectrum(const std::vector<double>& v) const {
  return fft_.forward(v);
}

std::vector<double> DiffEngine::from_spectrum(std::vector<cplx> spec) const {
  return fft_.inverse_real(std::move(spec));
}

// Walks the grid with an odometer over per-axis indices, handing the
// callback the per-axis integer frequencies.
template <typename Fn>
static void spectral_walk(const TorusGrid& g, Fn&& fn) {
  const int d = g.dim();
  const int m = g.m;
  std::vector<int> idx(d, 0);
  const std::size_t npts = g.points();
  for (std::size_t p = 0; p < npts; ++p) {
    fn(p, idx);
    for (int a = d - 1; a >= 0; --a) {
      if (++idx[a] < m) break;
      idx[a] = 0;
    }
  }
}

std::vector<double> DiffEngine::deriv_from_spectrum(const std::vector<cplx>& spec,
                                                    const std::vector<int>& axes) const {
  std::vector<cplx> work(spec.size());
  const std::vector<double>& fr = freq_;
  spectral_walk(grid_, [&](std::size_t p, const std::vector<int>& idx) {
    cplx mult(1.0, 0.0);
    for (int a : axes) mult *= cplx(0.0, kTwoPi * fr[idx[a]]);
    work[p] = spec[p] * mult;
  });
  return fft_.inverse_real(std::move(work));
}

std::vector<double> DiffEngine::stencil_deriv(const std::vector<double>& v, int axis) const {
  const int m = grid_.m;
  const std::size_t stride = grid_.stride(axis);
  const std::size_t npts = grid_.points();
  const double scale = 1.0 / (12.0 * grid_.spacing());
  std::vector<double> out(npts);
  const std::size_t block = stride * static_cast<std::size_t>(m);
  parallel_ranges(npts, [&](std::size_t b, std::size_t e) {
    for (std::size_t p = b; p < e; ++p) {
      std::size_t base = (p / block) * block + (p % stride);
      int t = static_cast<int>((p / stride) % m);
      auto at = [&](int off) {
        int tt = t + off;
        if (tt >= m) tt -= m;
        if (tt < 0) tt += m;
        return v[base + static_cast<std::size_t>(tt) * stride];
      };
      out[p] = (at(-2) - 8.0 * at(-1) + 8.0 * at(1) - at(2)) * scale;
    }
  });
  return out;
}

std::vector<double> DiffEngine::deriv(const std::vector<double>& v, int axis) const {
  if (scheme_ == Scheme::stencil4) return stencil_deriv(v, axis);
  return deriv_from_spectrum(spectrum(v), {axis});
}

std::vector<double> DiffEngine::multi_deriv(const std::vector<double>& v,
                                            const std::vector<int>& axes) const {
  if (scheme_ == Scheme::stencil4) {
    std::vector<double> cur = v;
    for (int a : axes) cur = stencil_deriv(cur, a);
    return cur;
  }
  return deriv_from_spectrum(spectrum(v), axes);
}

std::vector<std::vector<double>> DiffEngine::gradient(const std::vector<double>& v) const {
  const int d = grid_.dim();
  std::vector<std::vector<double>> out(d);
  if (scheme_ == Scheme::stencil4) {
    for (int a = 0; a < d; ++a) out[a] = stencil_deriv(v, a);
    return out;
  }
  std::vector<cplx> spec = spectrum(v);
  for (int a = 0; a < d; ++a) out[a] = deriv_from_spectrum(spec, {a});
  return out;
}

std::vector<double> DiffEngine::laplacian(const std::vector<double>& v) const {
  const int d = grid_.dim();
  if (scheme_ == Scheme::stencil4) {
    std::vector<double> out(v.size(), 0.0);
    for (int a = 0; a < d; ++a) {
      std::vector<double> dd = stencil_deriv(stencil_deriv(v, a), a);
      for (std::size_t i = 0; i < out.size(); ++i) out[i] += dd[i];
    }
    return out;
  }
  std::vector<cplx> spec = spectrum(v);
  std::vector<cplx> work(spec.size());
  const std::vector<double>& fr = freq_;
  spectral_walk(grid_, [&](std::size_t p, const std::vector<int>& idx) {
    double k2 = 0.0;
    for (int a = 0; a < d; ++a) {
      double k = fr[idx[a]];
      k2 += k * k;
    }
    work[p] = spec[p] * (-kTwoPi * kTwoPi * k2);
  });
  return fft_.inverse_real(std::move(work));
}

std::vector<double> DiffEngine::inv_laplacian_mean_zero(const std::vector<double>& v) const {
  std::vector<cplx> spec = spectrum(v);
  const int d = grid_.dim();
  const std::vector<double>& fr = freq_;
  spectral_walk(grid_, [&](std::size_t p, const std::vector<int>& idx) {
    double k2 = 0.0;
    for (int a = 0; a < d; ++a) {
      double k = fr[idx[a]];
      k2 += k * k;
    }
    if (k2 == 0.0)
      spec[p] = 0.0;
    else
      spec[p] /= -kTwoPi * kTwoPi * k2;
  });
  return fft_.inverse_real(std::move(spec));
}

CField DiffEngine::complex_deriv(const std::vector<double>& field, const std::vector<int>& hol,
                                 const std::vector<int>& anti) const {
  CField out;
  if (scheme_ == Scheme::spectral) {
    std::vector<cplx> spec = spectrum(field);
    std::vector<cplx> work(spec.size());
    const std::vector<double>& fr = freq_;
    spectral_walk(grid_, [&](std::size_t p, const std::vector<int>& idx) {
      cplx mult(1.0, 0.0);
      for (int h : hol) {
        double kx = fr[idx[2 * h]], ky = fr[idx[2 * h + 1]];
        // (D_x - i D_y)/2 with D_a = 2*pi*i*k_a
        mult *= cplx(kPi * ky, kPi * kx);
      }
      for (int h : anti) {
        double kx = fr[idx[2 * h]], ky = fr[idx[2 * h + 1]];
        mult *= cplx(-kPi * ky, kPi * kx);
      }
      work[p] = spec[p] * mult;
    });
    std::vector<cplx> vals = fft_.inverse(std::move(work));
    out.re.resize(vals.size());
    out.im.resize(vals.size());
    for (std::size_t i = 0; i < vals.size(); ++i) {
      out.re[i] = vals[i].real();
      out.im[i] = vals[i].imag();
    }
    return out;
  }
  // stencil mode: apply one complex derivative at a time
  out.re = field;
  out.im.assign(field.size(), 0.0);
  auto apply = [&](bool anti_flag, int h) {
    std::vector<double> dxr = stencil_deriv(out.re, 2 * h);
    std::vector<double> dyr = stencil_deriv(out.re, 2 * h + 1);
    std::vector<double> dxi = stencil_deriv(out.im, 2 * h);
    std::vector<double> dyi = stencil_deriv(out.im, 2 * h + 1);
    double s = anti_flag ? 1.0 : -1.0;  // dz~ = (Dx + iDy)/2, dz = (Dx - iDy)/2
    for (std::size_t i = 0; i < field.size(); ++i) {
      out.re[i] = 0.5 * (dxr[i] - s * dyi[i]);
      out.im[i] = 0.5 * (dxi[i] + s * dyr[i]);
    }
  };
  for (int h : hol) apply(false, h);
  for (int h : anti) apply(true, h);
  return out;
}

// ---- exterior derivative -------------------------------------------------

FormField d(const ScalarField& f, const DiffEngine& eng) {
  FormField out(f.grid, 1);
  auto g = eng.gradient(f.v);
  for (int a = 0; a < f.grid.dim(); ++a) out.comp[a] = std::move(g[a]);
  return out;
}

FormField d(const FormField& alpha, const DiffEngine& eng) {
  const TorusGrid& g = alpha.grid;
  const int dim = g.dim();
  const int k = alpha.degree;
  if (k + 1 > dim) throw DegreeOverflow("d of a top form");
  FormField out(g, k + 1);
  const auto& in_basis = form_basis(dim, k);
  const auto& out_basis = form_basis(dim, k + 1);

  if (eng.scheme() == Scheme::spectral) {
    std::vector<std::vector<cplx>> spec(in_basis.size());
    for (std::size_t c = 0; c < in_basis.size(); ++c) spec[c] = eng.spectrum(alpha.comp[c]);
    for (std::size_t oc = 0; oc < out_basis.size(); ++oc) {
      std::vector<cplx> acc(g.points(), cplx(0, 0));
      const auto& T = out_basis[oc];
      for (std::size_t pos = 0; pos < T.size(); ++pos) {
        std::vector<int> sub;
        for (std::size_t q = 0; q < T.size(); ++q)
          if (q != pos) sub.push_back(T[q]);
        int src = form_basis_index(dim, k, sub);
        double sign = (pos % 2 == 0) ? 1.0 : -1.0;
        eng.accumulate_deriv_spectrum(spec[src], T[pos], sign, acc);
      }
      out.comp[oc] = eng.from_spectrum(std::move(acc));
    }
    return out;
  }
  for (std::size_t oc = 0; oc < out_basis.size(); ++oc) {
    const auto& T = out_basis[oc];
    for (std::size_t pos = 0; pos < T.size(); ++pos) {
      std::vector<int> sub;
      for (std::size_t q = 0; q < T.size(); ++q)
        if (q != pos) sub.push_back(T[q]);
      int src = form_basis_index(dim, k, sub);
      double sign = (pos % 2 == 0) ? 1.0 : -1.0;
      std::vector<double> dv = eng.deriv(alpha.comp[src], T[pos]);
      for (std::size_t i = 0; i < dv.size(); ++i) out.comp[oc][i] += sign * dv[i];
    }
  }
  return out;
}

void DiffEngine::accumulate_deriv_spectrum(const std::vector<cplx>& spec, int axis, double sign,
                                           std::vector<cplx>& acc) const {
  const std::vector<double>& fr = freq_;
  spectral_walk(grid_, [&](std::size_t p, const std::vector<int>& idx) {
    acc[p] += spec[p] * cplx(0.0, sign * kTwoPi * fr[idx[axis]]);
  });
}

// ---- J action, projections ----------------------------------------------

FormField apply_J_to_form(const FormField& alpha, const ACSField& Jf) {
  if (alpha.degree != 1) throw DimensionMismatch("apply_J_to_form expects a 1-form");
  if (!(alpha.grid == Jf.grid)) throw DimensionMismatch("grids differ");
  const int dim = alpha.grid.dim();
  FormField out(alpha.grid, 1);
  const std::size_t npts = alpha.grid.points();
  parallel_ranges(npts, [&](std::size_t b, std::size_t e) {
    for (std::size_t p = b; p < e; ++p) {
      const double* J = Jf.at(p);
      for (int k = 0; k < dim; ++k) {
        double s = 0.0;
        for (int i = 0; i < dim; ++i) s -= alpha.comp[i][p] * J[i * dim + k];
        out.comp[k][p] = s;  // (J alpha)(X) = -alpha(JX)
      }
    }
  });
  return out;
}

FormField dJd(const ScalarField& phi, const ACSField& Jf, const DiffEngine& eng) {
  const TorusGrid& g = phi.grid;
  const int dim = g.dim();
  if (eng.scheme() == Scheme::spectral && Jf.constant) {
    // (dJd phi)_{ab} = -sum_i J_{ib} D_a D_i phi + sum_i J_{ia} D_b D_i phi,
    // assembled directly in spectral space.
    std::vector<cplx> spec = eng.spectrum(phi.v);
    FormField out(g, 2);
    const auto& basis = form_basis(dim, 2);
    const double* J = Jf.at(0);
    for (std::size_t c = 0; c < basis.size(); ++c) {
      int a = basis[c][0], b = basis[c][1];
      std::vector<cplx> acc(g.points(), cplx(0, 0));
      eng.accumulate_dJd_spectrum(spec, J, a, b, acc);
      out.comp[c] = eng.from_spectrum(std::move(acc));
    }
    return out;
  }
  return d(apply_J_to_form(d(phi, eng), Jf), eng);
}

void DiffEngine::accumulate_dJd_spectrum(const std::vector<cplx>& spec, const double* J, int a,
                                         int b, std::vector<cplx>& acc) const {
  const int dim = grid_.dim();
  const std::vector<double>& fr = freq_;
  spectral_walk(grid_, [&](std::size_t p, const std::vector<int>& idx) {
    double ka = fr[idx[a]], kb = fr[idx[b]];
    double coef = 0.0;  // real because the symbol is (i k_a)(i k_i) = -k_a k_i
    for (int i = 0; i < dim; ++i) {
      double ki = fr[idx[i]];
      coef += J[i * dim + b] * ka * ki - J[i * dim + a] * kb * ki;
    }
    acc[p] += spec[p] * (kTwoPi * kTwoPi * coef);
  });
}

TypeSplit project_types(const FormField& beta, const ACSField& Jf) {
  if (beta.degree != 2) throw DimensionMismatch("project_types expects a 2-form");
  const TorusGrid& g = beta.grid;
  const int dim = g.dim();
  TypeSplit out{FormField(g, 2), FormField(g, 2)};
  const std::size_t npts = g.points();
  parallel_ranges(npts, [&](std::size_t lo, std::size_t hi) {
    std::vector<double> B(dim * dim), M(dim * dim), P(dim * dim);
    for (std::size_t p = lo; p < hi; ++p) {
      beta.matrix_at(p, B.data());
      const double* J = Jf.at(p);
      // M = J^T B J
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) {
          double s = 0.0;
          for (int r = 0; r < dim; ++r) {
            double jri = J[r * dim + i];
            if (jri == 0.0) continue;
            for (int c = 0; c < dim; ++c) s += jri * B[r * dim + c] * J[c * dim + j];
          }
          M[i * dim + j] = s;
        }
      for (int i = 0; i < dim * dim; ++i) P[i] = 0.5 * (B[i] + M[i]);
      out.p11.set_from_matrix(p, P.data());
      for (int i = 0; i < dim * dim; ++i) P[i] = 0.5 * (B[i] - M[i]);
      out.p20_02.set_from_matrix(p, P.data());
    }
  });
  return out;
}

// ---- wedge / integration / star -------------------------------------------

namespace {

int merge_sign(const std::vector<int>& a, const std::vector<int>& b) {
  // parity of the shuffle sorting (a, b) concatenated; 0 if not disjoint
  std::vector<int> seq = a;
  seq.insert(seq.end(), b.begin(), b.end());
  int inv = 0;
  for (std::size_t i = 0; i < seq.size(); ++i)
    for (std::size_t j = i + 1; j < seq.size(); ++j) {
      if (seq[i] == seq[j]) return 0;
      if (seq[i] > seq[j]) ++inv;
    }
  return (inv % 2 == 0) ? 1 : -1;
}

struct WedgeTerm {
  int out, a, b;
  double sign;
};

const std::vector<WedgeTerm>& wedge_plan(int dim, int k1, int k2) {
  static std::map<std::tuple<int, int, int>, std::vector<WedgeTerm>> cache;
  auto key = std::make_tuple(dim, k1, k2);
  auto it = cache.find(key);
  if (it == cache.end()) {
    std::vector<WedgeTerm> terms;
    const auto& b1 = form_basis(dim, k1);
    const auto& b2 = form_basis(dim, k2);
    for (std::size_t i = 0; i < b1.size(); ++i)
      for (std::size_t j = 0; j < b2.size(); ++j) {
        int s = merge_sign(b1[i], b2[j]);
        if (s == 0) continue;
        std::vector<int> u = b1[i];
        u.insert(u.end(), b2[j].begin(), b2[j].end());
        std::sort(u.begin(), u.end());
        terms.push_back({form_basis_index(dim, k1 + k2, u), static_cast<int>(i),
                         static_cast<int>(j), static_cast<double>(s)});
      }
    it = cache.emplace(key, std::move(terms)).first;
  }
  return it->second;
}

}  // namespace

FormField wedge(const FormField& a, const FormField& b) {
  if (!(a.grid == b.grid)) throw DimensionMismatch("wedge grids differ");
  const int dim = a.grid.dim();
  if (a.degree + b.degree > dim) throw DegreeOverflow("wedge degree sum exceeds dimension");
  FormField out(a.grid, a.degree + b.degree);
  const auto& plan = wedge_plan(dim, a.degree, b.degree);
  const std::size_t npts = a.grid.points();
  for (const auto& t : plan) {
    const double* pa = a.comp[t.a].data();
    const double* pb = b.comp[t.b].data();
    double* po = out.comp[t.out].data();
    double s = t.sign;
    parallel_ranges(npts, [&](std::size_t lo, std::size_t hi) {
      for (std::size_t i = lo; i < hi; ++i) po[i] += s * pa[i] * pb[i];
    });
  }
  return out;
}

double integrate(const FormField& top) {
  if (top.degree != top.grid.dim()) throw DegreeOverflow("integrate expects a top-degree form");
  double s = 0.0;
  for (double x : top.comp[0]) s += x;
  return s / static_cast<double>(top.comp[0].size());
}

double integral_against_volume(const ScalarField& f) { return f.mean(); }

Mat compound_matrix(const Mat& m, int k) {
  const int dim = m.rows();
  const auto& basis = form_basis(dim, k);
  const int nb = static_cast<int>(basis.size());
  Mat out(nb, nb);
  for (int A = 0; A < nb; ++A)
    for (int B = 0; B < nb; ++B) {
      // det of the k x k submatrix with rows basis[A], cols basis[B]
      const auto& R = basis[A];
      const auto& C = basis[B];
      if (k == 1) {
        out(A, B) = m(R[0], C[0]);
      } else if (k == 2) {
        out(A, B) = m(R[0], C[0]) * m(R[1], C[1]) - m(R[0], C[1]) * m(R[1], C[0]);
      } else {
        Mat sub(k, k);
        for (int i = 0; i < k; ++i)
          for (int j = 0; j < k; ++j) sub(i, j) = m(R[i], C[j]);
        // cofactor expansion; k <= 4 at desk scale
        std::function<double(const Mat&)> det = [&](const Mat& s) -> double {
          int n = s.rows();
          if (n == 1) return s(0, 0);
          double acc = 0.0;
          for (int c = 0; c < n; ++c) {
            Mat minor(n - 1, n - 1);
            for (int i = 1; i < n; ++i) {
              int jj = 0;
              for (int j = 0; j < n; ++j) {
                if (j == c) continue;
                minor(i - 1, jj++) = s(i, j);
              }
            }
            acc += ((c % 2 == 0) ? 1.0 : -1.0) * s(0, c) * det(minor);
          }
          return acc;
        };
        out(A, B) = det(sub);
      }
    }
  return out;
}

FormField hodge_star(const FormField& beta, const Mat& g) {
  const TorusGrid& grid = beta.grid;
  const int dim = grid.dim();
  const int k = beta.degree;
  if (g.rows() != dim) throw DimensionMismatch("hodge_star metric dimension");
  Mat ginv = inverse(g);
  Mat C = compound_matrix(ginv, k);
  SymEig eg = sym_eigen((g + g.transposed()) * 0.5);
  if (eg.w.front() <= 0.0) throw NotPositiveDefinite("hodge_star metric");
  double sqrt_det = 1.0;
  for (double w : eg.w) sqrt_det *= w;
  sqrt_det = std::sqrt(sqrt_det);

  const auto& basis = form_basis(dim, k);
  FormField out(grid, dim - k);
  const std::size_t npts = grid.points();
  for (std::size_t I = 0; I < basis.size(); ++I) {
    std::vector<int> comp_idx;
    std::vector<char> in_I(dim, 0);
    for (int x : basis[I]) in_I[x] = 1;
    for (int x = 0; x < dim; ++x)
      if (!in_I[x]) comp_idx.push_back(x);
    int s = merge_sign(basis[I], comp_idx);
    int out_c = form_basis_index(dim, dim - k, comp_idx);
    // (*beta)_{I^c} = sign(I, I^c) * sqrt(det g) * (compound(g^{-1}) beta)_I
    for (std::size_t Jc = 0; Jc < basis.size(); ++Jc) {
      double coeff = s * sqrt_det * C(static_cast<int>(I), static_cast<int>(Jc));
      if (coeff == 0.0) continue;
      const double* src = beta.comp[Jc].data();
      double* dst = out.comp[out_c].data();
      for (std::size_t p = 0; p < npts; ++p) dst[p] += coeff * src[p];
    }
  }
  return out;
}

double form_pointwise_norm_sq(const FormField& a, std::size_t p, const Mat& g) {
  Mat C = compound_matrix(inverse(g), a.degree);
  double s = 0.0;
  for (int i = 0; i < a.ncomp(); ++i)
    for (int j = 0; j < a.ncomp(); ++j) s += a.comp[i][p] * C(i, j) * a.comp[j][p];
  return s;
}

// ---- Nijenhuis tensor ------------------------------------------------------

NijenhuisField nijenhuis(const ACSField& Jf, const DiffEngine& eng) {
  const TorusGrid& g = Jf.grid;
  const int dim = g.dim();
  const auto& pairs = form_basis(dim, 2);
  NijenhuisField N;
  N.grid = g;
  N.comp.assign(pairs.size() * static_cast<std::size_t>(dim),
                std::vector<double>(g.points(), 0.0));
  if (Jf.constant) return N;  // integrable

  // dJ[l][k][j] = partial_l J_{kj}
  const std::size_t npts = g.points();
  std::vector<std::vector<double>> dJ(static_cast<std::size_t>(dim) * dim * dim);
  {
    std::vector<double> entry(npts);
    for (int kk = 0; kk < dim; ++kk)
      for (int j = 0; j < dim; ++j) {
        for (std::size_t p = 0; p < npts; ++p) entry[p] = Jf.at(p)[kk * dim + j];
        if (eng.scheme() == Scheme::spectral) {
          std::vector<cplx> spec = eng.spectrum(entry);
          for (int l = 0; l < dim; ++l)
            dJ[(static_cast<std::size_t>(l) * dim + kk) * dim + j] =
                eng.deriv_from_spectrum(spec, {l});
        } else {
          for (int l = 0; l < dim; ++l)
            dJ[(static_cast<std::size_t>(l) * dim + kk) * dim + j] = eng.deriv(entry, l);
        }
      }
  }
  auto dj = [&](std::size_t p, int l, int k, int j) {
    return dJ[(static_cast<std::size_t>(l) * dim + k) * dim + j][p];
  };

  parallel_ranges(npts, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t p = lo; p < hi; ++p) {
      const double* J = Jf.at(p);
      for (std::size_t c = 0; c < pairs.size(); ++c) {
        int i = pairs[c][0], j = pairs[c][1];
        for (int k = 0; k < dim; ++k) {
          double s = 0.0;
          for (int l = 0; l < dim; ++l) {
            s += J[l * dim + i] * dj(p, l, k, j) - J[l * dim + j] * dj(p, l, k, i);
            s += J[k * dim + l] * (dj(p, j, l, i) - dj(p, i, l, j));
          }
          N.comp[c * dim + k][p] = s;
        }
      }
    }
  });
  return N;
}

double NijenhuisField::at(std::size_t p, int i, int j, int k) const {
  const int dim = grid.dim();
  if (i == j) return 0.0;
  double sign = 1.0;
  if (i > j) {
    std::swap(i, j);
    sign = -1.0;
  }
  int c = form_basis_index(dim, 2, {i, j});
  return sign * comp[static_cast<std::size_t>(c) * dim + k][p];
}

double nijenhuis_cyclic_defect(const NijenhuisField& N, const ACSField& Jf,
                               const FormField& omega) {
  const TorusGrid& g = N.grid;
  const int dim = g.dim();
  const int n = g.n;
  double worst = 0.0;
  std::vector<double> B(dim * dim);
  for (std::size_t p = 0; p < g.points(); ++p) {
    const double* J = Jf.at(p);
    omega.matrix_at(p, B.data());
    // metric g = omega(., J.)
    Mat G(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) {
        double s = 0.0;
        for (int k = 0; k < dim; ++k) s += B[i * dim + k] * J[k * dim + j];
        G(i, j) = s;
      }
    // g-orthonormal frame {u_a, J u_a} by Gram-Schmidt over candidates
    std::vector<std::vector<double>> frame;  // 2n vectors, real
    auto gdot = [&](const std::vector<double>& x, const std::vector<double>& y) {
      double s = 0.0;
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) s += x[i] * G(i, j) * y[j];
      return s;
    };
    auto applyJ = [&](const std::vector<double>& x) {
      std::vector<double> y(dim, 0.0);
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) y[i] += J[i * dim + j] * x[j];
      return y;
    };
    for (int cand = 0; cand < dim && static_cast<int>(frame.size()) < dim; ++cand) {
      std::vector<double> v(dim, 0.0);
      v[cand] = 1.0;
      for (const auto& f : frame) {
        double c = gdot(v, f);
        for (int i = 0; i < dim; ++i) v[i] -= c * f[i];
      }
      double nn = gdot(v, v);
      if (nn < 1e-12) continue;
      double inv = 1.0 / std::sqrt(nn);
      for (double& x : v) x *= inv;
      frame.push_back(v);
      frame.push_back(applyJ(v));
    }
    // conj frame vectors y_a = (u_a + i J u_a)/sqrt(2) and their g-pairings
    const double inv_sqrt2 = 0.7071067811865475244;
    std::vector<std::vector<cplx>> y(n, std::vector<cplx>(dim));
    std::vector<std::vector<cplx>> z(n, std::vector<cplx>(dim));  // z_a = G^T y_a
    for (int a = 0; a < n; ++a) {
      for (int i = 0; i < dim; ++i)
        y[a][i] = cplx(frame[2 * a][i], frame[2 * a + 1][i]) * inv_sqrt2;
      for (int k = 0; k < dim; ++k) {
        cplx s(0, 0);
        for (int l = 0; l < dim; ++l) s += G(k, l) * y[a][l];
        z[a][k] = s;
      }
    }
    // M_{bc}[k] = sum_{ij} y_b[i] y_c[j] N^k_{ij}
    std::vector<std::vector<cplx>> M(static_cast<std::size_t>(n) * n, std::vector<cplx>(dim));
    for (int b = 0; b < n; ++b)
      for (int c2 = 0; c2 < n; ++c2) {
        auto& Mk = M[static_cast<std::size_t>(b) * n + c2];
        for (int k = 0; k < dim; ++k) {
          cplx s(0, 0);
          for (const auto& pr : form_basis(dim, 2)) {
            int i = pr[0], j = pr[1];
            double nk = N.comp[(static_cast<std::size_t>(form_basis_index(dim, 2, pr))) *
                                   static_cast<std::size_t>(dim) +
                               k][p];
            if (nk == 0.0) continue;
            s += nk * (y[b][i] * y[c2][j] - y[b][j] * y[c2][i]);
          }
          Mk[k] = s;
        }
      }
    // cyclic sum over (a,b,c): component of N(y_b,y_c) along e_a is the
    // g-pairing with y_a
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c2 = 0; c2 < n; ++c2) {
          auto comp = [&](int aa, int bb, int cc) {
            cplx s(0, 0);
            const auto& Mk = M[static_cast<std::size_t>(bb) * n + cc];
            for (int k = 0; k < dim; ++k) s += Mk[k] * z[aa][k];
            return s;
          };
          cplx sum = comp(a, b, c2) + comp(b, c2, a) + comp(c2, a, b);
          worst = std::max(worst, std::abs(sum));
        }
  }
  return worst;
}

// ---- tau / H decomposition -------------------------------------------------

TauH tau_H(const ScalarField& phi, const ACSField& Jf, const FormField& omega,
           const DiffEngine& eng) {
  const TorusGrid& g = phi.grid;
  const int dim = g.dim();
  FormField ddc = dJd(phi, Jf, eng);
  FormField omega_phi = omega + ddc;

  // anti-invariant part from the Nijenhuis contraction:
  // (tau + tau~)(X,Y) = -1/2 dphi(J N(X,Y)); zeroth order in the Hessian.
  TauH out{FormField(g, 2), FormField(g, 2)};
  if (Jf.constant) {
    out.H = omega_phi;  // integrable: omega(phi) = H(phi)
    return out;
  }
  NijenhuisField N = nijenhuis(Jf, eng);
  FormField dphi = d(phi, eng);
  const auto& pairs = form_basis(dim, 2);
  const std::size_t npts = g.points();
  parallel_ranges(npts, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t p = lo; p < hi; ++p) {
      const double* J = Jf.at(p);
      for (std::size_t c = 0; c < pairs.size(); ++c) {
        double s = 0.0;
        for (int i = 0; i < dim; ++i) {
          double di = dphi.comp[i][p];
          if (di == 0.0) continue;
          for (int k = 0; k < dim; ++k)
            s += di * J[i * dim + k] * N.comp[c * static_cast<std::size_t>(dim) + k][p];
        }
        out.tau.comp[c][p] = -0.5 * s;
      }
    }
  });
  out.H = omega_phi - out.tau;
  return out;
}

HermitianField hermitian_hessian(const ScalarField& phi, const DiffEngine& eng) {
  // Hermitian matrix of dJ0 d phi: h_pq = 4 d^2 phi / dz_p dz~_q
  const TorusGrid& g = phi.grid;
  const int n = g.n;
  HermitianField h(g);
  for (int p = 0; p < n; ++p) {
    CField cd = eng.complex_deriv(phi.v, {p}, {p});
    for (std::size_t i = 0; i < h.diag[p].size(); ++i) h.diag[p][i] = 4.0 * cd.re[i];
  }
  int lc = 0;
  for (int p = 1; p < n; ++p)
    for (int q = 0; q < p; ++q, ++lc) {
      CField cd = eng.complex_deriv(phi.v, {p}, {q});
      for (std::size_t i = 0; i < h.low_re[lc].size(); ++i) {
        h.low_re[lc][i] = 4.0 * cd.re[i];
        h.low_im[lc][i] = 4.0 * cd.im[i];
      }
    }
  return h;
}

}  // namespace cy
