#include "cy/fields.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace cy {

double ScalarField::mean() const {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double ScalarField::sup_norm() const {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

double ScalarField::lp_norm(double p) const {
  double s = 0.0;
  for (double x : v) s += std::pow(std::fabs(x), p);
  return std::pow(s / static_cast<double>(v.size()), 1.0 / p);
}

void ScalarField::subtract_mean() {
  double mu = mean();
  for (double& x : v) x -= mu;
}

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
  ScalarField out(a.grid);
  for (std::size_t i = 0; i < a.v.size(); ++i) out.v[i] = a.v[i] + b.v[i];
  return out;
}
ScalarField operator-(const ScalarField& a, const ScalarField& b) {
  ScalarField out(a.grid);
  for (std::size_t i = 0; i < a.v.size(); ++i) out.v[i] = a.v[i] - b.v[i];
  return out;
}
ScalarField operator*(const ScalarField& a, double s) {
  ScalarField out(a.grid);
  for (std::size_t i = 0; i < a.v.size(); ++i) out.v[i] = a.v[i] * s;
  return out;
}

namespace {
void gen_subsets(int dim, int k, int start, std::vector<int>& cur,
                 std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == k) {
    out.push_back(cur);
    return;
  }
  for (int i = start; i < dim; ++i) {
    cur.push_back(i);
    gen_subsets(dim, k, i + 1, cur, out);
    cur.pop_back();
  }
}
}  // namespace

const std::vector<std::vector<int>>& form_basis(int dim, int k) {
  static std::map<std::pair<int, int>, std::vector<std::vector<int>>> cache;
  auto key = std::make_pair(dim, k);
  auto it = cache.find(key);
  if (it == cache.end()) {
    if (k < 0 || k > dim) throw DegreeOverflow("degree " + std::to_string(k));
    std::vector<std::vector<int>> basis;
    std::vector<int> cur;
    gen_subsets(dim, k, 0, cur, basis);
    it = cache.emplace(key, std::move(basis)).first;
  }
  return it->second;
}

int form_basis_index(int dim, int k, const std::vector<int>& tuple) {
  const auto& basis = form_basis(dim, k);
  for (std::size_t i = 0; i < basis.size(); ++i)
    if (basis[i] == tuple) return static_cast<int>(i);
  throw IndexOutOfRange("basis tuple not found");
}

double FormField::sup_norm() const {
  double m = 0.0;
  for (const auto& c : comp)
    for (double x : c) m = std::max(m, std::fabs(x));
  return m;
}

void FormField::matrix_at(std::size_t p, double* out) const {
  const int d = grid.dim();
  const auto& basis = form_basis(d, 2);
  std::fill(out, out + d * d, 0.0);
  for (std::size_t c = 0; c < basis.size(); ++c) {
    int i = basis[c][0], j = basis[c][1];
    double val = comp[c][p];
    out[i * d + j] = val;
    out[j * d + i] = -val;
  }
}

void FormField::set_from_matrix(std::size_t p, const double* b) {
  const int d = grid.dim();
  const auto& basis = form_basis(d, 2);
  for (std::size_t c = 0; c < basis.size(); ++c) {
    int i = basis[c][0], j = basis[c][1];
    comp[c][p] = 0.5 * (b[i * d + j] - b[j * d + i]);
  }
}

FormField operator+(const FormField& a, const FormField& b) {
  FormField out(a.grid, a.degree);
  for (int c = 0; c < a.ncomp(); ++c)
    for (std::size_t i = 0; i < a.comp[c].size(); ++i) out.comp[c][i] = a.comp[c][i] + b.comp[c][i];
  return out;
}
FormField operator-(const FormField& a, const FormField& b) {
  FormField out(a.grid, a.degree);
  for (int c = 0; c < a.ncomp(); ++c)
    for (std::size_t i = 0; i < a.comp[c].size(); ++i) out.comp[c][i] = a.comp[c][i] - b.comp[c][i];
  return out;
}
FormField operator*(const FormField& a, double s) {
  FormField out(a.grid, a.degree);
  for (int c = 0; c < a.ncomp(); ++c)
    for (std::size_t i = 0; i < a.comp[c].size(); ++i) out.comp[c][i] = a.comp[c][i] * s;
  return out;
}

FormField std_omega_form(const TorusGrid& g) {
  FormField w(g, 2);
  for (int p = 0; p < g.n; ++p) {
    std::vector<int> pair{2 * p, 2 * p + 1};
    int c = form_basis_index(g.dim(), 2, pair);
    std::fill(w.comp[c].begin(), w.comp[c].end(), 1.0);
  }
  return w;
}

ACSField ACSField::standard(const TorusGrid& g) {
  ACSField f;
  f.grid = g;
  f.constant = true;
  const int d = g.dim();
  f.J.assign(static_cast<std::size_t>(d) * d, 0.0);
  Mat j = std_J(g.n);
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) f.J[static_cast<std::size_t>(i) * d + k] = j(i, k);
  return f;
}

ACSField ACSField::varying(const TorusGrid& g) {
  ACSField f;
  f.grid = g;
  f.constant = false;
  const int d = g.dim();
  f.J.assign(g.points() * static_cast<std::size_t>(d) * d, 0.0);
  return f;
}

double ACSField::acs_defect() const {
  const int d = grid.dim();
  const std::size_t npts = constant ? 1 : grid.points();
  double worst = 0.0;
  for (std::size_t p = 0; p < npts; ++p) {
    const double* j = at(p);
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c) {
        double s = (r == c) ? 1.0 : 0.0;
        for (int k = 0; k < d; ++k) s += j[r * d + k] * j[k * d + c];
        worst = std::max(worst, std::fabs(s));
      }
  }
  return worst;
}

HermMat HermitianField::at(std::size_t p) const {
  const int n = grid.n;
  HermMat h(n);
  for (int i = 0; i < n; ++i) h.diag(i) = diag[i][p];
  int c = 0;
  for (int i = 1; i < n; ++i)
    for (int j = 0; j < i; ++j, ++c) h.lower(i, j) = cplx(low_re[c][p], low_im[c][p]);
  return h;
}

void HermitianField::set(std::size_t p, const HermMat& h) {
  const int n = grid.n;
  for (int i = 0; i < n; ++i) diag[i][p] = h.diag(i);
  int c = 0;
  for (int i = 1; i < n; ++i)
    for (int j = 0; j < i; ++j, ++c) {
      low_re[c][p] = h.lower(i, j).real();
      low_im[c][p] = h.lower(i, j).imag();
    }
}

HermitianField hermitian_from_two_form(const FormField& beta) {
  if (beta.degree != 2) throw DimensionMismatch("hermitian_from_two_form needs a 2-form");
  const TorusGrid& g = beta.grid;
  const int n = g.n;
  const int d = g.dim();
  HermitianField h(g);
  // diagonal: h_pp = B[2p][2p+1]
  for (int p = 0; p < n; ++p) {
    int c = form_basis_index(d, 2, {2 * p, 2 * p + 1});
    h.diag[p] = beta.comp[c];
  }
  // lower triangle p > q: h_pq = B[2p][2q+1] - i B[2p][2q]
  int lc = 0;
  for (int p = 1; p < n; ++p)
    for (int q = 0; q < p; ++q, ++lc) {
      // stored tuples are sorted; for p > q both 2q,2q+1 < 2p
      int c_re = form_basis_index(d, 2, {2 * q + 1, 2 * p});   // B[2q+1][2p] = -B[2p][2q+1]
      int c_im = form_basis_index(d, 2, {2 * q, 2 * p});       // B[2q][2p]  = -B[2p][2q]
      const auto& re_src = beta.comp[c_re];
      const auto& im_src = beta.comp[c_im];
      for (std::size_t i = 0; i < re_src.size(); ++i) {
        h.low_re[lc][i] = -re_src[i];
        h.low_im[lc][i] = im_src[i];
      }
    }
  return h;
}

FormField two_form_from_hermitian(const HermitianField& h) {
  const TorusGrid& g = h.grid;
  const int n = g.n;
  const int d = g.dim();
  FormField beta(g, 2);
  for (int p = 0; p < n; ++p) {
    int c = form_basis_index(d, 2, {2 * p, 2 * p + 1});
    beta.comp[c] = h.diag[p];
  }
  int lc = 0;
  for (int p = 1; p < n; ++p)
    for (int q = 0; q < p; ++q, ++lc) {
      // a = Re h_pq, b = Im h_pq (p > q); block entries follow from
      // B[2p][2q] = -b_pq, B[2p][2q+1] = a_pq, B[2p+1][2q+1] = -b_pq
      int c_xx = form_basis_index(d, 2, {2 * q, 2 * p});          // B[2q][2p] = -b_qp = b
      int c_xy = form_basis_index(d, 2, {2 * q + 1, 2 * p});      // B[2q+1][2p] = -a_qp = -a
      int c_yx = form_basis_index(d, 2, {2 * q, 2 * p + 1});      // B[2q][2p+1] = a_qp = a
      int c_yy = form_basis_index(d, 2, {2 * q + 1, 2 * p + 1});  // B[2q+1][2p+1] = -b_qp = b
      for (std::size_t i = 0; i < beta.comp[c_xx].size(); ++i) {
        double a = h.low_re[lc][i], b = h.low_im[lc][i];
        beta.comp[c_xx][i] = b;
        beta.comp[c_xy][i] = -a;
        beta.comp[c_yx][i] = a;
        beta.comp[c_yy][i] = b;
      }
    }
  return beta;
}

}  // namespace cy
