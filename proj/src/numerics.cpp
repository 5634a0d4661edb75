#include "rtspec/numerics.hpp"

#include <algorithm>
#include <cmath>

#include "rtspec/common.hpp"

namespace rtspec {

namespace {

// One matrix-vector sweep in log scale: out[row] = logsum over entries of
// log_w + in[col] (right action) or out[col] = log_w + in[row] (left).
void sweep(const LogMatrix& mat, const std::vector<double>& in,
           std::vector<double>& out, bool right) {
  out.assign(mat.dim, kNegInf);
  // Two passes: track max per target first, then accumulate scaled sums.
  for (const auto& e : mat.entries) {
    int t = right ? e.row : e.col;
    int s = right ? e.col : e.row;
    double v = e.log_w + in[s];
    if (v > out[t]) out[t] = v;
  }
  std::vector<double> sums(mat.dim, 0.0);
  for (const auto& e : mat.entries) {
    int t = right ? e.row : e.col;
    int s = right ? e.col : e.row;
    double v = e.log_w + in[s];
    if (out[t] != kNegInf) sums[t] += std::exp(v - out[t]);
  }
  for (int i = 0; i < mat.dim; ++i)
    if (out[i] != kNegInf) out[i] += std::log(sums[i]);
}

void normalize_max0(std::vector<double>& v) {
  double mx = kNegInf;
  for (double x : v) mx = std::max(mx, x);
  for (double& x : v) x -= mx;
}

std::vector<double> perron_vector(const LogMatrix& mat, bool right,
                                  double tol, long max_iter, double* lam,
                                  int* iters) {
  std::vector<double> v(mat.dim, 0.0), w;
  for (long it = 0; it < max_iter; ++it) {
    sweep(mat, v, w, right);
    double lo = kPosInf, hi = kNegInf;
    for (int i = 0; i < mat.dim; ++i) {
      double r = w[i] - v[i];
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    if (!(lo <= hi) || hi == kNegInf)
      throw numeric_error("perron: matrix is not irreducible");
    v.swap(w);
    normalize_max0(v);
    if (hi - lo <= tol) {
      *lam = 0.5 * (lo + hi);
      *iters = int(it + 1);
      return v;
    }
  }
  throw numeric_error("perron: power iteration did not converge");
}

}  // namespace

PerronResult perron_log(const LogMatrix& mat, double tol, long max_iter) {
  PerronResult res;
  int it_r = 0, it_l = 0;
  double lam_r = 0, lam_l = 0;
  res.log_right = perron_vector(mat, true, tol, max_iter, &lam_r, &it_r);
  res.log_left = perron_vector(mat, false, tol, max_iter, &lam_l, &it_l);
  res.log_lambda = 0.5 * (lam_r + lam_l);
  res.iterations = std::max(it_r, it_l);
  return res;
}

namespace {

double karp(const LogMatrix& graph, bool maximize) {
  const int n = graph.dim;
  const double bad = maximize ? kNegInf : kPosInf;
  // d[k][v] = best weight of a k-edge walk from node 0 to v.
  std::vector<std::vector<double>> d(n + 1, std::vector<double>(n, bad));
  d[0][0] = 0.0;
  for (int k = 1; k <= n; ++k) {
    for (const auto& e : graph.entries) {
      double base = d[k - 1][e.row];
      if (base == bad) continue;
      double cand = base + e.log_w;
      double& slot = d[k][e.col];
      if (slot == bad || (maximize ? cand > slot : cand < slot)) slot = cand;
    }
  }
  double best = bad;
  for (int v = 0; v < n; ++v) {
    if (d[n][v] == bad) continue;
    // inner min (resp. max) over k of (d_n - d_k)/(n-k)
    double inner = maximize ? kPosInf : kNegInf;
    for (int k = 0; k < n; ++k) {
      if (d[k][v] == bad) continue;
      double r = (d[n][v] - d[k][v]) / double(n - k);
      inner = maximize ? std::min(inner, r) : std::max(inner, r);
    }
    if (best == bad || (maximize ? inner > best : inner < best)) best = inner;
  }
  if (best == bad) throw numeric_error("mean cycle: graph has no cycle");
  return best;
}

}  // namespace

double max_mean_cycle(const LogMatrix& graph) { return karp(graph, true); }
double min_mean_cycle(const LogMatrix& graph) { return karp(graph, false); }

DenseLU::DenseLU(std::vector<double> a, int n) : lu_(std::move(a)), n_(n) {
  piv_.resize(n_);
  for (int i = 0; i < n_; ++i) piv_[i] = i;
  for (int k = 0; k < n_; ++k) {
    int p = k;
    double best = std::fabs(lu_[k * n_ + k]);
    for (int i = k + 1; i < n_; ++i) {
      double v = std::fabs(lu_[i * n_ + k]);
      if (v > best) {
        best = v;
        p = i;
      }
    }
    if (best == 0.0) {
      singular_ = true;
      return;
    }
    if (p != k) {
      for (int j = 0; j < n_; ++j) std::swap(lu_[p * n_ + j], lu_[k * n_ + j]);
      std::swap(piv_[p], piv_[k]);
    }
    double pivot = lu_[k * n_ + k];
    for (int i = k + 1; i < n_; ++i) {
      double f = lu_[i * n_ + k] / pivot;
      lu_[i * n_ + k] = f;
      if (f == 0.0) continue;
      for (int j = k + 1; j < n_; ++j) lu_[i * n_ + j] -= f * lu_[k * n_ + j];
    }
  }
}

void DenseLU::solve(std::vector<double>& b) const {
  std::vector<double> x(n_);
  for (int i = 0; i < n_; ++i) x[i] = b[piv_[i]];
  for (int i = 0; i < n_; ++i) {
    double s = x[i];
    for (int j = 0; j < i; ++j) s -= lu_[i * n_ + j] * x[j];
    x[i] = s;
  }
  for (int i = n_ - 1; i >= 0; --i) {
    double s = x[i];
    for (int j = i + 1; j < n_; ++j) s -= lu_[i * n_ + j] * x[j];
    x[i] = s / lu_[i * n_ + i];
  }
  b = std::move(x);
}

double bisect(const std::function<double(double)>& f, double lo, double hi,
              double tol, int max_iter) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0) == (fhi > 0))
    throw numeric_error("bisect: endpoints do not bracket a root");
  for (int it = 0; it < max_iter && hi - lo > tol; ++it) {
    double mid = 0.5 * (lo + hi);
    double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace rtspec
