#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <string_view>
#include <vector>

namespace rtspec {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kPosInf = std::numeric_limits<double>::infinity();

// log(e^a + e^b), safe for -inf arguments.
inline double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  double hi = a > b ? a : b;
  double lo = a > b ? b : a;
  return hi + std::log1p(std::exp(lo - hi));
}

// Streaming log-sum-exp accumulator. Accumulation order is whatever the
// caller feeds, so sequential use inside a fixed block is reproducible.
class LogSumAcc {
 public:
  void add(double log_term) {
    if (log_term == kNegInf) return;
    if (max_ == kNegInf) {
      max_ = log_term;
      sum_ = 1.0;
      return;
    }
    if (log_term <= max_) {
      sum_ += std::exp(log_term - max_);
    } else {
      sum_ = sum_ * std::exp(max_ - log_term) + 1.0;
      max_ = log_term;
    }
  }
  void merge(const LogSumAcc& o) {
    if (o.max_ == kNegInf) return;
    if (max_ == kNegInf) {
      *this = o;
      return;
    }
    if (o.max_ <= max_) {
      sum_ += o.sum_ * std::exp(o.max_ - max_);
    } else {
      sum_ = sum_ * std::exp(max_ - o.max_) + o.sum_;
      max_ = o.max_;
    }
  }
  double log_value() const {
    return max_ == kNegInf ? kNegInf : max_ + std::log(sum_);
  }

 private:
  double max_ = kNegInf;
  double sum_ = 0.0;
};

// Perron data of a nonnegative primitive matrix held in log scale.
struct PerronResult {
  double log_lambda = 0.0;
  std::vector<double> log_right;  // normalized so max entry is 0
  std::vector<double> log_left;
  int iterations = 0;
};

// Sparse nonnegative matrix in log scale: entry (row, col, log_weight).
struct LogMatrix {
  int dim = 0;
  struct Entry {
    int row, col;
    double log_w;
  };
  std::vector<Entry> entries;
};

// Power iteration with Collatz-Wielandt bracketing, all in log scale so
// entries like g(w)^t for large t never underflow. Converges when the
// bracket on log(lambda) is narrower than tol. Throws numeric_error after
// max_iter sweeps.
PerronResult perron_log(const LogMatrix& mat, double tol = 1e-13,
                        long max_iter = 1000000);

// Karp's minimum/maximum mean cycle. Weights are plain doubles on a
// strongly connected graph given as (row=from, col=to, log_w=weight).
double max_mean_cycle(const LogMatrix& graph);
double min_mean_cycle(const LogMatrix& graph);

// Dense LU with partial pivoting; solve overwrites b with the solution.
// Used on small absorbing-chain systems (dim up to a few thousand).
class DenseLU {
 public:
  explicit DenseLU(std::vector<double> a, int n);  // row-major n*n
  void solve(std::vector<double>& b) const;
  bool singular() const { return singular_; }

 private:
  std::vector<double> lu_;
  std::vector<int> piv_;
  int n_;
  bool singular_ = false;
};

// Bisection for a continuous function with f(lo) and f(hi) of opposite
// sign (weak inequalities allowed). Returns the midpoint of the final
// bracket of width <= tol.
double bisect(const std::function<double(double)>& f, double lo, double hi,
              double tol, int max_iter = 200);

// FNV-1a 64-bit digest, used for model-file fingerprints in run manifests.
std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace rtspec
