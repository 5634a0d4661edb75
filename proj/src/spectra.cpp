#include "rtspec/spectra.hpp"

#include <algorithm>
#include <cmath>

#include "rtspec/numerics.hpp"

namespace rtspec {

namespace {

LogMatrix tilted_matrix(const PotentialModel& model, double t) {
  LogMatrix mat;
  mat.dim = model.state_count();
  mat.entries.reserve(model.table_size());
  const int k = model.alphabet_size();
  for (int w = 0; w < model.table_size(); ++w)
    mat.entries.push_back({w / k, w % model.state_count(), t * model.log_g()[w]});
  return mat;
}

}  // namespace

double pressure(const PotentialModel& model, double t) {
  return perron_log(tilted_matrix(model, t)).log_lambda;
}

double m_spectrum(const PotentialModel& model, double q) {
  return pressure(model, 1.0 - q);
}

double renyi(const PotentialModel& model, double q) {
  if (q == 0.0) return entropy(model);
  return -pressure(model, 1.0 + q) / q;
}

double entropy(const PotentialModel& model) { return -phi_mean(model); }

double pressure_derivative(const PotentialModel& model, double t) {
  return expected_potential(tilt(model, t), model.log_g());
}

double gamma_plus(const PotentialModel& model) {
  return max_mean_cycle(tilted_matrix(model, 1.0));
}

double phi_min_mean(const PotentialModel& model) {
  return min_mean_cycle(tilted_matrix(model, 1.0));
}

std::vector<std::pair<int, double>> gamma_plus_empirical(
    const PotentialModel& model, int n_max) {
  if (n_max < 1 || n_max > 10000)
    throw input_error("gamma_plus_empirical: n_max must be in [1, 1e4]");
  std::vector<std::pair<int, double>> out;
  const int k = model.alphabet_size();
  const int states = model.state_count();
  const int m = model.memory();
  // best[u] = max over length-n words ending in m-word u of log mu
  std::vector<double> best(states), next(states);
  for (int s = 0; s < states; ++s) best[s] = model.log_pi()[s];
  for (int n = 1; n <= n_max; ++n) {
    double top;
    if (n < m) {
      // short words marginalize pi; enumerate directly (k^n <= states)
      top = kNegInf;
      std::vector<int> buf(n);
      std::uint64_t total = word_count(k, n);
      for (std::uint64_t i = 0; i < total; ++i) {
        decode_word(k, n, i, buf.data());
        top = std::max(top, model.cylinder_log_prob(buf));
      }
    } else if (n == m) {
      top = *std::max_element(best.begin(), best.end());
    } else {
      next.assign(states, kNegInf);
      for (int w = 0; w < model.table_size(); ++w) {
        int pre = w / k, suf = w % states;
        next[suf] = std::max(next[suf], best[pre] + model.log_forward()[w]);
      }
      best.swap(next);
      top = *std::max_element(best.begin(), best.end());
    }
    out.emplace_back(n, top / n);
  }
  return out;
}

Word argmax_word(const PotentialModel& model, int n) {
  const int k = model.alphabet_size();
  const int states = model.state_count();
  const int m = model.memory();
  if (n < m) {
    // small search space; scan directly
    std::uint64_t total = word_count(k, n);
    double top = kNegInf;
    std::uint64_t arg = 0;
    std::vector<int> buf(n);
    for (std::uint64_t i = 0; i < total; ++i) {
      decode_word(k, n, i, buf.data());
      double v = model.cylinder_log_prob(buf);
      if (v > top) {
        top = v;
        arg = i;
      }
    }
    return word_at(k, n, arg);
  }
  std::vector<double> best(states);
  for (int s = 0; s < states; ++s) best[s] = model.log_pi()[s];
  std::vector<std::vector<int>> back(std::max(0, n - m),
                                     std::vector<int>(states, -1));
  std::vector<double> next(states);
  for (int step = 0; step < n - m; ++step) {
    next.assign(states, kNegInf);
    for (int w = 0; w < model.table_size(); ++w) {
      int pre = w / k, suf = w % states;
      double cand = best[pre] + model.log_forward()[w];
      if (cand > next[suf]) {
        next[suf] = cand;
        back[step][suf] = pre;
      }
    }
    best.swap(next);
  }
  int end = int(std::max_element(best.begin(), best.end()) - best.begin());
  std::vector<int> states_seq(std::max(1, n - m + 1));
  states_seq.back() = end;
  for (int step = n - m - 1; step >= 0; --step)
    states_seq[step] = back[step][states_seq[step + 1]];
  // expand the state path into symbols
  std::vector<int> syms;
  int first = states_seq[0];
  std::vector<int> head(m);
  for (int i = m - 1; i >= 0; --i) {
    head[i] = first % k;
    first /= k;
  }
  syms = head;
  for (size_t i = 1; i < states_seq.size(); ++i)
    syms.push_back(states_seq[i] % k);
  return Word(std::move(syms), k);
}

CriticalPoint q_star(const PotentialModel& model, double tol) {
  CriticalPoint cp;
  if (model.degenerate()) {
    cp.q_star = -1.0;
    cp.is_max_entropy_degenerate = true;
    return cp;
  }
  const double gamma = gamma_plus(model);
  auto f = [&](double q) { return m_spectrum(model, q) - gamma; };
  double f_lo = f(-1.0), f_hi = f(0.0);
  if (f_lo > 1e-9 || f_hi < -1e-9)
    throw numeric_error("q_star: bracket violation; model is not normalized");
  cp.q_star = bisect(f, -1.0, 0.0, tol);
  cp.is_max_entropy_degenerate = false;
  return cp;
}

std::vector<double> uniform_grid(double lo, double hi, int points) {
  if (points < 2) throw input_error("grid needs at least 2 points");
  std::vector<double> g(points);
  for (int i = 0; i < points; ++i)
    g[i] = lo + (hi - lo) * double(i) / double(points - 1);
  return g;
}

namespace {

SpectrumCurve curve_base(const PotentialModel& model,
                         const std::vector<double>& grid, CurveKind kind) {
  SpectrumCurve c;
  c.kind = kind;
  c.q = grid;
  c.value.resize(grid.size());
  c.branch.resize(grid.size());
  c.gamma_plus = gamma_plus(model);
  c.p_two_phi = pressure(model, 2.0);
  c.degenerate = model.degenerate();
  c.q_star = q_star(model).q_star;
  return c;
}

}  // namespace

SpectrumCurve r_spectrum(const PotentialModel& model,
                         const std::vector<double>& grid) {
  SpectrumCurve c = curve_base(model, grid, CurveKind::R);
  double at_kink = m_spectrum(model, c.q_star);
  if (std::fabs(at_kink - c.gamma_plus) > 1e-8)
    throw numeric_error("r_spectrum: discontinuity at q_star");
  for (size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] >= c.q_star) {
      c.value[i] = m_spectrum(model, grid[i]);
      c.branch[i] = "P((1-q)phi)";
    } else {
      c.value[i] = c.gamma_plus;
      c.branch[i] = "gamma_plus";
    }
  }
  c.breakpoints = {c.q_star};
  return c;
}

SpectrumCurve w_spectrum(const PotentialModel& model,
                         const std::vector<double>& grid) {
  SpectrumCurve c = curve_base(model, grid, CurveKind::W);
  for (size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] >= -1.0) {
      c.value[i] = m_spectrum(model, grid[i]);
      c.branch[i] = "P((1-q)phi)";
    } else {
      c.value[i] = c.p_two_phi;
      c.branch[i] = "P(2phi)";
    }
  }
  c.breakpoints = {-1.0};
  return c;
}

}  // namespace rtspec
