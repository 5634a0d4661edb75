#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "rtspec/model.hpp"
#include "rtspec/words.hpp"

namespace rtspec {

// Exit probability of the cylinder [w] and the smallest return shift,
// computed from the identity (1 - zeta(w)) mu(w) = mu(w_1^tau w).
struct ZetaValue {
  double zeta = 0;                // in (0, 1]
  double log_one_minus_zeta = 0;  // log mu(w_1^tau w) - log mu(w)
  int tau = 1;
};

ZetaValue zeta(const PotentialModel& model, const Word& w);

// P(V > t) <= exp(log_c) * rho^t for all t >= 0 (post-warmup steps).
struct TailCertificate {
  double log_c = 0;
  double rho = 0.5;
};

// Exact law of the first return shift S = inf{j >= 1 : theta^j x in [w]}
// (return mode, started from mu conditioned on [w]) or of the hitting
// time T_w (hitting mode, started from mu). A word-matching automaton is
// product-coupled with the memory-m chain; the full-match state absorbs.
// Only states reachable from the initial support are materialized.
class ReturnLaw {
 public:
  enum class Mode { Return, Hitting };

  ReturnLaw(const PotentialModel& model, const Word& w, Mode mode,
            std::uint64_t state_budget = 1000000);

  Mode mode() const { return mode_; }
  const Word& word() const { return word_; }
  int tau() const { return tau_; }
  double word_log_prob() const { return word_log_prob_; }
  int live_state_count() const { return int(trans_.size()); }

  // Exact probabilities P(V = t) for t = 1..t_max, where V is S in
  // return mode and T in hitting mode.
  std::vector<double> law(int t_max) const;

  // Survival P(V > t), exact by plain stepping (for small t).
  double survival(std::uint64_t t) const;

  // Survival P(V > t) by powers-by-squaring, returned as an enclosure
  // widened by the accumulated floating-point error.
  struct Enclosure {
    double lo = 0, hi = 1;
  };
  Enclosure survival_squared(std::uint64_t t) const;

  TailCertificate tail_certificate() const;

  struct Moment {
    double value_s = 0;         // E[V^q]
    double value_s_plus_1 = 0;  // E[(V+1)^q]
    double error_bound = 0;     // absolute error (rigorous for stepping,
                                // estimate for the quadrature path)
    const char* method = "";
  };

  // E[V^q] and E[(V+1)^q] with adaptive truncation: plain stepping with a
  // rigorous geometric remainder when the horizon is short, otherwise
  // Laplace-transform quadrature on resolvent solves. q <= 2 fully
  // supported; larger integer q falls back to capped stepping.
  Moment moment(double q, double rel_tol = 1e-12) const;

 private:
  struct Step {
    int target;  // live-state id, or -1 for absorption
    double prob;
  };

  void warmup_and_build(const PotentialModel& model);
  Moment moment_by_solves(int q) const;
  Moment moment_by_stepping(double q, double rel_tol, std::uint64_t step_cap,
                            bool* converged) const;
  Moment moment_by_laplace(double q, double rel_tol) const;
  void solve_lu(const std::vector<double>& matrix,
                std::vector<double>& rhs) const;
  // G(x) = sum_t p_t x^t (post-warmup absorption pgf) and
  // W(x) = v0 (I - xM)^{-1} ones, computed with one LU per x and cached.
  std::pair<double, double> resolvent(double u) const;

  Mode mode_;
  Word word_;
  int tau_ = 1;
  double word_log_prob_ = 0;
  int n_ = 0, m_ = 0, k_ = 0;
  int value_offset_ = 0;  // V = post-warmup step count + value_offset_
  std::vector<std::pair<int, double>> warmup_absorb_;  // (V, prob)
  std::vector<double> v0_;                             // over live states
  std::vector<std::vector<Step>> trans_;
  mutable TailCertificate tail_{};
  mutable bool tail_ready_ = false;
  mutable std::map<double, std::pair<double, double>> resolvent_cache_;
};

// (1/n) log sum_w mu(w) E_w[(S+1)^q]: the exact finite-n return-time
// spectrum, with the per-word moment errors aggregated.
struct ExactSpectrumValue {
  double value = 0;
  double error = 0;  // absolute error on the (1/n) log value
};

ExactSpectrumValue exact_return_spectrum(
    const PotentialModel& model, int n, double q, int threads = 1,
    std::uint64_t budget = kDefaultEnumBudget, double rel_tol = 1e-12);

// Same, sharing each word's automaton and resolvent cache across all q.
std::vector<ExactSpectrumValue> exact_return_spectrum_multi(
    const PotentialModel& model, int n, const std::vector<double>& qs,
    int threads = 1, std::uint64_t budget = kDefaultEnumBudget,
    double rel_tol = 1e-12);

// Lambda^(n) = (1/n) log sum_w (1 - zeta(w)) mu(w).
double lambda_n(const PotentialModel& model, int n, int threads = 1,
                std::uint64_t budget = kDefaultEnumBudget);

// log P(R_n > L) with R_n = S + 1, as a certified enclosure.
struct LogTail {
  double log_lo = 0;  // -inf when the enclosure touches zero
  double log_hi = 0;
  double log_mid = 0;
};

LogTail exact_tail(const PotentialModel& model, int n, std::uint64_t level,
                   int threads = 1, std::uint64_t budget = kDefaultEnumBudget);

}  // namespace rtspec
