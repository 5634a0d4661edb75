#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rtspec/common.hpp"
#include "rtspec/words.hpp"

namespace rtspec {

// Declarative model description as read from a JSON model file.
//
//   kind = "transition": weights[w] is the conditional probability of the
//     last symbol of the (m+1)-word w given its first m symbols; each row
//     must sum to 1 within 1e-12.
//   kind = "potential":  weights[w] is the raw potential value (natural
//     log scale); `normalize` (default true) runs the Perron eigenproblem,
//     otherwise the table must already satisfy the prepend normalization.
//
// Weights are listed in lexicographic (m+1)-word order, first symbol most
// significant. memory = 0 is accepted and lifted internally to memory 1.
struct ModelSpec {
  enum class Kind { Transition, Potential };

  int alphabet_size = 2;
  int memory = 1;
  Kind kind = Kind::Transition;
  std::vector<double> weights;
  bool normalize = true;

  static ModelSpec from_json_text(const std::string& text);
  static ModelSpec from_file(const std::string& path);

  // Key-ordered, fixed-format JSON used for --dump-model and digests.
  std::string canonical_json() const;
  std::uint64_t digest() const;
};

// A finite-memory potential brought to normalized form, together with the
// induced stationary measure. Immutable after construction; all measure
// arithmetic is done in log scale.
class PotentialModel {
 public:
  int alphabet_size() const { return k_; }
  int memory() const { return m_; }
  int state_count() const { return states_; }      // K^m
  int table_size() const { return table_; }        // K^{m+1}

  // Pressure of the raw potential before normalization; 0 afterwards.
  double log_lambda() const { return log_lambda_; }

  // Normalized potential phi = log g, indexed by (m+1)-words. Satisfies
  // sum_a exp(log_g[a.s]) = 1 for every m-word suffix s.
  const std::vector<double>& log_g() const { return log_g_; }
  // Forward kernel: log probability of the last symbol of the (m+1)-word
  // given its first m symbols, under the stationary chain.
  const std::vector<double>& log_forward() const { return log_forward_; }
  // Stationary distribution over m-words.
  const std::vector<double>& log_pi() const { return log_pi_; }
  // Eigenfunction of the transfer operator on m-words (log scale).
  const std::vector<double>& log_f() const { return log_f_; }
  const std::vector<double>& raw_phi() const { return raw_phi_; }

  // var_k(phi) for k = 1..m of the normalized potential (0 beyond).
  const std::vector<double>& variations() const { return variations_; }
  double variation_sum() const { return var_sum_; }
  double quasi_bernoulli_c() const { return quasi_c_; }
  double quasi_bernoulli_d() const { return quasi_d_; }
  // Uniform lower bound on exit probabilities zeta(w).
  double zeta_lower_bound() const { return zeta_lower_; }
  // True when g is identically 1/K, i.e. the measure of maximal entropy.
  bool degenerate() const { return degenerate_; }

  // Exact log mu(w); words shorter than the memory are marginalized.
  double cylinder_log_prob(std::span<const int> symbols) const;
  double cylinder_log_prob(const Word& w) const {
    return cylinder_log_prob(std::span<const int>(w.symbols));
  }

  // Index helpers for (m+1)-word tables.
  int window_index(std::span<const int> symbols, int offset) const;

  friend PotentialModel normalize(const ModelSpec& spec);

 private:
  int k_ = 0, m_ = 0, states_ = 0, table_ = 0;
  double log_lambda_ = 0;
  std::vector<double> raw_phi_, log_g_, log_forward_, log_pi_, log_f_;
  std::vector<double> variations_;
  double var_sum_ = 0, quasi_c_ = 1, quasi_d_ = 1, zeta_lower_ = 0;
  bool degenerate_ = false;
};

// Solve the Perron eigenproblem for the spec's weights and assemble the
// normalized model (relative tolerance 1e-13, iteration cap 1e6).
PotentialModel normalize(const ModelSpec& spec);

// Equilibrium state of t * phi, phi being the model's normalized
// potential; carries P(t*phi) as its log_lambda.
PotentialModel tilt(const PotentialModel& model, double t);

// Stationary expectation of the model's own normalized potential; equals
// -h(mu) for a normalized model.
double phi_mean(const PotentialModel& model);

// Stationary expectation (under `measure`) of a potential table defined
// on the same (K, m) layout. Used for derivatives of the pressure.
double expected_potential(const PotentialModel& measure,
                          const std::vector<double>& phi_table);

struct QuasiBernoulliReport {
  double min_ratio = 1;   // min over sampled pairs of mu(ab)/(mu(a) mu(b))
  double max_ratio = 1;
  double d_bound = 1;     // the model's D
  bool within_bound = true;
};

// Sample random word pairs (lengths up to 20) and check the
// quasi-Bernoulli concatenation ratios against D.
QuasiBernoulliReport quasi_bernoulli_check(const PotentialModel& model,
                                           int samples, std::uint64_t seed);

}  // namespace rtspec
