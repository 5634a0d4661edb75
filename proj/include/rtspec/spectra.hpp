#pragma once

#include <string>
#include <vector>

#include "rtspec/model.hpp"

namespace rtspec {

// Topological pressure P(t*phi) of the model's normalized potential,
// i.e. the log Perron eigenvalue of the g^t transfer matrix.
double pressure(const PotentialModel& model, double t);

// L^q spectrum of the measure: M(q) = P((1-q) phi).
double m_spectrum(const PotentialModel& model, double q);

// Renyi entropy H(q) = -P((1+q) phi)/q; returns the entropy rate at q=0.
double renyi(const PotentialModel& model, double q);

// Entropy rate h = -phi_mean for a normalized model.
double entropy(const PotentialModel& model);

// d/dt P(t*phi) = expectation of phi under the tilted equilibrium state.
double pressure_derivative(const PotentialModel& model, double t);

// Max (resp. min) mean cycle of the de Bruijn graph weighted by phi.
// gamma_plus = sup over invariant measures of the integral of phi.
double gamma_plus(const PotentialModel& model);
double phi_min_mean(const PotentialModel& model);

// (1/n) log max_w mu(w) for n = 1..n_max, via max-plus matrix powers.
std::vector<std::pair<int, double>> gamma_plus_empirical(
    const PotentialModel& model, int n_max);

// Argmax word of length n for mu, recovered from max-plus backpointers.
Word argmax_word(const PotentialModel& model, int n);

struct CriticalPoint {
  double q_star = -1;
  bool is_max_entropy_degenerate = false;
};

// Unique root of M(q) = gamma_plus on [-1, 0]; exactly -1 with the flag
// set for the measure of maximal entropy.
CriticalPoint q_star(const PotentialModel& model, double tol = 1e-10);

enum class CurveKind { M, H, R, W };

struct SpectrumCurve {
  CurveKind kind = CurveKind::R;
  std::vector<double> q;
  std::vector<double> value;
  std::vector<std::string> branch;   // analytic branch label per sample
  std::vector<double> breakpoints;   // q values where the branch changes
  double q_star = -1;
  double gamma_plus = 0;
  double p_two_phi = 0;              // P(2 phi) = M(-1)
  bool degenerate = false;
};

std::vector<double> uniform_grid(double lo, double hi, int points);

// Return-time spectrum: P((1-q) phi) right of q_star, flat gamma_plus
// left of it.
SpectrumCurve r_spectrum(const PotentialModel& model,
                         const std::vector<double>& grid);

// Hitting-time spectrum: P((1-q) phi) for q >= -1, P(2 phi) below.
SpectrumCurve w_spectrum(const PotentialModel& model,
                         const std::vector<double>& grid);

}  // namespace rtspec
