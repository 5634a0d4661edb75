#include "rtspec/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rtspec/numerics.hpp"
#include "rtspec/philox.hpp"

namespace rtspec {

namespace {

std::uint64_t ipow(int base, int exp) {
  std::uint64_t r = 1;
  for (int i = 0; i < exp; ++i) r *= std::uint64_t(base);
  return r;
}

void append_double(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

}  // namespace

ModelSpec ModelSpec::from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw input_error(std::string("model file: ") + e.what());
  }
  ModelSpec spec;
  try {
    spec.alphabet_size = j.at("alphabet_size").get<int>();
    spec.memory = j.at("memory").get<int>();
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "transition")
      spec.kind = Kind::Transition;
    else if (kind == "potential")
      spec.kind = Kind::Potential;
    else
      throw input_error("model file: kind must be 'transition' or 'potential'");
    spec.weights = j.at("weights").get<std::vector<double>>();
    spec.normalize = spec.kind == Kind::Potential;
    if (j.contains("normalize")) spec.normalize = j.at("normalize").get<bool>();
  } catch (const input_error&) {
    throw;
  } catch (const std::exception& e) {
    throw input_error(std::string("model file: ") + e.what());
  }
  if (spec.alphabet_size < 2) throw input_error("model file: alphabet_size must be >= 2");
  if (spec.memory < 0) throw input_error("model file: memory must be >= 0");
  std::uint64_t expect = ipow(spec.alphabet_size, spec.memory + 1);
  if (spec.weights.size() != expect)
    throw input_error("model file: expected " + std::to_string(expect) +
                      " weights, got " + std::to_string(spec.weights.size()));
  for (double w : spec.weights)
    if (!std::isfinite(w)) throw input_error("model file: weights must be finite");
  if (spec.kind == Kind::Transition) {
    std::uint64_t rows = ipow(spec.alphabet_size, spec.memory);
    for (std::uint64_t r = 0; r < rows; ++r) {
      double sum = 0;
      for (int a = 0; a < spec.alphabet_size; ++a) {
        double p = spec.weights[r * spec.alphabet_size + a];
        if (p <= 0)
          throw input_error("model file: transition probabilities must be "
                            "strictly positive (subshift supports are not "
                            "handled)");
        sum += p;
      }
      if (std::fabs(sum - 1.0) > 1e-12)
        throw input_error("model file: transition row " + std::to_string(r) +
                          " sums to " + std::to_string(sum) + ", not 1");
    }
  }
  return spec;
}

ModelSpec ModelSpec::from_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw input_error("cannot open model file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

std::string ModelSpec::canonical_json() const {
  std::string out = "{\"alphabet_size\":" + std::to_string(alphabet_size) +
                    ",\"kind\":\"" +
                    (kind == Kind::Transition ? "transition" : "potential") +
                    "\",\"memory\":" + std::to_string(memory) +
                    ",\"normalize\":" + (normalize ? "true" : "false") +
                    ",\"weights\":[";
  for (size_t i = 0; i < weights.size(); ++i) {
    if (i) out.push_back(',');
    append_double(out, weights[i]);
  }
  out += "]}";
  return out;
}

std::uint64_t ModelSpec::digest() const { return fnv1a64(canonical_json()); }

int PotentialModel::window_index(std::span<const int> symbols, int offset) const {
  int idx = 0;
  for (int i = 0; i <= m_; ++i) idx = idx * k_ + symbols[offset + i];
  return idx;
}

double PotentialModel::cylinder_log_prob(std::span<const int> symbols) const {
  const int n = int(symbols.size());
  if (n == 0) return 0.0;
  for (int s : symbols)
    if (s < 0 || s >= k_) throw input_error("cylinder: symbol out of range");
  if (n < m_) {
    // marginalize pi over the K^{m-n} completions (contiguous index range)
    int base = 0;
    for (int i = 0; i < n; ++i) base = base * k_ + symbols[i];
    std::uint64_t span_len = ipow(k_, m_ - n);
    LogSumAcc acc;
    std::uint64_t start = std::uint64_t(base) * span_len;
    for (std::uint64_t u = start; u < start + span_len; ++u)
      acc.add(log_pi_[u]);
    return acc.log_value();
  }
  int state = 0;
  for (int i = 0; i < m_; ++i) state = state * k_ + symbols[i];
  double lp = log_pi_[state];
  for (int i = 0; i + m_ < n; ++i) {
    state = state * k_ + symbols[i + m_];   // (m+1)-window index
    lp += log_forward_[state];
    state %= states_;
  }
  return lp;
}

PotentialModel normalize(const ModelSpec& spec) {
  PotentialModel model;
  const int k = spec.alphabet_size;
  const int m = std::max(spec.memory, 1);
  if (ipow(k, m) > kMaxStates)
    throw input_error("model: K^m exceeds the " + std::to_string(kMaxStates) +
                      "-state cap");
  model.k_ = k;
  model.m_ = m;
  model.states_ = int(ipow(k, m));
  model.table_ = model.states_ * k;

  // Raw potential table, lifting memory-0 specs to memory 1.
  model.raw_phi_.resize(model.table_);
  if (spec.memory == 0) {
    for (int w = 0; w < model.table_; ++w) {
      int first = w / k, last = w % k;
      double v = spec.kind == ModelSpec::Kind::Transition
                     ? std::log(spec.weights[last])
                     : spec.weights[first];
      model.raw_phi_[w] = v;
    }
  } else {
    for (int w = 0; w < model.table_; ++w)
      model.raw_phi_[w] = spec.kind == ModelSpec::Kind::Transition
                              ? std::log(spec.weights[w])
                              : spec.weights[w];
  }
  if (spec.kind == ModelSpec::Kind::Potential && !spec.normalize) {
    // caller asserts prepend normalization; verify before trusting it
    for (int s = 0; s < model.states_; ++s) {
      LogSumAcc acc;
      for (int a = 0; a < k; ++a) acc.add(model.raw_phi_[a * model.states_ + s]);
      if (std::fabs(acc.log_value()) > 1e-10)
        throw input_error("model: potential declared normalized but row sums "
                          "deviate from 1");
    }
  }

  // Transfer matrix on m-word states: edge prefix(w) -> suffix(w).
  LogMatrix mat;
  mat.dim = model.states_;
  mat.entries.reserve(model.table_);
  for (int w = 0; w < model.table_; ++w)
    mat.entries.push_back({w / k, w % model.states_, model.raw_phi_[w]});
  PerronResult perron = perron_log(mat);
  model.log_lambda_ = perron.log_lambda;
  model.log_f_ = perron.log_left;

  model.log_g_.resize(model.table_);
  model.log_forward_.resize(model.table_);
  for (int w = 0; w < model.table_; ++w) {
    int pre = w / k, suf = w % model.states_;
    model.log_g_[w] = model.raw_phi_[w] + perron.log_left[pre] -
                      perron.log_lambda - perron.log_left[suf];
    model.log_forward_[w] = model.raw_phi_[w] + perron.log_right[suf] -
                            perron.log_lambda - perron.log_right[pre];
  }
  // Eq-(4.4)-style row sums: prepend sums of g and forward sums of Q.
  for (int s = 0; s < model.states_; ++s) {
    LogSumAcc g_acc;
    for (int a = 0; a < k; ++a) g_acc.add(model.log_g_[a * model.states_ + s]);
    if (std::fabs(g_acc.log_value()) > 1e-10)
      throw numeric_error("normalize: g rows deviate from 1 beyond 1e-10");
    LogSumAcc q_acc;
    for (int a = 0; a < k; ++a) q_acc.add(model.log_forward_[s * k + a]);
    if (std::fabs(q_acc.log_value()) > 1e-10)
      throw numeric_error("normalize: forward rows deviate from 1 beyond 1e-10");
  }

  model.log_pi_.resize(model.states_);
  LogSumAcc z;
  for (int s = 0; s < model.states_; ++s) {
    model.log_pi_[s] = perron.log_left[s] + perron.log_right[s];
    z.add(model.log_pi_[s]);
  }
  for (int s = 0; s < model.states_; ++s) model.log_pi_[s] -= z.log_value();

  model.degenerate_ = true;
  for (int w = 0; w < model.table_; ++w)
    if (std::fabs(std::exp(model.log_g_[w]) - 1.0 / k) > 1e-12) {
      model.degenerate_ = false;
      break;
    }

  // var_k of the normalized potential: spread within groups sharing the
  // first k symbols; zero for k > m.
  model.variations_.assign(m, 0.0);
  for (int kk = 1; kk <= m; ++kk) {
    std::uint64_t groups = ipow(k, kk);
    std::uint64_t per = ipow(k, m + 1 - kk);
    double worst = 0;
    for (std::uint64_t gidx = 0; gidx < groups; ++gidx) {
      double lo = kPosInf, hi = kNegInf;
      for (std::uint64_t j = 0; j < per; ++j) {
        double v = model.log_g_[gidx * per + j];
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      worst = std::max(worst, hi - lo);
    }
    model.variations_[kk - 1] = worst;
  }
  model.var_sum_ = 0;
  for (double v : model.variations_) model.var_sum_ += v;
  model.quasi_c_ = std::exp(model.var_sum_);
  model.quasi_d_ = std::pow(model.quasi_c_, 3.0);
  double inf_phi = kPosInf;
  for (double v : model.log_g_) inf_phi = std::min(inf_phi, v);
  model.zeta_lower_ = std::exp(-2.0 * model.var_sum_ + inf_phi);
  return model;
}

PotentialModel tilt(const PotentialModel& model, double t) {
  if (!std::isfinite(t)) throw input_error("tilt: t must be finite");
  ModelSpec spec;
  spec.alphabet_size = model.alphabet_size();
  spec.memory = model.memory();
  spec.kind = ModelSpec::Kind::Potential;
  spec.normalize = true;
  spec.weights.resize(model.table_size());
  for (int w = 0; w < model.table_size(); ++w)
    spec.weights[w] = t * model.log_g()[w];
  return normalize(spec);
}

double phi_mean(const PotentialModel& model) {
  return expected_potential(model, model.log_g());
}

double expected_potential(const PotentialModel& measure,
                          const std::vector<double>& phi_table) {
  if (int(phi_table.size()) != measure.table_size())
    throw input_error("expected_potential: table layout mismatch");
  double sum = 0;
  const int states = measure.state_count();
  const int k = measure.alphabet_size();
  for (int w = 0; w < measure.table_size(); ++w) {
    double lp = measure.log_pi()[w / k] + measure.log_forward()[w];
    sum += std::exp(lp) * phi_table[w];
  }
  (void)states;
  return sum;
}

QuasiBernoulliReport quasi_bernoulli_check(const PotentialModel& model,
                                           int samples, std::uint64_t seed) {
  QuasiBernoulliReport rep;
  rep.d_bound = model.quasi_bernoulli_d();
  Philox rng(seed, 0x71b0);
  const int k = model.alphabet_size();
  std::vector<int> a, b, ab;
  for (int s = 0; s < samples; ++s) {
    int na = 1 + int(rng.next_u32() % 20);
    int nb = 1 + int(rng.next_u32() % 20);
    a.resize(na);
    b.resize(nb);
    for (int& x : a) x = int(rng.next_u32() % std::uint32_t(k));
    for (int& x : b) x = int(rng.next_u32() % std::uint32_t(k));
    ab = a;
    ab.insert(ab.end(), b.begin(), b.end());
    double log_ratio = model.cylinder_log_prob(ab) -
                       model.cylinder_log_prob(a) - model.cylinder_log_prob(b);
    double ratio = std::exp(log_ratio);
    rep.min_ratio = std::min(rep.min_ratio, ratio);
    rep.max_ratio = std::max(rep.max_ratio, ratio);
  }
  rep.within_bound = rep.max_ratio <= rep.d_bound * (1 + 1e-12) &&
                     rep.min_ratio >= 1.0 / rep.d_bound * (1 - 1e-12);
  return rep;
}

}  // namespace rtspec
