// Copyright 2026 The semires Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "semires/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <string>

#include "semires/errors.hpp"
#include "semires/sis.hpp"
#include "semires/stats.hpp"

namespace semires::oracle {

namespace {

using Accumulator = std::map<std::vector<int>, CompensatedSum>;

/// Calls fn for every tuple in {0..base-1}^length, in lexicographic order.
void for_each_tuple(std::size_t base, std::size_t length, const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> tuple(length, 0);
  while (true) {
    fn(tuple);
    std::size_t pos = length;
    while (pos > 0) {
      --pos;
      if (static_cast<std::size_t>(++tuple[pos]) < base) {
        break;
      }
      tuple[pos] = 0;
      if (pos == 0) {
        return;
      }
    }
    if (length == 0) {
      return;
    }
  }
}

std::vector<std::vector<std::size_t>> combinations(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> result;
  std::vector<bool> mask(n, false);
  std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(k), true);
  do {
    std::vector<std::size_t> subset;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask[i]) {
        subset.push_back(i);
      }
    }
    result.push_back(std::move(subset));
  } while (std::prev_permutation(mask.begin(), mask.end()));
  return result;
}

class Enumerator {
 public:
  explicit Enumerator(const DiscreteHMM& hmm)
      : hmm_(hmm), n_(hmm.particle_count()), s_(hmm.num_states) {}

  /// Probability that slot-wise proposal draws produce `values` in `slots`.
  [[nodiscard]] double draw_probability(std::span<const std::size_t> slots, std::span<const int> values) const {
    double p = 1.0;
    for (std::size_t m = 0; m < slots.size(); ++m) {
      const auto a = static_cast<std::size_t>(hmm_.ancestor_states[slots[m]]);
      p *= hmm_.proposal[a][static_cast<std::size_t>(values[m])];
    }
    return p;
  }

  [[nodiscard]] double support_probability(const std::vector<int>& support) const {
    std::vector<std::size_t> all(n_);
    std::iota(all.begin(), all.end(), std::size_t{0});
    return draw_probability(all, support);
  }

  /// Normalized support weights W_j.
  [[nodiscard]] std::vector<double> weights(const std::vector<int>& support) const {
    std::vector<double> w(n_);
    CompensatedSum total;
    for (std::size_t j = 0; j < n_; ++j) {
      w[j] = hmm_.raw_weight(j, support[j]);
      total += w[j];
    }
    if (total.value() <= 0.0) {
      std::vector<double> log_w(n_, -std::numeric_limits<double>::infinity());
      throw DegeneracyError(std::move(log_w), 0);
    }
    for (double& x : w) {
      x /= total.value();
    }
    return w;
  }

  /// Law over state values of one categorical draw from `support`.
  [[nodiscard]] std::vector<double> value_law(const std::vector<int>& support) const {
    const auto w = weights(support);
    std::vector<double> law(s_, 0.0);
    for (std::size_t j = 0; j < n_; ++j) {
      law[static_cast<std::size_t>(support[j])] += w[j];
    }
    return law;
  }

  /// Iterates over support configurations with positive probability.
  void for_each_support(const std::function<void(const std::vector<int>&, double)>& fn) const {
    for_each_tuple(s_, n_, [&](const std::vector<int>& support) {
      const double p = support_probability(support);
      if (p > 0.0) {
        fn(support, p);
      }
    });
  }

  /// Adds p * prod_i law_i(o_i) over all output tuples, law_0 = first, law_{i>0} = rest.
  void add_product(Accumulator& acc, double p, const std::vector<double>& first, const std::vector<double>& rest) const {
    for_each_tuple(s_, n_, [&](const std::vector<int>& outcome) {
      double prob = p * first[static_cast<std::size_t>(outcome[0])];
      for (std::size_t i = 1; i < n_ && prob > 0.0; ++i) {
        prob *= rest[static_cast<std::size_t>(outcome[i])];
      }
      if (prob > 0.0) {
        acc[outcome] += prob;
      }
    });
  }

  /// Law of one categorical draw from `support` after k uniformly chosen slots are redrawn.
  [[nodiscard]] std::vector<double> rejuvenated_value_law(const std::vector<int>& support, std::size_t k) const {
    if (k == 0) {
      return value_law(support);
    }
    std::vector<CompensatedSum> law(s_);
    const auto subsets = combinations(n_, k);
    const double subset_p = 1.0 / static_cast<double>(subsets.size());
    for (const auto& subset : subsets) {
      for_each_tuple(s_, k, [&](const std::vector<int>& values) {
        const double pv = draw_probability(subset, values);
        if (pv == 0.0) {
          return;
        }
        std::vector<int> next = support;
        for (std::size_t m = 0; m < k; ++m) {
          next[subset[m]] = values[m];
        }
        const auto inner = value_law(next);
        for (std::size_t v = 0; v < s_; ++v) {
          law[v] += subset_p * pv * inner[v];
        }
      });
    }
    std::vector<double> out(s_);
    std::transform(law.begin(), law.end(), out.begin(), [](const CompensatedSum& c) { return c.value(); });
    return out;
  }

  ExactLaw multinomial() const {
    Accumulator acc;
    for_each_support([&](const std::vector<int>& support, double p) {
      const auto law = value_law(support);
      add_product(acc, p, law, law);
    });
    return finish(acc);
  }

  ExactLaw independent() const {
    std::vector<CompensatedSum> marginal(s_);
    for_each_support([&](const std::vector<int>& support, double p) {
      const auto law = value_law(support);
      for (std::size_t v = 0; v < s_; ++v) {
        marginal[v] += p * law[v];
      }
    });
    std::vector<double> m(s_);
    std::transform(marginal.begin(), marginal.end(), m.begin(), [](const CompensatedSum& c) { return c.value(); });
    Accumulator acc;
    add_product(acc, 1.0, m, m);
    return finish(acc);
  }

  /// Dynamic program over (current support, outputs so far).
  ExactLaw semi_independent(std::size_t k) const {
    Accumulator current;
    for_each_support([&](const std::vector<int>& support, double p) { current[support] += p; });
    const auto subsets = combinations(n_, k);
    const double subset_p = 1.0 / static_cast<double>(subsets.size());

    for (std::size_t i = 0; i < n_; ++i) {
      Accumulator next;
      const bool rejuvenate = (i + 1 < n_) && k > 0;
      for (const auto& [key, mass] : current) {
        const double p = mass.value();
        const std::vector<int> support(key.begin(), key.begin() + static_cast<std::ptrdiff_t>(n_));
        const auto w = weights(support);
        for (std::size_t j = 0; j < n_; ++j) {
          if (w[j] == 0.0) {
            continue;
          }
          std::vector<int> next_key = key;
          next_key.push_back(support[j]);
          const double pj = p * w[j];
          if (!rejuvenate) {
            next[next_key] += pj;
            continue;
          }
          for (const auto& subset : subsets) {
            for_each_tuple(s_, k, [&](const std::vector<int>& values) {
              const double pv = draw_probability(subset, values);
              if (pv == 0.0) {
                return;
              }
              std::vector<int> moved = next_key;
              for (std::size_t m = 0; m < k; ++m) {
                moved[subset[m]] = values[m];
              }
              next[moved] += pj * subset_p * pv;
            });
          }
        }
      }
      current = std::move(next);
    }

    Accumulator outputs;
    for (const auto& [key, mass] : current) {
      outputs[std::vector<int>(key.begin() + static_cast<std::ptrdiff_t>(n_), key.end())] += mass.value();
    }
    return finish(outputs);
  }

  /// Supports 2..N are conditionally independent given the initial support.
  ExactLaw non_sequential(std::size_t k) const {
    Accumulator acc;
    for_each_support([&](const std::vector<int>& support, double p) {
      add_product(acc, p, value_law(support), rejuvenated_value_law(support, k));
    });
    return finish(acc);
  }

  ExactLaw resample_move(std::size_t k) const {
    std::vector<std::vector<std::vector<double>>> kernels(s_);
    for (std::size_t a = 0; a < s_; ++a) {
      kernels[a] = kernel_power(a, k);
    }
    Accumulator acc;
    for_each_support([&](const std::vector<int>& support, double p) {
      const auto w = weights(support);
      std::vector<double> law(s_, 0.0);
      for (std::size_t j = 0; j < n_; ++j) {
        const auto& kernel = kernels[static_cast<std::size_t>(hmm_.ancestor_states[j])];
        for (std::size_t v = 0; v < s_; ++v) {
          law[v] += w[j] * kernel[static_cast<std::size_t>(support[j])][v];
        }
      }
      add_product(acc, p, law, law);
    });
    return finish(acc);
  }

 private:
  /// k-step independent Metropolis-Hastings kernel with proposal q(. | a), target prop. to f(. | a) g.
  std::vector<std::vector<double>> kernel_power(std::size_t a, std::size_t k) const {
    std::vector<double> ratio(s_);
    for (std::size_t v = 0; v < s_; ++v) {
      const double q = hmm_.proposal[a][v];
      ratio[v] = q > 0.0 ? hmm_.transition[a][v] * hmm_.likelihood[v] / q : 0.0;
    }
    std::vector<std::vector<double>> step(s_, std::vector<double>(s_, 0.0));
    for (std::size_t x = 0; x < s_; ++x) {
      double stay = 1.0;
      for (std::size_t y = 0; y < s_; ++y) {
        if (y == x) {
          continue;
        }
        const double accept = ratio[x] > 0.0 ? std::min(1.0, ratio[y] / ratio[x]) : 1.0;
        step[x][y] = hmm_.proposal[a][y] * accept;
        stay -= step[x][y];
      }
      step[x][x] = stay;
    }
    std::vector<std::vector<double>> power(s_, std::vector<double>(s_, 0.0));
    for (std::size_t x = 0; x < s_; ++x) {
      power[x][x] = 1.0;
    }
    for (std::size_t iter = 0; iter < k; ++iter) {
      std::vector<std::vector<double>> next(s_, std::vector<double>(s_, 0.0));
      for (std::size_t x = 0; x < s_; ++x) {
        for (std::size_t m = 0; m < s_; ++m) {
          for (std::size_t y = 0; y < s_; ++y) {
            next[x][y] += power[x][m] * step[m][y];
          }
        }
      }
      power = std::move(next);
    }
    return power;
  }

  static ExactLaw finish(const Accumulator& acc) {
    ExactLaw law;
    for (const auto& [outcome, mass] : acc) {
      law.outcomes.push_back(outcome);
      law.probabilities.push_back(mass.value());
    }
    return law;
  }

  const DiscreteHMM& hmm_;
  std::size_t n_;
  std::size_t s_;
};

void check_size(const DiscreteHMM& hmm, const ResamplingScheme& scheme) {
  if (hmm.particle_count() > kMaxEnumeratedParticles) {
    throw EnumerationTooLarge("exact enumeration supports at most N=" + std::to_string(kMaxEnumeratedParticles) +
                              " particles, got " + std::to_string(hmm.particle_count()));
  }
  if (hmm.num_states > kMaxEnumeratedStates) {
    throw EnumerationTooLarge("exact enumeration supports at most S=" + std::to_string(kMaxEnumeratedStates) +
                              " states, got " + std::to_string(hmm.num_states));
  }
  if (scheme.kind() != SchemeKind::kResampleMove && scheme.k() > hmm.particle_count()) {
    throw EnumerationTooLarge("exact enumeration needs k <= N, got k=" + std::to_string(scheme.k()));
  }
}

}  // namespace

double ExactLaw::total_probability() const {
  CompensatedSum total;
  for (double p : probabilities) {
    total += p;
  }
  return total.value();
}

double ExactLaw::probability(const Outcome& outcome) const {
  const auto it = std::lower_bound(outcomes.begin(), outcomes.end(), outcome);
  if (it == outcomes.end() || *it != outcome) {
    return 0.0;
  }
  return probabilities[static_cast<std::size_t>(it - outcomes.begin())];
}

ExactLaw enumerate_law(const DiscreteHMM& hmm, const ResamplingScheme& scheme) {
  hmm.validate();
  check_size(hmm, scheme);
  const Enumerator enumerator(hmm);
  switch (scheme.kind()) {
    case SchemeKind::kMultinomial:
      return enumerator.multinomial();
    case SchemeKind::kIndependent:
      return enumerator.independent();
    case SchemeKind::kSemiIndependent:
      return enumerator.semi_independent(scheme.k());
    case SchemeKind::kNonSequential:
      return enumerator.non_sequential(scheme.k());
    case SchemeKind::kResampleMove:
      return enumerator.resample_move(scheme.k());
  }
  throw std::logic_error("unknown resampling scheme");
}

ExactLaw enumerate_support_law(const DiscreteHMM& hmm) {
  hmm.validate();
  check_size(hmm, ResamplingScheme::multinomial());
  const Enumerator enumerator(hmm);
  Accumulator acc;
  enumerator.for_each_support([&](const std::vector<int>& support, double p) { acc[support] += p; });
  ExactLaw law;
  for (const auto& [outcome, mass] : acc) {
    law.outcomes.push_back(outcome);
    law.probabilities.push_back(mass.value());
  }
  return law;
}

ExactMoments law_moments(const ExactLaw& law, std::span<const double> phi) {
  std::vector<double> theta(law.outcomes.size());
  for (std::size_t o = 0; o < law.outcomes.size(); ++o) {
    CompensatedSum sum;
    for (int x : law.outcomes[o]) {
      sum += phi[static_cast<std::size_t>(x)];
    }
    theta[o] = sum.value() / static_cast<double>(law.outcomes[o].size());
  }
  CompensatedSum mean;
  for (std::size_t o = 0; o < theta.size(); ++o) {
    mean += law.probabilities[o] * theta[o];
  }
  CompensatedSum variance;
  for (std::size_t o = 0; o < theta.size(); ++o) {
    const double d = theta[o] - mean.value();
    variance += law.probabilities[o] * d * d;
  }
  return {mean.value(), variance.value()};
}

ExactMoments enumerate_scheme(const DiscreteHMM& hmm, const ResamplingScheme& scheme, std::span<const double> phi) {
  if (phi.size() != hmm.num_states) {
    throw ContractViolation("test function table must have one entry per state");
  }
  return law_moments(enumerate_law(hmm, scheme), phi);
}

double max_law_difference(const ExactLaw& a, const ExactLaw& b) {
  double worst = 0.0;
  for (std::size_t o = 0; o < a.outcomes.size(); ++o) {
    worst = std::max(worst, std::abs(a.probabilities[o] - b.probability(a.outcomes[o])));
  }
  for (std::size_t o = 0; o < b.outcomes.size(); ++o) {
    worst = std::max(worst, std::abs(b.probabilities[o] - a.probability(b.outcomes[o])));
  }
  return worst;
}

bool PropositionReport::all_passed() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.passed; });
}

PropositionReport check_propositions(const DiscreteHMM& hmm, std::span<const double> phi, double tolerance) {
  if (phi.size() != hmm.num_states) {
    throw ContractViolation("test function table must have one entry per state");
  }
  const std::size_t n = hmm.particle_count();
  PropositionReport report;
  report.particles = n;
  report.states = hmm.num_states;

  auto run = [&](const ResamplingScheme& scheme) {
    ExactLaw law = enumerate_law(hmm, scheme);
    report.moments.push_back({scheme.name(), scheme.k(), law_moments(law, phi), law.total_probability()});
    return law;
  };
  auto le = [&](std::string check, double lhs, double rhs) {
    report.verdicts.push_back({std::move(check), lhs <= rhs + tolerance, lhs, rhs});
  };
  auto eq = [&](std::string check, double lhs, double rhs) {
    report.verdicts.push_back({std::move(check), std::abs(lhs - rhs) <= tolerance, lhs, rhs});
  };

  const ExactLaw sir_law = run(ResamplingScheme::multinomial());
  const ExactMoments sir = report.moments.back().moments;
  const ExactLaw isir_law = run(ResamplingScheme::independent());
  const ExactMoments isir = report.moments.back().moments;

  std::vector<ExactMoments> sr(n + 1);
  std::vector<ExactMoments> nssr(n + 1);
  std::vector<ExactLaw> sr_laws;
  std::vector<ExactLaw> nssr_laws;
  for (std::size_t k = 0; k <= n; ++k) {
    sr_laws.push_back(run(ResamplingScheme::semi_independent(k)));
    sr[k] = report.moments.back().moments;
    nssr_laws.push_back(run(ResamplingScheme::non_sequential(k)));
    nssr[k] = report.moments.back().moments;
  }

  for (const auto& m : report.moments) {
    eq("exhaustive " + m.scheme + "(" + std::to_string(m.k) + ") total probability = 1", m.total_probability, 1.0);
  }
  eq("unbiased mean(I-SIR) = mean(SIR)", isir.mean, sir.mean);
  for (std::size_t k = 0; k <= n; ++k) {
    const std::string ks = std::to_string(k);
    eq("unbiased mean(SR," + ks + ") = mean(SIR)", sr[k].mean, sir.mean);
    le("sandwich var(I-SIR) <= var(SR," + ks + ")", isir.variance, sr[k].variance);
    le("sandwich var(SR," + ks + ") <= var(SIR)", sr[k].variance, sir.variance);
    if (k > 0) {
      le("monotone var(SR," + ks + ") <= var(SR," + std::to_string(k - 1) + ")", sr[k].variance, sr[k - 1].variance);
    }
    eq("unbiased mean(NSSR," + ks + ") = mean(SIR)", nssr[k].mean, sir.mean);
    le("sandwich var(I-SIR) <= var(NSSR," + ks + ")", isir.variance, nssr[k].variance);
    le("sandwich var(NSSR," + ks + ") <= var(SIR)", nssr[k].variance, sir.variance);
    if (k > 0) {
      le("monotone var(NSSR," + ks + ") <= var(NSSR," + std::to_string(k - 1) + ")", nssr[k].variance,
         nssr[k - 1].variance);
    }
    le("sr-below-nssr var(SR," + ks + ") <= var(NSSR," + ks + ")", sr[k].variance, nssr[k].variance);
  }
  le("reduction law(SR,0) = law(SIR)", max_law_difference(sr_laws.front(), sir_law), 0.0);
  le("reduction law(NSSR,0) = law(SIR)", max_law_difference(nssr_laws.front(), sir_law), 0.0);
  le("reduction law(SR,N) = law(I-SIR)", max_law_difference(sr_laws.back(), isir_law), 0.0);
  le("reduction law(NSSR,N) = law(I-SIR)", max_law_difference(nssr_laws.back(), isir_law), 0.0);
  return report;
}

FitReport validate_sampler(const DiscreteHMM& hmm, const ResamplingScheme& scheme, std::uint64_t replicates,
                           RngStream& rng, SamplerMutation mutation) {
  const ExactLaw law = enumerate_law(hmm, scheme);
  const DiscreteHMM sampler_hmm = mutation == SamplerMutation::kSwapLikelihoodExtremes ? hmm.with_swapped_likelihood_extremes() : hmm;
  const DiscreteHmmModel model(sampler_hmm);
  const WeightedParticleSet<int> prev = sampler_hmm.previous_set();
  const FixedObservation y;
  const ProposalRejuvenator<DiscreteHmmModel> rejuvenate(prev, model, y);

  std::map<Outcome, std::uint64_t> counts;
  for (std::uint64_t r = 0; r < replicates; ++r) {
    CostLedger cost;
    const auto sis = sis_step(prev, model, y, rng, cost);
    const auto outcome = resample(scheme, sis, rejuvenate, rng);
    ++counts[outcome.resampled.particles()];
  }

  FitReport report;
  report.scheme = scheme.name();
  report.k = scheme.k();
  report.particles = hmm.particle_count();
  report.replicates = replicates;

  const auto total = static_cast<double>(replicates);
  struct Bin {
    double expected = 0.0;
    double observed = 0.0;
  };
  std::vector<Bin> bins;
  Bin pooled;
  for (std::size_t o = 0; o < law.outcomes.size(); ++o) {
    const double expected = total * law.probabilities[o];
    const auto it = counts.find(law.outcomes[o]);
    const std::uint64_t observed = it == counts.end() ? 0 : it->second;
    report.deviations.push_back({law.outcomes[o], expected, observed});
    if (expected >= 5.0) {
      bins.push_back({expected, static_cast<double>(observed)});
    } else {
      pooled.expected += expected;
      pooled.observed += static_cast<double>(observed);
    }
  }
  for (const auto& [outcome, observed] : counts) {
    if (law.probability(outcome) == 0.0) {
      report.impossible_outcome = true;
      report.deviations.push_back({outcome, 0.0, observed});
    }
  }
  if (pooled.expected > 0.0) {
    if (pooled.expected >= 5.0 || bins.empty()) {
      bins.push_back(pooled);
    } else {
      auto smallest = std::min_element(bins.begin(), bins.end(),
                                       [](const Bin& a, const Bin& b) { return a.expected < b.expected; });
      smallest->expected += pooled.expected;
      smallest->observed += pooled.observed;
    }
  }
  CompensatedSum chi_square;
  for (const Bin& bin : bins) {
    const double d = bin.observed - bin.expected;
    chi_square += d * d / bin.expected;
  }
  report.chi_square = chi_square.value();
  report.degrees_of_freedom = bins.empty() ? 0 : bins.size() - 1;
  report.p_value = report.impossible_outcome
                       ? 0.0
                       : chi_square_upper_tail(report.chi_square, static_cast<double>(report.degrees_of_freedom));
  return report;
}

}  // namespace semires::oracle
