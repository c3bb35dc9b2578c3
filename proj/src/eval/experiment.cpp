#include "gestauth/eval/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <numeric>
#include <thread>

#include "gestauth/error.hpp"
#include "gestauth/eval/ks.hpp"
#include "gestauth/eval/synth.hpp"
#include "json.hpp"

namespace gestauth::eval {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

// Runs fn(i) for i in [0, n); results are written by index, so the outcome
// does not depend on scheduling.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
  const auto hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t threads = std::min<std::size_t>(n, workers > 0 ? static_cast<std::size_t>(workers) : hw);
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::jthread> pool;
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

struct Password {
  std::string label;
  std::string persona;
  int finger_count = 1;
  std::vector<std::size_t> enroll;  // corpus indices
  std::vector<std::size_t> test;
};

struct Processed {
  std::optional<ProcessedSample> sample;  // empty when preprocessing failed
};

double score_of(const Processed& p, const AuthTemplate& tmpl) {
  if (!p.sample) return 1.0;
  return verify_processed(*p.sample, tmpl).score();
}

std::string group_of(int finger_count) { return finger_count == 1 ? "single" : "multi"; }

std::optional<double> mean_of(const std::vector<double>& v) {
  if (v.empty()) return std::nullopt;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

AttackSpec parse_attack(const nlohmann::json& j) {
  AttackSpec a;
  a.level = attack_level_from_int(j.value("level", 1));
  a.observations = j.value("observations", a.level >= AttackLevel::type3 ? 4 : 1);
  a.count = j.value("count", a.count);
  a.dynamics_noise = j.value("dynamics_noise", a.dynamics_noise);
  a.shape_noise = j.value("shape_noise", a.shape_noise);
  validate_attack_spec(a);
  return a;
}

}  // namespace

std::string persona_of(const std::string& label) { return label.substr(0, label.find(':')); }

Envelope envelope(const std::vector<std::optional<double>>& values) {
  Envelope e;
  double sum = 0.0;
  for (const auto& v : values) {
    if (!v) continue;
    sum += *v;
    e.min = e.min ? std::min(*e.min, *v) : *v;
    e.max = e.max ? std::max(*e.max, *v) : *v;
    ++e.defined;
  }
  if (e.defined > 0) e.mean = sum / e.defined;
  return e;
}

Quartiles quartiles(std::vector<double> values) {
  if (values.empty()) throw Error(ErrorKind::invalid_value, "quartiles of an empty sample");
  std::sort(values.begin(), values.end());
  // Linear interpolation between order statistics.
  auto q = [&](double f) {
    const double pos = f * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(values.size() - 1, lo + 1);
    return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
  };
  return {q(0.25), q(0.5), q(0.75)};
}

Histogram histogram(std::string name, const std::vector<double>& values, int bins) {
  Histogram h;
  h.name = std::move(name);
  bins = std::max(1, bins);
  if (!values.empty()) {
    h.max = *std::max_element(values.begin(), values.end());
    h.mean = *mean_of(values);
  }
  const double top = h.max > 0.0 ? h.max * (1.0 + 1e-9) : 1.0;
  for (int b = 0; b <= bins; ++b) h.edges.push_back(top * b / bins);
  h.counts.assign(static_cast<std::size_t>(bins), 0);
  for (const double v : values) {
    const auto b = std::min(bins - 1, static_cast<int>(v / top * bins));
    ++h.counts[static_cast<std::size_t>(std::max(0, b))];
  }
  return h;
}

ExperimentConfig parse_experiment_config(const std::string& json_text) {
  const auto j = nlohmann::json::parse(json_text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw Error(ErrorKind::malformed_input, "experiment config is not a JSON object");
  }
  ExperimentConfig c;
  try {
    c.omega = j.value("omega", c.omega);
    if (j.contains("thresholds")) c.thresholds = j.at("thresholds").get<std::vector<double>>();
    const std::string decoys = j.value("decoys", std::string("corpus"));
    if (decoys == "corpus") {
      c.decoys = DecoySource::corpus;
    } else if (decoys == "synthetic") {
      c.decoys = DecoySource::synthetic;
    } else {
      throw Error(ErrorKind::invalid_value, "decoys must be \"corpus\" or \"synthetic\"");
    }
    c.synthetic_decoys = j.value("synthetic_decoys", c.synthetic_decoys);
    c.negatives_per_password = j.value("negatives_per_password", c.negatives_per_password);
    c.attack_victims = j.value("attack_victims", c.attack_victims);
    c.attackers_per_victim = j.value("attackers_per_victim", c.attackers_per_victim);
    c.seed = j.value("seed", c.seed);
    c.workers = j.value("workers", c.workers);
    if (j.contains("attacks")) {
      for (const auto& a : j.at("attacks")) c.attacks.push_back(parse_attack(a));
    }
    if (j.contains("ks")) {
      const auto& k = j.at("ks");
      c.ks.enabled = k.value("enabled", c.ks.enabled);
      c.ks.personas = k.value("personas", c.ks.personas);
      c.ks.pairs = k.value("pairs", c.ks.pairs);
    }
    if (j.contains("enroll")) c.enroll = apply_enroll_overrides(c.enroll, j.at("enroll").dump());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::malformed_input, std::string("experiment config: ") + e.what());
  }
  if (c.omega < 1) throw Error(ErrorKind::invalid_value, "omega must be positive");
  if (c.thresholds.empty()) throw Error(ErrorKind::invalid_value, "at least one threshold is required");
  return c;
}

EvalReport run_experiment(const SampleCorpus& corpus, const ExperimentConfig& cfg) {
  if (corpus.labels.size() != corpus.samples.size()) {
    throw Error(ErrorKind::invalid_value, "every corpus sample needs a label");
  }
  if (cfg.omega < 1) throw Error(ErrorKind::invalid_value, "omega must be positive");

  // Group samples into passwords in first-appearance order.
  std::vector<Password> passwords;
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < corpus.samples.size(); ++i) {
    const auto& label = corpus.labels[i];
    auto [it, fresh] = index.try_emplace(label, passwords.size());
    if (fresh) {
      Password p;
      p.label = label;
      p.persona = persona_of(label);
      p.finger_count = static_cast<int>(corpus.samples[i].finger_count());
      passwords.push_back(std::move(p));
    }
    Password& p = passwords[it->second];
    if (static_cast<int>(corpus.samples[i].finger_count()) != p.finger_count) {
      throw Error(ErrorKind::invalid_value, "password " + label + " mixes finger counts");
    }
    (static_cast<int>(p.enroll.size()) < cfg.omega ? p.enroll : p.test).push_back(i);
  }
  for (const auto& p : passwords) {
    if (p.test.empty()) {
      throw Error(ErrorKind::invalid_value, "password " + p.label + " has too few samples for omega " +
                                                std::to_string(cfg.omega));
    }
  }

  EvalReport report;
  report.config = cfg;

  // Shared preprocessing, once per sample.
  std::vector<Processed> processed(corpus.samples.size());
  parallel_for(corpus.samples.size(), cfg.workers, [&](std::size_t i) {
    try {
      processed[i].sample = process_sample(corpus.samples[i], cfg.enroll.adjust, cfg.enroll.hand_frame);
    } catch (const Error&) {
      processed[i].sample.reset();
    }
  });
  for (const auto& p : passwords) {
    for (const auto i : p.enroll) {
      if (!processed[i].sample) {
        throw Error(ErrorKind::invalid_value, "enrollment sample " + corpus.samples[i].sample_id + " is unusable");
      }
    }
  }

  std::map<int, std::vector<ProcessedSample>> synthetic;
  if (cfg.decoys == DecoySource::synthetic) {
    for (const auto& p : passwords) {
      if (synthetic.contains(p.finger_count)) continue;
      auto& list = synthetic[p.finger_count];
      for (const auto& d : synth_decoys(p.finger_count, cfg.synthetic_decoys, mix_seed(cfg.seed, 0xDEC0u + p.finger_count))) {
        list.push_back(process_sample(d, cfg.enroll.adjust, cfg.enroll.hand_frame));
      }
    }
  }

  std::vector<AuthTemplate> templates(passwords.size());
  std::vector<double> verify_ms;
  std::mutex verify_mutex;
  report.passwords.resize(passwords.size());

  parallel_for(passwords.size(), cfg.workers, [&](std::size_t pi) {
    const Password& pw = passwords[pi];
    PasswordResult& res = report.passwords[pi];
    res.label = pw.label;
    res.persona = pw.persona;
    res.finger_count = pw.finger_count;

    std::vector<ProcessedSample> owners;
    for (const auto i : pw.enroll) owners.push_back(*processed[i].sample);
    std::vector<ProcessedSample> decoys;
    if (cfg.decoys == DecoySource::synthetic) {
      decoys = synthetic.at(pw.finger_count);
    } else {
      for (std::size_t q = 0; q < passwords.size(); ++q) {
        if (q == pi || passwords[q].finger_count != pw.finger_count) continue;
        for (const auto i : passwords[q].enroll) decoys.push_back(*processed[i].sample);
      }
    }
    const auto t0 = Clock::now();
    templates[pi] = enroll_processed(owners, decoys, cfg.enroll);
    res.enroll_ms = ms_since(t0);
    const AuthTemplate& tmpl = templates[pi];

    std::vector<ScoredItem> items;
    std::vector<double> local_ms;
    for (const auto i : pw.test) {
      const auto t1 = Clock::now();
      const Decision d = verify(corpus.samples[i], tmpl);
      local_ms.push_back(ms_since(t1));
      items.push_back({d.score(), true});
    }
    // Negatives: test samples of every other password with the same finger
    // count, optionally thinned by a seeded shuffle.
    std::vector<std::size_t> negatives;
    for (std::size_t q = 0; q < passwords.size(); ++q) {
      if (q == pi || passwords[q].finger_count != pw.finger_count) continue;
      negatives.insert(negatives.end(), passwords[q].test.begin(), passwords[q].test.end());
    }
    if (cfg.negatives_per_password > 0 && static_cast<int>(negatives.size()) > cfg.negatives_per_password) {
      Rng rng(mix_seed(cfg.seed, pi));
      std::shuffle(negatives.begin(), negatives.end(), rng);
      negatives.resize(static_cast<std::size_t>(cfg.negatives_per_password));
      std::sort(negatives.begin(), negatives.end());
    }
    for (const auto i : negatives) items.push_back({score_of(processed[i], tmpl), false});

    res.positives = static_cast<int>(pw.test.size());
    res.negatives = static_cast<int>(negatives.size());
    for (const double t : cfg.thresholds) {
      ThresholdResult tr;
      tr.threshold = t;
      tr.counts = counts_at(items, t);
      tr.metrics = metrics(tr.counts);
      res.at_thresholds.push_back(tr);
    }
    if (res.negatives > 0) {
      res.roc = roc_curve(items);
      res.pr = pr_curve(items);
      res.auc = auc(res.roc);
      res.operating_threshold = full_precision_operating_threshold(items);
      res.recall_at_full_precision = recall_at_full_precision(items);
      res.precision_at_75_recall = precision_at_recall(items, 0.75);
    }
    std::lock_guard lock(verify_mutex);
    verify_ms.insert(verify_ms.end(), local_ms.begin(), local_ms.end());
  });

  // Group summaries.
  for (const std::string group : {"single", "multi"}) {
    std::vector<const PasswordResult*> members;
    for (const auto& r : report.passwords) {
      if (group_of(r.finger_count) == group) members.push_back(&r);
    }
    if (members.empty()) continue;
    GroupSummary g;
    g.group = group;
    g.passwords = static_cast<int>(members.size());
    g.finger_count_min = g.finger_count_max = members.front()->finger_count;
    for (const auto* r : members) {
      g.finger_count_min = std::min(g.finger_count_min, r->finger_count);
      g.finger_count_max = std::max(g.finger_count_max, r->finger_count);
    }
    for (std::size_t k = 0; k < cfg.thresholds.size(); ++k) {
      GroupThreshold gt;
      gt.threshold = cfg.thresholds[k];
      std::vector<std::optional<double>> tpr, fpr, precision;
      for (const auto* r : members) {
        const auto& tr = r->at_thresholds[k];
        gt.pooled += tr.counts;
        tpr.push_back(tr.metrics.tpr);
        fpr.push_back(tr.metrics.fpr);
        precision.push_back(tr.metrics.precision);
      }
      gt.tpr = envelope(tpr);
      gt.fpr = envelope(fpr);
      gt.precision = envelope(precision);
      g.at_thresholds.push_back(gt);
    }
    std::vector<std::optional<double>> aucs, recalls, precisions;
    for (const auto* r : members) {
      aucs.push_back(r->auc);
      recalls.push_back(r->recall_at_full_precision);
      precisions.push_back(r->precision_at_75_recall);
    }
    g.auc = envelope(aucs);
    g.recall_at_full_precision = envelope(recalls);
    g.precision_at_75_recall = envelope(precisions);
    report.groups.push_back(std::move(g));
  }

  // Mimicry attacks against each group's victims.
  for (const AttackSpec& spec : cfg.attacks) {
    validate_attack_spec(spec);
    for (const std::string group : {"single", "multi"}) {
      std::vector<std::size_t> victims;
      for (std::size_t pi = 0; pi < passwords.size(); ++pi) {
        if (group_of(passwords[pi].finger_count) == group) victims.push_back(pi);
      }
      if (victims.empty()) continue;
      if (cfg.attack_victims > 0 && static_cast<int>(victims.size()) > cfg.attack_victims) {
        victims.resize(static_cast<std::size_t>(cfg.attack_victims));
      }
      std::vector<double> at_half(victims.size()), at_operating(victims.size());
      std::vector<int> attempts(victims.size());
      parallel_for(victims.size(), cfg.workers, [&](std::size_t v) {
        const std::size_t pi = victims[v];
        std::vector<GestureSample> seen;
        for (const auto i : passwords[pi].enroll) seen.push_back(corpus.samples[i]);
        const double operating = report.passwords[pi].operating_threshold.value_or(0.5);
        int n = 0, accepted_half = 0, accepted_operating = 0;
        for (int a = 0; a < std::max(1, cfg.attackers_per_victim); ++a) {
          const std::uint64_t seed =
              mix_seed(cfg.seed, 0xA000000ull + pi * 4096ull + static_cast<std::uint64_t>(a) * 8ull +
                                     static_cast<std::uint64_t>(spec.level));
          for (const auto& forged : mimic_attack(seen, spec, seed)) {
            const double s = verify(forged, templates[pi]).score();
            ++n;
            accepted_half += s < 0.5 ? 1 : 0;
            accepted_operating += s < operating ? 1 : 0;
          }
        }
        attempts[v] = n;
        at_half[v] = static_cast<double>(accepted_half) / n;
        at_operating[v] = static_cast<double>(accepted_operating) / n;
      });
      AttackResult r;
      r.group = group;
      r.level = spec.level;
      r.observations = spec.observations;
      r.victims = static_cast<int>(victims.size());
      r.attempts = std::accumulate(attempts.begin(), attempts.end(), 0);
      r.acceptance_at_half = *mean_of(at_half);
      r.acceptance_at_operating = *mean_of(at_operating);
      report.attacks.push_back(r);
    }
  }

  // Two-sample K-S analysis of feature distributions on single-curve
  // passwords: pairs of samples from one password versus pairs of samples
  // from different personas.
  if (cfg.ks.enabled) {
    std::vector<std::string> personas;
    std::map<std::string, std::size_t> first_password;
    for (std::size_t pi = 0; pi < passwords.size(); ++pi) {
      if (passwords[pi].finger_count != 1) continue;
      if (first_password.try_emplace(passwords[pi].persona, pi).second) personas.push_back(passwords[pi].persona);
    }
    if (static_cast<int>(personas.size()) > cfg.ks.personas) personas.resize(static_cast<std::size_t>(cfg.ks.personas));
    if (personas.size() >= 2) {
      Rng rng(mix_seed(cfg.seed, 0x5EEDu));
      std::array<std::vector<double>, kFeatureCount> within, across;
      auto all_samples = [&](std::size_t pi) {
        std::vector<std::size_t> v = passwords[pi].enroll;
        for (const auto i : passwords[pi].test) {
          if (processed[i].sample) v.push_back(i);
        }
        return v;
      };
      auto pick = [&](const std::vector<std::size_t>& v) {
        return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
      };
      auto record = [&](std::size_t a, std::size_t b, std::array<std::vector<double>, kFeatureCount>& into) {
        const auto& fa = processed[a].sample->features.front();
        const auto& fb = processed[b].sample->features.front();
        for (int f = 0; f < kFeatureCount; ++f) {
          const auto& x = fa.series[static_cast<std::size_t>(f)];
          const auto& y = fb.series[static_cast<std::size_t>(f)];
          into[static_cast<std::size_t>(f)].push_back(
              ks_two_sample(std::span(x.data(), static_cast<std::size_t>(x.size())),
                            std::span(y.data(), static_cast<std::size_t>(y.size())))
                  .p_value);
        }
      };
      for (std::size_t k = 0; k < personas.size(); ++k) {
        const auto mine = all_samples(first_password.at(personas[k]));
        for (int r = 0; r < cfg.ks.pairs && mine.size() >= 2; ++r) {
          std::size_t a = pick(mine), b = pick(mine);
          while (b == a) b = pick(mine);
          record(a, b, within);
          std::size_t other = std::uniform_int_distribution<std::size_t>(0, personas.size() - 2)(rng);
          if (other >= k) ++other;
          record(pick(mine), pick(all_samples(first_password.at(personas[other]))), across);
        }
      }
      if (!within[0].empty()) {
        for (int f = 0; f < kFeatureCount; ++f) {
          KsRow row;
          row.feature = static_cast<Feature>(f);
          row.within_tests = static_cast<int>(within[static_cast<std::size_t>(f)].size());
          row.across_tests = static_cast<int>(across[static_cast<std::size_t>(f)].size());
          row.within_p = quartiles(within[static_cast<std::size_t>(f)]);
          row.across_p = quartiles(across[static_cast<std::size_t>(f)]);
          row.separated = row.within_p.median > row.across_p.q3;
          report.ks.push_back(row);
        }
      }
    }
  }

  std::vector<double> enroll_ms;
  for (const auto& r : report.passwords) enroll_ms.push_back(r.enroll_ms);
  report.timings.push_back(histogram("enroll_ms", enroll_ms));
  report.timings.push_back(histogram("verify_ms", verify_ms));
  return report;
}

}  // namespace gestauth::eval
