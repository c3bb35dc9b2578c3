#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "gestauth/authenticator.hpp"
#include "gestauth/error.hpp"
#include "gestauth/eval/attack.hpp"
#include "gestauth/eval/experiment.hpp"
#include "gestauth/eval/report.hpp"
#include "gestauth/eval/synth.hpp"
#include "gestauth/service/server.hpp"
#include "gestauth/service/store.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace gestauth;

namespace {

constexpr int kExitError = 3;

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::not_found, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::not_found, "cannot write " + path);
  out << text;
}

template <typename Derived>
json matrix_json(const Eigen::MatrixBase<Derived>& m) {
  json out = json::array();
  for (Eigen::Index c = 0; c < m.cols(); ++c) out.push_back({m(0, c), m(1, c)});
  return out;
}

json inspect_json(const GestureSample& sample, const EnrollConfig& cfg) {
  const ProcessedSample p = process_sample(sample, cfg.adjust, cfg.hand_frame);
  json curves = json::array();
  for (std::size_t k = 0; k < p.curves.size(); ++k) {
    const auto& c = p.curves[k];
    json features = json::object();
    for (int f = 0; f < kFeatureCount; ++f) {
      const auto& s = p.features[k].series[static_cast<std::size_t>(f)];
      features[std::string(kFeatureNames[static_cast<std::size_t>(f)])] = std::vector<double>(s.data(), s.data() + s.size());
    }
    curves.push_back({{"position", k + 1},
                      {"finger_id", c.finger_id},
                      {"avg_start", {c.avg_start.x(), c.avg_start.y()}},
                      {"avg_end", {c.avg_end.x(), c.avg_end.y()}},
                      {"timestamps", std::vector<std::int64_t>(c.timestamps.begin(), c.timestamps.end())},
                      {"adjusted", matrix_json(c.adjusted)},
                      {"normalized", matrix_json(c.normalized)},
                      {"features", features}});
  }
  json hand = nullptr;
  if (p.hand) {
    hand = json::array();
    const auto pairs = HandGeometry::pairs(p.hand->finger_count);
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      hand.push_back({{"first", pairs[k].first},
                      {"second", pairs[k].second},
                      {"distance", p.hand->distances(static_cast<Eigen::Index>(k))}});
    }
  }
  return {{"sample_id", sample.sample_id}, {"finger_count", p.finger_count()}, {"curves", curves}, {"hand_geometry", hand}};
}

EnrollConfig enroll_config_from(const std::string& path) {
  EnrollConfig cfg;
  if (!path.empty()) cfg = apply_enroll_overrides(cfg, read_text(path));
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gesture-based two-factor authentication"};
  app.require_subcommand(1);

  // enroll
  std::string user, samples_dir, decoys_dir, out_path, config_path;
  int synthetic = 0, omega = 0;
  std::uint64_t seed = 7;
  auto* enroll_cmd = app.add_subcommand("enroll", "Train a template from enrollment samples");
  enroll_cmd->add_option("--user", user, "User id")->required();
  enroll_cmd->add_option("--samples", samples_dir, "Directory of trace files")->required();
  auto* decoys_opt = enroll_cmd->add_option("--decoys", decoys_dir, "Directory of decoy trace files");
  enroll_cmd->add_option("--synthetic", synthetic, "Number of synthetic decoys")->excludes(decoys_opt);
  enroll_cmd->add_option("--omega", omega, "Use only the first K samples");
  enroll_cmd->add_option("--config", config_path, "Enrollment config file (JSON object)");
  enroll_cmd->add_option("--seed", seed, "Seed for synthetic decoys");
  enroll_cmd->add_option("-o,--output", out_path, "Template file")->required();

  // verify
  std::string template_path, sample_path, store_path;
  std::optional<double> threshold;
  auto* verify_cmd = app.add_subcommand("verify", "Verify one sample (exit 0 accept, 1 reject, 2 locked)");
  verify_cmd->add_option("--user", user, "User id")->required();
  verify_cmd->add_option("--template", template_path, "Template file")->required();
  verify_cmd->add_option("--sample", sample_path, "Trace file")->required();
  verify_cmd->add_option("--threshold", threshold, "Override the template threshold");
  verify_cmd->add_option("--store", store_path, "Lockout store directory (default $GESTAUTH_STORE)");

  // inspect
  auto* inspect_cmd = app.add_subcommand("inspect", "Dump adjusted curves and feature series");
  inspect_cmd->add_option("--sample", sample_path, "Trace file")->required();
  inspect_cmd->add_option("--config", config_path, "Enrollment config file (JSON object)");

  // eval
  std::string corpus_path;
  auto* eval_cmd = app.add_subcommand("eval", "Run an experiment over a labelled corpus");
  eval_cmd->add_option("--corpus", corpus_path, "Corpus file")->required();
  eval_cmd->add_option("--config", config_path, "Experiment config file (JSON object)");
  eval_cmd->add_option("-o,--output", out_path, "Report directory")->required();

  // synth
  std::string spec_path;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic corpus");
  synth_cmd->add_option("--spec", spec_path, "Synthesis spec file (JSON object)");
  synth_cmd->add_option("-o,--output", out_path, "Corpus file, - for stdout")->required();

  // attack
  std::string victim_dir;
  int level = 1, observations = 0, count = 5;
  auto* attack_cmd = app.add_subcommand("attack", "Forge mimicry attempts from victim samples");
  attack_cmd->add_option("--victim", victim_dir, "Directory of victim trace files")->required();
  attack_cmd->add_option("--level", level, "Attack level 1..4")->required()->check(CLI::Range(1, 4));
  attack_cmd->add_option("--observations", observations, "Observed samples, 1 or 4");
  attack_cmd->add_option("--count", count, "Attempts to produce");
  attack_cmd->add_option("--seed", seed, "Attacker seed");
  attack_cmd->add_option("-o,--output", out_path, "Output directory")->required();

  // serve
  std::string host = "127.0.0.1";
  int port = 8080;
  auto* serve_cmd = app.add_subcommand("serve", "Run the enrollment/verification service");
  serve_cmd->add_option("--host", host, "Bind address");
  serve_cmd->add_option("--port", port, "Port");
  serve_cmd->add_option("--store", store_path, "Store directory (default $GESTAUTH_STORE)");
  serve_cmd->add_option("--synthetic", synthetic, "Synthetic decoys per enrollment");
  serve_cmd->add_option("--config", config_path, "Enrollment config file (JSON object)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*enroll_cmd) {
      auto samples = load_sample_dir(samples_dir);
      if (omega > 0) {
        if (static_cast<int>(samples.size()) < omega) {
          throw Error(ErrorKind::invalid_value, "fewer samples than --omega");
        }
        samples.resize(static_cast<std::size_t>(omega));
      }
      if (samples.empty()) throw Error(ErrorKind::invalid_value, "no samples in " + samples_dir);
      std::vector<GestureSample> decoys;
      if (!decoys_dir.empty()) {
        decoys = load_sample_dir(decoys_dir);
      } else {
        decoys = eval::synth_decoys(static_cast<int>(samples.front().finger_count()), synthetic > 0 ? synthetic : 50,
                                    seed);
      }
      const AuthTemplate tmpl = enroll(samples, decoys, enroll_config_from(config_path));
      save_template(out_path, tmpl);
      std::cout << json{{"user", user},
                        {"template", out_path},
                        {"finger_count", tmpl.finger_count},
                        {"omega", tmpl.enrolled_samples}}
                       .dump()
                << "\n";
      return 0;
    }
    if (*verify_cmd) {
      const AuthTemplate tmpl = load_template(template_path);
      const GestureSample sample = load_sample(sample_path);
      service::TemplateStore store(store_path.empty() ? service::TemplateStore::default_root() : fs::path(store_path));
      const auto outcome = store.verify_with(user, tmpl, sample, threshold);
      std::cout << service::outcome_to_json(outcome).dump(2) << "\n";
      switch (outcome.status) {
        case service::VerifyStatus::accepted: return 0;
        case service::VerifyStatus::rejected: return 1;
        case service::VerifyStatus::locked: return 2;
      }
      return 1;
    }
    if (*inspect_cmd) {
      std::cout << inspect_json(load_sample(sample_path), enroll_config_from(config_path)).dump(2) << "\n";
      return 0;
    }
    if (*eval_cmd) {
      const SampleCorpus corpus = load_corpus(corpus_path);
      const eval::ExperimentConfig cfg =
          config_path.empty() ? eval::ExperimentConfig{} : eval::parse_experiment_config(read_text(config_path));
      const eval::EvalReport report = eval::run_experiment(corpus, cfg);
      eval::write_report(out_path, report);
      std::cout << eval::report_tables_csv(report).at("summary");
      return 0;
    }
    if (*synth_cmd) {
      const eval::SynthSpec spec = spec_path.empty() ? eval::SynthSpec{} : eval::parse_synth_spec(read_text(spec_path));
      write_text(out_path, serialize_corpus(eval::synth_corpus(spec)));
      return 0;
    }
    if (*attack_cmd) {
      eval::AttackSpec spec;
      spec.level = eval::attack_level_from_int(level);
      spec.observations = observations > 0 ? observations : (level >= 3 ? 4 : 1);
      spec.count = count;
      const auto victims = load_sample_dir(victim_dir);
      const auto forged = eval::mimic_attack(victims, spec, seed);
      fs::create_directories(out_path);
      for (const auto& s : forged) save_sample((fs::path(out_path) / (s.sample_id + ".json")).string(), s);
      std::cout << forged.size() << " samples written to " << out_path << "\n";
      return 0;
    }
    if (*serve_cmd) {
      service::TemplateStore store(store_path.empty() ? service::TemplateStore::default_root() : fs::path(store_path));
      service::ServiceOptions options;
      options.enroll = enroll_config_from(config_path);
      if (synthetic > 0) options.synthetic_decoys = synthetic;
      return service::serve(host, port, store, options);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return 0;
}
