#pragma once

#include <vector>

#include "gestauth/authenticator.hpp"
#include "gestauth/eval/synth.hpp"

namespace fixtures {

struct Enrolled {
  std::vector<gestauth::GestureSample> owner;      // enrollment samples
  std::vector<gestauth::GestureSample> owner_test;
  std::vector<gestauth::GestureSample> impostor;   // another persona's drawings
  std::vector<gestauth::GestureSample> decoys;
  gestauth::AuthTemplate tmpl;
};

inline gestauth::EnrollConfig fast_config() {
  gestauth::EnrollConfig cfg;
  cfg.train.max_iterations = 3000;
  cfg.hand_slack = 2.0;
  return cfg;
}

inline Enrolled enrolled(int fingers, std::uint64_t seed = 17, gestauth::EnrollConfig cfg = fast_config()) {
  using namespace gestauth::eval;
  const auto personas = make_personas(seed, 2, 1);
  const auto corpus = synth_persona_corpus(personas, 1, 12, fingers);
  Enrolled e;
  for (std::size_t i = 0; i < corpus.samples.size(); ++i) {
    if (i < 5) e.owner.push_back(corpus.samples[i]);
    else if (i < 12) e.owner_test.push_back(corpus.samples[i]);
    else e.impostor.push_back(corpus.samples[i]);
  }
  e.decoys = synth_decoys(fingers, 20, seed + 1000);
  e.tmpl = gestauth::enroll(e.owner, e.decoys, cfg);
  return e;
}

}  // namespace fixtures
