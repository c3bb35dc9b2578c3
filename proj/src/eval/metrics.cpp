#include "gestauth/eval/metrics.hpp"

namespace gestauth::eval {

namespace {

std::optional<double> ratio(std::int64_t num, std::int64_t den) {
  if (den <= 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

Metrics metrics(const ConfusionCounts& c) {
  Metrics m;
  m.tpr = ratio(c.tp, c.tp + c.fn);
  m.fpr = ratio(c.fp, c.fp + c.tn);
  m.precision = ratio(c.tp, c.tp + c.fp);
  m.recall = m.tpr;
  return m;
}

}  // namespace gestauth::eval
