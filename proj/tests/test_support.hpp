#pragma once

#include <deque>
#include <stdexcept>

#include "maxstab/rng.hpp"

namespace maxstab::testing {

/// Scripted variate source for hand-traced examples; draws beyond the script
/// fall through to a backing stream (or throw when none is given).
class ScriptedSource final : public RandomSource {
 public:
  explicit ScriptedSource(RngStream* fallback = nullptr) : fallback_(fallback) {}

  ScriptedSource& push_uniform(double u) { uniforms_.push_back(u); return *this; }
  ScriptedSource& push_normal(double z) { normals_.push_back(z); return *this; }
  ScriptedSource& push_exponential(double e) { exps_.push_back(e); return *this; }

  double uniform() override { return pop(uniforms_, "uniform", &RandomSource::uniform); }
  double normal() override { return pop(normals_, "normal", &RandomSource::normal); }
  double exponential() override { return pop(exps_, "exponential", &RandomSource::exponential); }

 private:
  double pop(std::deque<double>& q, const char* what, double (RandomSource::*fn)()) {
    if (!q.empty()) {
      const double v = q.front();
      q.pop_front();
      return v;
    }
    if (fallback_) return (fallback_->*fn)();
    throw std::runtime_error(std::string("ScriptedSource: script exhausted for ") + what);
  }

  std::deque<double> uniforms_, normals_, exps_;
  RngStream* fallback_;
};

}  // namespace maxstab::testing
