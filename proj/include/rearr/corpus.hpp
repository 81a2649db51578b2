#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rearr/expr.hpp"
#include "rearr/measure.hpp"

namespace rearr {

struct CorpusEntry {
  std::string label;
  /// linear, distance, tent, bump, indicator-smoothed or random-Lipschitz.
  std::string family;
  std::string expression;
  GridFunction f;
};

/// Deterministic test functions for one space. Members whose grid gradient
/// exceeds a quarter of their range per cell are dropped and listed in `skipped`.
struct TestCorpus {
  std::uint64_t seed = 1;
  std::vector<CorpusEntry> entries;
  std::vector<std::string> skipped;
};

/// (label, family, expression) triples of the twelve members for `space`.
struct CorpusSpec {
  std::string label;
  std::string family;
  std::string expression;
};
std::vector<CorpusSpec> corpus_specs(const MeasureSpace& space, std::uint64_t seed);

/// False when some cell changes by more than a quarter of the range of f
/// across one grid step, i.e. the sample is not resolved as a Lipschitz function.
bool resolved_on_grid(const GridFunction& f);

TestCorpus make_corpus(const SpacePtr& space, std::uint64_t seed = 1);

GridFunction sample_expression(const SpacePtr& space, const Expression& e);

/// Smoothed indicator of {x1 < a} with ramp width eps.
std::string smoothed_indicator_expression(double a, double eps);

/// Shortest round-trip decimal form of x.
std::string format_number(double x);

}  // namespace rearr
