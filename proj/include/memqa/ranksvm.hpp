#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "memqa/fusion.hpp"

namespace memqa {

struct LabeledSignals {
  SignalVector signals;
  bool positive = false;
};

// One group per query; pairs are only formed within a group.
struct RankTrainingSet {
  std::vector<std::vector<LabeledSignals>> queries;
};

struct RankSvmOptions {
  double c_reg = 1.0;
  double tolerance = 1e-6;
  int max_iterations = 10000;
};

struct RankSvmResult {
  FusionWeights weights;
  int iterations = 0;
  std::size_t pairs = 0;
  std::vector<std::string> warnings;
};

// Pairwise RankSVM. Each (positive, negative) pair of a query contributes the
// difference vectors +(x_pos - x_neg) with label +1 and -(x_pos - x_neg) with
// label -1; the objective
//
//   0.5 |w|^2 + C * sum_i max(0, 1 - y_i w.x_i)^2
//
// is minimized by Newton's method on the generalized Hessian with a
// backtracking line search. No bias term: it cancels in differences.
//
// Throws kDegenerateData when no pair exists, kNonConvergence when the
// gradient norm does not fall below tolerance * max(1, |g0|).
RankSvmResult train_weights(const RankTrainingSet& data, const RankSvmOptions& options = {});

// Fraction of (positive, negative) pairs ordered correctly by `w` (strictly).
double pairwise_accuracy(const RankTrainingSet& data, const FusionWeights& w);

}  // namespace memqa
