#include "memqa/ranksvm.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "memqa/error.hpp"
#include "memqa/log.hpp"

namespace memqa {

namespace {

using Vec4 = Eigen::Vector4d;

Vec4 as_vec(const SignalVector& s) { return {s.r_t, s.r_r, s.r_l, s.r_s}; }

struct Pair {
  Vec4 x;
  double y;
};

std::vector<Pair> make_pairs(const RankTrainingSet& data, std::vector<std::string>& warnings) {
  std::vector<Pair> pairs;
  std::size_t skipped = 0;
  for (const auto& group : data.queries) {
    std::size_t pos = 0;
    for (const auto& item : group) pos += item.positive ? 1 : 0;
    if (pos == 0 || pos == group.size()) {
      ++skipped;
      continue;
    }
    for (const auto& p : group) {
      if (!p.positive) continue;
      for (const auto& n : group) {
        if (n.positive) continue;
        const Vec4 diff = as_vec(p.signals) - as_vec(n.signals);
        if (!diff.allFinite()) throw Error(ErrorCode::kNonFiniteScore, "non-finite training signal");
        pairs.push_back({diff, 1.0});
        pairs.push_back({-diff, -1.0});
      }
    }
  }
  if (skipped > 0) {
    warnings.push_back(std::to_string(skipped) + " queries lack a positive or a negative and were skipped");
  }
  return pairs;
}

double objective(const std::vector<Pair>& pairs, const Vec4& w, double c) {
  double loss = 0.0;
  for (const auto& p : pairs) {
    const double slack = 1.0 - p.y * w.dot(p.x);
    if (slack > 0.0) loss += slack * slack;
  }
  return 0.5 * w.squaredNorm() + c * loss;
}

}  // namespace

RankSvmResult train_weights(const RankTrainingSet& data, const RankSvmOptions& options) {
  if (!(options.c_reg > 0.0)) throw Error(ErrorCode::kInvalidArgument, "c_reg must be positive");
  RankSvmResult result;
  const auto pairs = make_pairs(data, result.warnings);
  if (pairs.empty()) throw Error(ErrorCode::kDegenerateData, "no (positive, negative) pairs to train on");
  result.pairs = pairs.size() / 2;

  const double c = options.c_reg;
  Vec4 w = Vec4::Zero();
  double g0_norm = -1.0;
  bool converged = false;

  for (int iter = 0; iter < options.max_iterations; ++iter) {
    Vec4 grad = w;
    Eigen::Matrix4d hessian = Eigen::Matrix4d::Identity();
    for (const auto& p : pairs) {
      const double slack = 1.0 - p.y * w.dot(p.x);
      if (slack <= 0.0) continue;
      grad -= 2.0 * c * slack * p.y * p.x;
      hessian += 2.0 * c * p.x * p.x.transpose();
    }
    const double g_norm = grad.norm();
    if (g0_norm < 0.0) g0_norm = g_norm;
    result.iterations = iter;
    if (g_norm <= options.tolerance * std::max(1.0, g0_norm)) {
      converged = true;
      break;
    }

    const Vec4 step = hessian.ldlt().solve(-grad);
    const double f = objective(pairs, w, c);
    const double slope = grad.dot(step);
    double alpha = 1.0;
    bool moved = false;
    for (int k = 0; k < 60; ++k, alpha *= 0.5) {
      const Vec4 candidate = w + alpha * step;
      if (objective(pairs, candidate, c) <= f + 1e-4 * alpha * slope) {
        w = candidate;
        moved = true;
        break;
      }
    }
    if (!moved) {
      // no representable decrease left
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw Error(ErrorCode::kNonConvergence,
                "RankSVM did not converge in " + std::to_string(options.max_iterations) + " iterations");
  }

  if (w.isZero(0.0)) throw Error(ErrorCode::kDegenerateData, "training pairs carry no signal differences");
  result.weights = {w[0], w[1], w[2], w[3], {}, c};
  const char* names[] = {"w_t", "w_r", "w_l", "w_s"};
  for (int i = 0; i < 4; ++i) {
    if (w[i] < 0.0) {
      result.warnings.push_back(std::string("negative learned weight ") + names[i] + " = " + std::to_string(w[i]));
    }
  }
  for (const auto& msg : result.warnings) log::warn(msg);
  return result;
}

double pairwise_accuracy(const RankTrainingSet& data, const FusionWeights& w) {
  std::size_t total = 0;
  std::size_t correct = 0;
  for (const auto& group : data.queries) {
    for (const auto& p : group) {
      if (!p.positive) continue;
      const double sp = fuse(p.signals, w);
      for (const auto& n : group) {
        if (n.positive) continue;
        ++total;
        if (sp > fuse(n.signals, w)) ++correct;
      }
    }
  }
  if (total == 0) throw Error(ErrorCode::kDegenerateData, "no pairs to evaluate");
  return static_cast<double>(correct) / static_cast<double>(total);
}

}  // namespace memqa
