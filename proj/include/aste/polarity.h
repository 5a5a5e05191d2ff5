// Copyright 2026 The ASTE Toolkit Authors.
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

#ifndef ASTE_POLARITY_H_
#define ASTE_POLARITY_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "aste/corpus.h"
#include "aste/linalg.h"
#include "json.hpp"

namespace aste {

enum class PolarityModelKind { kBoosted, kLinear };

std::string_view PolarityModelKindName(PolarityModelKind kind);
absl::StatusOr<PolarityModelKind> ParsePolarityModelKind(std::string_view s);

struct PolarityConfig {
  PolarityModelKind model = PolarityModelKind::kBoosted;
  // Boosted trees (softmax objective, one tree per class per round).
  int trees = 200;
  int depth = 6;
  double learning_rate = 0.1;
  double lambda = 1.0;            // L2 penalty on leaf values
  double min_child_weight = 1.0;  // minimum hessian mass per child
  int max_bins = 64;
  // Linear baseline (full-batch gradient descent on standardized inputs).
  int linear_epochs = 300;
  double linear_learning_rate = 0.5;
  double linear_l2 = 1e-4;
  // Inverse-frequency sample weights: n / (classes_present * n_class).
  bool class_weighting = true;
  uint64_t seed = 42;

  absl::Status Validate() const;
};

using Distribution = std::array<double, kNumPolarities>;

struct PolarityPrediction {
  Polarity label = Polarity::kPositive;
  Distribution distribution{};
};

// Argmax with ties resolved toward the earlier label in kPolarityOrder.
Polarity ArgmaxLabel(const Distribution& distribution);

class PolarityModel {
 public:
  virtual ~PolarityModel() = default;

  virtual absl::StatusOr<PolarityPrediction> Predict(
      const Vector& features) const = 0;
  virtual size_t input_dim() const = 0;
  virtual nlohmann::json ToJson() const = 0;
};

struct RegressionTree {
  struct Node {
    int feature = -1;        // -1 marks a leaf
    double threshold = 0.0;  // go left when x < threshold
    int left = -1;
    int right = -1;
    double value = 0.0;
  };
  std::vector<Node> nodes;  // nodes[0] is the root

  double Evaluate(const Vector& x) const;
};

class BoostedPolarityModel : public PolarityModel {
 public:
  BoostedPolarityModel(
      size_t input_dim,
      std::vector<std::array<RegressionTree, kNumPolarities>> rounds)
      : input_dim_(input_dim), rounds_(std::move(rounds)) {}

  static absl::StatusOr<std::unique_ptr<BoostedPolarityModel>> FromJson(
      const nlohmann::json& j);

  absl::StatusOr<PolarityPrediction> Predict(
      const Vector& features) const override;
  size_t input_dim() const override { return input_dim_; }
  nlohmann::json ToJson() const override;

  size_t num_rounds() const { return rounds_.size(); }

 private:
  size_t input_dim_;
  std::vector<std::array<RegressionTree, kNumPolarities>> rounds_;
};

class LinearPolarityModel : public PolarityModel {
 public:
  // Logits are weights[k] . ((x - mean) / scale) + bias[k].
  LinearPolarityModel(Vector mean, Vector scale,
                      std::array<Vector, kNumPolarities> weights,
                      Distribution bias)
      : mean_(std::move(mean)),
        scale_(std::move(scale)),
        weights_(std::move(weights)),
        bias_(bias) {}

  static LinearPolarityModel Zero(size_t input_dim);
  static absl::StatusOr<std::unique_ptr<LinearPolarityModel>> FromJson(
      const nlohmann::json& j);

  absl::StatusOr<PolarityPrediction> Predict(
      const Vector& features) const override;
  size_t input_dim() const override { return mean_.size(); }
  nlohmann::json ToJson() const override;

 private:
  Vector mean_;
  Vector scale_;
  std::array<Vector, kNumPolarities> weights_;
  Distribution bias_;
};

struct PolarityTrainingReport {
  std::array<size_t, kNumPolarities> class_counts{};
  std::array<double, kNumPolarities> class_weights{};
  double training_accuracy = 0.0;

  nlohmann::json ToJson() const;
};

struct TrainedPolarity {
  std::unique_ptr<PolarityModel> model;
  PolarityTrainingReport report;
};

// Refuses inputs with fewer than two classes, ragged or non-finite features.
absl::StatusOr<TrainedPolarity> TrainPolarity(
    const std::vector<Vector>& features, const std::vector<Polarity>& labels,
    const PolarityConfig& config);

absl::StatusOr<std::unique_ptr<PolarityModel>> PolarityModelFromJson(
    const nlohmann::json& j);

}  // namespace aste

#endif  // ASTE_POLARITY_H_
