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

#include "aste/polarity.h"

#include <algorithm>
#include <cmath>

#include "aste/status_macros.h"
#include "fmt/format.h"

namespace aste {
namespace {

using json = nlohmann::json;

Distribution Softmax(const Distribution& logits) {
  const double top = *std::max_element(logits.begin(), logits.end());
  Distribution out;
  double sum = 0.0;
  for (int k = 0; k < kNumPolarities; ++k) {
    out[k] = std::exp(logits[k] - top);
    sum += out[k];
  }
  for (double& p : out) p /= sum;
  return out;
}

absl::Status CheckDim(const Vector& x, size_t expected) {
  if (x.size() != expected) {
    return absl::InvalidArgumentError(fmt::format(
        "feature dimension {} does not match model input dimension {}",
        x.size(), expected));
  }
  return absl::OkStatus();
}

json LabelOrderJson() {
  json order = json::array();
  for (Polarity p : kPolarityOrder) order.push_back(PolarityName(p));
  return order;
}

absl::Status CheckLabelOrder(const json& j) {
  if (!j.contains("label_order") || j["label_order"] != LabelOrderJson()) {
    return absl::InvalidArgumentError(
        "polarity model label_order must be [positive, negative, neutral]");
  }
  return absl::OkStatus();
}

// Quantile cut points per feature; value x falls in bin
// upper_bound(cuts, x) - cuts.begin(), so bins <= b are exactly x < cuts[b].
struct BinnedMatrix {
  std::vector<std::vector<double>> cuts;
  std::vector<uint8_t> bins;  // row-major n x d
  size_t rows = 0;
  size_t cols = 0;
};

BinnedMatrix BinFeatures(const std::vector<Vector>& x, int max_bins) {
  BinnedMatrix m;
  m.rows = x.size();
  m.cols = x[0].size();
  m.cuts.resize(m.cols);
  std::vector<double> column(m.rows);
  for (size_t f = 0; f < m.cols; ++f) {
    for (size_t i = 0; i < m.rows; ++i) column[i] = x[i][f];
    std::sort(column.begin(), column.end());
    std::vector<double> distinct = column;
    distinct.erase(std::unique(distinct.begin(), distinct.end()),
                   distinct.end());
    std::vector<double>& cuts = m.cuts[f];
    if (distinct.size() <= static_cast<size_t>(max_bins)) {
      for (size_t i = 1; i < distinct.size(); ++i) {
        cuts.push_back(distinct[i - 1] + (distinct[i] - distinct[i - 1]) / 2);
      }
    } else {
      for (int b = 1; b < max_bins; ++b) {
        const double v = column[b * m.rows / max_bins];
        if (v > column.front() && (cuts.empty() || v > cuts.back())) {
          cuts.push_back(v);
        }
      }
    }
  }
  m.bins.resize(m.rows * m.cols);
  for (size_t i = 0; i < m.rows; ++i) {
    for (size_t f = 0; f < m.cols; ++f) {
      const auto& cuts = m.cuts[f];
      m.bins[i * m.cols + f] = static_cast<uint8_t>(
          std::upper_bound(cuts.begin(), cuts.end(), x[i][f]) - cuts.begin());
    }
  }
  return m;
}

class TreeBuilder {
 public:
  TreeBuilder(const BinnedMatrix& data, const PolarityConfig& config)
      : data_(data),
        config_(config),
        stride_(static_cast<size_t>(config.max_bins)),
        histograms_(config.depth + 1,
                    std::vector<double>(2 * data.cols * stride_)) {}

  RegressionTree Build(const std::vector<double>& g,
                       const std::vector<double>& h) {
    g_ = &g;
    h_ = &h;
    tree_ = RegressionTree();
    std::vector<size_t> all(data_.rows);
    for (size_t i = 0; i < all.size(); ++i) all[i] = i;
    Grow(all, 0);
    return std::move(tree_);
  }

 private:
  int Grow(std::vector<size_t>& rows, int depth) {
    double grad = 0.0, hess = 0.0;
    for (size_t i : rows) {
      grad += (*g_)[i];
      hess += (*h_)[i];
    }
    const int id = static_cast<int>(tree_.nodes.size());
    tree_.nodes.push_back({});
    tree_.nodes[id].value =
        -grad / (hess + config_.lambda) * config_.learning_rate;
    if (depth >= config_.depth || rows.size() < 2) return id;

    std::vector<double>& hist = histograms_[depth];
    std::fill(hist.begin(), hist.end(), 0.0);
    const size_t cols = data_.cols;
    for (size_t i : rows) {
      const uint8_t* bins = &data_.bins[i * cols];
      const double gi = (*g_)[i], hi = (*h_)[i];
      for (size_t f = 0; f < cols; ++f) {
        const size_t slot = 2 * (f * stride_ + bins[f]);
        hist[slot] += gi;
        hist[slot + 1] += hi;
      }
    }
    const double parent = grad * grad / (hess + config_.lambda);
    double best_gain = 1e-12;
    size_t best_feature = 0, best_bin = 0;
    bool found = false;
    for (size_t f = 0; f < cols; ++f) {
      double gl = 0.0, hl = 0.0;
      for (size_t b = 0; b < data_.cuts[f].size(); ++b) {
        gl += hist[2 * (f * stride_ + b)];
        hl += hist[2 * (f * stride_ + b) + 1];
        const double gr = grad - gl, hr = hess - hl;
        if (hl < config_.min_child_weight || hr < config_.min_child_weight) {
          continue;
        }
        const double gain = 0.5 * (gl * gl / (hl + config_.lambda) +
                                   gr * gr / (hr + config_.lambda) - parent);
        if (gain > best_gain) {
          best_gain = gain;
          best_feature = f;
          best_bin = b;
          found = true;
        }
      }
    }
    if (!found) return id;

    std::vector<size_t> left, right;
    for (size_t i : rows) {
      (data_.bins[i * cols + best_feature] <= best_bin ? left : right)
          .push_back(i);
    }
    rows.clear();
    rows.shrink_to_fit();
    const int l = Grow(left, depth + 1);
    const int r = Grow(right, depth + 1);
    RegressionTree::Node& node = tree_.nodes[id];
    node.feature = static_cast<int>(best_feature);
    node.threshold = data_.cuts[best_feature][best_bin];
    node.left = l;
    node.right = r;
    return id;
  }

  const BinnedMatrix& data_;
  const PolarityConfig& config_;
  size_t stride_;
  std::vector<std::vector<double>> histograms_;
  const std::vector<double>* g_ = nullptr;
  const std::vector<double>* h_ = nullptr;
  RegressionTree tree_;
};

std::array<double, kNumPolarities> ClassWeights(
    const std::array<size_t, kNumPolarities>& counts, size_t n,
    bool weighting) {
  std::array<double, kNumPolarities> weights{};
  size_t present = 0;
  for (size_t c : counts) present += c > 0;
  for (int k = 0; k < kNumPolarities; ++k) {
    if (counts[k] == 0) continue;
    weights[k] = weighting ? static_cast<double>(n) /
                                 static_cast<double>(present * counts[k])
                           : 1.0;
  }
  return weights;
}

std::unique_ptr<PolarityModel> TrainBoosted(
    const std::vector<Vector>& x, const std::vector<int>& y,
    const std::vector<double>& sample_weight, const PolarityConfig& config) {
  const size_t n = x.size();
  const BinnedMatrix data = BinFeatures(x, config.max_bins);
  TreeBuilder builder(data, config);
  std::vector<Distribution> scores(n, Distribution{});
  std::vector<std::vector<double>> g(kNumPolarities, std::vector<double>(n));
  std::vector<std::vector<double>> h(kNumPolarities, std::vector<double>(n));
  std::vector<std::array<RegressionTree, kNumPolarities>> rounds;
  rounds.reserve(config.trees);
  for (int round = 0; round < config.trees; ++round) {
    for (size_t i = 0; i < n; ++i) {
      const Distribution p = Softmax(scores[i]);
      for (int k = 0; k < kNumPolarities; ++k) {
        const double target = y[i] == k ? 1.0 : 0.0;
        g[k][i] = sample_weight[i] * (p[k] - target);
        h[k][i] = sample_weight[i] * std::max(p[k] * (1.0 - p[k]), 1e-16);
      }
    }
    std::array<RegressionTree, kNumPolarities> trees;
    for (int k = 0; k < kNumPolarities; ++k) {
      trees[k] = builder.Build(g[k], h[k]);
      for (size_t i = 0; i < n; ++i) scores[i][k] += trees[k].Evaluate(x[i]);
    }
    rounds.push_back(std::move(trees));
  }
  return std::make_unique<BoostedPolarityModel>(x[0].size(), std::move(rounds));
}

std::unique_ptr<PolarityModel> TrainLinear(
    const std::vector<Vector>& x, const std::vector<int>& y,
    const std::vector<double>& sample_weight, const PolarityConfig& config) {
  const size_t n = x.size();
  const size_t d = x[0].size();
  Vector mean(d, 0.0), scale(d, 0.0);
  for (const Vector& row : x) {
    for (size_t f = 0; f < d; ++f) mean[f] += row[f];
  }
  for (double& m : mean) m /= static_cast<double>(n);
  for (const Vector& row : x) {
    for (size_t f = 0; f < d; ++f) {
      scale[f] += (row[f] - mean[f]) * (row[f] - mean[f]);
    }
  }
  for (double& s : scale) {
    s = std::sqrt(s / static_cast<double>(n));
    if (s < 1e-12) s = 1.0;
  }
  std::vector<Vector> z(n, Vector(d));
  for (size_t i = 0; i < n; ++i) {
    for (size_t f = 0; f < d; ++f) z[i][f] = (x[i][f] - mean[f]) / scale[f];
  }
  double total_weight = 0.0;
  for (double w : sample_weight) total_weight += w;

  std::array<Vector, kNumPolarities> weights;
  weights.fill(Vector(d, 0.0));
  Distribution bias{};
  for (int epoch = 0; epoch < config.linear_epochs; ++epoch) {
    std::array<Vector, kNumPolarities> grad;
    grad.fill(Vector(d, 0.0));
    Distribution grad_bias{};
    for (size_t i = 0; i < n; ++i) {
      Distribution logits;
      for (int k = 0; k < kNumPolarities; ++k) {
        logits[k] = Dot(weights[k], z[i]) + bias[k];
      }
      const Distribution p = Softmax(logits);
      for (int k = 0; k < kNumPolarities; ++k) {
        const double r =
            sample_weight[i] * (p[k] - (y[i] == k ? 1.0 : 0.0)) / total_weight;
        grad_bias[k] += r;
        for (size_t f = 0; f < d; ++f) grad[k][f] += r * z[i][f];
      }
    }
    for (int k = 0; k < kNumPolarities; ++k) {
      bias[k] -= config.linear_learning_rate * grad_bias[k];
      for (size_t f = 0; f < d; ++f) {
        weights[k][f] -= config.linear_learning_rate *
                         (grad[k][f] + config.linear_l2 * weights[k][f]);
      }
    }
  }
  return std::make_unique<LinearPolarityModel>(
      std::move(mean), std::move(scale), std::move(weights), bias);
}

}  // namespace

std::string_view PolarityModelKindName(PolarityModelKind kind) {
  return kind == PolarityModelKind::kBoosted ? "boosted" : "linear";
}

absl::StatusOr<PolarityModelKind> ParsePolarityModelKind(std::string_view s) {
  if (s == "boosted") return PolarityModelKind::kBoosted;
  if (s == "linear") return PolarityModelKind::kLinear;
  return absl::InvalidArgumentError(fmt::format(
      "unknown polarity model '{}' (expected boosted or linear)", s));
}

absl::Status PolarityConfig::Validate() const {
  if (trees < 1 || depth < 1 || depth > 16) {
    return absl::InvalidArgumentError(
        "polarity trees must be >= 1 and depth in [1, 16]");
  }
  if (!(learning_rate > 0.0) || !(lambda >= 0.0) ||
      !(min_child_weight >= 0.0)) {
    return absl::InvalidArgumentError(
        "polarity learning_rate must be > 0, lambda and min_child_weight >= 0");
  }
  if (max_bins < 2 || max_bins > 256) {
    return absl::InvalidArgumentError("polarity max_bins must be in [2, 256]");
  }
  if (linear_epochs < 1 || !(linear_learning_rate > 0.0) ||
      !(linear_l2 >= 0.0)) {
    return absl::InvalidArgumentError("invalid linear polarity settings");
  }
  return absl::OkStatus();
}

Polarity ArgmaxLabel(const Distribution& distribution) {
  int best = 0;
  for (int k = 1; k < kNumPolarities; ++k) {
    if (distribution[k] > distribution[best]) best = k;
  }
  return kPolarityOrder[best];
}

double RegressionTree::Evaluate(const Vector& x) const {
  int id = 0;
  while (nodes[id].feature >= 0) {
    const Node& node = nodes[id];
    id = x[node.feature] < node.threshold ? node.left : node.right;
  }
  return nodes[id].value;
}

absl::StatusOr<PolarityPrediction> BoostedPolarityModel::Predict(
    const Vector& features) const {
  RETURN_IF_ERROR(CheckDim(features, input_dim_));
  Distribution logits{};
  for (const auto& trees : rounds_) {
    for (int k = 0; k < kNumPolarities; ++k) {
      logits[k] += trees[k].Evaluate(features);
    }
  }
  PolarityPrediction out;
  out.distribution = Softmax(logits);
  out.label = ArgmaxLabel(out.distribution);
  return out;
}

json BoostedPolarityModel::ToJson() const {
  json rounds = json::array();
  for (const auto& trees : rounds_) {
    json per_class = json::array();
    for (const RegressionTree& tree : trees) {
      json feature = json::array(), threshold = json::array(),
           left = json::array(), right = json::array(), value = json::array();
      for (const RegressionTree::Node& node : tree.nodes) {
        feature.push_back(node.feature);
        threshold.push_back(node.threshold);
        left.push_back(node.left);
        right.push_back(node.right);
        value.push_back(node.value);
      }
      per_class.push_back({{"feature", feature},
                           {"threshold", threshold},
                           {"left", left},
                           {"right", right},
                           {"value", value}});
    }
    rounds.push_back(std::move(per_class));
  }
  return {{"type", "boosted"},
          {"input_dim", input_dim_},
          {"label_order", LabelOrderJson()},
          {"rounds", std::move(rounds)}};
}

absl::StatusOr<std::unique_ptr<BoostedPolarityModel>>
BoostedPolarityModel::FromJson(const json& j) {
  RETURN_IF_ERROR(CheckLabelOrder(j));
  try {
    const size_t input_dim = j.at("input_dim").get<size_t>();
    std::vector<std::array<RegressionTree, kNumPolarities>> rounds;
    for (const json& per_class : j.at("rounds")) {
      if (per_class.size() != kNumPolarities) {
        return absl::InvalidArgumentError(
            "each round needs one tree per class");
      }
      std::array<RegressionTree, kNumPolarities> trees;
      for (int k = 0; k < kNumPolarities; ++k) {
        const json& t = per_class[k];
        const auto feature = t.at("feature").get<std::vector<int>>();
        const auto threshold = t.at("threshold").get<std::vector<double>>();
        const auto left = t.at("left").get<std::vector<int>>();
        const auto right = t.at("right").get<std::vector<int>>();
        const auto value = t.at("value").get<std::vector<double>>();
        const size_t size = feature.size();
        if (size == 0 || threshold.size() != size || left.size() != size ||
            right.size() != size || value.size() != size) {
          return absl::InvalidArgumentError("ragged tree arrays");
        }
        for (size_t i = 0; i < size; ++i) {
          const bool leaf = feature[i] < 0;
          // Children always follow their parent, which rules out cycles.
          if (!leaf && (feature[i] >= static_cast<int>(input_dim) ||
                        left[i] <= static_cast<int>(i) ||
                        right[i] <= static_cast<int>(i) ||
                        left[i] >= static_cast<int>(size) ||
                        right[i] >= static_cast<int>(size))) {
            return absl::InvalidArgumentError("malformed tree node");
          }
          trees[k].nodes.push_back(
              {feature[i], threshold[i], left[i], right[i], value[i]});
        }
      }
      rounds.push_back(std::move(trees));
    }
    return std::make_unique<BoostedPolarityModel>(input_dim, std::move(rounds));
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(
        fmt::format("malformed boosted polarity model: {}", e.what()));
  }
}

LinearPolarityModel LinearPolarityModel::Zero(size_t input_dim) {
  std::array<Vector, kNumPolarities> weights;
  weights.fill(Vector(input_dim, 0.0));
  return LinearPolarityModel(Vector(input_dim, 0.0), Vector(input_dim, 1.0),
                             std::move(weights), Distribution{});
}

absl::StatusOr<PolarityPrediction> LinearPolarityModel::Predict(
    const Vector& features) const {
  RETURN_IF_ERROR(CheckDim(features, mean_.size()));
  Distribution logits = bias_;
  for (int k = 0; k < kNumPolarities; ++k) {
    for (size_t f = 0; f < features.size(); ++f) {
      logits[k] += weights_[k][f] * (features[f] - mean_[f]) / scale_[f];
    }
  }
  PolarityPrediction out;
  out.distribution = Softmax(logits);
  out.label = ArgmaxLabel(out.distribution);
  return out;
}

json LinearPolarityModel::ToJson() const {
  return {{"type", "linear"},
          {"input_dim", mean_.size()},
          {"label_order", LabelOrderJson()},
          {"mean", mean_},
          {"scale", scale_},
          {"weights", weights_},
          {"bias", bias_}};
}

absl::StatusOr<std::unique_ptr<LinearPolarityModel>>
LinearPolarityModel::FromJson(const json& j) {
  RETURN_IF_ERROR(CheckLabelOrder(j));
  try {
    const size_t d = j.at("input_dim").get<size_t>();
    auto mean = j.at("mean").get<Vector>();
    auto scale = j.at("scale").get<Vector>();
    auto weights = j.at("weights").get<std::array<Vector, kNumPolarities>>();
    auto bias = j.at("bias").get<Distribution>();
    bool ok = mean.size() == d && scale.size() == d;
    for (const Vector& w : weights) ok = ok && w.size() == d;
    for (double s : scale) ok = ok && s > 0.0;
    if (!ok) return absl::InvalidArgumentError("malformed linear model shape");
    return std::make_unique<LinearPolarityModel>(
        std::move(mean), std::move(scale), std::move(weights), bias);
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(
        fmt::format("malformed linear polarity model: {}", e.what()));
  }
}

json PolarityTrainingReport::ToJson() const {
  json counts = json::object(), weights = json::object();
  for (int k = 0; k < kNumPolarities; ++k) {
    const std::string name(PolarityName(kPolarityOrder[k]));
    counts[name] = class_counts[k];
    weights[name] = class_weights[k];
  }
  return {{"class_counts", counts},
          {"class_weights", weights},
          {"training_accuracy", training_accuracy}};
}

absl::StatusOr<TrainedPolarity> TrainPolarity(
    const std::vector<Vector>& features, const std::vector<Polarity>& labels,
    const PolarityConfig& config) {
  RETURN_IF_ERROR(config.Validate());
  if (features.size() != labels.size()) {
    return absl::InvalidArgumentError(fmt::format(
        "{} feature rows but {} labels", features.size(), labels.size()));
  }
  if (features.empty()) {
    return absl::FailedPreconditionError("no polarity training examples");
  }
  const size_t d = features[0].size();
  for (size_t i = 0; i < features.size(); ++i) {
    if (features[i].size() != d) {
      return absl::InvalidArgumentError(
          fmt::format("feature row {} has dimension {} (expected {})", i,
                      features[i].size(), d));
    }
    for (double v : features[i]) {
      if (!std::isfinite(v)) {
        return absl::InvalidArgumentError(
            fmt::format("feature row {} has a non-finite entry", i));
      }
    }
  }
  TrainedPolarity out;
  std::vector<int> y(labels.size());
  for (size_t i = 0; i < labels.size(); ++i) {
    y[i] = static_cast<int>(labels[i]);
    ++out.report.class_counts[y[i]];
  }
  size_t present = 0;
  for (size_t c : out.report.class_counts) present += c > 0;
  if (present < 2) {
    return absl::FailedPreconditionError(fmt::format(
        "polarity training needs at least two classes; every example is {}",
        PolarityName(labels[0])));
  }
  out.report.class_weights = ClassWeights(
      out.report.class_counts, labels.size(), config.class_weighting);
  std::vector<double> sample_weight(labels.size());
  for (size_t i = 0; i < labels.size(); ++i) {
    sample_weight[i] = out.report.class_weights[y[i]];
  }
  out.model = config.model == PolarityModelKind::kBoosted
                  ? TrainBoosted(features, y, sample_weight, config)
                  : TrainLinear(features, y, sample_weight, config);
  size_t correct = 0;
  for (size_t i = 0; i < features.size(); ++i) {
    ASSIGN_OR_RETURN(PolarityPrediction p, out.model->Predict(features[i]));
    correct += p.label == labels[i];
  }
  out.report.training_accuracy =
      static_cast<double>(correct) / static_cast<double>(features.size());
  return out;
}

absl::StatusOr<std::unique_ptr<PolarityModel>> PolarityModelFromJson(
    const json& j) {
  const std::string type =
      j.is_object() ? j.value("type", std::string()) : std::string();
  if (type == "boosted") {
    ASSIGN_OR_RETURN(auto model, BoostedPolarityModel::FromJson(j));
    return std::unique_ptr<PolarityModel>(std::move(model));
  }
  if (type == "linear") {
    ASSIGN_OR_RETURN(auto model, LinearPolarityModel::FromJson(j));
    return std::unique_ptr<PolarityModel>(std::move(model));
  }
  return absl::InvalidArgumentError(
      fmt::format("unknown polarity model type '{}'", type));
}

}  // namespace aste
