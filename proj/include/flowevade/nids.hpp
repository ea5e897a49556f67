#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "flowevade/dataset.hpp"
#include "flowevade/nn.hpp"

namespace flowevade::nids {

using flows::FlowDataset;

enum class Family {
  alertnet,
  deepnet,
  idsnet,
  custom_mlp,
  decision_tree,
  svm,
  knn,
  logistic_regression
};

Family family_from_name(const std::string& name);
std::string family_name(Family family);
bool is_mlp_family(Family family);

struct ClassifierSpec {
  Family family = Family::idsnet;
  std::vector<std::size_t> layer_widths;  // full chain, MLP families
  double dropout_rate = 0.0;
  bool batch_norm = false;
  std::size_t n_classes = 0;

  void validate() const;
};

/// Layer widths and regularisation per family. `custom_widths` is the
/// hidden chain for custom-mlp.
ClassifierSpec build_spec(Family family, const flows::FeatureSchema& schema,
                          const std::vector<std::size_t>& custom_widths = {});

struct TrainingConfig {
  std::size_t batch_size = 32;
  double learning_rate = 0.01;
  std::size_t epochs = 50;
  std::uint64_t seed = 1;
  double adam_beta1 = 0.9;  // classifier training optimizer (run-config recorded)
  double adam_beta2 = 0.999;
};

struct ClassMetrics {
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
  double precision = 0.0, recall = 0.0, f1 = 0.0;
  bool zero_denominator = false;  // flagged classes score 0
};

struct MetricsReport {
  double accuracy = 0.0;
  double macro_precision = 0.0, macro_recall = 0.0, macro_f1 = 0.0;
  std::vector<ClassMetrics> per_class;
};

/// Predict interface every target and surrogate model exposes. Probability
/// rows are nonnegative and sum to 1; labels are the argmax with ties broken
/// by the lowest class index.
class Classifier {
 public:
  virtual ~Classifier() = default;
  virtual std::size_t input_width() const = 0;
  virtual std::size_t n_classes() const = 0;
  virtual Matrix predict_probs(const Matrix& x) const = 0;
  virtual bool differentiable() const { return false; }
  virtual nlohmann::json to_json() const = 0;
  virtual std::string kind() const = 0;

  std::vector<int> predict_labels(const Matrix& x) const;
};

std::vector<int> argmax_rows(const Matrix& probs);

class MlpClassifier : public Classifier {
 public:
  MlpClassifier(ClassifierSpec spec, nn::Mlp net) : spec_(std::move(spec)), net_(std::move(net)) {}

  std::size_t input_width() const override { return net_.input_width(); }
  std::size_t n_classes() const override { return net_.output_width(); }
  Matrix predict_probs(const Matrix& x) const override;
  bool differentiable() const override { return true; }
  nlohmann::json to_json() const override;
  std::string kind() const override { return "mlp"; }

  Matrix logits(const Matrix& x) const { return net_.forward(x); }
  /// Inference-mode dL/dX for an upstream dL/dlogits.
  Matrix input_gradient(const Matrix& x, const Matrix& d_logits) const {
    return net_.input_gradient(x, d_logits);
  }
  nn::Mlp& net() { return net_; }
  const nn::Mlp& net() const { return net_; }
  const ClassifierSpec& spec() const { return spec_; }

  static std::shared_ptr<MlpClassifier> from_json(const nlohmann::json& j);

 private:
  ClassifierSpec spec_;
  nn::Mlp net_;
};

struct TrainedClassifier {
  ClassifierSpec spec;
  TrainingConfig config;
  std::vector<std::string> label_set;
  std::shared_ptr<Classifier> model;
  std::optional<MetricsReport> test_metrics;
};

/// Minimizes softmax cross-entropy with Adam under the supplied settings;
/// bit-deterministic for a fixed seed. Throws on non-finite loss.
TrainedClassifier train_classifier(const ClassifierSpec& spec, const FlowDataset& train,
                                   const TrainingConfig& config,
                                   const FlowDataset* test = nullptr);

std::vector<int> predict_labels(const TrainedClassifier& model, const Matrix& x);
Matrix predict_probs(const TrainedClassifier& model, const Matrix& x);

/// One-vs-rest confusion counts per class; precision TP/(TP+FP), recall
/// TP/(TP+FN), F1 the harmonic mean; zero-denominator classes score 0 and
/// are flagged.
MetricsReport compute_metrics(const std::vector<int>& y_true, const std::vector<int>& y_pred,
                              const std::vector<std::string>& label_set);

// --- classical target models -------------------------------------------

/// Hyperparameters for the classical families. Experiment values come from
/// the run configuration files; these are library fallbacks.
struct ClassicalConfig {
  std::size_t tree_max_depth = 12;
  std::size_t tree_min_leaf = 1;
  std::size_t knn_k = 5;
  std::size_t linear_epochs = 200;
  double linear_learning_rate = 0.05;
  double svm_l2 = 1e-3;
  std::uint64_t seed = 1;
};

/// Decision tree, linear SVM (one-vs-rest hinge; probabilities via softmax
/// over margins), KNN (neighbor vote fractions) or multinomial logistic
/// regression behind the same predict interface.
TrainedClassifier train_classical(Family kind, const FlowDataset& train,
                                  const ClassicalConfig& config,
                                  const FlowDataset* test = nullptr);

void save_classifier(const TrainedClassifier& model, const std::string& path);
TrainedClassifier load_classifier(const std::string& path);

}  // namespace flowevade::nids
