#include "flowevade/nids.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "flowevade/nn_io.hpp"

namespace flowevade::nids {

using nlohmann::json;

Family family_from_name(const std::string& name) {
  if (name == "alertnet") return Family::alertnet;
  if (name == "deepnet") return Family::deepnet;
  if (name == "idsnet") return Family::idsnet;
  if (name == "custom-mlp") return Family::custom_mlp;
  if (name == "decision-tree") return Family::decision_tree;
  if (name == "svm") return Family::svm;
  if (name == "knn") return Family::knn;
  if (name == "logistic-regression") return Family::logistic_regression;
  throw std::invalid_argument("unknown classifier family: " + name);
}

std::string family_name(Family family) {
  switch (family) {
    case Family::alertnet: return "alertnet";
    case Family::deepnet: return "deepnet";
    case Family::idsnet: return "idsnet";
    case Family::custom_mlp: return "custom-mlp";
    case Family::decision_tree: return "decision-tree";
    case Family::svm: return "svm";
    case Family::knn: return "knn";
    case Family::logistic_regression: return "logistic-regression";
  }
  return "?";
}

bool is_mlp_family(Family family) {
  return family == Family::alertnet || family == Family::deepnet || family == Family::idsnet ||
         family == Family::custom_mlp;
}

void ClassifierSpec::validate() const {
  if (!is_mlp_family(family)) return;
  if (layer_widths.size() < 2) throw std::invalid_argument("spec: need input and output widths");
  if (layer_widths.back() != n_classes)
    throw std::invalid_argument("spec: last width must equal n_classes");
  if (dropout_rate < 0.0 || dropout_rate >= 1.0)
    throw std::invalid_argument("spec: dropout outside [0,1)");
}

ClassifierSpec build_spec(Family family, const flows::FeatureSchema& schema,
                          const std::vector<std::size_t>& custom_widths) {
  ClassifierSpec spec;
  spec.family = family;
  spec.n_classes = schema.known_classes.size();
  if (spec.n_classes == 0)
    throw std::invalid_argument("build_spec: schema does not name its classes");
  const std::size_t n = schema.n_encoded;
  std::vector<std::size_t> hidden;
  switch (family) {
    case Family::alertnet:
      hidden = {1024, 768, 512, 256, 128};
      spec.batch_norm = true;
      spec.dropout_rate = 0.01;
      break;
    case Family::deepnet:
      hidden = {256, 256, 256, 256};
      spec.dropout_rate = 0.01;
      break;
    case Family::idsnet:
      if (spec.n_classes == 5) {
        hidden = {64, 32};
      } else if (spec.n_classes == 7) {
        hidden = {42, 21};
      } else {
        hidden = {std::max<std::size_t>(n / 2, 8), std::max<std::size_t>(n / 4, 4)};
      }
      break;
    case Family::custom_mlp:
      hidden = custom_widths;
      break;
    default:
      return spec;  // classical families have no layer chain
  }
  spec.layer_widths.push_back(n);
  for (auto w : hidden) spec.layer_widths.push_back(w);
  spec.layer_widths.push_back(spec.n_classes);
  spec.validate();
  return spec;
}

std::vector<int> argmax_rows(const Matrix& probs) {
  std::vector<int> labels(probs.rows());
  for (std::size_t r = 0; r < probs.rows(); ++r) {
    std::size_t best = 0;
    for (std::size_t c = 1; c < probs.cols(); ++c)
      if (probs(r, c) > probs(r, best)) best = c;  // ties keep the lowest index
    labels[r] = static_cast<int>(best);
  }
  return labels;
}

std::vector<int> Classifier::predict_labels(const Matrix& x) const {
  return argmax_rows(predict_probs(x));
}

Matrix MlpClassifier::predict_probs(const Matrix& x) const {
  return nn::softmax_rows(net_.forward(x));
}

namespace {

json classifier_spec_to_json(const ClassifierSpec& s) {
  return json{{"family", family_name(s.family)},
              {"layer_widths", s.layer_widths},
              {"dropout_rate", s.dropout_rate},
              {"batch_norm", s.batch_norm},
              {"n_classes", s.n_classes}};
}

ClassifierSpec classifier_spec_from_json(const json& j) {
  ClassifierSpec s;
  s.family = family_from_name(j.at("family").get<std::string>());
  s.layer_widths = j.at("layer_widths").get<std::vector<std::size_t>>();
  s.dropout_rate = j.at("dropout_rate").get<double>();
  s.batch_norm = j.at("batch_norm").get<bool>();
  s.n_classes = j.at("n_classes").get<std::size_t>();
  return s;
}

}  // namespace

json MlpClassifier::to_json() const {
  return json{{"spec", classifier_spec_to_json(spec_)}, {"net", nn::mlp_to_json(net_)}};
}

std::shared_ptr<MlpClassifier> MlpClassifier::from_json(const json& j) {
  return std::make_shared<MlpClassifier>(classifier_spec_from_json(j.at("spec")),
                                         nn::mlp_from_json(j.at("net")));
}

namespace {

Matrix gather_rows(const Matrix& x, const std::vector<std::size_t>& idx, std::size_t begin,
                   std::size_t end) {
  Matrix out(end - begin, x.cols());
  for (std::size_t i = begin; i < end; ++i)
    for (std::size_t c = 0; c < x.cols(); ++c) out(i - begin, c) = x(idx[i], c);
  return out;
}

}  // namespace

TrainedClassifier train_classifier(const ClassifierSpec& spec, const FlowDataset& train,
                                   const TrainingConfig& config, const FlowDataset* test) {
  spec.validate();
  if (!is_mlp_family(spec.family))
    throw std::invalid_argument("train_classifier: classical families use train_classical");
  if (spec.layer_widths.front() != train.width())
    throw std::invalid_argument("train_classifier: first width must equal encoded width");
  if (spec.n_classes != train.label_set.size())
    throw std::invalid_argument("train_classifier: n_classes != label set size");

  nn::MlpSpec net_spec;
  net_spec.widths = spec.layer_widths;
  net_spec.hidden_act = nn::Act::relu;
  net_spec.output_act = nn::Act::identity;  // logits; softmax lives in the loss
  net_spec.batch_norm = spec.batch_norm;
  net_spec.dropout = spec.dropout_rate;

  Rng root(config.seed);
  Rng init_rng = root.fork(1);
  Rng shuffle_rng = root.fork(2);
  Rng dropout_rng = root.fork(3);
  nn::Mlp net(net_spec, init_rng);
  nn::AdamOptimizer adam(config.learning_rate, config.adam_beta1, config.adam_beta2);

  const std::size_t n_rows = train.rows();
  std::vector<std::size_t> order(n_rows);
  std::iota(order.begin(), order.end(), 0);
  auto params = net.flat_params();

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    shuffle_rng.shuffle(order);
    for (std::size_t start = 0; start < n_rows; start += config.batch_size) {
      const std::size_t end = std::min(n_rows, start + config.batch_size);
      Matrix xb = gather_rows(train.X, order, start, end);
      std::vector<int> yb(end - start);
      for (std::size_t i = start; i < end; ++i) yb[i - start] = train.y[order[i]];

      nn::Mlp::Cache cache;
      Matrix logits = net.forward_train(xb, cache, net_spec.dropout > 0 ? &dropout_rng : nullptr);
      Matrix d_logits;
      const double loss = nn::softmax_cross_entropy(logits, yb, &d_logits);
      if (!std::isfinite(loss)) {
        std::ostringstream os;
        os << "train_classifier: non-finite loss at epoch " << epoch << " batch offset " << start;
        throw std::runtime_error(os.str());
      }
      nn::MlpGrads grads = net.backward(cache, d_logits);
      adam.step(params, net.flat_grads(grads));
      net.set_flat_params(params);
    }
  }

  TrainedClassifier out;
  out.spec = spec;
  out.config = config;
  out.label_set = train.label_set;
  out.model = std::make_shared<MlpClassifier>(spec, std::move(net));
  if (test) {
    const auto pred = out.model->predict_labels(test->X);
    out.test_metrics = compute_metrics(test->y, pred, test->label_set);
  }
  return out;
}

std::vector<int> predict_labels(const TrainedClassifier& model, const Matrix& x) {
  return model.model->predict_labels(x);
}

Matrix predict_probs(const TrainedClassifier& model, const Matrix& x) {
  return model.model->predict_probs(x);
}

MetricsReport compute_metrics(const std::vector<int>& y_true, const std::vector<int>& y_pred,
                              const std::vector<std::string>& label_set) {
  if (y_true.size() != y_pred.size())
    throw std::invalid_argument("compute_metrics: length mismatch");
  const auto k = static_cast<int>(label_set.size());
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    if (y_true[i] < 0 || y_true[i] >= k || y_pred[i] < 0 || y_pred[i] >= k)
      throw std::invalid_argument("compute_metrics: label outside label set");
  }
  MetricsReport report;
  report.per_class.resize(label_set.size());
  std::size_t correct = 0;
  for (std::size_t i = 0; i < y_true.size(); ++i)
    if (y_true[i] == y_pred[i]) ++correct;
  report.accuracy = y_true.empty() ? 0.0 : static_cast<double>(correct) / y_true.size();

  for (int c = 0; c < k; ++c) {
    auto& m = report.per_class[c];
    for (std::size_t i = 0; i < y_true.size(); ++i) {
      const bool truth = y_true[i] == c;
      const bool pred = y_pred[i] == c;
      if (truth && pred) ++m.tp;
      else if (!truth && pred) ++m.fp;
      else if (truth && !pred) ++m.fn;
      else ++m.tn;
    }
    if (m.tp + m.fp > 0) m.precision = static_cast<double>(m.tp) / (m.tp + m.fp);
    else m.zero_denominator = true;
    if (m.tp + m.fn > 0) m.recall = static_cast<double>(m.tp) / (m.tp + m.fn);
    else m.zero_denominator = true;
    if (m.precision + m.recall > 0.0)
      m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
    else m.zero_denominator = true;
    report.macro_precision += m.precision;
    report.macro_recall += m.recall;
    report.macro_f1 += m.f1;
  }
  if (k > 0) {
    report.macro_precision /= k;
    report.macro_recall /= k;
    report.macro_f1 /= k;
  }
  return report;
}

// --- decision tree -------------------------------------------------------

namespace {

struct TreeNode {
  int feature = -1;  // -1 = leaf
  double threshold = 0.0;
  int left = -1, right = -1;
  std::vector<double> probs;
};

class DecisionTreeClassifier : public Classifier {
 public:
  DecisionTreeClassifier(std::vector<TreeNode> nodes, std::size_t width, std::size_t classes)
      : nodes_(std::move(nodes)), width_(width), classes_(classes) {}

  std::size_t input_width() const override { return width_; }
  std::size_t n_classes() const override { return classes_; }
  std::string kind() const override { return "decision-tree"; }

  Matrix predict_probs(const Matrix& x) const override {
    if (x.cols() != width_) throw std::invalid_argument("decision tree: width mismatch");
    Matrix probs(x.rows(), classes_);
    for (std::size_t r = 0; r < x.rows(); ++r) {
      int node = 0;
      while (nodes_[node].feature >= 0) {
        node = x(r, static_cast<std::size_t>(nodes_[node].feature)) <= nodes_[node].threshold
                   ? nodes_[node].left
                   : nodes_[node].right;
      }
      for (std::size_t c = 0; c < classes_; ++c) probs(r, c) = nodes_[node].probs[c];
    }
    return probs;
  }

  json to_json() const override {
    json nodes = json::array();
    for (const auto& n : nodes_) {
      nodes.push_back({{"feature", n.feature},
                       {"threshold", n.threshold},
                       {"left", n.left},
                       {"right", n.right},
                       {"probs", n.probs}});
    }
    return json{{"nodes", nodes}, {"width", width_}, {"classes", classes_}};
  }

  static std::shared_ptr<DecisionTreeClassifier> from_json(const json& j) {
    std::vector<TreeNode> nodes;
    for (const auto& n : j.at("nodes")) {
      TreeNode t;
      t.feature = n.at("feature").get<int>();
      t.threshold = n.at("threshold").get<double>();
      t.left = n.at("left").get<int>();
      t.right = n.at("right").get<int>();
      t.probs = n.at("probs").get<std::vector<double>>();
      nodes.push_back(std::move(t));
    }
    return std::make_shared<DecisionTreeClassifier>(
        std::move(nodes), j.at("width").get<std::size_t>(), j.at("classes").get<std::size_t>());
  }

 private:
  std::vector<TreeNode> nodes_;
  std::size_t width_, classes_;
};

class TreeBuilder {
 public:
  TreeBuilder(const Matrix& x, const std::vector<int>& y, std::size_t classes,
              std::size_t max_depth, std::size_t min_leaf)
      : x_(x), y_(y), classes_(classes), max_depth_(max_depth), min_leaf_(min_leaf) {}

  std::vector<TreeNode> build() {
    std::vector<std::size_t> all(x_.rows());
    std::iota(all.begin(), all.end(), 0);
    grow(all, 0);
    return std::move(nodes_);
  }

 private:
  static double gini(const std::vector<std::size_t>& counts, std::size_t total) {
    if (total == 0) return 0.0;
    double g = 1.0;
    for (auto c : counts) {
      const double p = static_cast<double>(c) / total;
      g -= p * p;
    }
    return g;
  }

  int grow(const std::vector<std::size_t>& rows, std::size_t depth) {
    std::vector<std::size_t> counts(classes_, 0);
    for (auto r : rows) ++counts[y_[r]];
    const bool pure = std::count_if(counts.begin(), counts.end(),
                                    [](std::size_t c) { return c > 0; }) <= 1;
    const int node_id = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    if (pure || depth >= max_depth_ || rows.size() < 2 * min_leaf_) {
      make_leaf(node_id, counts, rows.size());
      return node_id;
    }

    int best_feature = -1;
    double best_threshold = 0.0, best_score = gini(counts, rows.size());
    for (std::size_t f = 0; f < x_.cols(); ++f) {
      std::vector<std::size_t> sorted = rows;
      std::sort(sorted.begin(), sorted.end(), [&](std::size_t a, std::size_t b) {
        const double va = x_(a, f), vb = x_(b, f);
        return va != vb ? va < vb : a < b;
      });
      std::vector<std::size_t> left_counts(classes_, 0);
      for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
        ++left_counts[y_[sorted[i]]];
        const double v = x_(sorted[i], f), next = x_(sorted[i + 1], f);
        if (v == next) continue;
        const std::size_t nl = i + 1, nr = sorted.size() - nl;
        if (nl < min_leaf_ || nr < min_leaf_) continue;
        std::vector<std::size_t> right_counts(classes_);
        for (std::size_t c = 0; c < classes_; ++c) right_counts[c] = counts[c] - left_counts[c];
        const double score = (nl * gini(left_counts, nl) + nr * gini(right_counts, nr)) /
                             static_cast<double>(rows.size());
        if (score + 1e-12 < best_score) {
          best_score = score;
          best_feature = static_cast<int>(f);
          best_threshold = (v + next) / 2.0;
        }
      }
    }
    if (best_feature < 0) {
      make_leaf(node_id, counts, rows.size());
      return node_id;
    }
    std::vector<std::size_t> left, right;
    for (auto r : rows) {
      (x_(r, static_cast<std::size_t>(best_feature)) <= best_threshold ? left : right)
          .push_back(r);
    }
    const int left_id = grow(left, depth + 1);
    const int right_id = grow(right, depth + 1);
    nodes_[node_id].feature = best_feature;
    nodes_[node_id].threshold = best_threshold;
    nodes_[node_id].left = left_id;
    nodes_[node_id].right = right_id;
    return node_id;
  }

  void make_leaf(int node_id, const std::vector<std::size_t>& counts, std::size_t total) {
    auto& node = nodes_[node_id];
    node.feature = -1;
    node.probs.assign(classes_, 0.0);
    for (std::size_t c = 0; c < classes_; ++c)
      node.probs[c] = total ? static_cast<double>(counts[c]) / total : 0.0;
  }

  const Matrix& x_;
  const std::vector<int>& y_;
  std::size_t classes_, max_depth_, min_leaf_;
  std::vector<TreeNode> nodes_;
};

// --- KNN ------------------------------------------------------------------

class KnnClassifier : public Classifier {
 public:
  KnnClassifier(Matrix x, std::vector<int> y, std::size_t classes, std::size_t k)
      : x_(std::move(x)), y_(std::move(y)), classes_(classes), k_(std::max<std::size_t>(1, k)) {}

  std::size_t input_width() const override { return x_.cols(); }
  std::size_t n_classes() const override { return classes_; }
  std::string kind() const override { return "knn"; }

  Matrix predict_probs(const Matrix& q) const override {
    if (q.cols() != x_.cols()) throw std::invalid_argument("knn: width mismatch");
    Matrix probs(q.rows(), classes_);
    const std::size_t k = std::min(k_, x_.rows());
    std::vector<std::pair<double, std::size_t>> dist(x_.rows());
    for (std::size_t r = 0; r < q.rows(); ++r) {
      for (std::size_t t = 0; t < x_.rows(); ++t) {
        double d2 = 0.0;
        for (std::size_t c = 0; c < x_.cols(); ++c) {
          const double d = q(r, c) - x_(t, c);
          d2 += d * d;
        }
        dist[t] = {d2, t};
      }
      std::partial_sort(dist.begin(), dist.begin() + k, dist.end());
      for (std::size_t i = 0; i < k; ++i)
        probs(r, static_cast<std::size_t>(y_[dist[i].second])) += 1.0 / static_cast<double>(k);
    }
    return probs;
  }

  json to_json() const override {
    json rows = json::array();
    for (std::size_t r = 0; r < x_.rows(); ++r) rows.push_back(x_.row_copy(r));
    return json{{"rows", rows}, {"labels", y_}, {"classes", classes_}, {"k", k_}};
  }

  static std::shared_ptr<KnnClassifier> from_json(const json& j) {
    const auto rows = j.at("rows").get<std::vector<std::vector<double>>>();
    Matrix x(rows.size(), rows.empty() ? 0 : rows[0].size());
    for (std::size_t r = 0; r < rows.size(); ++r) x.set_row(r, rows[r]);
    return std::make_shared<KnnClassifier>(std::move(x), j.at("labels").get<std::vector<int>>(),
                                           j.at("classes").get<std::size_t>(),
                                           j.at("k").get<std::size_t>());
  }

 private:
  Matrix x_;
  std::vector<int> y_;
  std::size_t classes_, k_;
};

// --- linear one-vs-rest SVM ------------------------------------------------

class LinearSvmClassifier : public Classifier {
 public:
  LinearSvmClassifier(Matrix w, std::vector<double> b) : w_(std::move(w)), b_(std::move(b)) {}

  std::size_t input_width() const override { return w_.cols(); }
  std::size_t n_classes() const override { return w_.rows(); }
  std::string kind() const override { return "svm"; }

  Matrix margins(const Matrix& x) const {
    Matrix m = kernels::matmul_bt(x, w_);
    kernels::add_row_vector(m, b_);
    return m;
  }

  // Margin-based model: probability rows are the softmax of the one-vs-rest
  // margins (documented calibration; ranking equals the margin ranking).
  Matrix predict_probs(const Matrix& x) const override {
    return nn::softmax_rows(margins(x));
  }

  json to_json() const override {
    json rows = json::array();
    for (std::size_t r = 0; r < w_.rows(); ++r) rows.push_back(w_.row_copy(r));
    return json{{"w", rows}, {"b", b_}};
  }

  static std::shared_ptr<LinearSvmClassifier> from_json(const json& j) {
    const auto rows = j.at("w").get<std::vector<std::vector<double>>>();
    Matrix w(rows.size(), rows.empty() ? 0 : rows[0].size());
    for (std::size_t r = 0; r < rows.size(); ++r) w.set_row(r, rows[r]);
    return std::make_shared<LinearSvmClassifier>(std::move(w),
                                                 j.at("b").get<std::vector<double>>());
  }

 private:
  Matrix w_;  // [classes x width]
  std::vector<double> b_;
};

std::shared_ptr<LinearSvmClassifier> train_svm(const FlowDataset& train,
                                               const ClassicalConfig& config) {
  const std::size_t k = train.label_set.size();
  const std::size_t n = train.width();
  Matrix w(k, n);
  std::vector<double> b(k, 0.0);
  const double invN = 1.0 / static_cast<double>(train.rows());
  for (std::size_t epoch = 0; epoch < config.linear_epochs; ++epoch) {
    // full-batch subgradient of l2-regularized hinge, one binary problem per class
    Matrix dw(k, n);
    std::vector<double> db(k, 0.0);
    for (std::size_t r = 0; r < train.rows(); ++r) {
      for (std::size_t c = 0; c < k; ++c) {
        const double y = train.y[r] == static_cast<int>(c) ? 1.0 : -1.0;
        double margin = b[c];
        for (std::size_t f = 0; f < n; ++f) margin += w(c, f) * train.X(r, f);
        if (y * margin < 1.0) {
          for (std::size_t f = 0; f < n; ++f) dw(c, f) -= y * train.X(r, f) * invN;
          db[c] -= y * invN;
        }
      }
    }
    for (std::size_t c = 0; c < k; ++c) {
      for (std::size_t f = 0; f < n; ++f)
        w(c, f) -= config.linear_learning_rate * (dw(c, f) + config.svm_l2 * w(c, f));
      b[c] -= config.linear_learning_rate * db[c];
    }
  }
  return std::make_shared<LinearSvmClassifier>(std::move(w), std::move(b));
}

}  // namespace

TrainedClassifier train_classical(Family kind, const FlowDataset& train,
                                  const ClassicalConfig& config, const FlowDataset* test) {
  std::size_t distinct = 0;
  {
    std::vector<bool> seen(train.label_set.size(), false);
    for (int label : train.y)
      if (!seen[label]) {
        seen[label] = true;
        ++distinct;
      }
  }
  if (distinct < 2)
    throw std::invalid_argument("train_classical: degenerate single-class training set");

  TrainedClassifier out;
  out.spec.family = kind;
  out.spec.n_classes = train.label_set.size();
  out.label_set = train.label_set;
  out.config.seed = config.seed;

  switch (kind) {
    case Family::decision_tree: {
      TreeBuilder builder(train.X, train.y, train.label_set.size(), config.tree_max_depth,
                          config.tree_min_leaf);
      out.model = std::make_shared<DecisionTreeClassifier>(builder.build(), train.width(),
                                                           train.label_set.size());
      break;
    }
    case Family::knn:
      out.model = std::make_shared<KnnClassifier>(train.X, train.y, train.label_set.size(),
                                                  config.knn_k);
      break;
    case Family::svm:
      out.model = train_svm(train, config);
      break;
    case Family::logistic_regression: {
      // multinomial logistic regression = one-layer softmax network
      ClassifierSpec spec;
      spec.family = Family::custom_mlp;
      spec.layer_widths = {train.width(), train.label_set.size()};
      spec.n_classes = train.label_set.size();
      TrainingConfig tc;
      tc.batch_size = 64;
      tc.learning_rate = config.linear_learning_rate;
      tc.epochs = config.linear_epochs;
      tc.seed = config.seed;
      TrainedClassifier mlp = train_classifier(spec, train, tc);
      out.model = mlp.model;
      out.config = mlp.config;
      break;
    }
    default:
      throw std::invalid_argument("train_classical: not a classical family");
  }
  out.spec.family = kind;
  if (test) {
    const auto pred = out.model->predict_labels(test->X);
    out.test_metrics = compute_metrics(test->y, pred, test->label_set);
  }
  return out;
}

namespace {

constexpr const char* kModelMagic = "FLOWEVADE-MODEL v1";

json metrics_to_json(const MetricsReport& m) {
  json per = json::array();
  for (const auto& c : m.per_class) {
    per.push_back({{"tp", c.tp},
                   {"fp", c.fp},
                   {"fn", c.fn},
                   {"tn", c.tn},
                   {"precision", c.precision},
                   {"recall", c.recall},
                   {"f1", c.f1},
                   {"zero_denominator", c.zero_denominator}});
  }
  return json{{"accuracy", m.accuracy},
              {"macro_precision", m.macro_precision},
              {"macro_recall", m.macro_recall},
              {"macro_f1", m.macro_f1},
              {"per_class", per}};
}

}  // namespace

void save_classifier(const TrainedClassifier& model, const std::string& path) {
  json j;
  j["magic"] = kModelMagic;
  j["spec"] = classifier_spec_to_json(model.spec);
  j["config"] = {{"batch_size", model.config.batch_size},
                 {"learning_rate", model.config.learning_rate},
                 {"epochs", model.config.epochs},
                 {"seed", model.config.seed},
                 {"adam_beta1", model.config.adam_beta1},
                 {"adam_beta2", model.config.adam_beta2}};
  j["label_set"] = model.label_set;
  j["kind"] = model.model->kind();
  j["model"] = model.model->to_json();
  if (model.test_metrics) j["test_metrics"] = metrics_to_json(*model.test_metrics);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write model: " + path);
  out << j.dump() << "\n";
}

TrainedClassifier load_classifier(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model: " + path);
  json j;
  in >> j;
  if (j.value("magic", "") != kModelMagic)
    throw std::runtime_error(path + ": not a model checkpoint");
  TrainedClassifier out;
  out.spec = classifier_spec_from_json(j.at("spec"));
  const auto& c = j.at("config");
  out.config.batch_size = c.at("batch_size").get<std::size_t>();
  out.config.learning_rate = c.at("learning_rate").get<double>();
  out.config.epochs = c.at("epochs").get<std::size_t>();
  out.config.seed = c.at("seed").get<std::uint64_t>();
  out.config.adam_beta1 = c.at("adam_beta1").get<double>();
  out.config.adam_beta2 = c.at("adam_beta2").get<double>();
  out.label_set = j.at("label_set").get<std::vector<std::string>>();
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "mlp") out.model = MlpClassifier::from_json(j.at("model"));
  else if (kind == "decision-tree") out.model = DecisionTreeClassifier::from_json(j.at("model"));
  else if (kind == "knn") out.model = KnnClassifier::from_json(j.at("model"));
  else if (kind == "svm") out.model = LinearSvmClassifier::from_json(j.at("model"));
  else throw std::runtime_error(path + ": unknown model kind " + kind);
  return out;
}

}  // namespace flowevade::nids
