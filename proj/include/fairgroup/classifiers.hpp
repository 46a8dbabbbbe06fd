#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fairgroup/dataset.hpp"

namespace fairgroup {

enum class ModelKind { Linear, Logistic, Svm };

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& s);

struct TrainConfig {
    ModelKind kind = ModelKind::Logistic;
    double learning_rate = 0.5;
    int epochs = 1200;
    double l2 = 1e-4;
    double margin_cost = 1.0;  // hinge-loss weight for the SVM objective
    std::uint64_t seed = 1;

    void validate() const;  // throws InvalidConfig
};

// A trained linear predictor over the unprotected features, together with
// the standardization captured at training time, so prediction is
// self-contained. Immutable once trained; safe to share across threads.
struct LinearModel {
    ModelKind kind = ModelKind::Logistic;
    std::vector<std::string> feature_names;  // training schema, in order
    std::vector<double> weights;             // in standardized coordinates
    double bias = 0.0;
    std::vector<double> means;
    std::vector<double> scales;  // strictly positive; constant features get 1

    bool operator==(const LinearModel&) const = default;
};

// Deterministic training on the dataset's unprotected features. The target
// and the protected feature (when present) are never part of the design
// matrix. Linear solves the ridge normal equations in closed form;
// logistic and svm run full-batch (sub)gradient descent, one step per
// epoch, in fixed order.
LinearModel train(const Dataset& d, const TrainConfig& cfg);

// Pre-threshold score: raw regression output (linear), probability
// (logistic), or margin (svm).
std::vector<double> score(const LinearModel& m, const Dataset& d);

// Hard labels; ties at the threshold resolve to the positive class.
std::vector<int> predict(const LinearModel& m, const Dataset& d);

int threshold_score(ModelKind kind, double s);

void save_model(const LinearModel& m, const std::string& path);
LinearModel load_model(const std::string& path);

// Objective values and analytic gradients at an arbitrary parameter point,
// over an already-standardized row-major design matrix. Exposed so tests
// can compare the exact gradients that training uses against finite
// differences.
struct Objective {
    double loss = 0.0;
    std::vector<double> grad_weights;
    double grad_bias = 0.0;
};

Objective logistic_objective(const std::vector<std::vector<double>>& rows,
                             const std::vector<int>& labels,
                             const std::vector<double>& weights, double bias, double l2);

Objective hinge_objective(const std::vector<std::vector<double>>& rows,
                          const std::vector<int>& labels,
                          const std::vector<double>& weights, double bias,
                          double margin_cost, double l2);

// Sum that does not depend on the order of the inputs (summands are
// sorted before accumulation). The closed-form linear path uses it so
// that permuting training rows leaves the model bit-identical.
double stable_sum(std::vector<double> values);

}  // namespace fairgroup
