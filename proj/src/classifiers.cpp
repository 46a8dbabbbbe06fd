#include "fairgroup/classifiers.hpp"

#include <algorithm>
#include <cmath>

#include "fairgroup/errors.hpp"
#include "fairgroup/textio.hpp"

namespace fairgroup {

namespace {

double sigmoid(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

// log(1 + exp(x)) without overflow.
double log1pexp(double x) {
    if (x > 0.0) return x + std::log1p(std::exp(-x));
    return std::log1p(std::exp(x));
}

struct Standardized {
    std::vector<std::string> names;
    std::vector<std::vector<double>> columns;  // standardized, one per feature
    std::vector<double> means;
    std::vector<double> scales;
    std::vector<bool> constant;
};

Standardized standardize(const Dataset& d) {
    Standardized s;
    for (std::size_t idx : d.unprotected_indices()) {
        const auto& col = d.column(idx);
        const double n = static_cast<double>(col.size());
        const double mean = stable_sum(col) / n;

        std::vector<double> centered(col.size());
        std::vector<double> squares(col.size());
        for (std::size_t j = 0; j < col.size(); ++j) {
            centered[j] = col[j] - mean;
            squares[j] = centered[j] * centered[j];
        }
        const double var = stable_sum(squares) / n;
        const bool constant = var <= 0.0;
        const double scale = constant ? 1.0 : std::sqrt(var);

        for (double& v : centered) v /= scale;
        s.names.push_back(d.spec(idx).name);
        s.columns.push_back(std::move(centered));
        s.means.push_back(mean);
        s.scales.push_back(scale);
        s.constant.push_back(constant);
    }
    return s;
}

std::vector<std::vector<double>> to_rows(const Standardized& s) {
    const std::size_t n = s.columns.empty() ? 0 : s.columns.front().size();
    std::vector<std::vector<double>> rows(n, std::vector<double>(s.columns.size()));
    for (std::size_t i = 0; i < s.columns.size(); ++i) {
        for (std::size_t j = 0; j < n; ++j) rows[j][i] = s.columns[i][j];
    }
    return rows;
}

// Gaussian elimination with partial pivoting; a is modified in place.
std::vector<double> solve_linear_system(std::vector<std::vector<double>> a,
                                        std::vector<double> b) {
    const std::size_t d = b.size();
    for (std::size_t col = 0; col < d; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < d; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        }
        if (std::abs(a[pivot][col]) < 1e-12) {
            throw DegenerateData("singular normal equations; features are collinear");
        }
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        for (std::size_t r = col + 1; r < d; ++r) {
            const double factor = a[r][col] / a[col][col];
            if (factor == 0.0) continue;
            for (std::size_t c = col; c < d; ++c) a[r][c] -= factor * a[col][c];
            b[r] -= factor * b[col];
        }
    }
    std::vector<double> x(d, 0.0);
    for (std::size_t ri = d; ri-- > 0;) {
        double acc = b[ri];
        for (std::size_t c = ri + 1; c < d; ++c) acc -= a[ri][c] * x[c];
        x[ri] = acc / a[ri][ri];
    }
    return x;
}

void train_linear(const Standardized& s, const std::vector<int>& y, double l2,
                  LinearModel& model) {
    const std::size_t n = y.size();
    const double mean_y =
        stable_sum(std::vector<double>(y.begin(), y.end())) / static_cast<double>(n);

    // Constant features are excluded from the solve and pinned at weight 0.
    std::vector<std::size_t> active;
    for (std::size_t i = 0; i < s.columns.size(); ++i) {
        if (!s.constant[i]) active.push_back(i);
    }

    std::vector<double> solution;
    if (!active.empty()) {
        const std::size_t d = active.size();
        std::vector<std::vector<double>> gram(d, std::vector<double>(d, 0.0));
        std::vector<double> rhs(d, 0.0);
        std::vector<double> products(n);
        for (std::size_t a = 0; a < d; ++a) {
            const auto& za = s.columns[active[a]];
            for (std::size_t b = a; b < d; ++b) {
                const auto& zb = s.columns[active[b]];
                for (std::size_t j = 0; j < n; ++j) products[j] = za[j] * zb[j];
                const double value = stable_sum(products) / static_cast<double>(n);
                gram[a][b] = value;
                gram[b][a] = value;
            }
            gram[a][a] += l2;
            for (std::size_t j = 0; j < n; ++j) products[j] = za[j] * (y[j] - mean_y);
            rhs[a] = stable_sum(products) / static_cast<double>(n);
        }
        solution = solve_linear_system(std::move(gram), std::move(rhs));
    }

    model.weights.assign(s.columns.size(), 0.0);
    for (std::size_t a = 0; a < active.size(); ++a) model.weights[active[a]] = solution[a];
    model.bias = mean_y;  // columns are zero-mean, so the intercept decouples
}

void apply_gradient_step(std::vector<double>& w, double& b, const Objective& obj,
                         double lr) {
    for (std::size_t i = 0; i < w.size(); ++i) w[i] -= lr * obj.grad_weights[i];
    b -= lr * obj.grad_bias;
}

void check_finite(double loss, const std::vector<double>& w, double b, int epoch) {
    bool ok = std::isfinite(loss) && std::isfinite(b);
    for (double v : w) ok = ok && std::isfinite(v);
    if (!ok) {
        throw NonFiniteLoss("training diverged at epoch " + std::to_string(epoch) +
                            "; lower the learning rate");
    }
}

}  // namespace

double stable_sum(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    double acc = 0.0;
    for (double v : values) acc += v;
    return acc;
}

std::string to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::Linear: return "linear";
        case ModelKind::Logistic: return "logistic";
        case ModelKind::Svm: return "svm";
    }
    return "logistic";
}

ModelKind model_kind_from_string(const std::string& s) {
    if (s == "linear") return ModelKind::Linear;
    if (s == "logistic") return ModelKind::Logistic;
    if (s == "svm") return ModelKind::Svm;
    throw InvalidConfig("unknown classifier kind: " + s);
}

void TrainConfig::validate() const {
    if (!(learning_rate > 0.0)) throw InvalidConfig("learning-rate must be positive");
    if (epochs < 1) throw InvalidConfig("epochs must be >= 1");
    if (l2 < 0.0) throw InvalidConfig("l2 must be nonnegative");
    if (!(margin_cost > 0.0)) throw InvalidConfig("svm-cost must be positive");
}

Objective logistic_objective(const std::vector<std::vector<double>>& rows,
                             const std::vector<int>& labels,
                             const std::vector<double>& weights, double bias, double l2) {
    const std::size_t n = rows.size();
    const std::size_t d = weights.size();
    Objective obj;
    obj.grad_weights.assign(d, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        double s = bias;
        for (std::size_t i = 0; i < d; ++i) s += weights[i] * rows[j][i];
        obj.loss += log1pexp(s) - labels[j] * s;
        const double residual = sigmoid(s) - labels[j];
        for (std::size_t i = 0; i < d; ++i) obj.grad_weights[i] += residual * rows[j][i];
        obj.grad_bias += residual;
    }
    const double inv_n = 1.0 / static_cast<double>(n);
    obj.loss *= inv_n;
    obj.grad_bias *= inv_n;
    for (std::size_t i = 0; i < d; ++i) {
        obj.grad_weights[i] = obj.grad_weights[i] * inv_n + l2 * weights[i];
        obj.loss += 0.5 * l2 * weights[i] * weights[i];
    }
    return obj;
}

Objective hinge_objective(const std::vector<std::vector<double>>& rows,
                          const std::vector<int>& labels,
                          const std::vector<double>& weights, double bias,
                          double margin_cost, double l2) {
    const std::size_t n = rows.size();
    const std::size_t d = weights.size();
    Objective obj;
    obj.grad_weights.assign(d, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        const double y = labels[j] == 1 ? 1.0 : -1.0;
        double s = bias;
        for (std::size_t i = 0; i < d; ++i) s += weights[i] * rows[j][i];
        const double margin = 1.0 - y * s;
        if (margin > 0.0) {
            obj.loss += margin;
            for (std::size_t i = 0; i < d; ++i) obj.grad_weights[i] -= y * rows[j][i];
            obj.grad_bias -= y;
        }
    }
    const double scale = margin_cost / static_cast<double>(n);
    obj.loss *= scale;
    obj.grad_bias *= scale;
    for (std::size_t i = 0; i < d; ++i) {
        obj.grad_weights[i] = obj.grad_weights[i] * scale + l2 * weights[i];
        obj.loss += 0.5 * l2 * weights[i] * weights[i];
    }
    return obj;
}

LinearModel train(const Dataset& d, const TrainConfig& cfg) {
    cfg.validate();
    if (d.n() < 2) throw DegenerateData("need at least 2 training points");
    const std::vector<int> y = d.labels();
    const bool all_same = std::all_of(y.begin(), y.end(), [&](int v) { return v == y[0]; });
    if (all_same) throw DegenerateData("all training targets are identical");

    Standardized s = standardize(d);
    if (s.columns.empty()) throw DegenerateData("no unprotected features to train on");

    LinearModel model;
    model.kind = cfg.kind;
    model.feature_names = s.names;
    model.means = s.means;
    model.scales = s.scales;

    if (cfg.kind == ModelKind::Linear) {
        train_linear(s, y, cfg.l2, model);
        return model;
    }

    const auto rows = to_rows(s);
    std::vector<double> w(s.columns.size(), 0.0);
    double b = 0.0;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        Objective obj = cfg.kind == ModelKind::Logistic
                            ? logistic_objective(rows, y, w, b, cfg.l2)
                            : hinge_objective(rows, y, w, b, cfg.margin_cost, cfg.l2);
        check_finite(obj.loss, w, b, epoch);
        apply_gradient_step(w, b, obj, cfg.learning_rate);
    }
    check_finite(0.0, w, b, cfg.epochs);

    // Constant features carry no signal and keep weight exactly 0.
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (s.constant[i]) w[i] = 0.0;
    }
    model.weights = std::move(w);
    model.bias = b;
    return model;
}

std::vector<double> score(const LinearModel& m, const Dataset& d) {
    const auto idx = d.unprotected_indices();
    if (idx.size() != m.feature_names.size()) {
        throw SchemaMismatch("model expects " + std::to_string(m.feature_names.size()) +
                             " unprotected features, dataset has " + std::to_string(idx.size()));
    }
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (d.spec(idx[i]).name != m.feature_names[i]) {
            throw SchemaMismatch("feature mismatch at position " + std::to_string(i) + ": '" +
                                 d.spec(idx[i]).name + "' vs '" + m.feature_names[i] + "'");
        }
    }

    std::vector<double> out(d.n(), m.bias);
    for (std::size_t i = 0; i < idx.size(); ++i) {
        const auto& col = d.column(idx[i]);
        const double w = m.weights[i] / m.scales[i];
        const double shift = m.weights[i] * m.means[i] / m.scales[i];
        for (std::size_t j = 0; j < d.n(); ++j) out[j] += w * col[j] - shift;
    }
    if (m.kind == ModelKind::Logistic) {
        for (double& v : out) v = sigmoid(v);
    }
    return out;
}

int threshold_score(ModelKind kind, double s) {
    switch (kind) {
        case ModelKind::Linear: return s >= 0.5 ? 1 : 0;
        case ModelKind::Logistic: return s >= 0.5 ? 1 : 0;
        case ModelKind::Svm: return s >= 0.0 ? 1 : 0;
    }
    return 0;
}

std::vector<int> predict(const LinearModel& m, const Dataset& d) {
    const std::vector<double> scores = score(m, d);
    std::vector<int> labels(scores.size());
    for (std::size_t j = 0; j < scores.size(); ++j) {
        labels[j] = threshold_score(m.kind, scores[j]);
    }
    return labels;
}

void save_model(const LinearModel& m, const std::string& path) {
    std::string out = "fairgroup-model v1\n";
    out += "kind " + to_string(m.kind) + "\n";
    out += "features " + std::to_string(m.feature_names.size()) + "\n";
    for (std::size_t i = 0; i < m.feature_names.size(); ++i) {
        out += "feature " + m.feature_names[i] + " " + fmt_double(m.weights[i]) + " " +
               fmt_double(m.means[i]) + " " + fmt_double(m.scales[i]) + "\n";
    }
    out += "bias " + fmt_double(m.bias) + "\n";
    write_file(path, out);
}

LinearModel load_model(const std::string& path) {
    const std::string text = read_file(path);
    auto lines = split(text, '\n');
    if (lines.empty() || trim(lines[0]) != "fairgroup-model v1") {
        throw ParseError(0, "model", "bad header");
    }
    LinearModel m;
    std::size_t expected = 0;
    const auto number = [](std::string_view text, std::size_t ln) {
        auto v = parse_double(text);
        if (!v) throw ParseError(ln, "model", "bad number: '" + std::string(text) + "'");
        return *v;
    };
    for (std::size_t ln = 1; ln < lines.size(); ++ln) {
        const std::string_view line = trim(lines[ln]);
        if (line.empty()) continue;
        auto parts = split(line, ' ');
        const std::string_view key = parts[0];
        if (key == "kind" && parts.size() == 2) {
            m.kind = model_kind_from_string(std::string(parts[1]));
        } else if (key == "features" && parts.size() == 2) {
            auto v = parse_int(parts[1]);
            if (!v || *v < 0) throw ParseError(ln, "model", "bad feature count");
            expected = static_cast<std::size_t>(*v);
        } else if (key == "feature" && parts.size() == 5) {
            m.feature_names.emplace_back(parts[1]);
            m.weights.push_back(number(parts[2], ln));
            m.means.push_back(number(parts[3], ln));
            m.scales.push_back(number(parts[4], ln));
        } else if (key == "bias" && parts.size() == 2) {
            m.bias = number(parts[1], ln);
        } else {
            throw ParseError(ln, "model", "unrecognized line");
        }
    }
    if (m.feature_names.size() != expected) {
        throw ParseError(0, "model", "feature count mismatch");
    }
    return m;
}

}  // namespace fairgroup
