#include "l1ksvm/lasso.hpp"

#include <algorithm>
#include <cmath>

#include "json_util.hpp"
#include "l1ksvm/error.hpp"

namespace l1ksvm {

namespace {

// log(1 + exp(-t)), stable for either sign of t.
inline double log_loss(double t) { return t > 0 ? std::log1p(std::exp(-t)) : -t + std::log1p(std::exp(t)); }

// sigma(-t) = 1 / (1 + exp(t))
inline double sigma_neg(double t) {
  if (t >= 0) {
    const double e = std::exp(-t);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(t));
}

inline double sgn(double v) { return (v > 0) - (v < 0); }

inline double violation(double w, double g) {
  if (w == 0.0) return std::max(0.0, std::abs(g) - 1.0);
  return std::abs(g + sgn(w));
}

constexpr double kArmijo = 0.01;
constexpr int kMaxLineSearch = 40;
constexpr int kMaxInnerPasses = 100;
constexpr double kMinCurvature = 1e-12;

// Proximal Newton: each outer iteration minimizes the local quadratic model of
// the logistic term plus the exact L1 term by coordinate descent over the
// working set, then takes an Armijo line search along the resulting direction.
class NewtonSolver {
 public:
  NewtonSolver(const Eigen::MatrixXd& xs, std::span<const double> y, const std::vector<bool>& frozen,
               const LassoParams& params)
      : xs_(xs), frozen_(frozen), c_(params.inverse_reg_c), fit_intercept_(params.fit_intercept) {
    const auto n = xs.rows();
    y_ = Eigen::Map<const Eigen::VectorXd>(y.data(), n);
    w_ = Eigen::VectorXd::Zero(xs.cols());
    m_ = Eigen::VectorXd::Zero(n);
    r_.resize(n);
    dw_.resize(n);
    refresh();
  }

  double objective() const { return c_ * loss_ + w_.lpNorm<1>(); }

  void run(const LassoParams& params, LassoModel& model, LassoTrace* trace) {
    if (trace) trace->objective.push_back(objective());
    int outer = 0;
    double viol = gradient_and_violation();
    bool converged = viol <= params.tolerance;
    while (!converged && outer < params.max_iters) {
      ++outer;
      if (!newton_step(std::max(0.1 * viol, 0.5 * params.tolerance))) break;
      if (trace) trace->objective.push_back(objective());
      viol = gradient_and_violation();
      converged = viol <= params.tolerance;
    }
    model.weights = w_;
    model.intercept = b_;
    model.converged = converged;
    model.iterations = outer;
    model.max_violation = viol;
  }

 private:
  // Loss, residuals r = y sigma(-m) and curvature weights at the current margins.
  void refresh() {
    loss_ = 0.0;
    for (Eigen::Index i = 0; i < m_.size(); ++i) {
      loss_ += log_loss(m_(i));
      const double s = sigma_neg(m_(i));
      r_(i) = y_(i) * s;
      dw_(i) = c_ * s * (1.0 - s);
    }
  }

  double gradient_and_violation() {
    g_ = -c_ * (xs_.transpose() * r_);
    gb_ = fit_intercept_ ? -c_ * r_.sum() : 0.0;
    double v = std::abs(gb_);
    for (Eigen::Index j = 0; j < g_.size(); ++j)
      if (!frozen_[j]) v = std::max(v, violation(w_(j), g_(j)));
    return v;
  }

  bool newton_step(double inner_tol) {
    const auto n = xs_.rows();
    std::vector<Eigen::Index> work;
    for (Eigen::Index j = 0; j < w_.size(); ++j)
      if (!frozen_[j] && (w_(j) != 0.0 || std::abs(g_(j)) > 1.0)) work.push_back(j);

    std::vector<double> hdiag(work.size());
    for (std::size_t k = 0; k < work.size(); ++k)
      hdiag[k] = std::max(xs_.col(work[k]).cwiseAbs2().dot(dw_), kMinCurvature);
    const double hb = std::max(dw_.sum(), kMinCurvature);

    // u = X d + d_b, the direction in margin-free score space.
    Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
    std::vector<double> d(work.size(), 0.0);
    double db = 0.0;
    for (int pass = 0; pass < kMaxInnerPasses; ++pass) {
      double v = 0.0;
      if (fit_intercept_) {
        const double gq = gb_ + dw_.dot(u);
        v = std::abs(gq);
        const double step = -gq / hb;
        db += step;
        u.array() += step;
      }
      for (std::size_t k = 0; k < work.size(); ++k) {
        const auto col = xs_.col(work[k]);
        const double gq = g_(work[k]) + col.dot(dw_.cwiseProduct(u));
        const double wj = w_(work[k]) + d[k];
        v = std::max(v, violation(wj, gq));
        const double h = hdiag[k];
        double step;
        if (gq + 1.0 <= h * wj)
          step = -(gq + 1.0) / h;
        else if (gq - 1.0 >= h * wj)
          step = -(gq - 1.0) / h;
        else
          step = -wj;
        if (step != 0.0) {
          d[k] += step;
          u += step * col;
        }
      }
      if (v <= inner_tol) break;
    }

    double predicted = gb_ * db;
    for (std::size_t k = 0; k < work.size(); ++k) {
      const double w = w_(work[k]);
      predicted += g_(work[k]) * d[k] + std::abs(w + d[k]) - std::abs(w);
    }
    if (!(predicted < 0.0)) return false;

    const double base = objective();
    const Eigen::VectorXd yu = y_.cwiseProduct(u);
    Eigen::VectorXd trial(n);
    double lambda = 1.0;
    for (int t = 0; t < kMaxLineSearch; ++t) {
      trial = m_ + lambda * yu;
      double loss = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) loss += log_loss(trial(i));
      double l1 = w_.lpNorm<1>();
      for (std::size_t k = 0; k < work.size(); ++k) {
        const double w = w_(work[k]);
        l1 += std::abs(w + lambda * d[k]) - std::abs(w);
      }
      if (c_ * loss + l1 - base <= kArmijo * lambda * predicted) {
        for (std::size_t k = 0; k < work.size(); ++k) {
          // A full step lands coordinates on exact zeros; keep them there.
          const double w = w_(work[k]) + lambda * d[k];
          w_(work[k]) = (lambda == 1.0 && w_(work[k]) + d[k] == 0.0) ? 0.0 : w;
        }
        b_ += lambda * db;
        m_.swap(trial);
        refresh();
        return true;
      }
      lambda *= 0.5;
    }
    return false;
  }

  const Eigen::MatrixXd& xs_;
  const std::vector<bool>& frozen_;
  const double c_;
  const bool fit_intercept_;
  Eigen::VectorXd y_;
  Eigen::VectorXd w_;
  double b_ = 0.0;
  Eigen::VectorXd m_;   // margins y * (w.x + b)
  double loss_ = 0.0;   // sum of log(1 + exp(-m))
  Eigen::VectorXd r_;   // y * sigma(-m)
  Eigen::VectorXd dw_;  // c * sigma (1 - sigma)
  Eigen::VectorXd g_;
  double gb_ = 0.0;
};

const char* scaling_name(Scaling s) { return s == Scaling::zscore ? "zscore" : "center"; }

Scaling scaling_from_name(const std::string& s) {
  if (s == "zscore") return Scaling::zscore;
  if (s == "center") return Scaling::center;
  throw ConfigError("lasso.scaling: expected \"zscore\" or \"center\", got \"" + s + "\"");
}

Eigen::VectorXd scores_of(const LassoModel& model, const ExpressionMatrix& x) {
  if (x.n_features() != static_cast<std::size_t>(model.weights.size()))
    throw Error("lasso: model expects " + std::to_string(model.weights.size()) + " features, got " +
                std::to_string(x.n_features()));
  return model.standardizer.transform(x.values()) * model.weights +
         Eigen::VectorXd::Constant(static_cast<Eigen::Index>(x.n_samples()), model.intercept);
}

}  // namespace

void LassoParams::validate() const {
  if (!(inverse_reg_c > 0.0)) throw ConfigError("lasso: inverse_reg_c must be > 0");
  if (!(tolerance > 0.0)) throw ConfigError("lasso: tolerance must be > 0");
  if (max_iters < 1) throw ConfigError("lasso: max_iters must be >= 1");
}

LassoModel fit_lasso(const ExpressionMatrix& train, const LassoParams& params, LassoTrace* trace) {
  params.validate();
  const auto y = train.signed_targets();
  if (train.class_count(0) == 0 || train.class_count(1) == 0)
    throw Error("fit_lasso: training data must contain both classes");
  if (!train.all_finite()) throw Error("fit_lasso: training data contains non-finite values");

  LassoModel model;
  model.params = params;
  model.feature_names = train.feature_names();
  model.classes = {train.class_names()[0], train.class_names()[1]};
  model.standardizer = Standardizer::fit(train.values(), params.scaling);
  const Eigen::MatrixXd xs = model.standardizer.transform(train.values());

  NewtonSolver solver(xs, y, model.standardizer.constant, params);
  solver.run(params, model, trace);
  return model;
}

std::vector<double> lasso_scores(const LassoModel& model, const ExpressionMatrix& x) {
  const Eigen::VectorXd s = scores_of(model, x);
  return {s.data(), s.data() + s.size()};
}

std::vector<std::string> predict_lasso(const LassoModel& model, const ExpressionMatrix& x) {
  const Eigen::VectorXd s = scores_of(model, x);
  std::vector<std::string> out;
  out.reserve(static_cast<std::size_t>(s.size()));
  for (Eigen::Index i = 0; i < s.size(); ++i) out.push_back(s(i) >= 0.0 ? model.classes[1] : model.classes[0]);
  return out;
}

std::vector<std::size_t> nonzero_features(const LassoModel& model) {
  std::vector<std::size_t> idx;
  for (Eigen::Index j = 0; j < model.weights.size(); ++j)
    if (model.weights(j) != 0.0) idx.push_back(static_cast<std::size_t>(j));
  return idx;
}

double logistic_loss(const Eigen::MatrixXd& xs, std::span<const double> y, const Eigen::VectorXd& w, double b,
                     double c) {
  const Eigen::VectorXd t = xs * w;
  double loss = 0.0;
  for (Eigen::Index i = 0; i < t.size(); ++i) loss += log_loss(y[i] * (t(i) + b));
  return c * loss;
}

LogisticGradient logistic_loss_gradient(const Eigen::MatrixXd& xs, std::span<const double> y,
                                        const Eigen::VectorXd& w, double b, double c) {
  const Eigen::VectorXd t = xs * w;
  Eigen::VectorXd r(t.size());
  for (Eigen::Index i = 0; i < t.size(); ++i) r(i) = -c * y[i] * sigma_neg(y[i] * (t(i) + b));
  return {xs.transpose() * r, r.sum()};
}

double lasso_objective(const LassoModel& model, const ExpressionMatrix& x, std::span<const double> y) {
  const Eigen::MatrixXd xs = model.standardizer.transform(x.values());
  return logistic_loss(xs, y, model.weights, model.intercept, model.params.inverse_reg_c) +
         model.weights.lpNorm<1>();
}

OptimalityCertificate check_optimality(const LassoModel& model, const ExpressionMatrix& x, std::span<const double> y,
                                       double tol) {
  if (x.n_features() != static_cast<std::size_t>(model.weights.size()) || y.size() != x.n_samples())
    throw Error("check_optimality: dimension mismatch");
  const Eigen::MatrixXd xs = model.standardizer.transform(x.values());
  const auto g = logistic_loss_gradient(xs, y, model.weights, model.intercept, model.params.inverse_reg_c);
  double worst = model.params.fit_intercept ? std::abs(g.intercept) : 0.0;
  for (Eigen::Index j = 0; j < g.weights.size(); ++j) {
    const bool frozen = j < static_cast<Eigen::Index>(model.standardizer.constant.size()) &&
                        model.standardizer.constant[j];
    if (frozen && model.weights(j) == 0.0) continue;
    worst = std::max(worst, violation(model.weights(j), g.weights(j)));
  }
  return {worst <= tol, worst};
}

void to_json(nlohmann::json& j, const LassoParams& p) {
  j = nlohmann::json{{"inverse_reg_c", p.inverse_reg_c},
                     {"max_iters", p.max_iters},
                     {"tolerance", p.tolerance},
                     {"fit_intercept", p.fit_intercept},
                     {"scaling", scaling_name(p.scaling)}};
}

void from_json(const nlohmann::json& j, LassoParams& p) {
  constexpr std::string_view where = "lasso";
  detail::reject_unknown_keys(j, {"inverse_reg_c", "max_iters", "tolerance", "fit_intercept", "scaling"}, where);
  detail::read_opt(j, "inverse_reg_c", p.inverse_reg_c, where);
  detail::read_opt(j, "max_iters", p.max_iters, where);
  detail::read_opt(j, "tolerance", p.tolerance, where);
  detail::read_opt(j, "fit_intercept", p.fit_intercept, where);
  std::string scaling = scaling_name(p.scaling);
  detail::read_opt(j, "scaling", scaling, where);
  p.scaling = scaling_from_name(scaling);
  p.validate();
}

nlohmann::json lasso_to_json(const LassoModel& model) {
  return nlohmann::json{
      {"format", "l1ksvm.lasso_model"},
      {"version", 1},
      {"weights", std::vector<double>(model.weights.data(), model.weights.data() + model.weights.size())},
      {"intercept", model.intercept},
      {"params", model.params},
      {"standardizer", model.standardizer},
      {"feature_names", model.feature_names},
      {"classes", model.classes},
      {"converged", model.converged},
      {"iterations", model.iterations},
      {"max_violation", model.max_violation},
  };
}

LassoModel lasso_from_json(const nlohmann::json& j) {
  if (j.value("format", "") != "l1ksvm.lasso_model") throw Error("lasso json: wrong format tag");
  if (j.value("version", 0) != 1) throw Error("lasso json: unsupported version");
  LassoModel m;
  const auto w = j.at("weights").get<std::vector<double>>();
  m.weights = Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size()));
  m.intercept = j.at("intercept").get<double>();
  m.params = j.at("params").get<LassoParams>();
  m.standardizer = j.at("standardizer").get<Standardizer>();
  m.feature_names = j.at("feature_names").get<std::vector<std::string>>();
  m.classes = j.at("classes").get<std::array<std::string, 2>>();
  m.converged = j.at("converged").get<bool>();
  m.iterations = j.at("iterations").get<int>();
  m.max_violation = j.at("max_violation").get<double>();
  if (m.standardizer.size() != static_cast<std::size_t>(m.weights.size()) ||
      m.feature_names.size() != static_cast<std::size_t>(m.weights.size()))
    throw Error("lasso json: inconsistent lengths");
  return m;
}

}  // namespace l1ksvm
