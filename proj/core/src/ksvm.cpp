#include "l1ksvm/ksvm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "json_util.hpp"
#include "l1ksvm/error.hpp"

namespace l1ksvm {

namespace {

inline double ipow(double base, int d) {
  double r = 1.0;
  for (int k = 0; k < d; ++k) r *= base;
  return r;
}

double resolved_gamma(const KernelParams& k) {
  if (!k.gamma) throw Error("kernel gamma is unresolved");
  return *k.gamma;
}

// Applies the polynomial map elementwise to a matrix of inner products.
void polynomial_in_place(Eigen::MatrixXd& dots, const KernelParams& k) {
  const double g = resolved_gamma(k);
  dots = dots.unaryExpr([&](double v) { return ipow(g * v + k.coef0, k.degree); });
}

Eigen::MatrixXd restrict_columns(const Eigen::MatrixXd& x, std::span<const std::size_t> cols) {
  Eigen::MatrixXd out(x.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) out.col(static_cast<Eigen::Index>(k)) = x.col(cols[k]);
  return out;
}

Eigen::MatrixXd standardized_subset(const KsvmModel& model, const Eigen::MatrixXd& raw) {
  if (static_cast<std::size_t>(raw.cols()) != model.n_input_features)
    throw Error("ksvm: model expects " + std::to_string(model.n_input_features) + " input features, got " +
                std::to_string(raw.cols()));
  return model.standardizer.transform(restrict_columns(raw, model.feature_subset));
}

Eigen::VectorXd scores_of(const KsvmModel& model, const Eigen::MatrixXd& raw) {
  const Eigen::MatrixXd xs = standardized_subset(model, raw);
  if (model.dual_coefs.size() == 0) return Eigen::VectorXd::Constant(xs.rows(), model.bias);
  Eigen::MatrixXd k = xs * model.support_vectors.transpose();
  polynomial_in_place(k, model.kernel);
  const Eigen::VectorXd coef = model.dual_coefs.cwiseProduct(model.sv_labels);
  return (k * coef).array() + model.bias;
}

}  // namespace

void KernelParams::validate() const {
  if (degree < 1) throw ConfigError("kernel: degree must be >= 1");
  if (gamma && !(*gamma > 0.0)) throw ConfigError("kernel: gamma must be > 0");
}

void KsvmParams::validate() const {
  kernel.validate();
  if (!(box_c > 0.0)) throw ConfigError("ksvm: box_c must be > 0");
  if (!(tol > 0.0)) throw ConfigError("ksvm: tol must be > 0");
  if (max_passes < 1) throw ConfigError("ksvm: max_passes must be >= 1");
}

double kernel_eval(std::span<const double> x, std::span<const double> z, const KernelParams& k) {
  if (x.size() != z.size()) throw Error("kernel_eval: length mismatch");
  const double dot = std::inner_product(x.begin(), x.end(), z.begin(), 0.0);
  return ipow(resolved_gamma(k) * dot + k.coef0, k.degree);
}

Eigen::MatrixXd gram_matrix(const Eigen::MatrixXd& rows, const KernelParams& k) {
  Eigen::MatrixXd g = rows * rows.transpose();
  polynomial_in_place(g, k);
  // Exact symmetry regardless of how the product was blocked.
  for (Eigen::Index i = 0; i < g.rows(); ++i)
    for (Eigen::Index j = 0; j < i; ++j) g(j, i) = g(i, j);
  return g;
}

KsvmModel fit_ksvm(const ExpressionMatrix& train, const KsvmParams& params,
                   std::span<const std::size_t> feature_subset) {
  params.validate();
  const auto y = train.signed_targets();
  if (train.class_count(0) == 0 || train.class_count(1) == 0)
    throw Error("fit_ksvm: training data must contain both classes");
  if (!train.all_finite()) throw Error("fit_ksvm: training data contains non-finite values");

  KsvmModel model;
  model.n_input_features = train.n_features();
  if (feature_subset.empty()) {
    model.feature_subset.resize(train.n_features());
    std::iota(model.feature_subset.begin(), model.feature_subset.end(), std::size_t{0});
  } else {
    model.feature_subset.assign(feature_subset.begin(), feature_subset.end());
  }
  for (auto j : model.feature_subset) {
    if (j >= train.n_features()) throw Error("fit_ksvm: feature index out of range");
    model.feature_names.push_back(train.feature_names()[j]);
  }
  model.classes = {train.class_names()[0], train.class_names()[1]};
  model.box_c = params.box_c;

  const Eigen::MatrixXd raw = restrict_columns(train.values(), model.feature_subset);
  model.standardizer = Standardizer::fit(raw, Scaling::zscore);
  const Eigen::MatrixXd xs = model.standardizer.transform(raw);

  model.kernel = params.kernel;
  if (!model.kernel.gamma) {
    const Eigen::Index n = xs.rows();
    double mean_var = 0.0;
    if (n > 1) {
      for (Eigen::Index j = 0; j < xs.cols(); ++j) {
        const double m = xs.col(j).mean();
        mean_var += (xs.col(j).array() - m).square().sum() / static_cast<double>(n - 1);
      }
      mean_var /= static_cast<double>(xs.cols());
    }
    if (!(mean_var > 0.0)) mean_var = 1.0;
    model.kernel.gamma = 1.0 / (static_cast<double>(xs.cols()) * mean_var);
  }

  const Eigen::Index n = xs.rows();
  const Eigen::MatrixXd k = gram_matrix(xs, model.kernel);
  const double c = params.box_c;
  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd grad = Eigen::VectorXd::Constant(n, -1.0);  // Q alpha - 1
  auto in_up = [&](Eigen::Index t) { return y[t] > 0 ? alpha(t) < c : alpha(t) > 0; };
  auto in_low = [&](Eigen::Index t) { return y[t] > 0 ? alpha(t) > 0 : alpha(t) < c; };

  const long max_iter = static_cast<long>(params.max_passes) * std::max<long>(static_cast<long>(n), 1000);
  long iter = 0;
  bool converged = false;
  for (; iter < max_iter; ++iter) {
    Eigen::Index i = -1, j = -1;
    double up_max = -std::numeric_limits<double>::infinity();
    double low_min = std::numeric_limits<double>::infinity();
    for (Eigen::Index t = 0; t < n; ++t) {
      const double v = -y[t] * grad(t);
      if (in_up(t) && v > up_max) {
        up_max = v;
        i = t;
      }
      if (in_low(t) && v < low_min) {
        low_min = v;
        j = t;
      }
    }
    if (i < 0 || j < 0 || up_max - low_min <= params.tol) {
      converged = true;
      break;
    }
    double eta = k(i, i) + k(j, j) - 2.0 * k(i, j);
    if (eta <= 0.0) eta = 1e-12;
    const double cap_i = y[i] > 0 ? c - alpha(i) : alpha(i);
    const double cap_j = y[j] > 0 ? alpha(j) : c - alpha(j);
    const double lambda = std::min({(up_max - low_min) / eta, cap_i, cap_j});

    if (lambda == cap_i)
      alpha(i) = y[i] > 0 ? c : 0.0;
    else
      alpha(i) += y[i] * lambda;
    if (lambda == cap_j)
      alpha(j) = y[j] > 0 ? 0.0 : c;
    else
      alpha(j) -= y[j] * lambda;
    alpha(i) = std::clamp(alpha(i), 0.0, c);
    alpha(j) = std::clamp(alpha(j), 0.0, c);

    for (Eigen::Index t = 0; t < n; ++t) grad(t) += y[t] * lambda * (k(t, i) - k(t, j));
  }

  double free_sum = 0.0;
  int n_free = 0;
  double lb = -std::numeric_limits<double>::infinity();
  double ub = std::numeric_limits<double>::infinity();
  for (Eigen::Index t = 0; t < n; ++t) {
    const double v = -y[t] * grad(t);
    if (alpha(t) > 0.0 && alpha(t) < c) {
      free_sum += v;
      ++n_free;
    } else if (in_up(t)) {
      lb = std::max(lb, v);
    } else {
      ub = std::min(ub, v);
    }
  }
  if (n_free > 0)
    model.bias = free_sum / n_free;
  else if (std::isfinite(lb) && std::isfinite(ub))
    model.bias = 0.5 * (lb + ub);
  else
    model.bias = std::isfinite(lb) ? lb : (std::isfinite(ub) ? ub : 0.0);

  std::vector<Eigen::Index> sv;
  for (Eigen::Index t = 0; t < n; ++t)
    if (alpha(t) > 0.0) sv.push_back(t);
  model.support_vectors.resize(static_cast<Eigen::Index>(sv.size()), xs.cols());
  model.dual_coefs.resize(static_cast<Eigen::Index>(sv.size()));
  model.sv_labels.resize(static_cast<Eigen::Index>(sv.size()));
  for (std::size_t s = 0; s < sv.size(); ++s) {
    const auto r = static_cast<Eigen::Index>(s);
    model.support_vectors.row(r) = xs.row(sv[s]);
    model.dual_coefs(r) = alpha(sv[s]);
    model.sv_labels(r) = y[sv[s]];
    model.sv_rows.push_back(static_cast<std::size_t>(sv[s]));
  }
  model.converged = converged;
  model.iterations = iter;
  return model;
}

double decision_function(const KsvmModel& model, std::span<const double> x) {
  if (x.size() != model.n_input_features)
    throw Error("decision_function: expected " + std::to_string(model.n_input_features) + " features, got " +
                std::to_string(x.size()));
  const Eigen::Map<const Eigen::RowVectorXd> row(x.data(), static_cast<Eigen::Index>(x.size()));
  return scores_of(model, Eigen::MatrixXd(row))(0);
}

std::vector<double> decision_scores(const KsvmModel& model, const ExpressionMatrix& x) {
  const Eigen::VectorXd s = scores_of(model, x.values());
  return {s.data(), s.data() + s.size()};
}

std::vector<std::string> predict_ksvm(const KsvmModel& model, const ExpressionMatrix& x) {
  const Eigen::VectorXd s = scores_of(model, x.values());
  std::vector<std::string> out;
  out.reserve(static_cast<std::size_t>(s.size()));
  for (Eigen::Index i = 0; i < s.size(); ++i) out.push_back(s(i) >= 0.0 ? model.classes[1] : model.classes[0]);
  return out;
}

double dual_objective(const KsvmModel& model) {
  if (model.dual_coefs.size() == 0) return 0.0;
  const Eigen::MatrixXd k = gram_matrix(model.support_vectors, model.kernel);
  const Eigen::VectorXd ay = model.dual_coefs.cwiseProduct(model.sv_labels);
  return model.dual_coefs.sum() - 0.5 * ay.dot(k * ay);
}

KktCertificate check_kkt(const KsvmModel& model, const ExpressionMatrix& train, double tol) {
  const auto y = train.signed_targets();
  const Eigen::VectorXd f = scores_of(model, train.values());
  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(train.n_samples()));
  for (std::size_t s = 0; s < model.sv_rows.size(); ++s) {
    if (model.sv_rows[s] >= train.n_samples()) throw Error("check_kkt: model rows exceed training data");
    alpha(static_cast<Eigen::Index>(model.sv_rows[s])) = model.dual_coefs(static_cast<Eigen::Index>(s));
  }
  double worst = 0.0;
  double balance = 0.0;
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    const double margin = y[i] * f(i);
    const double a = alpha(i);
    double v;
    if (a <= 0.0)
      v = std::max(0.0, 1.0 - margin);
    else if (a >= model.box_c)
      v = std::max(0.0, margin - 1.0);
    else
      v = std::abs(margin - 1.0);
    worst = std::max(worst, v);
    balance += a * y[i];
    if (a < 0.0 || a > model.box_c) worst = std::numeric_limits<double>::infinity();
  }
  worst = std::max(worst, std::abs(balance));
  return {worst <= tol, worst};
}

void to_json(nlohmann::json& j, const KernelParams& p) {
  j = nlohmann::json{{"degree", p.degree}, {"coef0", p.coef0}};
  j["gamma"] = p.gamma ? nlohmann::json(*p.gamma) : nlohmann::json("auto");
}

void from_json(const nlohmann::json& j, KernelParams& p) {
  constexpr std::string_view where = "kernel";
  detail::reject_unknown_keys(j, {"degree", "gamma", "coef0"}, where);
  detail::read_opt(j, "degree", p.degree, where);
  detail::read_opt(j, "coef0", p.coef0, where);
  if (j.contains("gamma")) {
    const auto& g = j.at("gamma");
    if (g.is_string() && g.get<std::string>() == "auto")
      p.gamma.reset();
    else if (g.is_number())
      p.gamma = g.get<double>();
    else
      throw ConfigError("kernel.gamma: expected a number or \"auto\"");
  }
  p.validate();
}

nlohmann::json ksvm_to_json(const KsvmModel& model) {
  nlohmann::json svs = nlohmann::json::array();
  for (Eigen::Index r = 0; r < model.support_vectors.rows(); ++r) {
    std::vector<double> row(model.support_vectors.cols());
    for (Eigen::Index c = 0; c < model.support_vectors.cols(); ++c) row[c] = model.support_vectors(r, c);
    svs.push_back(row);
  }
  return {{"format", "l1ksvm.ksvm_model"},
          {"version", 1},
          {"support_vectors", svs},
          {"alpha", std::vector<double>(model.dual_coefs.data(), model.dual_coefs.data() + model.dual_coefs.size())},
          {"y", std::vector<double>(model.sv_labels.data(), model.sv_labels.data() + model.sv_labels.size())},
          {"sv_rows", model.sv_rows},
          {"bias", model.bias},
          {"kernel", model.kernel},
          {"box_c", model.box_c},
          {"standardizer", model.standardizer},
          {"feature_subset", model.feature_subset},
          {"feature_names", model.feature_names},
          {"n_input_features", model.n_input_features},
          {"classes", model.classes},
          {"converged", model.converged},
          {"iterations", model.iterations}};
}

KsvmModel ksvm_from_json(const nlohmann::json& j) {
  if (j.value("format", "") != "l1ksvm.ksvm_model") throw Error("ksvm json: wrong format tag");
  if (j.value("version", 0) != 1) throw Error("ksvm json: unsupported version");
  KsvmModel m;
  const auto alpha = j.at("alpha").get<std::vector<double>>();
  const auto y = j.at("y").get<std::vector<double>>();
  const auto svs = j.at("support_vectors").get<std::vector<std::vector<double>>>();
  m.feature_subset = j.at("feature_subset").get<std::vector<std::size_t>>();
  if (alpha.size() != svs.size() || y.size() != svs.size()) throw Error("ksvm json: inconsistent lengths");
  const auto q = static_cast<Eigen::Index>(m.feature_subset.size());
  m.support_vectors.resize(static_cast<Eigen::Index>(svs.size()), q);
  for (std::size_t r = 0; r < svs.size(); ++r) {
    if (static_cast<Eigen::Index>(svs[r].size()) != q) throw Error("ksvm json: support vector width mismatch");
    for (Eigen::Index c = 0; c < q; ++c) m.support_vectors(static_cast<Eigen::Index>(r), c) = svs[r][c];
  }
  m.dual_coefs = Eigen::Map<const Eigen::VectorXd>(alpha.data(), static_cast<Eigen::Index>(alpha.size()));
  m.sv_labels = Eigen::Map<const Eigen::VectorXd>(y.data(), static_cast<Eigen::Index>(y.size()));
  m.sv_rows = j.at("sv_rows").get<std::vector<std::size_t>>();
  m.bias = j.at("bias").get<double>();
  m.kernel = j.at("kernel").get<KernelParams>();
  if (!m.kernel.gamma) throw Error("ksvm json: gamma must be resolved");
  m.box_c = j.at("box_c").get<double>();
  m.standardizer = j.at("standardizer").get<Standardizer>();
  m.feature_names = j.at("feature_names").get<std::vector<std::string>>();
  m.n_input_features = j.at("n_input_features").get<std::size_t>();
  m.classes = j.at("classes").get<std::array<std::string, 2>>();
  m.converged = j.at("converged").get<bool>();
  m.iterations = j.at("iterations").get<long>();
  return m;
}

}  // namespace l1ksvm
