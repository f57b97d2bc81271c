#include "l1ksvm/plot.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "l1ksvm/error.hpp"

namespace l1ksvm {

namespace {

constexpr double kWidth = 640, kHeight = 420;
constexpr double kLeft = 70, kRight = 170, kTop = 40, kBottom = 60;

const char* colour(Method m) {
  switch (m) {
    case Method::l1ksvm_aug: return "#1f77b4";
    case Method::l1ksvm_noaug: return "#ff7f0e";
    case Method::baseline_lasso: return "#2ca02c";
  }
  return "#000000";
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Series {
  Method method;
  std::vector<double> x, y, err;
};

struct Axes {
  double x0, x1, y0, y1;
  double px(double x) const { return kLeft + (x - x0) / (x1 - x0) * (kWidth - kLeft - kRight); }
  double py(double y) const { return kHeight - kBottom - (y - y0) / (y1 - y0) * (kHeight - kTop - kBottom); }
};

std::string fmt(double v) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(2);
  os << v;
  return os.str();
}

std::string draw(const std::string& title, const std::string& ylabel, const std::vector<Series>& series,
                 bool clamp_percent) {
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, s.y[i] - s.err[i]);
      ymax = std::max(ymax, s.y[i] + s.err[i]);
    }
  if (xmax <= xmin) { xmin -= 1; xmax += 1; }
  if (ymax <= ymin) { ymin -= 1; ymax += 1; }
  const double pad = 0.05 * (ymax - ymin);
  ymin -= pad;
  ymax += pad;
  if (clamp_percent) {
    ymin = std::max(ymin, 0.0);
    ymax = std::min(ymax, 100.0);
  } else {
    ymin = std::max(ymin, 0.0);
  }
  const Axes ax{xmin - 0.03 * (xmax - xmin), xmax + 0.03 * (xmax - xmin), ymin, ymax};
  auto cy = [&](double y) { return ax.py(std::clamp(y, ymin, ymax)); };

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
     << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n"
     << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << escape(title)
     << "</text>\n";
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  os << "<rect class=\"plot-area\" x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";

  for (int t = 0; t <= 4; ++t) {
    const double v = ymin + (ymax - ymin) * t / 4.0;
    const double y = ax.py(v);
    os << "<line x1=\"" << kLeft - 4 << "\" y1=\"" << fmt(y) << "\" x2=\"" << kLeft << "\" y2=\"" << fmt(y)
       << "\" stroke=\"black\"/>\n"
       << "<text x=\"" << kLeft - 8 << "\" y=\"" << fmt(y + 4) << "\" text-anchor=\"end\" font-size=\"11\">"
       << fmt(v) << "</text>\n";
  }
  std::set<double> ticks;
  for (const auto& s : series) ticks.insert(s.x.begin(), s.x.end());
  for (double v : ticks) {
    const double x = ax.px(v);
    os << "<line x1=\"" << fmt(x) << "\" y1=\"" << kTop + ph << "\" x2=\"" << fmt(x) << "\" y2=\"" << kTop + ph + 4
       << "\" stroke=\"black\"/>\n"
       << "<text x=\"" << fmt(x) << "\" y=\"" << kTop + ph + 18 << "\" text-anchor=\"middle\" font-size=\"11\">" << v
       << "</text>\n";
  }
  os << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 16
     << "\" text-anchor=\"middle\" font-size=\"12\">training samples per class</text>\n"
     << "<text x=\"18\" y=\"" << kTop + ph / 2 << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 18 "
     << kTop + ph / 2 << ")\">" << escape(ylabel) << "</text>\n";

  for (const auto& s : series) {
    const char* c = colour(s.method);
    os << "<g class=\"series\" data-method=\"" << method_name(s.method) << "\">\n";
    if (s.x.size() > 1) {
      os << "<polygon class=\"band\" fill=\"" << c << "\" fill-opacity=\"0.18\" stroke=\"none\" points=\"";
      for (std::size_t i = 0; i < s.x.size(); ++i) os << fmt(ax.px(s.x[i])) << ',' << fmt(cy(s.y[i] + s.err[i])) << ' ';
      for (std::size_t i = s.x.size(); i-- > 0;) os << fmt(ax.px(s.x[i])) << ',' << fmt(cy(s.y[i] - s.err[i])) << ' ';
      os << "\"/>\n<polyline fill=\"none\" stroke=\"" << c << "\" stroke-width=\"2\" points=\"";
      for (std::size_t i = 0; i < s.x.size(); ++i) os << fmt(ax.px(s.x[i])) << ',' << fmt(cy(s.y[i])) << ' ';
      os << "\"/>\n";
    }
    for (std::size_t i = 0; i < s.x.size(); ++i)
      os << "<circle cx=\"" << fmt(ax.px(s.x[i])) << "\" cy=\"" << fmt(cy(s.y[i])) << "\" r=\"3\" fill=\"" << c
         << "\"/>\n";
    os << "</g>\n";
  }

  double ly = kTop + 10;
  for (const auto& s : series) {
    const double lx = kWidth - kRight + 15;
    os << "<line x1=\"" << lx << "\" y1=\"" << ly << "\" x2=\"" << lx + 20 << "\" y2=\"" << ly << "\" stroke=\""
       << colour(s.method) << "\" stroke-width=\"2\"/>\n"
       << "<text x=\"" << lx + 26 << "\" y=\"" << ly + 4 << "\" font-size=\"11\">" << method_name(s.method)
       << "</text>\n";
    ly += 18;
  }
  os << "</svg>\n";
  return os.str();
}

std::string safe_file_part(const std::string& s) {
  std::string out;
  for (char c : s) out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') ? c : '_';
  return out;
}

}  // namespace

std::vector<Figure> render_figures(std::span<const SummaryRow> rows) {
  if (rows.empty()) throw Error("cannot plot an empty summary");
  // scenario -> method -> size -> row
  std::map<std::string, std::map<Method, std::map<std::size_t, const SummaryRow*>>> by;
  for (const auto& r : rows) by[r.scenario][r.method][r.size] = &r;

  auto series_of = [](const std::map<Method, std::map<std::size_t, const SummaryRow*>>& m, bool features) {
    std::vector<Series> out;
    for (const auto& [method, sizes] : m) {
      Series s{method, {}, {}, {}};
      for (const auto& [size, row] : sizes) {
        s.x.push_back(static_cast<double>(size));
        s.y.push_back(features ? row->features_mean : row->acc_mean);
        s.err.push_back(features ? row->features_std : row->acc_std);
      }
      out.push_back(std::move(s));
    }
    return out;
  };

  std::vector<Figure> figures;
  for (const auto& [scenario, methods] : by) {
    if (scenario == kPooledScenario) continue;
    figures.push_back({"accuracy_" + safe_file_part(scenario) + ".svg",
                       draw("Accuracy: " + scenario, "accuracy (%)", series_of(methods, false), true)});
  }
  // Fall back to per-scenario rows when the summary has no pooled group.
  const auto pooled = by.find(kPooledScenario);
  const auto& feature_src = pooled != by.end() ? pooled->second : by.begin()->second;
  figures.push_back({"features.svg", draw("Selected features (all scenarios)", "selected features",
                                          series_of(feature_src, true), false)});
  if (pooled != by.end() && by.size() == 1)
    figures.insert(figures.begin(),
                   Figure{"accuracy_all.svg", draw("Accuracy: all scenarios", "accuracy (%)",
                                                   series_of(pooled->second, false), true)});
  return figures;
}

std::vector<std::filesystem::path> render_plots(std::span<const SummaryRow> rows, const std::filesystem::path& out_dir) {
  auto figures = render_figures(rows);
  std::filesystem::create_directories(out_dir);
  std::vector<std::filesystem::path> written;
  for (const auto& f : figures) {
    const auto path = out_dir / f.name;
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << f.svg;
    written.push_back(path);
  }
  return written;
}

}  // namespace l1ksvm
