#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hdgres/study.hpp"

namespace hdgres {

namespace {

struct Series {
  std::string label;
  std::string color;
  std::vector<double> x, y;
};

constexpr double kWidth = 640.0, kHeight = 480.0;
constexpr double kLeft = 70.0, kRight = 20.0, kTop = 20.0, kBottom = 50.0;

struct LogAxis {
  double lo = 0.0, hi = 1.0;  // log10 range
  void fit(const std::vector<Series>& data, bool horizontal) {
    double mn = 1e300, mx = -1e300;
    for (const Series& s : data) {
      const auto& v = horizontal ? s.x : s.y;
      for (double t : v) {
        if (t <= 0.0) continue;
        mn = std::min(mn, t);
        mx = std::max(mx, t);
      }
    }
    if (mn > mx) {
      mn = 1.0;
      mx = 10.0;
    }
    lo = std::floor(std::log10(mn));
    hi = std::ceil(std::log10(mx));
    if (hi <= lo) hi = lo + 1.0;
  }
  double frac(double v) const { return (std::log10(v) - lo) / (hi - lo); }
};

std::string chart(const std::vector<Series>& data, const std::string& title,
                  const std::string& xlabel, const std::string& ylabel) {
  LogAxis ax, ay;
  ax.fit(data, true);
  ay.fit(data, false);
  auto px = [&](double v) { return kLeft + ax.frac(v) * (kWidth - kLeft - kRight); };
  auto py = [&](double v) { return kHeight - kBottom - ay.frac(v) * (kHeight - kTop - kBottom); };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"14\" text-anchor=\"middle\" font-size=\"13\">"
      << title << "</text>\n";

  // frame and decade grid
  out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << kWidth - kLeft - kRight
      << "\" height=\"" << kHeight - kTop - kBottom
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int d = static_cast<int>(ax.lo); d <= static_cast<int>(ax.hi); ++d) {
    const double x = px(std::pow(10.0, d));
    out << "<line x1=\"" << x << "\" y1=\"" << kTop << "\" x2=\"" << x << "\" y2=\""
        << kHeight - kBottom << "\" stroke=\"#dddddd\"/>\n";
    out << "<text x=\"" << x << "\" y=\"" << kHeight - kBottom + 16
        << "\" text-anchor=\"middle\" font-size=\"11\">1e" << d << "</text>\n";
  }
  for (int d = static_cast<int>(ay.lo); d <= static_cast<int>(ay.hi); ++d) {
    const double y = py(std::pow(10.0, d));
    out << "<line x1=\"" << kLeft << "\" y1=\"" << y << "\" x2=\"" << kWidth - kRight
        << "\" y2=\"" << y << "\" stroke=\"#dddddd\"/>\n";
    out << "<text x=\"" << kLeft - 6 << "\" y=\"" << y + 4
        << "\" text-anchor=\"end\" font-size=\"11\">1e" << d << "</text>\n";
  }
  out << "<text x=\"" << (kLeft + kWidth - kRight) / 2 << "\" y=\"" << kHeight - 12
      << "\" text-anchor=\"middle\" font-size=\"12\">" << xlabel << "</text>\n";
  out << "<text x=\"16\" y=\"" << (kTop + kHeight - kBottom) / 2
      << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 16 "
      << (kTop + kHeight - kBottom) / 2 << ")\">" << ylabel << "</text>\n";

  double legend_y = kTop + 14;
  for (const Series& s : data) {
    out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (s.x[i] <= 0.0 || s.y[i] <= 0.0) continue;
      out << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
    }
    out << "\"/>\n";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (s.x[i] <= 0.0 || s.y[i] <= 0.0) continue;
      out << "<circle cx=\"" << px(s.x[i]) << "\" cy=\"" << py(s.y[i])
          << "\" r=\"2.5\" fill=\"" << s.color << "\"/>\n";
    }
    out << "<line x1=\"" << kWidth - 170 << "\" y1=\"" << legend_y << "\" x2=\""
        << kWidth - 150 << "\" y2=\"" << legend_y << "\" stroke=\"" << s.color
        << "\" stroke-width=\"1.5\"/>\n";
    out << "<text x=\"" << kWidth - 145 << "\" y=\"" << legend_y + 4
        << "\" font-size=\"11\">" << s.label << "</text>\n";
    legend_y += 16;
  }
  out << "</svg>\n";
  return out.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write chart: " + path);
  out << content;
}

}  // namespace

void write_convergence_svg(const std::vector<StudyRecord>& records, const std::string& path) {
  std::vector<Series> data;
  auto add = [&](const std::string& label, const std::string& color, auto getter) {
    Series s;
    s.label = label;
    s.color = color;
    for (const StudyRecord& r : records) {
      s.x.push_back(std::sqrt(static_cast<double>(r.nel)));
      s.y.push_back(getter(r));
    }
    data.push_back(std::move(s));
  };
  add("L2 error of u_h", "#d62728", [](const StudyRecord& r) { return r.err_u_l2; });
  add("L2 error of nu_h", "#1f77b4", [](const StudyRecord& r) { return r.err_nu_l2; });
  add("triple-norm error", "#2ca02c", [](const StudyRecord& r) { return r.triple; });
  add("estimator eta", "#9467bd", [](const StudyRecord& r) { return r.eta; });
  write_file(path, chart(data, "Error and estimator vs sqrt(Nel)", "sqrt(Nel)", "value"));
}

void write_effectivity_svg(const std::vector<StudyRecord>& records, const std::string& path) {
  std::vector<Series> data;
  Series s;
  s.label = "effectivity";
  s.color = "#1f77b4";
  for (const StudyRecord& r : records) {
    s.x.push_back(static_cast<double>(r.nel));
    s.y.push_back(r.effectivity);
  }
  data.push_back(std::move(s));
  write_file(path, chart(data, "Effectivity index vs Nel", "Nel", "eta / triple-norm"));
}

}  // namespace hdgres
