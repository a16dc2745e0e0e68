#include "mcsig/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>

namespace mcsig {

namespace {

constexpr int kWidth = 800;
constexpr int kHeight = 420;
constexpr int kMarginLeft = 64;
constexpr int kMarginRight = 20;
constexpr int kMarginTop = 36;
constexpr int kMarginBottom = 44;

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using File = std::unique_ptr<std::FILE, FileCloser>;

File open_svg(const std::string& path, int w, int h) {
  File f(std::fopen(path.c_str(), "w"));
  require(f != nullptr, ErrorCode::IoFailure, "cannot open " + path);
  std::fprintf(f.get(),
               "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" "
               "height=\"%d\" viewBox=\"0 0 %d %d\">\n",
               w, h, w, h);
  std::fprintf(f.get(),
               "<rect width=\"%d\" height=\"%d\" fill=\"white\"/>\n", w, h);
  return f;
}

struct Axes {
  double x_lo, x_hi, y_lo, y_hi;
  double px(double x) const {
    return kMarginLeft + (x - x_lo) / (x_hi - x_lo) *
                             (kWidth - kMarginLeft - kMarginRight);
  }
  double py(double y) const {
    return kHeight - kMarginBottom -
           (y - y_lo) / (y_hi - y_lo) * (kHeight - kMarginTop - kMarginBottom);
  }
};

void draw_frame(std::FILE* f, const Axes& ax, const std::string& title) {
  std::fprintf(f,
               "<rect x=\"%d\" y=\"%d\" width=\"%d\" height=\"%d\" "
               "fill=\"none\" stroke=\"#444\"/>\n",
               kMarginLeft, kMarginTop, kWidth - kMarginLeft - kMarginRight,
               kHeight - kMarginTop - kMarginBottom);
  std::fprintf(f,
               "<text x=\"%d\" y=\"22\" font-family=\"sans-serif\" "
               "font-size=\"14\">%s</text>\n",
               kMarginLeft, title.c_str());
  std::fprintf(f,
               "<text x=\"%d\" y=\"%d\" font-family=\"sans-serif\" "
               "font-size=\"11\">%.4g</text>\n",
               4, static_cast<int>(ax.py(ax.y_lo)), ax.y_lo);
  std::fprintf(f,
               "<text x=\"%d\" y=\"%d\" font-family=\"sans-serif\" "
               "font-size=\"11\">%.4g</text>\n",
               4, kMarginTop + 10, ax.y_hi);
  std::fprintf(f,
               "<text x=\"%d\" y=\"%d\" font-family=\"sans-serif\" "
               "font-size=\"11\">%.4g</text>\n",
               kMarginLeft, kHeight - 12, ax.x_lo);
  std::fprintf(f,
               "<text x=\"%d\" y=\"%d\" font-family=\"sans-serif\" "
               "font-size=\"11\" text-anchor=\"end\">%.4g</text>\n",
               kWidth - kMarginRight, kHeight - 12, ax.x_hi);
}

void draw_polyline(std::FILE* f, const Axes& ax, const Vec& x, const Vec& y,
                   const char* color) {
  std::fprintf(f, "<polyline fill=\"none\" stroke=\"%s\" stroke-width=\"1.2\" "
                  "points=\"",
               color);
  for (Index i = 0; i < x.size(); ++i)
    std::fprintf(f, "%.2f,%.2f ", ax.px(x[i]), ax.py(y[i]));
  std::fputs("\"/>\n", f);
}

void draw_hline(std::FILE* f, const Axes& ax, double y, const char* color) {
  if (!std::isfinite(y) || y < ax.y_lo || y > ax.y_hi) return;
  std::fprintf(f,
               "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" "
               "stroke=\"%s\" stroke-dasharray=\"6 3\"/>\n",
               ax.px(ax.x_lo), ax.py(y), ax.px(ax.x_hi), ax.py(y), color);
}

void draw_vline(std::FILE* f, const Axes& ax, double x, const char* color) {
  if (!std::isfinite(x) || x < ax.x_lo || x > ax.x_hi) return;
  std::fprintf(f,
               "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" "
               "stroke=\"%s\" stroke-dasharray=\"4 3\"/>\n",
               ax.px(x), ax.py(ax.y_lo), ax.px(x), ax.py(ax.y_hi), color);
}

Axes fit_axes(const Vec& x, const Vec& y) {
  Axes ax{x.minCoeff(), x.maxCoeff(), y.minCoeff(), y.maxCoeff()};
  if (ax.x_hi == ax.x_lo) ax.x_hi = ax.x_lo + 1.0;
  const double pad = (ax.y_hi - ax.y_lo) * 0.05;
  ax.y_lo -= pad;
  ax.y_hi += pad;
  if (ax.y_hi == ax.y_lo) ax.y_hi = ax.y_lo + 1.0;
  return ax;
}

const char* ramp_color(double v, char buf[16]) {
  v = std::clamp(v, 0.0, 1.0);
  // dark blue -> white -> dark red
  int r, g, b;
  if (v < 0.5) {
    const double t = v * 2.0;
    r = static_cast<int>(20 + t * 235);
    g = static_cast<int>(40 + t * 215);
    b = static_cast<int>(120 + t * 135);
  } else {
    const double t = (v - 0.5) * 2.0;
    r = 255;
    g = static_cast<int>(255 - t * 215);
    b = static_cast<int>(255 - t * 235);
  }
  std::snprintf(buf, 16, "#%02x%02x%02x", r, g, b);
  return buf;
}

}  // namespace

void plot_curve_svg(const std::string& path, const Vec& x, const Vec& y,
                    const std::string& title, double trigger_x,
                    double hline_lo, double hline_hi) {
  require(x.size() == y.size() && x.size() >= 2, ErrorCode::InvalidArgument,
          "curve needs >= 2 points");
  const Axes ax = fit_axes(x, y);
  File f = open_svg(path, kWidth, kHeight);
  draw_frame(f.get(), ax, title);
  draw_polyline(f.get(), ax, x, y, "#1f4e9c");
  draw_vline(f.get(), ax, trigger_x, "#b03030");
  draw_hline(f.get(), ax, hline_lo, "#808080");
  draw_hline(f.get(), ax, hline_hi, "#808080");
  std::fputs("</svg>\n", f.get());
}

void plot_quant_svg(const std::string& path, const ErdErsReport& report,
                    const std::string& title) {
  plot_curve_svg(path, report.time_vec, report.quant_erp, title,
                 report.trigger_time_sec, report.lower_pct, report.upper_pct);
}

void plot_heatmap_svg(const std::string& path, const Mat& values,
                      const std::string& title, double lo, double hi,
                      const std::vector<std::string>& row_labels,
                      const std::vector<std::string>& col_labels) {
  require(values.size() > 0, ErrorCode::InvalidArgument, "empty matrix");
  const int w = kWidth, h = kHeight;
  const double cell_w =
      static_cast<double>(w - kMarginLeft - kMarginRight) / values.cols();
  const double cell_h =
      static_cast<double>(h - kMarginTop - kMarginBottom) / values.rows();
  File f = open_svg(path, w, h);
  std::fprintf(f.get(),
               "<text x=\"%d\" y=\"22\" font-family=\"sans-serif\" "
               "font-size=\"14\">%s</text>\n",
               kMarginLeft, title.c_str());
  char color[16];
  const double span = hi > lo ? hi - lo : 1.0;
  for (Index r = 0; r < values.rows(); ++r) {
    for (Index c = 0; c < values.cols(); ++c) {
      const double v = (values(r, c) - lo) / span;
      std::fprintf(f.get(),
                   "<rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" "
                   "height=\"%.2f\" fill=\"%s\"/>\n",
                   kMarginLeft + c * cell_w, kMarginTop + r * cell_h,
                   cell_w + 0.5, cell_h + 0.5, ramp_color(v, color));
    }
  }
  for (size_t r = 0; r < row_labels.size(); ++r)
    std::fprintf(f.get(),
                 "<text x=\"4\" y=\"%.2f\" font-family=\"sans-serif\" "
                 "font-size=\"10\">%s</text>\n",
                 kMarginTop + (r + 0.65) * cell_h, row_labels[r].c_str());
  for (size_t c = 0; c < col_labels.size(); ++c)
    std::fprintf(f.get(),
                 "<text x=\"%.2f\" y=\"%d\" font-family=\"sans-serif\" "
                 "font-size=\"10\">%s</text>\n",
                 kMarginLeft + (c + 0.25) * cell_w, h - 12,
                 col_labels[c].c_str());
  std::fputs("</svg>\n", f.get());
}

void plot_tfmap_svg(const std::string& path, const TFMap& map,
                    const std::string& title) {
  // Rows are drawn top-down; flip so low frequencies sit at the bottom.
  Mat flipped = map.power.colwise().reverse();
  std::vector<std::string> row_labels;
  char buf[32];
  for (Index r = map.freq_vec.size() - 1; r >= 0; --r) {
    if (map.freq_vec.size() > 12 && r % (map.freq_vec.size() / 8 + 1) != 0) {
      row_labels.emplace_back();
      continue;
    }
    std::snprintf(buf, sizeof buf, "%.3g Hz", map.freq_vec[r]);
    row_labels.emplace_back(buf);
  }
  std::vector<std::string> col_labels;
  const Index n_cols = map.time_vec.size();
  for (Index c = 0; c < n_cols; ++c) {
    if (c % std::max<Index>(1, n_cols / 6) == 0) {
      std::snprintf(buf, sizeof buf, "%.3g s", map.time_vec[c]);
      col_labels.emplace_back(buf);
    } else {
      col_labels.emplace_back();
    }
  }
  plot_heatmap_svg(path, flipped, title, 0.0,
                   std::max(map.power.maxCoeff(), 1e-300), row_labels,
                   col_labels);
}

}  // namespace mcsig
