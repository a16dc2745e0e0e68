#ifndef MCSIG_SVG_HPP
#define MCSIG_SVG_HPP

#include <string>

#include "mcsig/connectivity.hpp"
#include "mcsig/erp.hpp"

namespace mcsig {

// Static figures from polyline/rect primitives; no plotting dependency.

// Curve with an optional trigger marker; pass NaN to omit a line.
void plot_curve_svg(const std::string& path, const Vec& x, const Vec& y,
                    const std::string& title, double trigger_x,
                    double hline_lo, double hline_hi);

inline void plot_erp_svg(const std::string& path, const ERPCurve& erp,
                         const std::string& title) {
  plot_curve_svg(path, erp.time_vec, erp.values, title, erp.trigger_time_sec,
                 std::numeric_limits<double>::quiet_NaN(),
                 std::numeric_limits<double>::quiet_NaN());
}

// Quantified curve with the confidence lines drawn in.
void plot_quant_svg(const std::string& path, const ErdErsReport& report,
                    const std::string& title);

// Heat map of a matrix with a linear two-color ramp over [lo, hi].
void plot_heatmap_svg(const std::string& path, const Mat& values,
                      const std::string& title, double lo, double hi,
                      const std::vector<std::string>& row_labels,
                      const std::vector<std::string>& col_labels);

void plot_tfmap_svg(const std::string& path, const TFMap& map,
                    const std::string& title);

}  // namespace mcsig

#endif
