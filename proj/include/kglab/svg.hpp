#pragma once

#include <string>
#include <vector>

#include "kglab/tensor.hpp"

namespace kglab {

// Minimal SVG emitter: deterministic text output, no dependencies.
class SvgDocument {
 public:
  SvgDocument(double width, double height);

  void line(double x1, double y1, double x2, double y2,
            const std::string& color, double stroke_width = 1.0);
  void circle(double cx, double cy, double r, const std::string& fill);
  void rect(double x, double y, double w, double h, const std::string& fill,
            const std::string& stroke = "");
  void text(double x, double y, const std::string& content, double size = 11,
            const std::string& anchor = "start");
  void polyline(const std::vector<std::pair<double, double>>& points,
                const std::string& color, double stroke_width = 1.5);

  std::string str() const;
  void save(const std::string& path) const;

  double width() const { return width_; }
  double height() const { return height_; }

 private:
  double width_, height_;
  std::string body_;
};

// 2D embedding scatter with optional segments (parent-child links) and
// per-point class colors.
std::string svg_embedding_scatter(const Tensor& points,
                                  const std::vector<std::string>& labels,
                                  const std::vector<std::pair<int, int>>& segments,
                                  const std::vector<int>* color_classes,
                                  const std::string& title);

struct ChartSeries {
  std::string name;
  std::vector<double> x, y, y_err;  // y_err may be empty
  std::string color;
};

std::string svg_line_chart(const std::vector<ChartSeries>& series,
                           const std::string& title, const std::string& x_label,
                           const std::string& y_label, bool log_x);

std::string svg_heatmap(const Tensor& matrix,
                        const std::vector<std::string>& row_labels,
                        const std::vector<std::string>& col_labels,
                        const std::vector<std::uint8_t>* valid,
                        const std::string& title);

std::string svg_histogram(const std::vector<double>& values, int bins,
                          const std::vector<double>& markers,
                          const std::string& title, const std::string& x_label);

}  // namespace kglab
