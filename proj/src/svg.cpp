#include "kglab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace kglab {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                          "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

std::string class_color(int cls) {
  return kPalette[static_cast<unsigned>(cls) % 8];
}

// Blue (0) -> white (0.5) -> red (1), clamped.
std::string heat_color(double v) {
  v = std::clamp(v, 0.0, 1.0);
  auto channel = [](double x) {
    int c = static_cast<int>(std::lround(255.0 * std::clamp(x, 0.0, 1.0)));
    char buf[3];
    std::snprintf(buf, sizeof(buf), "%02x", c);
    return std::string(buf);
  };
  double r, g, b;
  if (v < 0.5) {
    double t = v / 0.5;
    r = 0.19 + (1.0 - 0.19) * t;
    g = 0.38 + (1.0 - 0.38) * t;
    b = 0.92 + (1.0 - 0.92) * t;
  } else {
    double t = (v - 0.5) / 0.5;
    r = 1.0;
    g = 1.0 - (1.0 - 0.16) * t;
    b = 1.0 - (1.0 - 0.16) * t;
  }
  return "#" + channel(r) + channel(g) + channel(b);
}

struct Range {
  double lo = 0.0, hi = 1.0;
  void include(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  static Range of(const std::vector<double>& v) {
    Range r{v.empty() ? 0.0 : v.front(), v.empty() ? 1.0 : v.front()};
    for (double x : v) r.include(x);
    if (r.hi == r.lo) r.hi = r.lo + 1.0;
    return r;
  }
};

}  // namespace

SvgDocument::SvgDocument(double width, double height)
    : width_(width), height_(height) {}

void SvgDocument::line(double x1, double y1, double x2, double y2,
                       const std::string& color, double stroke_width) {
  body_ += "<line x1=\"" + num(x1) + "\" y1=\"" + num(y1) + "\" x2=\"" +
           num(x2) + "\" y2=\"" + num(y2) + "\" stroke=\"" + color +
           "\" stroke-width=\"" + num(stroke_width) + "\"/>\n";
}

void SvgDocument::circle(double cx, double cy, double r,
                         const std::string& fill) {
  body_ += "<circle cx=\"" + num(cx) + "\" cy=\"" + num(cy) + "\" r=\"" +
           num(r) + "\" fill=\"" + fill + "\"/>\n";
}

void SvgDocument::rect(double x, double y, double w, double h,
                       const std::string& fill, const std::string& stroke) {
  body_ += "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num(w) +
           "\" height=\"" + num(h) + "\" fill=\"" + fill + "\"";
  if (!stroke.empty()) body_ += " stroke=\"" + stroke + "\"";
  body_ += "/>\n";
}

void SvgDocument::text(double x, double y, const std::string& content,
                       double size, const std::string& anchor) {
  body_ += "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" font-size=\"" +
           num(size) + "\" font-family=\"sans-serif\" text-anchor=\"" + anchor +
           "\">" + escape(content) + "</text>\n";
}

void SvgDocument::polyline(const std::vector<std::pair<double, double>>& points,
                           const std::string& color, double stroke_width) {
  body_ += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"" +
           num(stroke_width) + "\" points=\"";
  for (auto [x, y] : points) body_ += num(x) + "," + num(y) + " ";
  body_ += "\"/>\n";
}

std::string SvgDocument::str() const {
  return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         num(width_) + "\" height=\"" + num(height_) + "\" viewBox=\"0 0 " +
         num(width_) + " " + num(height_) + "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n" +
         body_ + "</svg>\n";
}

void SvgDocument::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << str();
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string svg_embedding_scatter(const Tensor& points,
                                  const std::vector<std::string>& labels,
                                  const std::vector<std::pair<int, int>>& segments,
                                  const std::vector<int>* color_classes,
                                  const std::string& title) {
  if (points.rank() != 2 || points.cols() != 2)
    throw ShapeError("svg scatter: n×2 points required");
  std::size_t n = points.rows();
  if (labels.size() != n)
    throw std::invalid_argument("svg scatter: one label per point required");
  double w = 640, h = 640, margin = 50;
  SvgDocument doc(w, h);
  std::vector<double> xs(n), ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = points.at(i, 0);
    ys[i] = points.at(i, 1);
  }
  Range rx = Range::of(xs), ry = Range::of(ys);
  auto px = [&](double x) {
    return margin + (x - rx.lo) / (rx.hi - rx.lo) * (w - 2 * margin);
  };
  auto py = [&](double y) {
    return h - margin - (y - ry.lo) / (ry.hi - ry.lo) * (h - 2 * margin);
  };
  doc.text(w / 2, 24, title, 14, "middle");
  for (auto [a, b] : segments) {
    if (a < 0 || b < 0 || static_cast<std::size_t>(a) >= n ||
        static_cast<std::size_t>(b) >= n)
      throw std::invalid_argument("svg scatter: segment endpoint out of range");
    doc.line(px(xs[a]), py(ys[a]), px(xs[b]), py(ys[b]), "#b0b0b0", 1.0);
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::string color =
        color_classes ? class_color((*color_classes)[i]) : "#1f77b4";
    doc.circle(px(xs[i]), py(ys[i]), 4.0, color);
    doc.text(px(xs[i]) + 5, py(ys[i]) - 5, labels[i], 9);
  }
  return doc.str();
}

std::string svg_line_chart(const std::vector<ChartSeries>& series,
                           const std::string& title, const std::string& x_label,
                           const std::string& y_label, bool log_x) {
  if (series.empty()) throw std::invalid_argument("svg chart: no series");
  double w = 640, h = 440, margin = 60;
  SvgDocument doc(w, h);
  std::vector<double> all_x, all_y;
  for (const auto& s : series) {
    if (s.x.size() != s.y.size())
      throw std::invalid_argument("svg chart: x/y length mismatch");
    for (double x : s.x) all_x.push_back(log_x ? std::log10(x) : x);
    for (std::size_t i = 0; i < s.y.size(); ++i) {
      double e = i < s.y_err.size() ? s.y_err[i] : 0.0;
      all_y.push_back(s.y[i] - e);
      all_y.push_back(s.y[i] + e);
    }
  }
  Range rx = Range::of(all_x), ry = Range::of(all_y);
  auto px = [&](double x) {
    double v = log_x ? std::log10(x) : x;
    return margin + (v - rx.lo) / (rx.hi - rx.lo) * (w - 2 * margin);
  };
  auto py = [&](double y) {
    return h - margin - (y - ry.lo) / (ry.hi - ry.lo) * (h - 2 * margin);
  };
  doc.text(w / 2, 24, title, 14, "middle");
  doc.line(margin, h - margin, w - margin, h - margin, "#000000");
  doc.line(margin, margin, margin, h - margin, "#000000");
  doc.text(w / 2, h - 14, x_label + (log_x ? " (log scale)" : ""), 11, "middle");
  doc.text(16, h / 2, y_label, 11, "middle");
  for (int t = 0; t <= 4; ++t) {
    double y = ry.lo + (ry.hi - ry.lo) * t / 4.0;
    doc.line(margin - 4, py(y), margin, py(y), "#000000");
    doc.text(margin - 8, py(y) + 4, num(y), 9, "end");
  }
  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    std::string color = s.color.empty() ? class_color(static_cast<int>(si)) : s.color;
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      pts.emplace_back(px(s.x[i]), py(s.y[i]));
      if (i < s.y_err.size() && s.y_err[i] > 0) {
        doc.line(px(s.x[i]), py(s.y[i] - s.y_err[i]), px(s.x[i]),
                 py(s.y[i] + s.y_err[i]), color, 1.0);
      }
      doc.circle(px(s.x[i]), py(s.y[i]), 3.0, color);
      doc.text(px(s.x[i]), h - margin + 14, num(s.x[i]), 8, "middle");
    }
    doc.polyline(pts, color);
    doc.rect(w - margin - 120, margin + 18.0 * si, 10, 10, color);
    doc.text(w - margin - 104, margin + 18.0 * si + 9, s.name, 10);
  }
  return doc.str();
}

std::string svg_heatmap(const Tensor& matrix,
                        const std::vector<std::string>& row_labels,
                        const std::vector<std::string>& col_labels,
                        const std::vector<std::uint8_t>* valid,
                        const std::string& title) {
  if (matrix.rank() != 2) throw ShapeError("svg heatmap: matrix required");
  std::size_t rows = matrix.rows(), cols = matrix.cols();
  double cell = std::min(48.0, 480.0 / std::max(rows, cols));
  double margin = 90, w = margin + cols * cell + 60, h = margin + rows * cell + 40;
  SvgDocument doc(w, h);
  doc.text(w / 2, 24, title, 14, "middle");
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      bool ok = valid == nullptr || (*valid)[i * cols + j] != 0;
      double v = matrix.at(i, j);
      doc.rect(margin + j * cell, margin + i * cell, cell, cell,
               ok ? heat_color(v) : "#cccccc", "#ffffff");
      if (cell >= 26)
        doc.text(margin + j * cell + cell / 2, margin + i * cell + cell / 2 + 3,
                 ok ? num(v) : "n/a", 8, "middle");
    }
  }
  for (std::size_t i = 0; i < rows && i < row_labels.size(); ++i)
    doc.text(margin - 6, margin + i * cell + cell / 2 + 3, row_labels[i], 9,
             "end");
  for (std::size_t j = 0; j < cols && j < col_labels.size(); ++j)
    doc.text(margin + j * cell + cell / 2, margin - 6, col_labels[j], 9,
             "middle");
  return doc.str();
}

std::string svg_histogram(const std::vector<double>& values, int bins,
                          const std::vector<double>& markers,
                          const std::string& title, const std::string& x_label) {
  if (values.empty()) throw std::invalid_argument("svg histogram: no values");
  if (bins < 1) throw std::invalid_argument("svg histogram: bins >= 1");
  double w = 640, h = 440, margin = 60;
  SvgDocument doc(w, h);
  Range r = Range::of(values);
  for (double m : markers) r.include(m);
  std::vector<int> counts(bins, 0);
  for (double v : values) {
    int b = static_cast<int>((v - r.lo) / (r.hi - r.lo) * bins);
    counts[std::clamp(b, 0, bins - 1)] += 1;
  }
  int peak = *std::max_element(counts.begin(), counts.end());
  auto px = [&](double x) {
    return margin + (x - r.lo) / (r.hi - r.lo) * (w - 2 * margin);
  };
  auto py = [&](double c) {
    return h - margin - c / std::max(peak, 1) * (h - 2 * margin);
  };
  doc.text(w / 2, 24, title, 14, "middle");
  doc.line(margin, h - margin, w - margin, h - margin, "#000000");
  doc.line(margin, margin, margin, h - margin, "#000000");
  doc.text(w / 2, h - 14, x_label, 11, "middle");
  double bw = (w - 2 * margin) / bins;
  for (int b = 0; b < bins; ++b)
    if (counts[b] > 0)
      doc.rect(margin + b * bw, py(counts[b]), bw - 1,
               h - margin - py(counts[b]), "#1f77b4");
  for (double m : markers) doc.line(px(m), margin, px(m), h - margin, "#d62728", 1.5);
  for (int t = 0; t <= 4; ++t) {
    double x = r.lo + (r.hi - r.lo) * t / 4.0;
    doc.text(px(x), h - margin + 14, num(x), 9, "middle");
  }
  return doc.str();
}

}  // namespace kglab
