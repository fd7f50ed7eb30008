#include "gbflow/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "gbflow/errors.hpp"

namespace gbflow {

namespace {
const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
constexpr int kPaletteSize = 8;

std::string escape_xml(const std::string& s) {
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
}  // namespace

SvgPlot::SvgPlot(std::string title, int width, int height)
    : title_(std::move(title)), width_(width), height_(height) {}

void SvgPlot::add_series(const std::vector<double>& x, const std::vector<double>& y,
                         const std::string& label) {
  if (x.size() != y.size()) throw ConfigError("svg series size mismatch");
  series_.push_back({x, y, label});
}

void SvgPlot::add_annotation(const std::string& text) {
  annotations_.push_back(text);
}

void SvgPlot::write(const std::filesystem::path& path) const {
  double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
  double y_lo = x_lo, y_hi = -x_lo;
  for (const Series& s : series_) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      double yv = s.y[i];
      if (log_y_) {
        if (!(yv > 0.0)) continue;
        yv = std::log10(yv);
      }
      x_lo = std::min(x_lo, s.x[i]);
      x_hi = std::max(x_hi, s.x[i]);
      y_lo = std::min(y_lo, yv);
      y_hi = std::max(y_hi, yv);
    }
  }
  if (!(x_lo <= x_hi)) {
    x_lo = 0.0;
    x_hi = 1.0;
  }
  if (!(y_lo <= y_hi)) {
    y_lo = 0.0;
    y_hi = 1.0;
  }
  if (x_hi == x_lo) x_hi = x_lo + 1.0;
  if (y_hi == y_lo) y_hi = y_lo + 1.0;

  const double ml = 60, mr = 20, mt = 40, mb = 40;
  const double pw = width_ - ml - mr, ph = height_ - mt - mb;
  const auto sx = [&](double x) { return ml + (x - x_lo) / (x_hi - x_lo) * pw; };
  const auto sy = [&](double y) {
    const double yv = log_y_ ? std::log10(y) : y;
    return mt + (y_hi - yv) / (y_hi - y_lo) * ph;
  };

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width_
      << "\" height=\"" << height_ << "\" viewBox=\"0 0 " << width_ << ' '
      << height_ << "\">\n";
  out << "  <rect width=\"" << width_ << "\" height=\"" << height_
      << "\" fill=\"white\"/>\n";
  out << "  <text x=\"" << width_ / 2 << "\" y=\"24\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"16\">"
      << escape_xml(title_) << "</text>\n";
  // Axis frame.
  out << "  <rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw
      << "\" height=\"" << ph << "\" fill=\"none\" stroke=\"#444\"/>\n";
  // Range labels.
  out << "  <text x=\"" << ml << "\" y=\"" << height_ - 12
      << "\" font-family=\"sans-serif\" font-size=\"11\">" << x_lo << "</text>\n";
  out << "  <text x=\"" << width_ - mr << "\" y=\"" << height_ - 12
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
      << x_hi << "</text>\n";
  out << "  <text x=\"8\" y=\"" << mt + 12
      << "\" font-family=\"sans-serif\" font-size=\"11\">"
      << (log_y_ ? "1e" + std::to_string(static_cast<int>(std::round(y_hi))) : std::to_string(y_hi))
      << "</text>\n";
  out << "  <text x=\"8\" y=\"" << mt + ph
      << "\" font-family=\"sans-serif\" font-size=\"11\">"
      << (log_y_ ? "1e" + std::to_string(static_cast<int>(std::round(y_lo))) : std::to_string(y_lo))
      << "</text>\n";

  int color = 0;
  double legend_y = mt + 16;
  for (const Series& s : series_) {
    out << "  <polyline fill=\"none\" stroke=\"" << kPalette[color % kPaletteSize]
        << "\" stroke-width=\"1.2\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (log_y_ && !(s.y[i] > 0.0)) continue;
      out << sx(s.x[i]) << ',' << sy(s.y[i]) << ' ';
    }
    out << "\"/>\n";
    if (!s.label.empty()) {
      out << "  <text x=\"" << ml + 8 << "\" y=\"" << legend_y
          << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\""
          << kPalette[color % kPaletteSize] << "\">" << escape_xml(s.label)
          << "</text>\n";
      legend_y += 14;
    }
    ++color;
  }
  double ann_y = mt + ph - 8.0 - 14.0 * (annotations_.empty() ? 0 : annotations_.size() - 1);
  for (const std::string& a : annotations_) {
    out << "  <text x=\"" << ml + pw - 8 << "\" y=\"" << ann_y
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">"
        << escape_xml(a) << "</text>\n";
    ann_y += 14;
  }
  out << "</svg>\n";

  std::ofstream file(path);
  if (!file) throw IoError("cannot write " + path.string());
  file << out.str();
}

}  // namespace gbflow
