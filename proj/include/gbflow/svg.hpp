#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace gbflow {

// Minimal SVG line-plot writer: enough for snapshot overlays, time series
// and annotated log-decay plots. Output is plain well-formed XML.
class SvgPlot {
 public:
  SvgPlot(std::string title, int width = 640, int height = 480);

  // One polyline per call; colors cycle through a fixed palette.
  void add_series(const std::vector<double>& x, const std::vector<double>& y,
                  const std::string& label = "");
  void add_annotation(const std::string& text);
  void set_log_y(bool log_y) { log_y_ = log_y; }

  void write(const std::filesystem::path& path) const;

 private:
  struct Series {
    std::vector<double> x, y;
    std::string label;
  };
  std::string title_;
  int width_, height_;
  bool log_y_ = false;
  std::vector<Series> series_;
  std::vector<std::string> annotations_;
};

}  // namespace gbflow
