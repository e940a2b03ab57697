#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "scdt/error.hpp"
#include "scdt/io.hpp"

namespace scdt {

namespace {

constexpr double kPanelWidth = 180.0;
constexpr double kPanelHeight = 120.0;
constexpr double kGapWidth = 70.0;
constexpr double kMargin = 20.0;
constexpr double kTitleHeight = 30.0;
constexpr double kCaptionHeight = 22.0;

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
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

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

}  // namespace

std::string render_svg_row(const std::vector<Signal>& panels, const std::vector<std::string>& captions,
                           const std::vector<std::string>& gaps, const std::string& title) {
  if (panels.empty()) throw ValidationError("nothing to draw");
  if (captions.size() != panels.size()) throw ValidationError("one caption per panel expected");
  if (gaps.size() + 1 != panels.size()) throw ValidationError("one gap label between neighbours expected");

  // Shared scales so panels compare directly.
  double vmax = 0.0;
  for (const Signal& s : panels)
    for (double v : s.values()) vmax = std::max(vmax, std::abs(v));
  if (vmax == 0.0) vmax = 1.0;
  double t0 = panels.front().front();
  double t1 = panels.front().back();
  for (const Signal& s : panels) {
    t0 = std::min(t0, s.front());
    t1 = std::max(t1, s.back());
  }
  const double span = t1 - t0;

  const double n = static_cast<double>(panels.size());
  const double width = 2 * kMargin + n * kPanelWidth + (n - 1) * kGapWidth;
  const double height = kTitleHeight + kPanelHeight + kCaptionHeight + 2 * kMargin;

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(width) + "\" height=\"" + fmt(height) +
         "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<text x=\"" + fmt(width / 2) + "\" y=\"" + fmt(kMargin + 6) + "\" text-anchor=\"middle\">" +
         escape(title) + "</text>\n";

  const double top = kMargin + kTitleHeight;
  const double zero = top + kPanelHeight / 2;
  for (std::size_t p = 0; p < panels.size(); ++p) {
    const Signal& s = panels[p];
    const double left = kMargin + static_cast<double>(p) * (kPanelWidth + kGapWidth);
    out += "<rect x=\"" + fmt(left) + "\" y=\"" + fmt(top) + "\" width=\"" + fmt(kPanelWidth) +
           "\" height=\"" + fmt(kPanelHeight) + "\" fill=\"none\" stroke=\"#999\"/>\n";
    out += "<line x1=\"" + fmt(left) + "\" y1=\"" + fmt(zero) + "\" x2=\"" + fmt(left + kPanelWidth) +
           "\" y2=\"" + fmt(zero) + "\" stroke=\"#ddd\"/>\n";

    out += "<polyline fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"1.2\" points=\"";
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double x = left + kPanelWidth * (s.grid()[i] - t0) / span;
      const double y = zero - 0.45 * kPanelHeight * s.values()[i] / vmax;
      out += fmt(x) + "," + fmt(y) + (i + 1 < s.size() ? " " : "");
    }
    out += "\"/>\n";
    out += "<text x=\"" + fmt(left + kPanelWidth / 2) + "\" y=\"" + fmt(top + kPanelHeight + 16) +
           "\" text-anchor=\"middle\">" + escape(captions[p]) + "</text>\n";
    if (p < gaps.size())
      out += "<text x=\"" + fmt(left + kPanelWidth + kGapWidth / 2) + "\" y=\"" + fmt(zero - 4) +
             "\" text-anchor=\"middle\" font-size=\"10\">" + escape(gaps[p]) + "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace scdt
