#include "neurowire/io/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "neurowire/errors.hpp"

namespace neurowire::io {

namespace {

constexpr std::array<const char*, 10> kPalette{"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                               "#17becf", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22"};

std::string num(double v) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(2);
  s << v;
  return s.str();
}

std::string escape(const std::string& text) {
  std::string out;
  for (char ch : text) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

}  // namespace

std::string render_trajectory_svg(const std::vector<TrajectoryRow>& rows, double half_length,
                                  const std::string& title) {
  if (!(half_length > 0.0)) throw InputError("render_trajectory_svg: half_length must be positive");
  constexpr double kSize = 600.0;
  constexpr double kMargin = 30.0;
  const double scale = kSize / (2.0 * half_length);
  auto px = [&](double x) { return kMargin + (x + half_length) * scale; };
  auto py = [&](double y) { return kMargin + (half_length - y) * scale; };

  std::map<std::size_t, std::vector<const TrajectoryRow*>> by_walker;
  for (const auto& r : rows) by_walker[r.walker_id].push_back(&r);

  std::ostringstream svg;
  const double total = kSize + 2.0 * kMargin;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(total) << "\" height=\"" << num(total)
      << "\" viewBox=\"0 0 " << num(total) << ' ' << num(total) << "\">\n";
  svg << "<rect x=\"0\" y=\"0\" width=\"" << num(total) << "\" height=\"" << num(total) << "\" fill=\"white\"/>\n";
  svg << "<rect x=\"" << num(kMargin) << "\" y=\"" << num(kMargin) << "\" width=\"" << num(kSize) << "\" height=\""
      << num(kSize) << "\" fill=\"none\" stroke=\"black\"/>\n";
  if (!title.empty()) {
    svg << "<text x=\"" << num(total / 2) << "\" y=\"20\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        << "font-size=\"14\">" << escape(title) << "</text>\n";
  }

  std::size_t colour = 0;
  for (const auto& [id, path] : by_walker) {
    if (path.empty() || path.front()->kind != WalkerKind::GrowthCone) continue;
    const char* stroke = kPalette[colour++ % kPalette.size()];
    std::vector<std::vector<Vec2>> pieces(1);
    for (std::size_t k = 0; k < path.size(); ++k) {
      const Vec2 p = path[k]->position;
      if (k > 0) {
        const Vec2 q = path[k - 1]->position;
        if (std::abs(p.x - q.x) > half_length || std::abs(p.y - q.y) > half_length) pieces.emplace_back();
      }
      // Skip repeated points of stopped or not yet started cones.
      if (!pieces.back().empty() && pieces.back().back() == p) continue;
      pieces.back().push_back(p);
    }
    for (const auto& piece : pieces) {
      if (piece.size() < 2) continue;
      svg << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"1\" points=\"";
      for (std::size_t k = 0; k < piece.size(); ++k) {
        svg << (k ? " " : "") << num(px(piece[k].x)) << ',' << num(py(piece[k].y));
      }
      svg << "\"/>\n";
    }
    const auto& last = *path.back();
    if (last.active) {
      svg << "<circle cx=\"" << num(px(last.position.x)) << "\" cy=\"" << num(py(last.position.y))
          << "\" r=\"3\" fill=\"none\" stroke=\"" << stroke << "\"/>\n";
    } else {
      const double cx = px(last.position.x);
      const double cy = py(last.position.y);
      svg << "<path d=\"M" << num(cx - 3) << ',' << num(cy - 3) << " L" << num(cx + 3) << ',' << num(cy + 3) << " M"
          << num(cx - 3) << ',' << num(cy + 3) << " L" << num(cx + 3) << ',' << num(cy - 3) << "\" stroke=\""
          << stroke << "\"/>\n";
    }
  }
  for (const auto& [id, path] : by_walker) {
    if (path.empty() || path.front()->kind != WalkerKind::Soma) continue;
    const Vec2 p = path.front()->position;
    svg << "<circle cx=\"" << num(px(p.x)) << "\" cy=\"" << num(py(p.y)) << "\" r=\"6\" fill=\"black\"/>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string render_line_plot_svg(const std::vector<LineSeries>& series, const LinePlotOptions& options) {
  constexpr double kWidth = 640.0;
  constexpr double kHeight = 420.0;
  constexpr double kLeft = 70.0;
  constexpr double kRight = 150.0;
  constexpr double kTop = 40.0;
  constexpr double kBottom = 50.0;
  auto tx = [&](double x) { return options.log_x ? std::log10(x) : x; };

  double xmin = std::numeric_limits<double>::infinity();
  double xmax = -xmin;
  double ymin = xmin;
  double ymax = -xmin;
  for (const auto& s : series) {
    if (s.x.size() != s.y.size()) throw InputError("render_line_plot_svg: x and y sizes differ");
    for (std::size_t k = 0; k < s.x.size(); ++k) {
      if (options.log_x && !(s.x[k] > 0.0)) throw InputError("render_line_plot_svg: non-positive x on a log axis");
      xmin = std::min(xmin, tx(s.x[k]));
      xmax = std::max(xmax, tx(s.x[k]));
      ymin = std::min(ymin, s.y[k]);
      ymax = std::max(ymax, s.y[k]);
    }
  }
  if (!std::isfinite(xmin)) {
    xmin = 0.0;
    xmax = 1.0;
    ymin = 0.0;
    ymax = 1.0;
  }
  if (xmax == xmin) xmax = xmin + 1.0;
  if (ymax == ymin) ymax = ymin + 1.0;
  const double ypad = 0.05 * (ymax - ymin);
  ymin -= ypad;
  ymax += ypad;
  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (tx(x) - xmin) / (xmax - xmin) * pw; };
  auto py = [&](double y) { return kTop + (ymax - y) / (ymax - ymin) * ph; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(kWidth) << "\" height=\"" << num(kHeight)
      << "\" viewBox=\"0 0 " << num(kWidth) << ' ' << num(kHeight) << "\">\n";
  svg << "<rect x=\"0\" y=\"0\" width=\"" << num(kWidth) << "\" height=\"" << num(kHeight) << "\" fill=\"white\"/>\n";
  svg << "<rect x=\"" << num(kLeft) << "\" y=\"" << num(kTop) << "\" width=\"" << num(pw) << "\" height=\"" << num(ph)
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  const char* font = "font-family=\"sans-serif\" font-size=\"11\"";
  for (int k = 0; k <= 4; ++k) {
    const double fx = xmin + (xmax - xmin) * k / 4.0;
    const double fy = ymin + (ymax - ymin) * k / 4.0;
    const double sx = kLeft + pw * k / 4.0;
    const double sy = kTop + ph * (1.0 - k / 4.0);
    std::ostringstream lx;
    lx.precision(3);
    if (options.log_x) {
      lx << "1e" << num(fx);
    } else {
      lx << fx;
    }
    std::ostringstream ly;
    ly.precision(3);
    ly << fy;
    svg << "<text x=\"" << num(sx) << "\" y=\"" << num(kTop + ph + 16) << "\" text-anchor=\"middle\" " << font
        << ">" << lx.str() << "</text>\n";
    svg << "<text x=\"" << num(kLeft - 6) << "\" y=\"" << num(sy + 4) << "\" text-anchor=\"end\" " << font << ">"
        << ly.str() << "</text>\n";
  }
  if (!options.title.empty()) {
    svg << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        << "font-size=\"14\">" << escape(options.title) << "</text>\n";
  }
  svg << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"" << num(kHeight - 12) << "\" text-anchor=\"middle\" "
      << font << ">" << escape(options.x_label) << "</text>\n";
  svg << "<text x=\"16\" y=\"" << num(kTop + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << num(kTop + ph / 2) << ")\" " << font << ">" << escape(options.y_label) << "</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* stroke = kPalette[s % kPalette.size()];
    const auto& ser = series[s];
    if (!ser.x.empty()) {
      svg << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t k = 0; k < ser.x.size(); ++k) {
        svg << (k ? " " : "") << num(px(ser.x[k])) << ',' << num(py(ser.y[k]));
      }
      svg << "\"/>\n";
      if (options.markers) {
        for (std::size_t k = 0; k < ser.x.size(); ++k) {
          svg << "<circle cx=\"" << num(px(ser.x[k])) << "\" cy=\"" << num(py(ser.y[k])) << "\" r=\"2.5\" fill=\""
              << stroke << "\"/>\n";
        }
      }
    }
    const double ly = kTop + 14.0 * static_cast<double>(s) + 8.0;
    svg << "<line x1=\"" << num(kLeft + pw + 10) << "\" y1=\"" << num(ly) << "\" x2=\"" << num(kLeft + pw + 30)
        << "\" y2=\"" << num(ly) << "\" stroke=\"" << stroke << "\" stroke-width=\"1.5\"/>\n";
    svg << "<text x=\"" << num(kLeft + pw + 34) << "\" y=\"" << num(ly + 4) << "\" " << font << ">"
        << escape(ser.label) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace neurowire::io
