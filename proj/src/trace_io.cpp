#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <string_view>

#include "osp/harness.hpp"

namespace osp {

namespace {

constexpr std::string_view kCsvHeader =
    "t,x,y,x_br,y_br,dgap_avg,nereg_avg,reg1_avg,reg2_avg,path,vt,eta,gamma,stage,doubled,weights";

void write_text_file(const std::string& text, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open \"" + path + "\" for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw std::runtime_error("failed writing \"" + path + "\"");
}

}  // namespace

std::string format_double(double v) {
  std::array<char, 32> buf;
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

std::string csv_text(const std::vector<RoundRecord>& records) {
  std::string out{kCsvHeader};
  out += '\n';
  for (const RoundRecord& r : records) {
    out += std::to_string(r.t);
    for (double v : {r.x, r.y, r.x_br, r.y_br, r.dgap_avg}) {
      out += ',';
      out += format_double(v);
    }
    out += ',';
    if (r.nereg_available) out += format_double(r.nereg_avg);
    for (double v : {r.reg1_avg, r.reg2_avg, r.path, r.vt, r.eta, r.gamma}) {
      out += ',';
      out += format_double(v);
    }
    out += ',';
    out += std::to_string(r.stage);
    out += r.doubled ? ",1," : ",0,";
    for (std::size_t i = 0; i < r.weights.size(); ++i) {
      if (i > 0) out += ';';
      out += format_double(r.weights[i]);
    }
    out += '\n';
  }
  return out;
}

void write_csv_file(const std::vector<RoundRecord>& records, const std::string& path) {
  write_text_file(csv_text(records), path);
}

namespace {

constexpr std::array<std::string_view, 6> kPalette = {"#1f77b4", "#d62728", "#2ca02c",
                                                      "#9467bd", "#ff7f0e", "#8c564b"};
constexpr double kLeft = 64.0, kRight = 616.0, kTop = 44.0, kBottom = 372.0;

std::string px(double v) {
  return format_double(std::round(v * 100.0) / 100.0);
}

std::string tick_label(double v) {
  std::array<char, 32> buf;
  std::snprintf(buf.data(), buf.size(), "%.4g", v);
  return std::string(buf.data());
}

void line(std::string& svg, double x1, double y1, double x2, double y2, std::string_view stroke,
          std::string_view extra = "") {
  svg += "<line x1=\"" + px(x1) + "\" y1=\"" + px(y1) + "\" x2=\"" + px(x2) + "\" y2=\"" +
         px(y2) + "\" stroke=\"";
  svg += stroke;
  svg += "\"";
  svg += extra;
  svg += "/>\n";
}

void text(std::string& svg, double x, double y, const std::string& body, std::string_view anchor) {
  svg += "<text x=\"" + px(x) + "\" y=\"" + px(y) +
         "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"";
  svg += anchor;
  svg += "\">" + body + "</text>\n";
}

}  // namespace

std::string render_svg(const std::vector<TraceSeries>& traces, const std::string& title) {
  double tmax = 10.0, vmax = 0.0;
  for (const TraceSeries& s : traces) {
    for (const auto& [t, v] : s.points) {
      tmax = std::max(tmax, t);
      if (std::isfinite(v)) vmax = std::max(vmax, v);
    }
  }
  if (vmax <= 0.0) vmax = 1.0;
  const double vtop = vmax * 1.05;
  const double lmax = std::log10(tmax);

  const auto to_px_x = [&](double t) {
    return kLeft + std::log10(std::max(t, 1.0)) / lmax * (kRight - kLeft);
  };
  const auto to_px_y = [&](double v) {
    return kBottom - std::clamp(v, 0.0, vtop) / vtop * (kBottom - kTop);
  };

  std::string svg =
      "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 640 420\" width=\"640\" "
      "height=\"420\">\n<rect width=\"640\" height=\"420\" fill=\"#ffffff\"/>\n";
  text(svg, (kLeft + kRight) / 2.0, 24.0, title, "middle");

  for (double p = 1.0; p <= tmax * (1.0 + 1e-12); p *= 10.0) {
    const double x = to_px_x(p);
    line(svg, x, kTop, x, kBottom, "#dddddd");
    text(svg, x, kBottom + 18.0, std::to_string(static_cast<long>(std::llround(p))), "middle");
  }
  for (int i = 0; i <= 4; ++i) {
    const double v = vtop * i / 4.0;
    const double y = to_px_y(v);
    if (i > 0) line(svg, kLeft, y, kRight, y, "#dddddd");
    text(svg, kLeft - 8.0, y + 4.0, tick_label(v), "end");
  }
  line(svg, kLeft, kBottom, kRight, kBottom, "#333333");
  line(svg, kLeft, kTop, kLeft, kBottom, "#333333");
  text(svg, (kLeft + kRight) / 2.0, 404.0, "round", "middle");

  for (std::size_t i = 0; i < traces.size(); ++i) {
    const auto& stroke = kPalette[i % kPalette.size()];
    if (traces[i].points.size() >= 2) {
      svg += "<polyline fill=\"none\" stroke=\"";
      svg += stroke;
      svg += "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t k = 0; k < traces[i].points.size(); ++k) {
        if (k > 0) svg += ' ';
        svg += px(to_px_x(traces[i].points[k].first)) + ',' +
               px(to_px_y(traces[i].points[k].second));
      }
      svg += "\"/>\n";
    }
    const double ly = 58.0 + 18.0 * static_cast<double>(i);
    line(svg, kRight - 116.0, ly, kRight - 92.0, ly, stroke, " stroke-width=\"2\"");
    text(svg, kRight - 86.0, ly + 4.0, traces[i].name, "start");
  }

  svg += "</svg>\n";
  return svg;
}

void render_svg_file(const std::vector<TraceSeries>& traces, const std::string& title,
                     const std::string& path) {
  write_text_file(render_svg(traces, title), path);
}

}  // namespace osp
