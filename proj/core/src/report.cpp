#include "tfpl/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace tfpl {

namespace {

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string g4(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"};

}  // namespace

std::uint64_t fnv1a64(std::string_view text) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string param_hash(const OperatorParams& params) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(params.describe())));
  return buf;
}

std::string format_diagnostics_csv(const DiagnosticsReport& report, const std::string& hash) {
  std::string out = "check,param_hash,value,threshold,verdict\n";
  for (const auto& r : report.records) {
    out += csv_cell(r.name) + ',' + hash + ',' + g17(r.value) + ',' + g17(r.threshold) + ',' + csv_cell(r.verdict) + '\n';
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open '" + path + "' for writing");
  os << text;
  if (!os) throw Error("failed writing '" + path + "'");
}

std::string svg_plot(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                     const std::vector<PlotSeries>& series) {
  constexpr double W = 640, H = 420, L = 70, R = 20, T = 40, B = 50;
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, s.y[i]);
      y1 = std::max(y1, s.y[i]);
    }
  }
  if (!(x0 <= x1)) x0 = 0, x1 = 1;
  if (!(y0 <= y1)) y0 = 0, y1 = 1;
  if (x1 == x0) x1 = x0 + 1;
  if (y1 == y0) {
    y0 -= 0.5;
    y1 += 0.5;
  }
  const double pad = 0.05 * (y1 - y0);
  y0 -= pad;
  y1 += pad;
  auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
  auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };

  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"420\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out += "<rect width=\"640\" height=\"420\" fill=\"white\"/>\n";
  out += "<text x=\"320\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" + xml_escape(title) + "</text>\n";
  out += "<rect x=\"" + g4(L) + "\" y=\"" + g4(T) + "\" width=\"" + g4(W - L - R) + "\" height=\"" + g4(H - T - B) +
         "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double xv = x0 + (x1 - x0) * k / 4.0;
    const double yv = y0 + (y1 - y0) * k / 4.0;
    out += "<text x=\"" + g4(px(xv)) + "\" y=\"" + g4(H - B + 16) + "\" text-anchor=\"middle\">" + g4(xv) + "</text>\n";
    out += "<text x=\"" + g4(L - 6) + "\" y=\"" + g4(py(yv) + 4) + "\" text-anchor=\"end\">" + g4(yv) + "</text>\n";
  }
  if (y0 < 0.0 && y1 > 0.0) {
    out += "<line x1=\"" + g4(L) + "\" x2=\"" + g4(W - R) + "\" y1=\"" + g4(py(0.0)) + "\" y2=\"" + g4(py(0.0)) +
           "\" stroke=\"#999\" stroke-dasharray=\"2,3\"/>\n";
  }
  out += "<text x=\"" + g4((L + W - R) / 2) + "\" y=\"" + g4(H - 12) + "\" text-anchor=\"middle\">" + xml_escape(xlabel) + "</text>\n";
  out += "<text x=\"16\" y=\"" + g4((T + H - B) / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
         g4((T + H - B) / 2) + ")\">" + xml_escape(ylabel) + "</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const std::string color = kColors[k % (sizeof kColors / sizeof kColors[0])];
    std::string pts;
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      pts += g4(px(s.x[i])) + ',' + g4(py(s.y[i])) + ' ';
      if (s.markers) {
        out += "<circle cx=\"" + g4(px(s.x[i])) + "\" cy=\"" + g4(py(s.y[i])) + "\" r=\"2.5\" fill=\"" + color + "\"/>\n";
      }
    }
    out += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.5\"" +
           (s.dashed ? std::string(" stroke-dasharray=\"6,4\"") : std::string()) + " points=\"" + pts + "\"/>\n";
    const double ly = T + 16 + 16 * static_cast<double>(k);
    out += "<line x1=\"" + g4(W - R - 150) + "\" x2=\"" + g4(W - R - 125) + "\" y1=\"" + g4(ly - 4) + "\" y2=\"" +
           g4(ly - 4) + "\" stroke=\"" + color + "\"" + (s.dashed ? " stroke-dasharray=\"6,4\"" : "") + "/>\n";
    out += "<text x=\"" + g4(W - R - 120) + "\" y=\"" + g4(ly) + "\">" + xml_escape(s.label) + "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

std::string svg_profile(const Field& phi, double s, double c_hat) {
  PlotSeries prof{"profile", {}, {}, false, true};
  if (const auto* g = std::get_if<GridField>(&phi)) {
    const GridGeometry& geom = g->geometry();
    for (int k = 0; k <= geom.half_nodes(); ++k) {
      const std::size_t i = geom.index({k, 0, 0});
      prof.x.push_back(k * geom.spacing());
      prof.y.push_back((*g)[i]);
    }
  } else {
    const auto& r = std::get<RadialField>(phi);
    prof.x.assign(r.radii().begin(), r.radii().end());
    prof.y.assign(r.values().begin(), r.values().end());
  }
  PlotSeries env{"c_hat d^s", {}, {}, true, false};
  for (int k = 0; k <= 200; ++k) {
    const double rr = k / 200.0;
    env.x.push_back(rr);
    env.y.push_back(c_hat * std::pow(1.0 - rr, s));
  }
  return svg_plot("steady profile and Hopf envelope", "|x|", "u", {prof, env});
}

std::string svg_moving_plane(const MovingPlaneResult& scan) {
  PlotSeries mins{"min psi_alpha", {}, {}, false, true};
  PlotSeries tol{"-tol", {}, {}, true, false};
  for (const auto& row : scan.rows) {
    if (row.empty()) continue;
    mins.x.push_back(row.alpha);
    mins.y.push_back(row.min_psi);
    tol.x.push_back(row.alpha);
    tol.y.push_back(-scan.tol);
  }
  return svg_plot("moving-plane scan", "alpha", "min psi", {mins, tol});
}

std::string svg_w_series(const std::vector<WSeries>& series) {
  std::vector<PlotSeries> out;
  for (const auto& w : series) {
    out.push_back(PlotSeries{"alpha = " + g4(w.spec.alpha), w.times, w.min_w, false, false});
  }
  return svg_plot("antisymmetric minima", "t", "min w_alpha", out);
}

}  // namespace tfpl
