#include "takumlab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "takumlab/errors.hpp"

namespace takumlab {

double approx_log10(const mpq_class& q) {
  if (sgn(q) <= 0) throw UsageError("approx_log10 requires a positive value");
  long e = floor_log2(q);
  mpq_class scaled = q * pow2(-e);  // in [1, 2)
  return (static_cast<double>(e) + std::log2(scaled.get_d())) * 0.30102999566398120;
}

namespace {

constexpr double kWidth = 640, kHeight = 420;
constexpr double kLeft = 64, kRight = 24, kTop = 36, kBottom = 44;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
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

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

struct Canvas {
  std::ostringstream body;

  void line(double x1, double y1, double x2, double y2, const char* color,
            double w = 1.0, const char* dash = nullptr) {
    body << "<line x1=\"" << num(x1) << "\" y1=\"" << num(y1) << "\" x2=\""
         << num(x2) << "\" y2=\"" << num(y2) << "\" stroke=\"" << color
         << "\" stroke-width=\"" << num(w) << "\"";
    if (dash) body << " stroke-dasharray=\"" << dash << "\"";
    body << "/>\n";
  }
  void polyline(const std::vector<std::pair<double, double>>& pts,
                const char* color, double w = 1.5, const char* dash = nullptr) {
    if (pts.empty()) return;
    body << "<polyline fill=\"none\" stroke=\"" << color
         << "\" stroke-width=\"" << num(w) << "\"";
    if (dash) body << " stroke-dasharray=\"" << dash << "\"";
    body << " points=\"";
    for (const auto& [x, y] : pts) body << num(x) << ',' << num(y) << ' ';
    body << "\"/>\n";
  }
  void text(double x, double y, const std::string& s, int size = 11,
            const char* anchor = "middle", const char* color = "#333") {
    body << "<text x=\"" << num(x) << "\" y=\"" << num(y) << "\" font-size=\""
         << size << "\" font-family=\"sans-serif\" text-anchor=\"" << anchor
         << "\" fill=\"" << color << "\">" << xml_escape(s) << "</text>\n";
  }
  void marker(double x, double y, const char* color) {
    body << "<path d=\"M" << num(x - 3) << ' ' << num(y - 3) << " L" << num(x + 3)
         << ' ' << num(y + 3) << " M" << num(x - 3) << ' ' << num(y + 3) << " L"
         << num(x + 3) << ' ' << num(y - 3) << "\" stroke=\"" << color
         << "\" stroke-width=\"1.5\" fill=\"none\"/>\n";
  }

  std::string finish(const std::string& title) {
    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
       << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' '
       << kHeight << "\">\n"
       << "<rect width=\"" << kWidth << "\" height=\"" << kHeight
       << "\" fill=\"white\"/>\n"
       << "<text x=\"" << kWidth / 2
       << "\" y=\"20\" font-size=\"14\" font-family=\"sans-serif\" "
          "text-anchor=\"middle\" fill=\"#111\">"
       << xml_escape(title) << "</text>\n"
       << body.str() << "</svg>\n";
    return os.str();
  }
};

std::string decade_label(long d) {
  std::ostringstream os;
  os << "1e" << d;
  return os.str();
}

}  // namespace

std::string render_cdf_chart(const std::string& title,
                             const std::vector<CdfSeries>& series) {
  if (series.empty()) throw UsageError("render_cdf_chart: no series");

  // Finite, nonzero error range in decades.
  double lo = 0, hi = 0;
  bool any = false, any_inf = false, any_zero = false;
  for (const auto& s : series)
    for (const auto& p : s.points) {
      if (p.rel_error.infinite) {
        any_inf = true;
      } else if (sgn(p.rel_error.value) == 0) {
        any_zero = true;
      } else {
        double l = approx_log10(p.rel_error.value);
        if (!any) lo = hi = l;
        lo = std::min(lo, l);
        hi = std::max(hi, l);
        any = true;
      }
    }
  if (!any) lo = -1, hi = 1;
  long dec_lo = static_cast<long>(std::floor(lo)) - (any_zero ? 1 : 0);
  long dec_hi = static_cast<long>(std::ceil(hi));
  if (dec_hi <= dec_lo) dec_hi = dec_lo + 1;
  long dec_inf = dec_hi + 1;  // infinity band
  long dec_top = any_inf ? dec_inf : dec_hi;

  double plot_w = kWidth - kLeft - kRight;
  double plot_h = kHeight - kTop - kBottom;
  auto x_of = [&](double frac) { return kLeft + frac * plot_w; };
  auto y_of = [&](double dec) {
    return kTop + (1.0 - (dec - dec_lo) / double(dec_top - dec_lo)) * plot_h;
  };

  Canvas c;
  c.line(kLeft, kTop, kLeft, kTop + plot_h, "#333");
  c.line(kLeft, kTop + plot_h, kLeft + plot_w, kTop + plot_h, "#333");
  for (long d = dec_lo; d <= dec_hi; ++d) {
    c.line(kLeft, y_of(d), kLeft + plot_w, y_of(d), "#ddd", 0.5);
    c.text(kLeft - 6, y_of(d) + 4, decade_label(d), 10, "end");
  }
  if (any_inf) {
    c.line(kLeft, y_of(dec_inf), kLeft + plot_w, y_of(dec_inf), "#bbb", 0.5, "4 3");
    c.text(kLeft - 6, y_of(dec_inf) + 4, "inf", 10, "end");
  }
  for (int pct = 0; pct <= 100; pct += 25) {
    double x = x_of(pct / 100.0);
    c.line(x, kTop + plot_h, x, kTop + plot_h + 4, "#333");
    c.text(x, kTop + plot_h + 18, std::to_string(pct) + "%", 10);
  }
  c.text(kLeft + plot_w / 2, kHeight - 8, "percent of matrices", 11);

  int color_idx = 0;
  double ly = kTop + 10;
  for (const auto& s : series) {
    const char* color = kPalette[color_idx++ % 8];
    std::vector<std::pair<double, double>> pts;
    for (const auto& p : s.points) {
      double dec;
      if (p.rel_error.infinite) dec = dec_inf;
      else if (sgn(p.rel_error.value) == 0) dec = dec_lo;
      else dec = approx_log10(p.rel_error.value);
      pts.emplace_back(x_of(p.percent.get_d()), y_of(dec));
    }
    c.polyline(pts, color);
    c.line(kLeft + plot_w - 110, ly, kLeft + plot_w - 90, ly, color, 2);
    c.text(kLeft + plot_w - 84, ly + 4, format_name(s.format), 10, "start");
    ly += 14;
  }
  return c.finish(title);
}

std::string render_range_chart(const RangeTable& table) {
  if (table.widths.empty()) throw UsageError("render_range_chart: empty table");

  double n_lo = table.widths.front().n, n_hi = table.widths.front().n;
  for (const auto& r : table.widths) {
    n_lo = std::min(n_lo, double(r.n));
    n_hi = std::max(n_hi, double(r.n));
  }
  if (n_hi == n_lo) n_hi = n_lo + 1;

  long dec_lo = 0, dec_hi = 0;
  auto widen = [&](const ExtendedReal& v) {
    if (!v.is_finite() || v.is_zero()) return;
    double l = approx_log10(v.abs().rational());
    dec_lo = std::min(dec_lo, static_cast<long>(std::floor(l)));
    dec_hi = std::max(dec_hi, static_cast<long>(std::ceil(l)));
  };
  for (const auto& r : table.widths) {
    widen(r.takum_min); widen(r.takum_max);
    widen(r.posit_min); widen(r.posit_max);
    widen(r.ieee_normal_min); widen(r.ieee_max); widen(r.ieee_subnormal_min);
  }
  for (const auto& r : table.fixed) {
    widen(r.min_normal); widen(r.max_finite);
  }

  double plot_w = kWidth - kLeft - kRight;
  double plot_h = kHeight - kTop - kBottom;
  auto x_of = [&](double n) { return kLeft + (n - n_lo) / (n_hi - n_lo) * plot_w; };
  auto y_of = [&](double dec) {
    return kTop + (1.0 - (dec - dec_lo) / double(dec_hi - dec_lo)) * plot_h;
  };
  auto y_val = [&](const ExtendedReal& v) {
    return y_of(approx_log10(v.abs().rational()));
  };

  Canvas c;
  c.line(kLeft, kTop, kLeft, kTop + plot_h, "#333");
  c.line(kLeft, kTop + plot_h, kLeft + plot_w, kTop + plot_h, "#333");
  for (long d = dec_lo; d <= dec_hi; d += 20) {
    c.line(kLeft, y_of(double(d)), kLeft + plot_w, y_of(double(d)), "#ddd", 0.5);
    c.text(kLeft - 6, y_of(double(d)) + 4, decade_label(d), 10, "end");
  }
  for (const auto& r : table.widths) {
    double x = x_of(r.n);
    c.line(x, kTop + plot_h, x, kTop + plot_h + 4, "#333");
    c.text(x, kTop + plot_h + 18, std::to_string(r.n), 10);
  }
  c.text(kLeft + plot_w / 2, kHeight - 8, "bit string length n", 11);

  struct Series {
    const char* label;
    const char* color;
    const char* dash;
    std::vector<std::pair<double, double>> min_pts, max_pts;
  };
  Series takum{"takum", kPalette[0], nullptr, {}, {}};
  Series posit{"posit", kPalette[1], "6 3", {}, {}};
  Series ieee{"ieee normal", kPalette[2], "2 2", {}, {}};
  Series sub{"ieee subnormal", kPalette[3], "1 3", {}, {}};
  for (const auto& r : table.widths) {
    double x = x_of(r.n);
    takum.min_pts.emplace_back(x, y_val(r.takum_min));
    takum.max_pts.emplace_back(x, y_val(r.takum_max));
    posit.min_pts.emplace_back(x, y_val(r.posit_min));
    posit.max_pts.emplace_back(x, y_val(r.posit_max));
    ieee.min_pts.emplace_back(x, y_val(r.ieee_normal_min));
    ieee.max_pts.emplace_back(x, y_val(r.ieee_max));
    sub.min_pts.emplace_back(x, y_val(r.ieee_subnormal_min));
  }

  double ly = kTop + 10;
  for (Series* s : {&takum, &posit, &ieee, &sub}) {
    c.polyline(s->min_pts, s->color, 1.5, s->dash);
    if (!s->max_pts.empty()) c.polyline(s->max_pts, s->color, 1.5, s->dash);
    c.line(kLeft + plot_w - 150, ly, kLeft + plot_w - 130, ly, s->color, 2);
    c.text(kLeft + plot_w - 124, ly + 4, s->label, 10, "start");
    ly += 14;
  }
  int color_idx = 4;
  for (const auto& r : table.fixed) {
    const char* color = kPalette[color_idx++ % 8];
    c.marker(x_of(r.n), y_val(r.min_normal), color);
    c.marker(x_of(r.n), y_val(r.max_finite), color);
    c.line(kLeft + plot_w - 150, ly, kLeft + plot_w - 130, ly, color, 2);
    c.text(kLeft + plot_w - 124, ly + 4, r.format, 10, "start");
    ly += 14;
  }
  return c.finish("dynamic range by bit string length");
}

}  // namespace takumlab
