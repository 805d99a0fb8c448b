#include "tadv/log_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "tadv/errors.hpp"

namespace tadv {
namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

double parse_field(const std::string& s, const std::string& where) {
  const char* begin = s.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0') {
    throw ConfigError("csv: bad numeric field '" + s + "' in " + where);
  }
  return v;
}

}  // namespace

std::string csv_header(int tau_dim) {
  if (tau_dim < 1) {
    throw ContractViolation("csv_header: tau_dim must be positive");
  }
  std::string h = "t,phase,psi,psi_dot";
  const char* blocks[] = {"x", "x_d", "xdot", "xdot_d", "f_hands", "f_feet"};
  for (const char* b : blocks) {
    for (int i = 0; i < 6; ++i) {
      h += ',';
      h += b;
      h += '_';
      h += std::to_string(i);
    }
  }
  h += ",alpha";
  for (int i = 0; i < tau_dim; ++i) {
    h += ",tau_" + std::to_string(i);
  }
  return h;
}

void write_csv(const std::vector<LogRow>& log, const std::string& path,
               int tau_dim_if_empty) {
  const int tau_dim =
      log.empty() ? tau_dim_if_empty : static_cast<int>(log.front().tau.size());
  std::ofstream out(path);
  if (!out) {
    throw ConfigError("cannot open for writing: " + path);
  }
  out << csv_header(tau_dim) << '\n';
  for (const LogRow& row : log) {
    if (static_cast<int>(row.tau.size()) != tau_dim) {
      throw ContractViolation("write_csv: rows disagree on tau dimension");
    }
    out << fmt17(row.t) << ',' << row.phase << ',' << fmt17(row.psi) << ','
        << fmt17(row.psi_dot);
    const Vector6d* blocks[] = {&row.x,      &row.x_d,     &row.xdot,
                                &row.xdot_d, &row.f_hands, &row.f_feet};
    for (const Vector6d* b : blocks) {
      for (int i = 0; i < 6; ++i) out << ',' << fmt17((*b)(i));
    }
    out << ',' << fmt17(row.alpha);
    for (int i = 0; i < tau_dim; ++i) out << ',' << fmt17(row.tau(i));
    out << '\n';
  }
  if (!out) {
    throw ConfigError("write failed: " + path);
  }
}

std::vector<LogRow> read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open for reading: " + path);
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw ConfigError("csv: empty file: " + path);
  }
  const auto header = split_csv_line(line);
  constexpr int kFixed = 4 + 6 * 6 + 1;
  if (static_cast<int>(header.size()) <= kFixed) {
    throw ConfigError("csv: header too short in " + path);
  }
  const int tau_dim = static_cast<int>(header.size()) - kFixed;
  if (line != csv_header(tau_dim)) {
    throw ConfigError("csv: unexpected header in " + path);
  }

  std::vector<LogRow> log;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (static_cast<int>(fields.size()) != kFixed + tau_dim) {
      throw ConfigError("csv: wrong field count at line " + std::to_string(line_no));
    }
    const std::string where = "line " + std::to_string(line_no);
    LogRow row;
    int k = 0;
    row.t = parse_field(fields[k++], where);
    row.phase = static_cast<int>(std::lround(parse_field(fields[k++], where)));
    row.psi = parse_field(fields[k++], where);
    row.psi_dot = parse_field(fields[k++], where);
    Vector6d* blocks[] = {&row.x,      &row.x_d,     &row.xdot,
                          &row.xdot_d, &row.f_hands, &row.f_feet};
    for (Vector6d* b : blocks) {
      for (int i = 0; i < 6; ++i) (*b)(i) = parse_field(fields[k++], where);
    }
    row.alpha = parse_field(fields[k++], where);
    row.tau.resize(tau_dim);
    for (int i = 0; i < tau_dim; ++i) row.tau(i) = parse_field(fields[k++], where);
    log.push_back(std::move(row));
  }
  return log;
}

namespace {

struct Series {
  std::string name;
  std::string color;
  bool dashed = false;
  std::vector<double> x;
  std::vector<double> y;
};

constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                    "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

std::string fmt_tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

std::string fmt_px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

void range_of(const std::vector<Series>& series, double& lo, double& hi,
              bool use_x) {
  lo = std::numeric_limits<double>::infinity();
  hi = -lo;
  for (const Series& s : series) {
    for (double v : use_x ? s.x : s.y) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (!std::isfinite(lo) || !std::isfinite(hi)) {
    lo = 0.0;
    hi = 1.0;
  }
  if (hi - lo < 1e-12) {
    const double pad = std::max(0.5, std::abs(hi) * 0.5);
    lo -= pad;
    hi += pad;
  }
}

void write_svg_plot(const std::string& path, const std::string& title,
                    const std::string& xlabel, const std::string& ylabel,
                    const std::vector<Series>& series) {
  constexpr double kW = 860.0, kH = 480.0;
  constexpr double kLeft = 70.0, kRight = 840.0, kTop = 40.0, kBottom = 420.0;
  double x_lo, x_hi, y_lo, y_hi;
  range_of(series, x_lo, x_hi, true);
  range_of(series, y_lo, y_hi, false);
  const auto px = [&](double v) {
    return kLeft + (v - x_lo) / (x_hi - x_lo) * (kRight - kLeft);
  };
  const auto py = [&](double v) {
    return kBottom - (v - y_lo) / (y_hi - y_lo) * (kBottom - kTop);
  };

  std::ofstream out(path);
  if (!out) {
    throw ConfigError("cannot open for writing: " + path);
  }
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW
      << "\" height=\"" << kH << "\" viewBox=\"0 0 " << kW << " " << kH
      << "\">\n";
  out << "  <rect width=\"" << kW << "\" height=\"" << kH
      << "\" fill=\"#ffffff\"/>\n";
  out << "  <text class=\"title\" x=\"" << kW / 2
      << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"16\">"
      << title << "</text>\n";

  constexpr int kTicks = 6;
  for (int i = 0; i < kTicks; ++i) {
    const double fx = x_lo + (x_hi - x_lo) * i / (kTicks - 1);
    const double gx = px(fx);
    out << "  <line class=\"grid\" x1=\"" << fmt_px(gx) << "\" y1=\"" << kTop
        << "\" x2=\"" << fmt_px(gx) << "\" y2=\"" << kBottom
        << "\" stroke=\"#dddddd\"/>\n";
    out << "  <text class=\"tick\" x=\"" << fmt_px(gx) << "\" y=\""
        << kBottom + 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"11\">"
        << fmt_tick(fx) << "</text>\n";
    const double fy = y_lo + (y_hi - y_lo) * i / (kTicks - 1);
    const double gy = py(fy);
    out << "  <line class=\"grid\" x1=\"" << kLeft << "\" y1=\"" << fmt_px(gy)
        << "\" x2=\"" << kRight << "\" y2=\"" << fmt_px(gy)
        << "\" stroke=\"#dddddd\"/>\n";
    out << "  <text class=\"tick\" x=\"" << kLeft - 8 << "\" y=\""
        << fmt_px(gy + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           "font-size=\"11\">"
        << fmt_tick(fy) << "</text>\n";
  }
  out << "  <rect class=\"plot\" x=\"" << kLeft << "\" y=\"" << kTop
      << "\" width=\"" << kRight - kLeft << "\" height=\"" << kBottom - kTop
      << "\" fill=\"none\" stroke=\"#333333\"/>\n";
  out << "  <text class=\"xlabel\" x=\"" << (kLeft + kRight) / 2 << "\" y=\""
      << kH - 14
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"13\">"
      << xlabel << "</text>\n";
  out << "  <text class=\"ylabel\" x=\"18\" y=\"" << (kTop + kBottom) / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"13\" transform=\"rotate(-90 18 "
      << (kTop + kBottom) / 2 << ")\">" << ylabel << "</text>\n";

  for (const Series& s : series) {
    const size_t n = s.x.size();
    const size_t stride = std::max<size_t>(1, n / 2000);
    out << "  <polyline class=\"series\" data-name=\"" << s.name
        << "\" fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\"";
    if (s.dashed) out << " stroke-dasharray=\"6 4\"";
    out << " points=\"";
    for (size_t i = 0; i < n; i += stride) {
      out << fmt_px(px(s.x[i])) << ',' << fmt_px(py(s.y[i])) << ' ';
    }
    if (n > 0 && (n - 1) % stride != 0) {
      out << fmt_px(px(s.x[n - 1])) << ',' << fmt_px(py(s.y[n - 1])) << ' ';
    }
    out << "\"/>\n";
  }

  double ly = kTop + 16;
  for (const Series& s : series) {
    out << "  <line x1=\"" << kLeft + 10 << "\" y1=\"" << fmt_px(ly - 4)
        << "\" x2=\"" << kLeft + 34 << "\" y2=\"" << fmt_px(ly - 4)
        << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"";
    if (s.dashed) out << " stroke-dasharray=\"6 4\"";
    out << "/>\n";
    out << "  <text class=\"legend\" x=\"" << kLeft + 40 << "\" y=\""
        << fmt_px(ly)
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << s.name
        << "</text>\n";
    ly += 16;
  }
  out << "</svg>\n";
  if (!out) {
    throw ConfigError("write failed: " + path);
  }
}

}  // namespace

void write_plots(const std::vector<LogRow>& log, const ParamCurve& curve,
                 const std::string& dir) {
  if (log.empty()) {
    throw ContractViolation("write_plots: empty log");
  }
  std::filesystem::create_directories(dir);
  const size_t n = log.size();
  std::vector<double> t(n);
  for (size_t i = 0; i < n; ++i) t[i] = log[i].t;

  {
    Series psi{"psi", kPalette[0], false, t, {}};
    Series ident{"t (identity)", kPalette[7], true, t, {}};
    psi.y.resize(n);
    ident.y.resize(n);
    for (size_t i = 0; i < n; ++i) {
      psi.y[i] = log[i].psi;
      ident.y[i] = log[i].t;
    }
    write_svg_plot(dir + "/psi_vs_t.svg", "Trajectory parameter vs time",
                   "t [s]", "psi", {psi, ident});
  }
  {
    Series rate{"psi_dot", kPalette[1], false, t, {}};
    rate.y.resize(n);
    for (size_t i = 0; i < n; ++i) rate.y[i] = log[i].psi_dot;
    write_svg_plot(dir + "/psidot_vs_t.svg", "Parameter rate vs time", "t [s]",
                   "psi_dot", {rate});
  }
  {
    Series hands{"hands force norm", kPalette[2], false, t, {}};
    Series feet{"feet force norm", kPalette[3], false, t, {}};
    hands.y.resize(n);
    feet.y.resize(n);
    for (size_t i = 0; i < n; ++i) {
      hands.y[i] = log[i].f_hands.head<3>().norm();
      feet.y[i] = log[i].f_feet.head<3>().norm();
    }
    write_svg_plot(dir + "/wrench_vs_t.svg", "External force magnitudes",
                   "t [s]", "|f| [N]", {hands, feet});
  }
  {
    std::vector<Series> series;
    const char* axes[] = {"x", "y", "z"};
    for (int c = 0; c < 3; ++c) {
      Series adv{std::string(axes[c]) + "_d advanced", kPalette[c], false, t, {}};
      adv.y.resize(n);
      for (size_t i = 0; i < n; ++i) adv.y[i] = log[i].x_d(c);
      series.push_back(std::move(adv));
    }
    for (int c = 0; c < 3; ++c) {
      Series nom{std::string(axes[c]) + "_d nominal", kPalette[c + 3], true, t, {}};
      nom.y.resize(n);
      for (size_t i = 0; i < n; ++i) {
        nom.y[i] = curve.eval(std::min(log[i].t, curve.psi_end()))(c);
      }
      series.push_back(std::move(nom));
    }
    write_svg_plot(dir + "/reference_vs_t.svg",
                   "Reference position: advanced vs nominal", "t [s]",
                   "position [m]", series);
  }
}

}  // namespace tadv
