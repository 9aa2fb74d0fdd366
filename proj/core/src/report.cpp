#include "chest/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

namespace chest {
namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }

void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::vector<MetricsRecord> sorted(std::span<const MetricsRecord> records) {
  std::vector<MetricsRecord> rows(records.begin(), records.end());
  std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    if (a.method != b.method) return a.method < b.method;
    if (a.snr_db != b.snr_db) return a.snr_db < b.snr_db;
    return a.n_pilots < b.n_pilots;
  });
  return rows;
}

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                         "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

std::string svg_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string render_svg(const std::vector<Series>& series, const std::string& xlabel,
                       const std::string& ylabel, bool log_x) {
  constexpr double W = 640, H = 420, L = 70, R = 160, T = 20, B = 50;
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  auto tx = [&](double x) { return log_x ? std::log2(x) : x; };
  for (const auto& s : series) {
    for (auto [x, y] : s.points) {
      x0 = std::min(x0, tx(x));
      x1 = std::max(x1, tx(x));
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
  }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x1 == x0) x1 = x0 + 1;
  if (y1 == y0) y1 = y0 + 1;
  const double pad = 0.05 * (y1 - y0);
  y0 -= pad;
  y1 += pad;
  auto px = [&](double x) { return L + (tx(x) - x0) / (x1 - x0) * (W - L - R); };
  auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
    << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\""
    << H - T - B << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double yv = y0 + (y1 - y0) * i / 4.0;
    const double xv = x0 + (x1 - x0) * i / 4.0;
    o << "<text x=\"" << L - 6 << "\" y=\"" << py(yv) + 4 << "\" text-anchor=\"end\">"
      << fmt(std::round(yv * 100) / 100) << "</text>\n";
    const double xl = log_x ? std::exp2(xv) : xv;
    o << "<text x=\"" << L + (xv - x0) / (x1 - x0) * (W - L - R) << "\" y=\"" << H - B + 16
      << "\" text-anchor=\"middle\">" << fmt(std::round(xl * 100) / 100) << "</text>\n";
  }
  o << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 10 << "\" text-anchor=\"middle\">"
    << svg_escape(xlabel) << "</text>\n";
  o << "<text x=\"16\" y=\"" << (T + H - B) / 2 << "\" transform=\"rotate(-90 16 "
    << (T + H - B) / 2 << ")\" text-anchor=\"middle\">" << svg_escape(ylabel) << "</text>\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    const char* color = kColors[i % std::size(kColors)];
    o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (auto [x, y] : series[i].points) o << fmt(px(x)) << ',' << fmt(py(y)) << ' ';
    o << "\"/>\n";
    const double ly = T + 16 + 18 * static_cast<double>(i);
    o << "<line x1=\"" << W - R + 10 << "\" y1=\"" << ly << "\" x2=\"" << W - R + 30
      << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    o << "<text x=\"" << W - R + 36 << "\" y=\"" << ly + 4 << "\">"
      << svg_escape(series[i].label) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace

std::string format_csv(std::span<const MetricsRecord> records) {
  std::ostringstream o;
  o << kCsvHeader << '\n';
  for (const auto& r : sorted(records)) {
    o << r.method << ',' << fmt(r.snr_db) << ',' << r.n_pilots << ','
      << fmt(r.nmse_empirical) << ',';
    if (r.nmse_analytic) {
      o << fmt(r.nmse_analytic->subspace_floor) << ',' << fmt(r.nmse_analytic->noise_term);
    } else {
      o << ',';
    }
    o << ',' << fmt(r.spectral_efficiency) << ',' << r.trials << '\n';
  }
  return o.str();
}

void emit_csv(std::span<const MetricsRecord> records, const std::filesystem::path& path) {
  if (records.empty()) throw std::invalid_argument("no records to write");
  write_file(path, format_csv(records));
}

void emit_plot(std::span<const MetricsRecord> records, const std::filesystem::path& path,
               PlotMetric metric, PlotAxis axis) {
  if (records.empty()) throw std::invalid_argument("no records to plot");
  std::map<std::string, Series> by_key;
  for (const auto& r : sorted(records)) {
    std::optional<double> y;
    if (metric == PlotMetric::nmse_db && r.nmse_empirical && *r.nmse_empirical > 0) {
      y = linear_to_db(*r.nmse_empirical);
    } else if (metric == PlotMetric::spectral_efficiency) {
      y = r.spectral_efficiency;
    }
    if (!y) continue;
    std::string key = r.method;
    if (axis == PlotAxis::n_pilots) key += " @ " + fmt(r.snr_db) + " dB";
    auto& s = by_key[key];
    s.label = key;
    s.points.emplace_back(axis == PlotAxis::snr_db ? r.snr_db : r.n_pilots, *y);
  }
  std::vector<Series> series;
  for (auto& [k, s] : by_key) {
    std::sort(s.points.begin(), s.points.end());
    series.push_back(std::move(s));
  }
  const std::string ylabel =
      metric == PlotMetric::nmse_db ? "NMSE [dB]" : "spectral efficiency [bit/s/Hz]";
  const std::string xlabel = axis == PlotAxis::snr_db ? "SNR [dB]" : "pilot subcarriers";
  write_file(path, render_svg(series, xlabel, ylabel, axis == PlotAxis::n_pilots));
}

std::string format_ecdf_csv(std::span<const EcdfTable> tables, std::size_t max_points) {
  std::ostringstream o;
  o << "method,snr_db,post_snr_db,cdf\n";
  for (const auto& t : tables) {
    const auto& xs = t.ecdf.thresholds();
    const std::size_t n = xs.size();
    if (n == 0) continue;
    const std::size_t rows = std::min(n, std::max<std::size_t>(max_points, 2));
    std::size_t last = n;
    for (std::size_t k = 0; k < rows; ++k) {
      // Evenly spaced ranks, always including the first and last sample.
      const std::size_t idx = rows == 1 ? n - 1 : k * (n - 1) / (rows - 1);
      if (idx == last) continue;
      last = idx;
      const double x = xs[idx];
      o << t.method << ',' << fmt(t.snr_db) << ','
        << (x > 0 ? fmt(linear_to_db(x)) : std::string("-inf")) << ','
        << fmt(t.ecdf(x)) << '\n';
    }
  }
  return o.str();
}

void emit_ecdf_csv(std::span<const EcdfTable> tables, const std::filesystem::path& path) {
  if (tables.empty()) throw std::invalid_argument("no ECDF tables to write");
  write_file(path, format_ecdf_csv(tables));
}

void emit_ecdf_plot(std::span<const EcdfTable> tables, const std::filesystem::path& path) {
  if (tables.empty()) throw std::invalid_argument("no ECDF tables to plot");
  std::vector<Series> series;
  for (const auto& t : tables) {
    Series s;
    s.label = t.method + " @ " + fmt(t.snr_db) + " dB";
    const auto& xs = t.ecdf.thresholds();
    const std::size_t n = xs.size();
    const std::size_t rows = std::min<std::size_t>(n, 256);
    for (std::size_t k = 0; k < rows; ++k) {
      const std::size_t idx = rows == 1 ? n - 1 : k * (n - 1) / (rows - 1);
      if (xs[idx] > 0) s.points.emplace_back(linear_to_db(xs[idx]), t.ecdf(xs[idx]));
    }
    series.push_back(std::move(s));
  }
  write_file(path, render_svg(series, "post-combining SNR [dB]", "CDF", false));
}

void emit_ntb_csv(std::span<const BatchFloorRecord> records, const std::filesystem::path& path) {
  if (records.empty()) throw std::invalid_argument("no records to write");
  std::ostringstream o;
  o << "n_batch,snr_db,nmse_emp,std_error,trials\n";
  for (const auto& r : records) {
    o << r.n_batch << ',' << fmt(r.snr_db) << ',' << fmt(r.nmse) << ',' << fmt(r.std_error)
      << ',' << r.trials << '\n';
  }
  write_file(path, o.str());
}

}  // namespace chest
