// Copyright 2026 The stanceshift Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "stanceshift/figure.hpp"

namespace stanceshift::figure {
namespace {

constexpr int kWidth = 800;
constexpr int kHeight = 420;
constexpr double kLeft = 70.0;
constexpr double kRight = 730.0;
constexpr double kTop = 60.0;
constexpr double kBottom = 350.0;
constexpr const char* kFont = "DejaVu Sans, Arial, sans-serif";
constexpr const char* kLeftColor = "#1f77b4";
constexpr const char* kRightColor = "#d62728";
constexpr const char* kBarColor = "#bbbbbb";
constexpr const char* kStanceColors[kNumStances] = {"#2ca02c", "#d62728", "#7f7f7f"};

std::string xml_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

std::string num(double v) { return format_fixed(v, 2); }

struct Range {
  double lo = 0.0;
  double hi = 1.0;

  double map(double v) const { return kBottom - (v - lo) / (hi - lo) * (kBottom - kTop); }
};

Range range_of(const std::vector<series::SeriesPoint>& pts) {
  if (pts.empty()) return {};
  double lo = pts.front().value;
  double hi = lo;
  for (const auto& p : pts) {
    lo = std::min(lo, p.value);
    hi = std::max(hi, p.value);
  }
  if (hi - lo < 1e-12) return {lo - 0.5, hi + 0.5};
  const double pad = 0.05 * (hi - lo);
  return {lo - pad, hi + pad};
}

// Evenly spaced band centres for the sorted bucket labels.
class BucketAxis {
 public:
  explicit BucketAxis(std::vector<std::string> buckets) : buckets_(std::move(buckets)) {}

  std::size_t size() const { return buckets_.size(); }
  double band() const { return (kRight - kLeft) / static_cast<double>(buckets_.size()); }
  double center(std::size_t i) const { return kLeft + band() * (static_cast<double>(i) + 0.5); }
  double x_of(const std::string& bucket) const {
    const auto it = std::lower_bound(buckets_.begin(), buckets_.end(), bucket);
    return center(static_cast<std::size_t>(it - buckets_.begin()));
  }

  void draw(std::ostream& o) const {
    o << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(kBottom) << "\" x2=\"" << num(kRight)
      << "\" y2=\"" << num(kBottom) << "\" stroke=\"#000\"/>\n";
    const std::size_t step = std::max<std::size_t>(1, (buckets_.size() + 7) / 8);
    for (std::size_t i = 0; i < buckets_.size(); i += step) {
      o << "<text x=\"" << num(center(i)) << "\" y=\"" << num(kBottom + 18)
        << "\" text-anchor=\"middle\">" << xml_escape(buckets_[i]) << "</text>\n";
    }
  }

 private:
  std::vector<std::string> buckets_;
};

void draw_y_axis(std::ostream& o, const Range& r, bool left, const char* color,
                 std::string_view label) {
  const double x = left ? kLeft : kRight;
  o << "<line x1=\"" << num(x) << "\" y1=\"" << num(kTop) << "\" x2=\"" << num(x) << "\" y2=\""
    << num(kBottom) << "\" stroke=\"" << color << "\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double v = r.lo + (r.hi - r.lo) * i / 4.0;
    o << "<text x=\"" << num(left ? x - 6 : x + 6) << "\" y=\"" << num(r.map(v) + 4)
      << "\" text-anchor=\"" << (left ? "end" : "start") << "\" fill=\"" << color << "\">"
      << num(v) << "</text>\n";
  }
  const double lx = left ? 16.0 : kWidth - 16.0;
  const double ly = (kTop + kBottom) / 2;
  o << "<text x=\"" << num(lx) << "\" y=\"" << num(ly) << "\" fill=\"" << color
    << "\" text-anchor=\"middle\" transform=\"rotate(-90 " << num(lx) << ' ' << num(ly)
    << ")\">" << xml_escape(label) << "</text>\n";
}

void open_svg(std::ostream& o, std::string_view title) {
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
    << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\""
    << kFont << "\" font-size=\"12\">\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"#fff\"/>\n"
    << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
    << xml_escape(title) << "</text>\n";
}

void legend_entry(std::ostream& o, std::size_t slot, const char* color, std::string_view name) {
  const double x = kLeft + 160.0 * static_cast<double>(slot);
  o << "<rect x=\"" << num(x) << "\" y=\"36\" width=\"14\" height=\"10\" fill=\"" << color
    << "\"/>\n<text x=\"" << num(x + 20) << "\" y=\"45\">" << xml_escape(name) << "</text>\n";
}

void draw_line(std::ostream& o, const BucketAxis& axis, const Range& r,
               const std::vector<series::SeriesPoint>& pts, const char* color) {
  if (pts.empty()) return;
  o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    o << (i ? " " : "") << num(axis.x_of(pts[i].bucket)) << ',' << num(r.map(pts[i].value));
  }
  o << "\"/>\n";
  for (const auto& p : pts) {
    o << "<circle cx=\"" << num(axis.x_of(p.bucket)) << "\" cy=\"" << num(r.map(p.value))
      << "\" r=\"3\" fill=\"" << color << "\"/>\n";
  }
}

std::optional<double> parse_cell(const std::string& s) {
  const std::string v(trim(s));
  if (v.empty()) return std::nullopt;
  char* end = nullptr;
  const double d = std::strtod(v.c_str(), &end);
  if (end != v.c_str() + v.size()) throw Error("figure CSV: bad number '" + v + "'");
  return d;
}

std::ifstream open_csv(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw Error("cannot open figure data " + p.string());
  return in;
}

}  // namespace

std::optional<FigureKind> parse_figure_kind(std::string_view s) {
  const std::string v = ascii_lower(trim(s));
  if (v == "dual-axis-lines") return FigureKind::kDualAxisLines;
  if (v == "stacked-shares" || v == "stacked-shares+volume-bars") return FigureKind::kStackedShares;
  return std::nullopt;
}

std::string_view figure_kind_name(FigureKind k) {
  return k == FigureKind::kDualAxisLines ? "dual-axis-lines" : "stacked-shares";
}

std::string render_placeholder(std::string_view title, std::string_view notice) {
  std::ostringstream o;
  open_svg(o, title);
  o << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight / 2
    << "\" text-anchor=\"middle\" fill=\"#666\">" << xml_escape(notice) << "</text>\n</svg>\n";
  return o.str();
}

std::string render_dual_axis(const NamedSeries& left, const NamedSeries& right,
                             std::string_view title) {
  std::set<std::string> buckets;
  for (const auto* s : {&left, &right}) {
    for (const auto& p : s->points) buckets.insert(p.bucket);
  }
  if (buckets.empty()) return render_placeholder(title, "no data: both series are empty");

  const BucketAxis axis({buckets.begin(), buckets.end()});
  const Range lr = range_of(left.points);
  const Range rr = range_of(right.points);
  std::ostringstream o;
  open_svg(o, title);
  axis.draw(o);
  draw_y_axis(o, lr, true, kLeftColor, left.name);
  draw_y_axis(o, rr, false, kRightColor, right.name);
  draw_line(o, axis, lr, left.points, kLeftColor);
  draw_line(o, axis, rr, right.points, kRightColor);
  legend_entry(o, 0, kLeftColor, left.name);
  legend_entry(o, 1, kRightColor, right.name);
  o << "</svg>\n";
  return o.str();
}

std::string render_stance_breakdown(std::span<const series::StancePoint> points,
                                    std::string_view title) {
  if (points.empty()) return render_placeholder(title, "no data: stance series is empty");

  std::vector<std::string> buckets;
  for (const auto& p : points) buckets.push_back(p.bucket);
  std::sort(buckets.begin(), buckets.end());
  const BucketAxis axis(buckets);
  std::size_t max_n = 1;
  for (const auto& p : points) max_n = std::max(max_n, p.n);
  const Range share{0.0, 1.0};
  const Range volume{0.0, static_cast<double>(max_n)};

  std::ostringstream o;
  open_svg(o, title);
  for (const auto& p : points) {
    const double w = axis.band() * 0.6;
    const double y = volume.map(static_cast<double>(p.n));
    o << "<rect x=\"" << num(axis.x_of(p.bucket) - w / 2) << "\" y=\"" << num(y)
      << "\" width=\"" << num(w) << "\" height=\"" << num(kBottom - y) << "\" fill=\""
      << kBarColor << "\"/>\n";
  }

  // A lone bucket is stretched across its band so the areas have width.
  std::vector<double> xs;
  for (const auto& p : points) xs.push_back(axis.x_of(p.bucket));
  std::vector<series::StancePoint> pts(points.begin(), points.end());
  if (pts.size() == 1) {
    xs = {axis.center(0) - axis.band() / 2, axis.center(0) + axis.band() / 2};
    pts.push_back(pts.front());
  }
  std::vector<double> lower(pts.size(), 0.0);
  for (std::size_t c = 0; c < kNumStances; ++c) {
    std::vector<double> upper(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) upper[i] = lower[i] + pts[i].shares[c];
    o << "<polygon fill=\"" << kStanceColors[c] << "\" fill-opacity=\"0.55\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
      o << (i ? " " : "") << num(xs[i]) << ',' << num(share.map(upper[i]));
    }
    for (std::size_t i = pts.size(); i-- > 0;) {
      o << ' ' << num(xs[i]) << ',' << num(share.map(lower[i]));
    }
    o << "\"/>\n";
    lower = std::move(upper);
  }

  axis.draw(o);
  draw_y_axis(o, share, true, "#000", "share");
  draw_y_axis(o, volume, false, "#555", "replies");
  for (std::size_t c = 0; c < kNumStances; ++c) {
    legend_entry(o, c, kStanceColors[c], stance_name(kAllStances[c]));
  }
  legend_entry(o, kNumStances, kBarColor, "replies");
  o << "</svg>\n";
  return o.str();
}

void write_dual_csv(std::ostream& out, const NamedSeries& left, const NamedSeries& right) {
  std::map<std::string, std::pair<std::optional<double>, std::optional<double>>> rows;
  for (const auto& p : left.points) rows[p.bucket].first = p.value;
  for (const auto& p : right.points) rows[p.bucket].second = p.value;
  out << "bucket," << csv_field(left.name) << ',' << csv_field(right.name) << '\n';
  for (const auto& [bucket, v] : rows) {
    out << bucket << ',' << (v.first ? format_fixed(*v.first) : "") << ','
        << (v.second ? format_fixed(*v.second) : "") << '\n';
  }
}

std::pair<NamedSeries, NamedSeries> read_dual_csv(std::istream& in) {
  std::pair<NamedSeries, NamedSeries> out;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto f = parse_csv_record(trim(line));
    if (f.size() != 3) throw Error("dual CSV: expected 3 columns");
    if (header) {
      out.first.name = f[1];
      out.second.name = f[2];
      header = false;
      continue;
    }
    if (const auto v = parse_cell(f[1])) out.first.points.push_back({f[0], *v, 1});
    if (const auto v = parse_cell(f[2])) out.second.points.push_back({f[0], *v, 1});
  }
  return out;
}

std::string render_figure(FigureKind kind, std::span<const std::filesystem::path> csvs,
                          std::string_view title) {
  if (kind == FigureKind::kStackedShares) {
    if (csvs.size() != 1) throw Error("stacked-shares takes one stance CSV");
    auto in = open_csv(csvs[0]);
    const auto pts = series::read_stance_csv(in);
    return render_stance_breakdown(pts, title);
  }
  if (csvs.size() == 1) {
    auto in = open_csv(csvs[0]);
    const auto [l, r] = read_dual_csv(in);
    return render_dual_axis(l, r, title);
  }
  if (csvs.size() != 2) throw Error("dual-axis-lines takes one dual CSV or two series CSVs");
  NamedSeries l{csvs[0].stem().string(), series::load_series_csv(csvs[0])};
  NamedSeries r{csvs[1].stem().string(), series::load_series_csv(csvs[1])};
  return render_dual_axis(l, r, title);
}

}  // namespace stanceshift::figure
