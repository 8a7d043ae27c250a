#include "twophase/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <deque>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace twophase {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(std::ostream& out, std::initializer_list<std::string_view> header)
    : out_(out), columns_(header.size()) {
  bool first = true;
  for (auto h : header) {
    out_ << (first ? "" : ",") << h;
    first = false;
  }
  out_ << '\n';
}

CsvWriter::CsvWriter(std::ostream& out, std::span<const std::string> header)
    : out_(out), columns_(header.size()) {
  text_row(header);
}

void CsvWriter::row(std::initializer_list<double> values) {
  row(std::span<const double>(values.begin(), values.size()));
}

void CsvWriter::row(std::span<const double> values) {
  if (values.size() != columns_) throw std::invalid_argument("CSV row width mismatch");
  for (std::size_t i = 0; i < values.size(); ++i) out_ << (i ? "," : "") << format_double(values[i]);
  out_ << '\n';
}

void CsvWriter::text_row(std::span<const std::string> cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
  out_ << '\n';
}

CsvTable read_csv(std::istream& in) {
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty CSV");
  std::istringstream hs(line);
  for (std::string cell; std::getline(hs, cell, ',');) t.header.push_back(cell);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::string_view rest = line;
    for (;;) {
      const auto comma = rest.find(',');
      const auto cell = rest.substr(0, comma);
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc() || ptr != cell.data() + cell.size()) {
        throw std::runtime_error("bad CSV number '" + std::string(cell) + "'");
      }
      row.push_back(v);
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (row.size() != t.header.size()) throw std::runtime_error("CSV row width mismatch");
    t.rows.push_back(std::move(row));
  }
  return t;
}

void write_profile(const std::filesystem::path& path, const Grid& grid, const GridState& st) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  CsvWriter csv(out, {"z", "S", "p"});
  const auto z = grid.centers();
  for (std::size_t k = 0; k < z.size(); ++k) csv.row({z[k], st.S[k], st.p[k]});
}

std::optional<Plateau> extract_plateau(std::span<const double> z, std::span<const double> S,
                                       double band, int min_cells, std::span<const double> exclude) {
  if (z.size() != S.size()) throw std::invalid_argument("profile columns differ in length");
  std::deque<std::size_t> hi, lo;  // monotone queues of window max and min
  std::size_t left = 0;
  std::size_t best_l = 0, best_len = 0;
  for (std::size_t r = 0; r < S.size(); ++r) {
    while (!hi.empty() && S[hi.back()] <= S[r]) hi.pop_back();
    while (!lo.empty() && S[lo.back()] >= S[r]) lo.pop_back();
    hi.push_back(r);
    lo.push_back(r);
    while (S[hi.front()] - S[lo.front()] >= band) {
      ++left;
      if (hi.front() < left) hi.pop_front();
      if (lo.front() < left) lo.pop_front();
    }
    const std::size_t len = r - left + 1;
    if (len <= best_len) continue;
    const double mid = 0.5 * (S[hi.front()] + S[lo.front()]);
    const bool excluded = std::any_of(exclude.begin(), exclude.end(),
                                      [&](double e) { return std::abs(mid - e) < band; });
    if (!excluded) {
      best_l = left;
      best_len = len;
    }
  }
  if (best_len < static_cast<std::size_t>(min_cells)) return std::nullopt;
  std::vector<double> run(S.begin() + best_l, S.begin() + best_l + best_len);
  std::nth_element(run.begin(), run.begin() + run.size() / 2, run.end());
  double median = run[run.size() / 2];
  if (run.size() % 2 == 0) {
    median = 0.5 * (median + *std::max_element(run.begin(), run.begin() + run.size() / 2));
  }
  return Plateau{median, z[best_l], z[best_l + best_len - 1], static_cast<int>(best_len)};
}

std::optional<double> level_crossing(std::span<const double> z, std::span<const double> S,
                                     double level, Side side) {
  const std::size_t n = S.size();
  auto at = [&](std::size_t k) -> std::optional<double> {
    const double a = S[k] - level, b = S[k + 1] - level;
    if (a == 0.0) return z[k];
    if ((a < 0.0) == (b < 0.0)) return std::nullopt;
    return z[k] + (z[k + 1] - z[k]) * a / (a - b);
  };
  if (side == Side::leftmost) {
    for (std::size_t k = 0; k + 1 < n; ++k) {
      if (auto c = at(k)) return c;
    }
  } else {
    for (std::size_t k = n - 1; k-- > 0;) {
      if (auto c = at(k)) return c;
    }
  }
  return std::nullopt;
}

double estimate_front_speed(std::span<const double> z, std::span<const double> S1, double t1,
                            std::span<const double> S2, double t2, double level, Side side) {
  if (!(t2 > t1)) throw std::invalid_argument("front speed needs t2 > t1");
  const auto z1 = level_crossing(z, S1, level, side);
  const auto z2 = level_crossing(z, S2, level, side);
  if (!z1 || !z2) throw std::runtime_error("profile does not cross S = " + format_double(level));
  return (*z2 - *z1) / (t2 - t1);
}

double Deviation::error() const { return std::abs(measured - theory); }

Prediction predict(const PiecewiseSolution& sol, std::string source) {
  Prediction out;
  out.source = std::move(source);
  std::vector<const Segment*> shocks;
  for (const auto& s : sol.segments) {
    if (s.kind == SegmentKind::shock) shocks.push_back(&s);
  }
  for (std::size_t i = 0; i < shocks.size(); ++i) {
    const auto* s = shocks[i];
    const bool last = i + 1 == shocks.size();
    out.fronts.push_back({last ? "leading" : "trailing", s->left_S, s->right_S, s->speed_lo,
                          last ? Side::rightmost : Side::leftmost});
  }
  for (std::size_t i = 1; i + 1 < sol.segments.size(); ++i) {
    const auto& s = sol.segments[i];
    if (s.kind == SegmentKind::constant) out.plateau = s.left_S;
  }
  return out;
}

ComparisonReport compare(std::span<const double> z, const GridState& early, const GridState& late,
                         const Prediction& theory, double S_B, double S_T, double band,
                         int min_cells) {
  if (early.S.size() != z.size() || late.S.size() != z.size()) {
    throw std::invalid_argument("profiles and grid differ in size");
  }
  ComparisonReport r;
  const double ends[] = {S_B, S_T};
  r.plateau = extract_plateau(z, late.S, band, min_cells, ends);
  if (theory.plateau) {
    r.deviations.push_back({"plateau", r.plateau ? r.plateau->value : std::nan(""),
                            *theory.plateau, theory.source});
  }
  for (const auto& f : theory.fronts) {
    const double level = 0.5 * (f.left_S + f.right_S);
    double c = std::nan("");
    try {
      c = estimate_front_speed(z, early.S, early.t, late.S, late.t, level, f.side);
    } catch (const std::runtime_error&) {
    }
    r.fronts.push_back({f.name, level, c, f.speed});
    r.deviations.push_back({f.name + "_speed", c, f.speed, theory.source});
  }
  return r;
}

void write_report(std::ostream& out, const ComparisonReport& r) {
  out << "quantity,measured,theory,abs_error,source\n";
  if (r.plateau) {
    out << "plateau_extent," << format_double(r.plateau->z_lo) << "," << format_double(r.plateau->z_hi)
        << ",," << r.plateau->cells << " cells\n";
  }
  for (const auto& d : r.deviations) {
    out << d.quantity << "," << format_double(d.measured) << "," << format_double(d.theory) << ","
        << format_double(d.error()) << "," << d.source << "\n";
  }
}

}  // namespace twophase
