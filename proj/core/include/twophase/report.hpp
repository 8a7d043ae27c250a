#pragma once

#include "twophase/entropy.hpp"
#include "twophase/pde_solver.hpp"

#include <filesystem>
#include <initializer_list>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace twophase {

// 17 significant digits in the shortest general notation, enough to round-trip any double.
std::string format_double(double v);

class CsvWriter {
 public:
  CsvWriter(std::ostream& out, std::initializer_list<std::string_view> header);
  CsvWriter(std::ostream& out, std::span<const std::string> header);

  void row(std::initializer_list<double> values);
  void row(std::span<const double> values);
  void text_row(std::span<const std::string> cells);

 private:
  std::ostream& out_;
  std::size_t columns_;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

CsvTable read_csv(std::istream& in);

void write_profile(const std::filesystem::path& path, const Grid& grid, const GridState& st);

struct Plateau {
  double value;
  double z_lo;
  double z_hi;
  int cells;
};

// Longest run of consecutive cells whose spread stays below `band`, ignoring runs centred
// within `band` of any value in `exclude`.
std::optional<Plateau> extract_plateau(std::span<const double> z, std::span<const double> S,
                                       double band = 5e-3, int min_cells = 20,
                                       std::span<const double> exclude = {});

enum class Side { leftmost, rightmost };

std::optional<double> level_crossing(std::span<const double> z, std::span<const double> S,
                                     double level, Side side);
double estimate_front_speed(std::span<const double> z, std::span<const double> S1, double t1,
                            std::span<const double> S2, double t2, double level,
                            Side side = Side::rightmost);

struct Deviation {
  std::string quantity;
  double measured;
  double theory;
  std::string source;

  double error() const;
};

struct FrontSpeed {
  std::string name;
  double level;
  double measured;
  double theory;
};

struct Prediction {
  std::string source;
  std::optional<double> plateau;
  struct Front {
    std::string name;
    double left_S;
    double right_S;
    double speed;
    Side side;
  };
  std::vector<Front> fronts;
};

// Plateau and front predictions from an entropy solution: one front per shock, one plateau
// per intermediate constant state.
Prediction predict(const PiecewiseSolution& sol, std::string source);

struct ComparisonReport {
  std::optional<Plateau> plateau;
  std::vector<FrontSpeed> fronts;
  std::vector<Deviation> deviations;
};

ComparisonReport compare(std::span<const double> z, const GridState& early, const GridState& late,
                         const Prediction& theory, double S_B, double S_T, double band = 5e-3,
                         int min_cells = 20);

void write_report(std::ostream& out, const ComparisonReport& r);

}  // namespace twophase
