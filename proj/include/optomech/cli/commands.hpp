#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "optomech/cli/config.hpp"

namespace optomech::cli {

/// CSV payload: one header line, numbers in %.16e (integers as integers).
class Table {
 public:
  explicit Table(std::vector<std::string> columns);

  struct Cell {
    Cell(double v) : number(v) {}
    Cell(int v) : integer(v), is_integer(true) {}
    Cell(long v) : integer(v), is_integer(true) {}
    Cell(unsigned long v) : integer(static_cast<long>(v)), is_integer(true) {}
    Cell(const char* s) : text(s), is_text(true) {}
    Cell(std::string s) : text(std::move(s)), is_text(true) {}
    double number = 0.0;
    long integer = 0;
    std::string text;
    bool is_integer = false;
    bool is_text = false;
  };
  void add_row(const std::vector<Cell>& cells);

  const std::vector<std::string>& columns() const noexcept { return columns_; }
  std::size_t rows() const noexcept { return rows_; }
  std::string csv() const;

 private:
  std::vector<std::string> columns_;
  std::string body_;
  std::size_t rows_ = 0;
};

struct ResultBundle {
  Table table{{}};
  /// Command-specific metadata: resolved values, convergence report, extras.
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();
  /// selfcheck: false when an invariant failed.
  bool ok = true;
};

ResultBundle cmd_transmission(const RunConfig& cfg);
ResultBundle cmd_spectrum(const RunConfig& cfg);
ResultBundle cmd_noon_sweep(const RunConfig& cfg);
ResultBundle cmd_fidelity(const RunConfig& cfg);
ResultBundle cmd_selfcheck(const RunConfig& cfg);

std::string format_number(double v);

}  // namespace optomech::cli
