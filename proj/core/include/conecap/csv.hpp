#pragma once

#include <string>
#include <vector>

namespace conecap {

/// Table destined for a CSV file. Comment lines name the quantities and are
/// emitted with a '#' prefix; numbers use a fixed "%.12g" format so that
/// identical inputs give byte-identical files.
struct CsvTable {
  std::string name;  // file stem
  std::vector<std::string> comments;
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

std::string render_csv(const CsvTable& table);
void write_csv(const CsvTable& table, const std::string& directory);

/// gnuplot script plotting the given columns of the table's CSV.
std::string render_plot_script(const CsvTable& table, std::size_t x_column,
                               const std::vector<std::size_t>& y_columns,
                               const std::string& title);
void write_plot_script(const CsvTable& table, std::size_t x_column,
                       const std::vector<std::size_t>& y_columns,
                       const std::string& title,
                       const std::string& directory);

std::string format_double(double v);

}  // namespace conecap
