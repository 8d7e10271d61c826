#include "conecap/csv.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace conecap {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string render_csv(const CsvTable& table) {
  std::string out;
  for (const auto& c : table.comments) out += "# " + c + "\n";
  for (std::size_t k = 0; k < table.header.size(); ++k) {
    if (k) out += ",";
    out += table.header[k];
  }
  out += "\n";
  for (const auto& row : table.rows) {
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k) out += ",";
      out += format_double(row[k]);
    }
    out += "\n";
  }
  return out;
}

namespace {

void write_text(const std::string& text, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
  if (!f) throw std::runtime_error("write failed for " + path);
}

}  // namespace

void write_csv(const CsvTable& table, const std::string& directory) {
  write_text(render_csv(table),
             (std::filesystem::path(directory) / (table.name + ".csv"))
                 .string());
}

std::string render_plot_script(const CsvTable& table, std::size_t x_column,
                               const std::vector<std::size_t>& y_columns,
                               const std::string& title) {
  std::string out;
  out += "set datafile separator ','\n";
  out += "set key top right\n";
  out += "set title '" + title + "'\n";
  out += "set xlabel '" + table.header[x_column] + "'\n";
  out += "set logscale x\n";
  out += "plot ";
  for (std::size_t k = 0; k < y_columns.size(); ++k) {
    if (k) out += ", ";
    out += "'" + table.name + ".csv' using " +
           std::to_string(x_column + 1) + ":" +
           std::to_string(y_columns[k] + 1) + " with linespoints title '" +
           table.header[y_columns[k]] + "'";
  }
  out += "\n";
  return out;
}

void write_plot_script(const CsvTable& table, std::size_t x_column,
                       const std::vector<std::size_t>& y_columns,
                       const std::string& title,
                       const std::string& directory) {
  write_text(render_plot_script(table, x_column, y_columns, title),
             (std::filesystem::path(directory) / (table.name + ".plt"))
                 .string());
}

}  // namespace conecap
