#pragma once

#include <fstream>
#include <string>
#include <vector>

namespace spinctrl {

// Fixed float formatting (12 significant digits) so identical runs emit
// byte-identical files.
std::string format_value(double v);

class CsvWriter {
  public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header, bool append);

    void write_row(const std::vector<std::string>& cells);
    void flush() { out_.flush(); }

  private:
    std::ofstream out_;
};

// Rows of an existing CSV file, header excluded; empty if absent.
std::vector<std::vector<std::string>> read_csv_rows(const std::string& path);

}  // namespace spinctrl
