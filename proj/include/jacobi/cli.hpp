#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace jacobi::cli {

struct Grid {
    double lo = 0.0, hi = 0.0;
    long count = 0;
    bool given = false;
    std::vector<double> points() const;
};

struct RunConfig {
    std::string command;
    nlohmann::json model;
    Grid grid;
    long n_max = 100'000;
    double tol = 1e-10;
    std::string out;           // empty: stdout
    std::string format = "csv";
    long trunc_size = 0;
};

/// "lo:hi:count"
Grid parse_grid(const std::string& s);

/// Executes the command.  Returns 0, or 2 (config), 3 (numerical), 4 (I/O)
/// after writing an error object to `err`.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Full command line entry point.
int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace jacobi::cli
