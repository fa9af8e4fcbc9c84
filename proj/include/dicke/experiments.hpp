#pragma once

#include "dicke/metrology.hpp"
#include "dicke/multimode.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace dicke::experiments {

/// Uniform grid spec, parsed from "min:max:points". Scenario runners realize
/// it inclusively (both endpoints on the grid, points >= 2).
struct GridSpec {
    double min = 0.0;
    double max = 0.0;
    int points = 0;
};

GridSpec parse_grid(const std::string& text);
std::vector<double> realize_grid(const GridSpec& g);

struct RunConfig {
    std::string scenario;
    std::vector<int> n_values;         // empty -> scenario default
    int k_max = -1;                    // negative -> scenario default
    std::optional<GridSpec> theta_grid;
    std::vector<double> chi_values;    // empty -> scenario default
    std::vector<double> m_values;      // empty -> scenario default
    double theta1 = 0.3;               // readout angle for fig2d / snr
    std::string out_path;              // empty -> stdout
    std::string format = "csv";        // csv | json
    int workers = 1;
};

struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    // echoed as "# key = value" lines in CSV, an object in JSON
    std::vector<std::pair<std::string, std::string>> metadata;
};

/// Shortest %.12g rendering; fixed across platforms for identical doubles.
std::string format_double(double v);

Table run_fig1a(const RunConfig& config);
std::vector<Table> run_fig1bc(const RunConfig& config);
Table run_fig2a(const RunConfig& config);
Table run_fig2b(const RunConfig& config);
Table run_fig2c(const RunConfig& config);
Table run_fig2d(const RunConfig& config);
Table run_qfi(const RunConfig& config);
Table run_mom(const RunConfig& config);
Table run_snr(const RunConfig& config);

std::vector<Table> run_scenario(const RunConfig& config);

void write_csv(const Table& table, std::ostream& os);
void write_json(const std::vector<Table>& tables, std::ostream& os);

/// CSV: one file per table (single table goes to out_path verbatim, several
/// get "_<name>" stem suffixes). JSON: one file with all tables. Empty
/// out_path streams to stdout.
void write_output(const std::vector<Table>& tables, const RunConfig& config);

/// Deterministic index-parallel map: results land in input order regardless
/// of scheduling.
void parallel_for_indexed(int count, int workers,
                          const std::function<void(int)>& fn);

} // namespace dicke::experiments
