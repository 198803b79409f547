#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bmt/dataset.hpp"
#include "bmt/simulation.hpp"
#include "bmt/workflow.hpp"

namespace bmt {

inline constexpr const char* kVersion = "0.1.0";

// Shortest exact decimal representation, byte-stable across runs.
std::string format_double(double v);

struct CsvSchema {
  std::string target;
  std::vector<std::string> controls;
  std::vector<std::string> candidates;  // empty: every remaining column
};

struct CsvLoadReport {
  std::size_t rows_read = 0;
  std::size_t rows_dropped = 0;  // listwise deletion on missing cells
};

// RFC-4180: quoted fields, embedded commas/quotes/newlines, header row
// required. Empty, NA and NaN cells count as missing.
Dataset load_csv(const std::string& path, const CsvSchema& schema,
                 CsvLoadReport* report = nullptr);

void write_dataset(const std::string& path, const Dataset& ds,
                   const std::string& target_name = "y");

using KeyValues = std::map<std::string, std::string>;

// Flat "key = value" lines; blank lines and full-line # comments ignored.
KeyValues parse_config_text(const std::string& text);
KeyValues load_config(const std::string& path);
std::string serialize_config(const KeyValues& kv);

// FNV-1a over the serialized text, as 16 hex digits.
std::string config_hash(const KeyValues& kv);

struct GridSpec {
  std::size_t k = 4;
  double alpha = 0.8;
  double r2 = 0.7;
  double rho = 0.6;
  std::vector<double> beta;  // optional, length k
  std::vector<double> vif = {1.0};
  std::vector<double> pi = {0.0};
  std::vector<std::size_t> t_list = {100};
  std::vector<std::size_t> n_list;  // empty: n = T - 2k
  std::size_t burn_in = 200;
  std::size_t holdout = 1;
};

GridSpec parse_grid(const KeyValues& kv);  // rejects unknown keys
KeyValues serialize_grid(const GridSpec& gs);
std::vector<DgpConfig> expand_grid(const GridSpec& gs);

std::string bundle_to_json(const ReportBundle& bundle);
ReportBundle bundle_from_json(const std::string& text);

std::string summaries_to_json(const std::vector<DesignSummary>& summaries);

const std::vector<std::string>& metric_names();
// One CSV per metric: rows are designs, columns are methods.
std::string metric_table_csv(const std::vector<DesignSummary>& summaries,
                             const std::string& metric);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

// Headerless rectangular numeric CSV, e.g. a covariance matrix.
Matrix load_matrix_csv(const std::string& path);

}  // namespace bmt
