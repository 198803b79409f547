#include "bmt/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <type_traits>

#include "json.hpp"

#include "bmt/errors.hpp"

namespace bmt {

using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write file: " + path);
  out << content;
  if (!out) throw Error("write failed: " + path);
}

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

bool is_missing(const std::string& cell) {
  const std::string t = trim(cell);
  return t.empty() || t == "NA" || t == "NaN" || t == "nan" || t == "NAN";
}

bool parse_number(const std::string& cell, double* out) {
  const std::string t = trim(cell);
  if (t.empty()) return false;
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size()) return false;
  *out = v;
  return true;
}

std::vector<std::vector<std::string>> parse_csv_records(const std::string& text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  const std::size_t len = text.size();
  for (std::size_t i = 0; i < len;) {
    const char ch = text[i];
    if (in_quotes) {
      if (ch == '"') {
        if (i + 1 < len && text[i + 1] == '"') {
          field += '"';
          i += 2;
        } else {
          in_quotes = false;
          ++i;
        }
      } else {
        field += ch;
        ++i;
      }
    } else if (ch == '"') {
      in_quotes = true;
      field_started = true;
      ++i;
    } else if (ch == ',') {
      record.push_back(field);
      field.clear();
      field_started = true;
      ++i;
    } else if (ch == '\r') {
      ++i;
    } else if (ch == '\n') {
      if (field_started || !field.empty() || !record.empty()) {
        record.push_back(field);
        records.push_back(std::move(record));
      }
      record = {};
      field.clear();
      field_started = false;
      ++i;
    } else {
      field += ch;
      field_started = true;
      ++i;
    }
  }
  if (in_quotes) throw ParseError("csv: unterminated quoted field");
  if (field_started || !field.empty() || !record.empty()) {
    record.push_back(field);
    records.push_back(std::move(record));
  }
  return records;
}

std::string quote_csv(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

}  // namespace

Dataset load_csv(const std::string& path, const CsvSchema& schema, CsvLoadReport* report) {
  const auto records = parse_csv_records(read_text_file(path));
  if (records.empty()) throw ParseError(path + ": empty file, header row required");
  const auto& header = records[0];
  std::map<std::string, std::size_t> col_of;
  for (std::size_t j = 0; j < header.size(); ++j) {
    const std::string name = trim(header[j]);
    if (name.empty()) throw ParseError(path + ": empty header name in column " +
                                       std::to_string(j + 1));
    if (!col_of.emplace(name, j).second)
      throw ParseError(path + ": duplicate header name '" + name + "'");
  }
  const auto need = [&](const std::string& name) {
    const auto it = col_of.find(name);
    if (it == col_of.end()) throw ParseError(path + ": no column named '" + name + "'");
    return it->second;
  };

  if (schema.target.empty()) throw InvalidArgument("load_csv: target column not set");
  const std::size_t target_col = need(schema.target);
  std::vector<std::size_t> control_cols;
  for (const auto& name : schema.controls) control_cols.push_back(need(name));
  std::vector<std::size_t> candidate_cols;
  std::vector<std::string> candidate_names;
  if (schema.candidates.empty()) {
    std::vector<unsigned char> taken(header.size(), 0);
    taken[target_col] = 1;
    for (std::size_t c : control_cols) taken[c] = 1;
    for (std::size_t j = 0; j < header.size(); ++j)
      if (!taken[j]) {
        candidate_cols.push_back(j);
        candidate_names.push_back(trim(header[j]));
      }
  } else {
    for (const auto& name : schema.candidates) {
      candidate_cols.push_back(need(name));
      candidate_names.push_back(name);
    }
  }
  if (candidate_cols.empty()) throw InsufficientColumns(path + ": no candidate columns");

  std::vector<std::size_t> used = {target_col};
  used.insert(used.end(), control_cols.begin(), control_cols.end());
  used.insert(used.end(), candidate_cols.begin(), candidate_cols.end());

  std::vector<std::vector<double>> rows;
  std::size_t dropped = 0;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.size() != header.size())
      throw ParseError(path + ": row " + std::to_string(r + 1) + " has " +
                       std::to_string(rec.size()) + " fields, expected " +
                       std::to_string(header.size()));
    std::vector<double> vals(used.size());
    bool missing = false;
    for (std::size_t u = 0; u < used.size(); ++u) {
      const std::string& cell = rec[used[u]];
      if (is_missing(cell)) {
        missing = true;
        continue;
      }
      if (!parse_number(cell, &vals[u]))
        throw ParseError(path + ": row " + std::to_string(r + 1) + ", column '" +
                         trim(header[used[u]]) + "': '" + trim(cell) + "' is not numeric");
    }
    if (missing) {
      ++dropped;
      continue;
    }
    rows.push_back(std::move(vals));
  }
  if (report) {
    report->rows_read = records.size() - 1;
    report->rows_dropped = dropped;
  }
  if (rows.empty()) throw EmptyAfterFiltering(path + ": no usable rows after dropping " +
                                              std::to_string(dropped) + " incomplete rows");

  Dataset ds;
  const std::size_t t = rows.size();
  ds.y.resize(t);
  ds.z = Matrix(t, control_cols.size());
  ds.x = Matrix(t, candidate_cols.size());
  ds.candidate_names = candidate_names;
  for (std::size_t i = 0; i < t; ++i) {
    ds.y[i] = rows[i][0];
    for (std::size_t j = 0; j < control_cols.size(); ++j) ds.z(i, j) = rows[i][1 + j];
    for (std::size_t j = 0; j < candidate_cols.size(); ++j)
      ds.x(i, j) = rows[i][1 + control_cols.size() + j];
  }
  ds.validate();
  return ds;
}

void write_dataset(const std::string& path, const Dataset& ds,
                   const std::string& target_name) {
  std::ostringstream out;
  out << quote_csv(target_name);
  for (std::size_t j = 0; j < ds.zeta(); ++j) out << ",z" << (j + 1);
  for (std::size_t j = 0; j < ds.n_candidates(); ++j) {
    const std::string name = ds.candidate_names.empty() ? "x" + std::to_string(j + 1)
                                                        : ds.candidate_names[j];
    out << ',' << quote_csv(name);
  }
  out << '\n';
  for (std::size_t i = 0; i < ds.rows(); ++i) {
    out << format_double(ds.y[i]);
    for (std::size_t j = 0; j < ds.zeta(); ++j) out << ',' << format_double(ds.z(i, j));
    for (std::size_t j = 0; j < ds.n_candidates(); ++j)
      out << ',' << format_double(ds.x(i, j));
    out << '\n';
  }
  write_text_file(path, out.str());
}

Matrix load_matrix_csv(const std::string& path) {
  const auto records = parse_csv_records(read_text_file(path));
  if (records.empty()) throw ParseError(path + ": empty matrix file");
  const std::size_t cols = records[0].size();
  Matrix m(records.size(), cols);
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (records[i].size() != cols)
      throw ParseError(path + ": row " + std::to_string(i + 1) + " has " +
                       std::to_string(records[i].size()) + " fields, expected " +
                       std::to_string(cols));
    for (std::size_t j = 0; j < cols; ++j) {
      double v;
      if (!parse_number(records[i][j], &v))
        throw ParseError(path + ": row " + std::to_string(i + 1) + ", column " +
                         std::to_string(j + 1) + ": '" + trim(records[i][j]) +
                         "' is not numeric");
      m(i, j) = v;
    }
  }
  return m;
}

KeyValues parse_config_text(const std::string& text) {
  KeyValues kv;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (const std::size_t hash = t.find('#'); hash != std::string::npos)
      t = trim(t.substr(0, hash));  // trailing comment
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw ParseError("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty())
      throw ParseError("config line " + std::to_string(lineno) + ": empty key");
    if (!kv.emplace(key, value).second)
      throw ParseError("config line " + std::to_string(lineno) + ": duplicate key '" +
                       key + "'");
  }
  return kv;
}

KeyValues load_config(const std::string& path) {
  return parse_config_text(read_text_file(path));
}

std::string serialize_config(const KeyValues& kv) {
  std::string out;
  for (const auto& [k, v] : kv) {
    out += k;
    out += " = ";
    out += v;
    out += '\n';
  }
  return out;
}

std::string config_hash(const KeyValues& kv) {
  const std::string text = serialize_config(kv);
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

double parse_double_or_throw(const std::string& v, const std::string& key) {
  double out;
  if (!parse_number(v, &out))
    throw ParseError("config key '" + key + "': '" + v + "' is not numeric");
  return out;
}

std::size_t parse_size_or_throw(const std::string& v, const std::string& key) {
  const double d = parse_double_or_throw(v, key);
  if (d < 0 || d != std::floor(d) || d > 9e15)
    throw ParseError("config key '" + key + "': '" + v + "' is not a nonnegative integer");
  return static_cast<std::size_t>(d);
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : v) {
    if (c == ',') {
      parts.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(trim(cur));
  return parts;
}

std::vector<double> parse_double_list(const std::string& v, const std::string& key) {
  std::vector<double> out;
  for (const auto& p : split_list(v)) out.push_back(parse_double_or_throw(p, key));
  return out;
}

std::vector<std::size_t> parse_size_list(const std::string& v, const std::string& key) {
  std::vector<std::size_t> out;
  for (const auto& p : split_list(v)) out.push_back(parse_size_or_throw(p, key));
  return out;
}

template <typename T>
std::string join_list(const std::vector<T>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    if constexpr (std::is_same_v<T, double>) out += format_double(v[i]);
    else out += std::to_string(v[i]);
  }
  return out;
}

}  // namespace

GridSpec parse_grid(const KeyValues& kv) {
  GridSpec gs;
  KeyValues rest = kv;
  const auto take = [&rest](const std::string& key) -> std::optional<std::string> {
    const auto it = rest.find(key);
    if (it == rest.end()) return std::nullopt;
    std::string v = it->second;
    rest.erase(it);
    return v;
  };
  if (auto v = take("k")) gs.k = parse_size_or_throw(*v, "k");
  if (auto v = take("alpha")) gs.alpha = parse_double_or_throw(*v, "alpha");
  if (auto v = take("r2")) gs.r2 = parse_double_or_throw(*v, "r2");
  if (auto v = take("rho")) gs.rho = parse_double_or_throw(*v, "rho");
  if (auto v = take("beta")) gs.beta = parse_double_list(*v, "beta");
  if (auto v = take("vif")) gs.vif = parse_double_list(*v, "vif");
  if (auto v = take("pi")) gs.pi = parse_double_list(*v, "pi");
  if (auto v = take("T")) gs.t_list = parse_size_list(*v, "T");
  if (auto v = take("n")) {
    if (trim(*v) == "auto") gs.n_list.clear();
    else gs.n_list = parse_size_list(*v, "n");
  }
  if (auto v = take("burn_in")) gs.burn_in = parse_size_or_throw(*v, "burn_in");
  if (auto v = take("holdout")) gs.holdout = parse_size_or_throw(*v, "holdout");
  if (!rest.empty()) {
    std::string keys;
    for (const auto& [k, v] : rest) {
      if (!keys.empty()) keys += ", ";
      keys += k;
    }
    throw ParseError("unknown grid config key(s): " + keys);
  }
  return gs;
}

KeyValues serialize_grid(const GridSpec& gs) {
  KeyValues kv;
  kv["k"] = std::to_string(gs.k);
  kv["alpha"] = format_double(gs.alpha);
  kv["r2"] = format_double(gs.r2);
  kv["rho"] = format_double(gs.rho);
  if (!gs.beta.empty()) kv["beta"] = join_list(gs.beta);
  kv["vif"] = join_list(gs.vif);
  kv["pi"] = join_list(gs.pi);
  kv["T"] = join_list(gs.t_list);
  kv["n"] = gs.n_list.empty() ? "auto" : join_list(gs.n_list);
  kv["burn_in"] = std::to_string(gs.burn_in);
  kv["holdout"] = std::to_string(gs.holdout);
  return kv;
}

std::vector<DgpConfig> expand_grid(const GridSpec& gs) {
  std::vector<DgpConfig> out;
  for (double vif : gs.vif)
    for (double pi : gs.pi)
      for (std::size_t t : gs.t_list) {
        std::vector<std::size_t> ns = gs.n_list;
        if (ns.empty()) {
          if (t <= 2 * gs.k) throw InvalidArgument("grid: T too small for n = T - 2k");
          ns = {t - 2 * gs.k};
        }
        for (std::size_t n : ns) {
          DgpConfig cfg;
          cfg.t = t;
          cfg.n = n;
          cfg.k = gs.k;
          cfg.alpha = gs.alpha;
          cfg.r2_target = gs.r2;
          cfg.rho = gs.rho;
          cfg.vif = vif;
          cfg.pi = pi;
          cfg.beta = gs.beta;
          cfg.burn_in = gs.burn_in;
          cfg.holdout = gs.holdout;
          cfg.validate();
          out.push_back(std::move(cfg));
        }
      }
  return out;
}

namespace {

json method_report_to_json(const MethodReport& rep) {
  json j;
  j["method"] = rep.method;
  json sel = json::array();
  for (std::size_t idx : rep.selected) sel.push_back(idx + 1);  // 1-based on the wire
  j["selected"] = std::move(sel);
  j["selected_names"] = rep.selected_names;
  j["coefficients"] = rep.coefficients;
  j["se"] = rep.se;
  j["t_stats"] = rep.t_stats;
  if (std::isfinite(rep.lambda)) j["lambda"] = rep.lambda;
  j["rmse_in_sample"] = rep.rmse_in_sample;
  j["bic"] = rep.bic;
  json fc = json::array();
  for (const auto& f : rep.forecasts)
    fc.push_back({{"horizon", f.horizon}, {"rmsfe", f.rmsfe}, {"r2_oos", f.r2_oos}});
  j["forecasts"] = std::move(fc);
  return j;
}

MethodReport method_report_from_json(const json& j) {
  MethodReport rep;
  rep.method = j.at("method").get<std::string>();
  for (const auto& v : j.at("selected")) {
    const std::size_t one_based = v.get<std::size_t>();
    if (one_based == 0) throw ParseError("report: selected indices are 1-based");
    rep.selected.push_back(one_based - 1);
  }
  rep.selected_names = j.at("selected_names").get<std::vector<std::string>>();
  rep.coefficients = j.at("coefficients").get<std::vector<double>>();
  rep.se = j.at("se").get<std::vector<double>>();
  rep.t_stats = j.at("t_stats").get<std::vector<double>>();
  rep.lambda = j.contains("lambda") ? j.at("lambda").get<double>()
                                    : std::numeric_limits<double>::quiet_NaN();
  rep.rmse_in_sample = j.at("rmse_in_sample").get<double>();
  rep.bic = j.at("bic").get<double>();
  for (const auto& f : j.at("forecasts")) {
    ForecastStat st;
    st.horizon = f.at("horizon").get<std::size_t>();
    st.rmsfe = f.at("rmsfe").get<double>();
    st.r2_oos = f.at("r2_oos").get<double>();
    rep.forecasts.push_back(st);
  }
  return rep;
}

}  // namespace

std::string bundle_to_json(const ReportBundle& bundle) {
  json j;
  j["version"] = bundle.version;
  j["seed"] = bundle.seed;
  j["config_hash"] = bundle.config_hash;
  j["rows_used"] = bundle.rows_used;
  j["rows_dropped"] = bundle.rows_dropped;
  json methods = json::array();
  for (const auto& m : bundle.methods) methods.push_back(method_report_to_json(m));
  j["methods"] = std::move(methods);
  return j.dump(2) + "\n";
}

ReportBundle bundle_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("report: invalid json: ") + e.what());
  }
  try {
    ReportBundle bundle;
    bundle.version = j.at("version").get<std::string>();
    bundle.seed = j.at("seed").get<std::uint64_t>();
    bundle.config_hash = j.at("config_hash").get<std::string>();
    bundle.rows_used = j.at("rows_used").get<std::size_t>();
    bundle.rows_dropped = j.at("rows_dropped").get<std::size_t>();
    for (const auto& m : j.at("methods")) bundle.methods.push_back(method_report_from_json(m));
    return bundle;
  } catch (const json::exception& e) {
    throw ParseError(std::string("report: missing or mistyped field: ") + e.what());
  }
}

const std::vector<std::string>& metric_names() {
  static const std::vector<std::string> names = {"mcc",  "f1",   "tdr",        "fdr",
                                                 "tpr",  "fpr",  "model_size", "rmse",
                                                 "rmsfe", "r2_oos"};
  return names;
}

namespace {

double metric_value(const MetricsReport& r, const std::string& metric) {
  if (metric == "mcc") return r.mcc;
  if (metric == "f1") return r.f1;
  if (metric == "tdr") return r.tdr;
  if (metric == "fdr") return r.fdr;
  if (metric == "tpr") return r.tpr;
  if (metric == "fpr") return r.fpr;
  if (metric == "model_size") return r.model_size;
  if (metric == "rmse") return r.rmse;
  if (metric == "rmsfe") return r.rmsfe;
  if (metric == "r2_oos") return r.r2_oos;
  throw InvalidArgument("unknown metric: " + metric);
}

json design_to_json(const DgpConfig& cfg) {
  json j;
  j["T"] = cfg.t;
  j["n"] = cfg.n;
  j["k"] = cfg.k;
  j["alpha"] = cfg.alpha;
  j["r2"] = cfg.r2_target;
  j["rho"] = cfg.rho;
  j["vif"] = cfg.vif;
  j["pi"] = cfg.pi;
  j["burn_in"] = cfg.burn_in;
  j["holdout"] = cfg.holdout;
  j["seed"] = cfg.seed;
  return j;
}

}  // namespace

std::string summaries_to_json(const std::vector<DesignSummary>& summaries) {
  json arr = json::array();
  for (const auto& s : summaries) {
    json j;
    j["design"] = design_to_json(s.config);
    j["reps"] = s.reps;
    json metrics;
    for (const auto& [m, rep] : s.by_method) {
      json one;
      for (const auto& name : metric_names()) {
        const double v = metric_value(rep, name);
        if (std::isfinite(v)) one[name] = v;
      }
      metrics[method_name(m)] = std::move(one);
    }
    j["metrics"] = std::move(metrics);
    arr.push_back(std::move(j));
  }
  return arr.dump(2) + "\n";
}

std::string metric_table_csv(const std::vector<DesignSummary>& summaries,
                             const std::string& metric) {
  std::vector<Method> methods;
  if (!summaries.empty())
    for (const auto& [m, rep] : summaries.front().by_method) methods.push_back(m);

  std::ostringstream out;
  out << "vif,pi,T,n";
  for (Method m : methods) out << ',' << method_name(m);
  out << '\n';
  for (const auto& s : summaries) {
    out << format_double(s.config.vif) << ',' << format_double(s.config.pi) << ','
        << s.config.t << ',' << s.config.n;
    for (Method m : methods)
      out << ',' << format_double(metric_value(s.by_method.at(m), metric));
    out << '\n';
  }
  return out.str();
}

}  // namespace bmt
