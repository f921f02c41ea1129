#include "umx/report.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

namespace umx {

namespace {

using json = nlohmann::ordered_json;

std::string fmt_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string fmt_hash(std::uint64_t h) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, h);
  return buf;
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

std::string Report::csv() const {
  std::ostringstream out;
  out << "# command=" << prov_.command << "\n";
  out << "# config_hash=" << fmt_hash(prov_.config_hash) << "\n";
  out << "# seed=" << prov_.seed << "\n";
  out << "# rng=" << prov_.rng << "\n";
  out << "# version=" << prov_.version << "\n";
  out << "quantity,N,t,estimate_re,estimate_im,std_error,samples,exact\n";
  for (const ResultRow& r : rows_) {
    out << csv_quote(r.quantity) << "," << r.N << "," << fmt_double(r.t) << ","
        << fmt_double(r.estimate_re) << "," << fmt_double(r.estimate_im) << ","
        << fmt_double(r.std_error) << "," << r.samples << "," << csv_quote(r.exact) << "\n";
  }
  return out.str();
}

std::string Report::json_text() const {
  json root;
  json prov;
  prov["command"] = prov_.command;
  prov["config_hash"] = fmt_hash(prov_.config_hash);
  prov["seed"] = prov_.seed;
  prov["rng"] = prov_.rng;
  prov["version"] = prov_.version;
  root["provenance"] = std::move(prov);
  if (!table_json_.empty()) root["table"] = json::parse(table_json_);
  json results = json::array();
  for (const ResultRow& r : rows_) {
    json row;
    row["quantity"] = r.quantity;
    row["N"] = r.N;
    row["t"] = r.t;
    row["estimate_re"] = r.estimate_re;
    row["estimate_im"] = r.estimate_im;
    row["std_error"] = r.std_error;
    row["samples"] = r.samples;
    row["exact"] = r.exact;
    results.push_back(std::move(row));
  }
  root["results"] = std::move(results);
  return root.dump(2) + "\n";
}

void Report::write(const std::optional<std::string>& csv_path,
                   const std::optional<std::string>& json_path) const {
  if (csv_path) {
    const std::string text = csv();
    if (*csv_path == "-") {
      std::cout << text;
    } else {
      std::ofstream out(*csv_path);
      if (!out) throw std::runtime_error("cannot open output file: " + *csv_path);
      out << text;
    }
  }
  if (json_path) {
    const std::string text = json_text();
    if (*json_path == "-") {
      std::cout << text;
    } else {
      std::ofstream out(*json_path);
      if (!out) throw std::runtime_error("cannot open output file: " + *json_path);
      out << text;
    }
  }
}

std::vector<ResultRow> Report::parse_json_results(const std::string& text) {
  const json root = json::parse(text);
  std::vector<ResultRow> rows;
  for (const json& row : root.at("results")) {
    ResultRow r;
    r.quantity = row.at("quantity").get<std::string>();
    r.N = row.at("N").get<int>();
    r.t = row.at("t").get<double>();
    r.estimate_re = row.at("estimate_re").get<double>();
    r.estimate_im = row.at("estimate_im").get<double>();
    r.std_error = row.at("std_error").get<double>();
    r.samples = row.at("samples").get<long>();
    r.exact = row.at("exact").get<std::string>();
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace umx
