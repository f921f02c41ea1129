#ifndef UMX_REPORT_HPP
#define UMX_REPORT_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace umx {

inline constexpr const char* kVersion = "1.0.0";

std::uint64_t fnv1a64(std::string_view s);

// Identification block attached to every emitted artifact.
struct Provenance {
  std::string command;
  std::uint64_t config_hash = 0;
  std::uint64_t seed = 0;
  std::string rng;
  std::string version = kVersion;
};

struct ResultRow {
  std::string quantity;
  int N = 0;  // 0 when size does not apply
  double t = 0.0;
  double estimate_re = 0.0;
  double estimate_im = 0.0;
  double std_error = 0.0;
  long samples = 0;
  std::string exact;  // exact rational payload when the value is symbolic
};

// Collects rows and renders them as CSV (fixed column order, provenance in
// leading comment lines, %.17g floats) and JSON (ordered keys; parse-back of
// the JSON reproduces the rows exactly).
class Report {
 public:
  explicit Report(Provenance prov) : prov_(std::move(prov)) {}

  const Provenance& provenance() const { return prov_; }
  void add(ResultRow row) { rows_.push_back(std::move(row)); }
  const std::vector<ResultRow>& rows() const { return rows_; }

  // Optional command-specific structured payload (pre-rendered JSON value);
  // embedded under "table" in the JSON output, absent from the CSV.
  void set_table_json(std::string raw) { table_json_ = std::move(raw); }

  std::string csv() const;
  std::string json_text() const;

  // Writes whichever paths are present; "-" means stdout.
  void write(const std::optional<std::string>& csv_path,
             const std::optional<std::string>& json_path) const;

  static std::vector<ResultRow> parse_json_results(const std::string& text);

 private:
  Provenance prov_;
  std::vector<ResultRow> rows_;
  std::string table_json_;
};

}  // namespace umx

#endif
