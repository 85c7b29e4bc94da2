#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ttrace/codegen.hpp"
#include "ttrace/collusion.hpp"
#include "ttrace/simulate.hpp"
#include "ttrace/wca.hpp"

namespace ttrace::io {

/// A generated code together with the parameters needed to regenerate it.
struct CodeBundle {
  BiasVector bias;
  CodeMatrix code;
  std::uint64_t seed = 0;
};

/// Text container, one record per line:
///
///   ttrace-code 1
///   m <m>
///   n <n>
///   cutoff <hex float>
///   seed <seed>
///   <hex float p_0> <n characters of 0/1 for row 0>
///   ...                                  (m rows in total)
///
/// Hex floats make the bias round-trip bit-exactly.
void write_code(std::ostream& out, const CodeBundle& bundle);
/// Throws std::runtime_error on a malformed container.
CodeBundle read_code(std::istream& in);

void save_code(const std::filesystem::path& path, const CodeBundle& bundle);
CodeBundle load_code(const std::filesystem::path& path);

/// {"kind": "stationary", "c": c, "theta": [...]} or
/// {"kind": "per_position", "c": c, "m": m, "G": [[...], ...]}.
nlohmann::json channel_to_json(const CollusionChannel& channel);
CollusionChannel channel_from_json(const nlohmann::json& j);

std::string bits_to_string(std::span<const Bit> bits);
std::vector<Bit> bits_from_string(const std::string& s);

/// Shortest text that parses back to the same double; "inf"/"-inf" for
/// infinities.
std::string format_double(double v);

/// realization,decoder,max_innocent,max_colluder
void write_score_table_csv(std::ostream& out, const ScoreTable& table);
/// tau,pfa,pfn
void write_roc_csv(std::ostream& out, const RocCurve& roc);

/// On-disk cache of optimized worst-case channels keyed by
/// (c, quadrature nodes, tol).
class WcaCache {
 public:
  explicit WcaCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

  static std::string key(std::size_t c, std::size_t nodes, double tol);
  std::filesystem::path path_for(const std::string& key) const { return dir_ / (key + ".json"); }

  std::optional<WcaResult> load(std::size_t c, std::size_t nodes, double tol) const;
  void store(std::size_t c, std::size_t nodes, double tol, const WcaResult& result) const;

  /// Cached result, or optimize and store. hit reports which happened.
  WcaResult get_or_compute(std::size_t c, std::size_t nodes, double tol, bool* hit = nullptr) const;

 private:
  std::filesystem::path dir_;
};

}  // namespace ttrace::io
