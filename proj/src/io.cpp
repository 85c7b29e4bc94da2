#include "ttrace/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ttrace::io {

namespace {

std::string hex_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

double parse_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') throw std::runtime_error("bad number in code container: " + s);
  return v;
}

template <class T>
T expect_field(std::istream& in, const char* name) {
  std::string label;
  T value{};
  if (!(in >> label >> value) || label != name)
    throw std::runtime_error(std::string("code container: expected field '") + name + "'");
  return value;
}

}  // namespace

void write_code(std::ostream& out, const CodeBundle& b) {
  const auto& code = b.code;
  out << "ttrace-code 1\n"
      << "m " << code.m() << '\n'
      << "n " << code.n() << '\n'
      << "cutoff " << hex_double(b.bias.cutoff()) << '\n'
      << "seed " << b.seed << '\n';
  std::string line;
  for (std::size_t i = 0; i < code.m(); ++i) {
    line = hex_double(b.bias[i]);
    line += ' ';
    for (Bit bit : code.row(i)) line += static_cast<char>('0' + bit);
    line += '\n';
    out << line;
  }
}

CodeBundle read_code(std::istream& in) {
  std::string magic;
  int version = 0;
  if (!(in >> magic >> version) || magic != "ttrace-code" || version != 1)
    throw std::runtime_error("not a ttrace-code v1 container");
  const auto m = expect_field<std::size_t>(in, "m");
  const auto n = expect_field<std::size_t>(in, "n");
  const double cutoff = parse_double(expect_field<std::string>(in, "cutoff"));
  const auto seed = expect_field<std::uint64_t>(in, "seed");

  std::vector<double> p(m);
  std::vector<Bit> bits;
  bits.reserve(m * n);
  for (std::size_t i = 0; i < m; ++i) {
    std::string pv, row;
    if (!(in >> pv >> row)) throw std::runtime_error("code container truncated");
    if (row.size() != n) throw std::runtime_error("code container row has wrong width");
    p[i] = parse_double(pv);
    for (char ch : row) {
      if (ch != '0' && ch != '1') throw std::runtime_error("code container row is not binary");
      bits.push_back(static_cast<Bit>(ch - '0'));
    }
  }
  return {BiasVector(std::move(p), cutoff), CodeMatrix(m, n, std::move(bits)), seed};
}

void save_code(const std::filesystem::path& path, const CodeBundle& bundle) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_code(out, bundle);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

CodeBundle load_code(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return read_code(in);
}

nlohmann::json channel_to_json(const CollusionChannel& channel) {
  nlohmann::json j;
  j["c"] = channel.c();
  if (channel.is_stationary()) {
    j["kind"] = "stationary";
    j["theta"] = std::vector<double>(channel.values().begin(), channel.values().end());
  } else {
    j["kind"] = "per_position";
    j["m"] = channel.rows();
    auto rows = nlohmann::json::array();
    for (std::size_t i = 0; i < channel.rows(); ++i) {
      const auto r = channel.row(i);
      rows.push_back(std::vector<double>(r.begin(), r.end()));
    }
    j["G"] = std::move(rows);
  }
  return j;
}

CollusionChannel channel_from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  const auto c = j.at("c").get<std::size_t>();
  if (kind == "stationary") {
    auto theta = j.at("theta").get<std::vector<double>>();
    if (theta.size() != c + 1) throw std::invalid_argument("channel theta length does not match c");
    return CollusionChannel::stationary(std::move(theta));
  }
  if (kind == "per_position") {
    const auto m = j.at("m").get<std::size_t>();
    std::vector<double> g;
    g.reserve(m * (c + 1));
    for (const auto& row : j.at("G")) {
      const auto r = row.get<std::vector<double>>();
      g.insert(g.end(), r.begin(), r.end());
    }
    return CollusionChannel::per_position(m, c, std::move(g));
  }
  throw std::invalid_argument("unknown channel kind: " + kind);
}

std::string bits_to_string(std::span<const Bit> bits) {
  std::string s(bits.size(), '0');
  for (std::size_t i = 0; i < bits.size(); ++i) s[i] = static_cast<char>('0' + bits[i]);
  return s;
}

std::vector<Bit> bits_from_string(const std::string& s) {
  std::vector<Bit> bits(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '0' && s[i] != '1') throw std::invalid_argument("bit string must contain only 0/1");
    bits[i] = static_cast<Bit>(s[i] - '0');
  }
  return bits;
}

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_score_table_csv(std::ostream& out, const ScoreTable& table) {
  out << "realization,decoder,max_innocent,max_colluder\n";
  const auto decoders = table.decoders();
  for (std::size_t r = 0; r < table.realizations(); ++r)
    for (std::size_t d = 0; d < decoders.size(); ++d) {
      const auto& e = table.at(r, d);
      out << r << ',' << to_string(decoders[d]) << ',' << format_double(e.max_innocent) << ','
          << format_double(e.max_colluder) << '\n';
    }
}

void write_roc_csv(std::ostream& out, const RocCurve& roc) {
  out << "tau,pfa,pfn\n";
  for (const auto& pt : roc.points)
    out << format_double(pt.tau) << ',' << format_double(pt.pfa) << ',' << format_double(pt.pfn) << '\n';
}

std::string WcaCache::key(std::size_t c, std::size_t nodes, double tol) {
  return "wca_c" + std::to_string(c) + "_q" + std::to_string(nodes) + "_tol" + format_double(tol);
}

std::optional<WcaResult> WcaCache::load(std::size_t c, std::size_t nodes, double tol) const {
  std::ifstream in(path_for(key(c, nodes, tol)));
  if (!in) return std::nullopt;
  const auto j = nlohmann::json::parse(in);
  if (j.at("c").get<std::size_t>() != c || j.at("nodes").get<std::size_t>() != nodes ||
      j.at("tol").get<double>() != tol)
    return std::nullopt;
  return WcaResult{ThetaVector(j.at("theta").get<std::vector<double>>()),
                   j.at("mutual_information").get<double>(), j.at("sweeps").get<std::size_t>(),
                   j.at("converged").get<bool>()};
}

void WcaCache::store(std::size_t c, std::size_t nodes, double tol, const WcaResult& result) const {
  std::filesystem::create_directories(dir_);
  nlohmann::json j;
  j["c"] = c;
  j["nodes"] = nodes;
  j["tol"] = tol;
  j["theta"] = std::vector<double>(result.theta.values().begin(), result.theta.values().end());
  j["mutual_information"] = result.mutual_information;
  j["sweeps"] = result.sweeps;
  j["converged"] = result.converged;
  std::ofstream out(path_for(key(c, nodes, tol)));
  if (!out) throw std::runtime_error("cannot write wca cache in " + dir_.string());
  out << j.dump(2) << '\n';
}

WcaResult WcaCache::get_or_compute(std::size_t c, std::size_t nodes, double tol, bool* hit) const {
  if (auto cached = load(c, nodes, tol)) {
    if (hit) *hit = true;
    return std::move(*cached);
  }
  if (hit) *hit = false;
  auto result = optimize_wca(c, gauss_chebyshev(nodes), WcaOptions{.tol = tol});
  store(c, nodes, tol, result);
  return result;
}

}  // namespace ttrace::io
