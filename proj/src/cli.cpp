#include "ttrace/cli.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ttrace/codegen.hpp"
#include "ttrace/collusion.hpp"
#include "ttrace/decoders.hpp"
#include "ttrace/io.hpp"
#include "ttrace/simulate.hpp"
#include "ttrace/svg.hpp"
#include "ttrace/wca.hpp"

#ifndef TTRACE_VERSION
#define TTRACE_VERSION "0.0.0"
#endif

namespace ttrace::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

constexpr const char* kManifestSchema = "ttrace-manifest/1";

std::string timestamp_utc() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

void write_file(const fs::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << contents;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return json::parse(in);
}

json manifest(const std::string& command, const json& config, std::uint64_t seed,
              const std::vector<std::string>& artifacts, const std::vector<std::string>& cache_keys) {
  return json{{"schema", kManifestSchema},
              {"tool", "ttrace"},
              {"version", TTRACE_VERSION},
              {"command", command},
              {"created", timestamp_utc()},
              {"seed", seed},
              {"config", config},
              {"artifacts", artifacts},
              {"wca_cache_keys", cache_keys}};
}

TardosConvention parse_convention(const std::string& s) {
  if (s == "zero_mean") return TardosConvention::zero_mean;
  if (s == "literal") return TardosConvention::literal;
  throw std::invalid_argument("unknown tardos convention: " + s);
}

std::vector<Decoder> parse_decoders(const std::vector<std::string>& tags) {
  std::vector<Decoder> out;
  for (const auto& t : tags) {
    const Decoder d = parse_decoder(t);
    if (std::find(out.begin(), out.end(), d) == out.end()) out.push_back(d);
  }
  return out;
}

struct WcaFlags {
  std::size_t nodes = 128;
  double tol = 1e-8;
  std::string cache_dir = ".ttrace-cache";
};

void add_wca_flags(CLI::App* app, WcaFlags& f) {
  app->add_option("--wca-nodes", f.nodes, "Quadrature nodes for the worst-case attack")->capture_default_str();
  app->add_option("--wca-tol", f.tol, "Objective tolerance for the worst-case attack")->capture_default_str();
  app->add_option("--cache-dir", f.cache_dir, "Directory caching optimized worst-case channels")
      ->capture_default_str();
}

// Channel of a strategy; wca goes through the on-disk cache.
CollusionChannel channel_for(Strategy s, unsigned c, const WcaFlags& w, std::ostream& out,
                             std::vector<std::string>& cache_keys) {
  if (s != Strategy::wca) return strategy_theta(s, c);
  if (c < 2) throw std::invalid_argument("the wca strategy needs c >= 2");
  const io::WcaCache cache(w.cache_dir);
  bool hit = false;
  const auto res = cache.get_or_compute(c, w.nodes, w.tol, &hit);
  cache_keys.push_back(io::WcaCache::key(c, w.nodes, w.tol));
  out << "wca: cache " << (hit ? "hit" : "miss") << " (" << cache_keys.back() << ")\n";
  return res.theta.channel();
}

// ---- gen ------------------------------------------------------------------

struct GenFlags {
  std::size_t m = 0;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  double cutoff = 0.0;
  std::string out_dir = ".";
};

void cmd_gen(const GenFlags& f, std::ostream& out) {
  if (f.m < 1) throw std::invalid_argument("--m must be >= 1");
  RandomStream bias_rng(derive_seed(f.seed, {static_cast<std::uint64_t>(Stream::bias)}));
  RandomStream code_rng(derive_seed(f.seed, {static_cast<std::uint64_t>(Stream::code)}));
  io::CodeBundle bundle;
  bundle.bias = sample_bias_vector(f.m, f.cutoff, bias_rng);
  bundle.code = generate_code(bundle.bias, f.n, code_rng);
  bundle.seed = f.seed;

  fs::create_directories(f.out_dir);
  io::save_code(fs::path(f.out_dir) / "code.ttc", bundle);
  const json config{{"m", f.m}, {"n", f.n}, {"seed", f.seed}, {"cutoff", f.cutoff}};
  write_file(fs::path(f.out_dir) / "manifest.json",
             manifest("gen", config, f.seed, {"code.ttc"}, {}).dump(2) + "\n");
  out << "gen: wrote " << (fs::path(f.out_dir) / "code.ttc").string() << '\n';
}

// ---- attack ---------------------------------------------------------------

struct AttackFlags {
  std::string code;
  unsigned c = 0;
  std::string strategy;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  WcaFlags wca;
};

void cmd_attack(const AttackFlags& f, std::ostream& out) {
  const auto bundle = io::load_code(f.code);
  const Strategy strategy = parse_strategy(f.strategy);
  std::vector<std::string> cache_keys;
  const auto channel = channel_for(strategy, f.c, f.wca, out, cache_keys);

  RandomStream coalition_rng(derive_seed(f.seed, {static_cast<std::uint64_t>(Stream::coalition)}));
  RandomStream forge_rng(derive_seed(f.seed, {static_cast<std::uint64_t>(Stream::forge)}));
  const Coalition coalition = sample_coalition(bundle.code.n(), f.c, coalition_rng);
  const PiratedSequence y = forge(tally(bundle.code, coalition), channel, forge_rng);

  const json doc{{"c", f.c},
                 {"strategy", f.strategy},
                 {"seed", f.seed},
                 {"coalition", std::vector<std::size_t>(coalition.members().begin(), coalition.members().end())},
                 {"channel", io::channel_to_json(channel)},
                 {"y", io::bits_to_string(y.y)}};
  fs::create_directories(f.out_dir);
  write_file(fs::path(f.out_dir) / "attack.json", doc.dump(2) + "\n");
  const json config{{"code", f.code}, {"c", f.c}, {"strategy", f.strategy}, {"seed", f.seed}};
  write_file(fs::path(f.out_dir) / "manifest.json",
             manifest("attack", config, f.seed, {"attack.json"}, cache_keys).dump(2) + "\n");
  out << "attack: wrote " << (fs::path(f.out_dir) / "attack.json").string() << '\n';
}

// ---- score ----------------------------------------------------------------

struct ScoreFlags {
  std::string code;
  std::string attack;
  std::vector<std::string> decoders{"tardos", "informed", "map"};
  unsigned cmax = 10;
  unsigned cmin = 2;
  std::string tardos_convention = "zero_mean";
  std::string out_dir = ".";
};

void cmd_score(const ScoreFlags& f, std::ostream& out) {
  const auto bundle = io::load_code(f.code);
  const json attack = read_json(f.attack);
  const auto decoders = parse_decoders(f.decoders);
  if (decoders.empty()) throw std::invalid_argument("decoder set is empty");
  PiratedSequence y{io::bits_from_string(attack.at("y").get<std::string>())};
  if (y.y.size() != bundle.code.m()) throw std::invalid_argument("pirated sequence length does not match code");
  const auto members = attack.at("coalition").get<std::vector<std::size_t>>();
  const Coalition coalition(bundle.code.n(), members);

  std::vector<std::vector<double>> columns;
  for (Decoder d : decoders) {
    switch (d) {
      case Decoder::tardos:
        columns.push_back(tardos_scores(bundle.code, bundle.bias, y, parse_convention(f.tardos_convention)));
        break;
      case Decoder::map:
        columns.push_back(map_blind_scores(bundle.code, bundle.bias, y, MapConfig{f.cmax, f.cmin}));
        break;
      case Decoder::informed: {
        const auto channel = io::channel_from_json(attack.at("channel"));
        columns.push_back(informed_scores(bundle.code, bundle.bias, y, channel, attack.at("c").get<unsigned>()));
        break;
      }
    }
  }

  std::ostringstream csv;
  csv << "user,colluder";
  for (Decoder d : decoders) csv << ',' << to_string(d);
  csv << '\n';
  for (std::size_t j = 0; j < bundle.code.n(); ++j) {
    csv << j << ',' << (coalition.contains(j) ? 1 : 0);
    for (const auto& col : columns) csv << ',' << io::format_double(col[j]);
    csv << '\n';
  }
  fs::create_directories(f.out_dir);
  write_file(fs::path(f.out_dir) / "scores.csv", csv.str());
  const json config{{"code", f.code},  {"attack", f.attack},       {"decoders", f.decoders},
                    {"cmax", f.cmax},  {"cmin", f.cmin},           {"tardos_convention", f.tardos_convention}};
  write_file(fs::path(f.out_dir) / "manifest.json",
             manifest("score", config, bundle.seed, {"scores.csv"}, {}).dump(2) + "\n");
  out << "score: wrote " << (fs::path(f.out_dir) / "scores.csv").string() << '\n';
}

// ---- roc ------------------------------------------------------------------

struct RocFlags {
  std::size_t m = 300;
  std::size_t n = 1000;
  unsigned c = 6;
  unsigned cmax = 10;
  unsigned cmin = 2;
  std::string strategy = "coinflip";
  std::vector<std::string> decoders{"tardos", "informed", "map"};
  std::size_t R = 2000;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  double cutoff = 0.0;
  bool log_axes = false;
  std::string tardos_convention = "zero_mean";
  std::string config;
  std::string out_dir = "roc_out";
  std::string title;
  WcaFlags wca;
};

template <class T>
void merge(const json& cfg, const char* key, CLI::App* app, const char* flag, T& target) {
  if (cfg.contains(key) && app->count(flag) == 0) target = cfg.at(key).get<T>();
}

void apply_config_file(RocFlags& f, CLI::App* app) {
  json cfg = read_json(f.config);
  if (cfg.contains("schema") && cfg.contains("config")) cfg = cfg.at("config");
  merge(cfg, "m", app, "--m", f.m);
  merge(cfg, "n", app, "--n", f.n);
  merge(cfg, "c", app, "--c", f.c);
  merge(cfg, "cmax", app, "--cmax", f.cmax);
  merge(cfg, "cmin", app, "--cmin", f.cmin);
  merge(cfg, "strategy", app, "--strategy", f.strategy);
  merge(cfg, "decoders", app, "--decoders", f.decoders);
  merge(cfg, "R", app, "--R", f.R);
  merge(cfg, "seed", app, "--seed", f.seed);
  merge(cfg, "cutoff", app, "--cutoff", f.cutoff);
  merge(cfg, "log_axes", app, "--log-axes", f.log_axes);
  merge(cfg, "tardos_convention", app, "--tardos-convention", f.tardos_convention);
  merge(cfg, "wca_nodes", app, "--wca-nodes", f.wca.nodes);
  merge(cfg, "wca_tol", app, "--wca-tol", f.wca.tol);
  merge(cfg, "title", app, "--title", f.title);
}

// Everything that determines the CSV outputs. Thread count is deliberately
// absent: it never changes results.
json roc_config_json(const RocFlags& f) {
  return json{{"m", f.m},
              {"n", f.n},
              {"c", f.c},
              {"cmax", f.cmax},
              {"cmin", f.cmin},
              {"strategy", f.strategy},
              {"decoders", f.decoders},
              {"R", f.R},
              {"seed", f.seed},
              {"cutoff", f.cutoff},
              {"log_axes", f.log_axes},
              {"tardos_convention", f.tardos_convention},
              {"wca_nodes", f.wca.nodes},
              {"wca_tol", f.wca.tol},
              {"title", f.title}};
}

void cmd_roc(const RocFlags& f, std::ostream& out) {
  ExperimentConfig cfg;
  cfg.m = f.m;
  cfg.n = f.n;
  cfg.c_true = f.c;
  cfg.map = MapConfig{f.cmax, f.cmin};
  cfg.strategy = parse_strategy(f.strategy);
  cfg.decoders = parse_decoders(f.decoders);
  cfg.realizations = f.R;
  cfg.seed = f.seed;
  cfg.cutoff = f.cutoff;
  cfg.tardos = parse_convention(f.tardos_convention);
  cfg.threads = f.threads;

  std::vector<std::string> cache_keys;
  if (cfg.strategy == Strategy::wca) {
    // Reject invalid configurations before a potentially long optimization.
    auto probe = cfg;
    probe.strategy = Strategy::coinflip;
    validate(probe);
    const auto channel = channel_for(Strategy::wca, cfg.c_true, f.wca, out, cache_keys);
    cfg.wca_theta = std::vector<double>(channel.values().begin(), channel.values().end());
  }
  validate(cfg);

  const ScoreTable table = run_monte_carlo(cfg);

  const fs::path dir(f.out_dir);
  fs::create_directories(dir);
  std::vector<std::string> artifacts{"scores.csv"};
  {
    std::ostringstream csv;
    io::write_score_table_csv(csv, table);
    write_file(dir / "scores.csv", csv.str());
  }

  json summary{{"config", roc_config_json(f)}, {"seed", f.seed}, {"auc", json::object()}};
  std::vector<svg::Series> series;
  for (Decoder d : cfg.decoders) {
    const auto roc = estimate_roc(table, d);
    const std::string name = "roc_" + std::string(to_string(d)) + ".csv";
    std::ostringstream csv;
    io::write_roc_csv(csv, roc);
    write_file(dir / name, csv.str());
    artifacts.push_back(name);
    summary["auc"][std::string(to_string(d))] = roc.auc;

    svg::Series s{std::string(to_string(d)), {}};
    for (const auto& pt : roc.points) s.points.emplace_back(pt.pfa, pt.pfn);
    series.push_back(std::move(s));
    out << "roc: " << to_string(d) << " auc=" << io::format_double(roc.auc) << '\n';
  }
  write_file(dir / "roc_summary.json", summary.dump(2) + "\n");
  artifacts.push_back("roc_summary.json");

  svg::PlotOptions plot;
  plot.log_axes = f.log_axes;
  plot.log_floor = std::min(1e-2, 0.5 / static_cast<double>(f.R));
  plot.title = f.title.empty() ? "ROC m=" + std::to_string(f.m) + " c=" + std::to_string(f.c) + " " + f.strategy
                               : f.title;
  write_file(dir / "roc.svg", svg::line_chart(series, plot));
  artifacts.push_back("roc.svg");

  json m = manifest("roc", roc_config_json(f), f.seed, artifacts, cache_keys);
  m["runtime"] = {{"threads", f.threads}};
  write_file(dir / "manifest.json", m.dump(2) + "\n");
  out << "roc: wrote " << artifacts.size() << " artifacts to " << dir.string() << '\n';
}

// ---- wca ------------------------------------------------------------------

struct WcaCmdFlags {
  unsigned c = 0;
  std::string out_file;
  WcaFlags wca;
};

int cmd_wca(const WcaCmdFlags& f, std::ostream& out, std::ostream& err) {
  if (f.c < 2) throw std::invalid_argument("--c must be >= 2 (c = 1 has no free parameters)");
  const io::WcaCache cache(f.wca.cache_dir);
  bool hit = false;
  const auto res = cache.get_or_compute(f.c, f.wca.nodes, f.wca.tol, &hit);
  if (!res.converged) err << "warning: wca optimization did not converge; reporting best iterate\n";

  const auto quad = gauss_chebyshev(f.wca.nodes);
  json doc{{"c", f.c},
           {"nodes", f.wca.nodes},
           {"tol", f.wca.tol},
           {"theta", std::vector<double>(res.theta.values().begin(), res.theta.values().end())},
           {"mutual_information", res.mutual_information},
           {"converged", res.converged},
           {"cache_key", io::WcaCache::key(f.c, f.wca.nodes, f.wca.tol)},
           {"strategies", json::object()}};
  out << "wca c=" << f.c << " (cache " << (hit ? "hit" : "miss") << ")\n  theta*:";
  for (double v : res.theta.values()) out << ' ' << io::format_double(v);
  out << "\n  MI(wca)      = " << io::format_double(res.mutual_information) << '\n';
  for (Strategy s : {Strategy::uniform, Strategy::coinflip, Strategy::majority, Strategy::minority}) {
    const auto ch = strategy_theta(s, f.c);
    const double mi = mutual_information(ThetaVector({ch.values().begin(), ch.values().end()}), quad);
    doc["strategies"][std::string(to_string(s))] = mi;
    out << "  MI(" << to_string(s) << ")" << std::string(9 - to_string(s).size(), ' ') << "= "
        << io::format_double(mi) << '\n';
  }
  if (!f.out_file.empty()) {
    const fs::path p(f.out_file);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    write_file(p, doc.dump(2) + "\n");
  }
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"ttrace: Tardos fingerprinting codes, collusion attacks and accusation decoders"};
  app.set_version_flag("--version", TTRACE_VERSION);
  app.require_subcommand(1);

  GenFlags gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a bias vector and code matrix");
  gen_cmd->add_option("--m", gen.m, "Code length")->required();
  gen_cmd->add_option("--n", gen.n, "Number of users")->required();
  gen_cmd->add_option("--seed", gen.seed, "Master seed")->required();
  gen_cmd->add_option("--cutoff", gen.cutoff, "Bias cutoff t, p in [t, 1-t]")->capture_default_str();
  gen_cmd->add_option("--out-dir", gen.out_dir, "Output directory")->capture_default_str();

  AttackFlags attack;
  auto* attack_cmd = app.add_subcommand("attack", "Sample a coalition and forge a pirated sequence");
  attack_cmd->add_option("--code", attack.code, "Code container written by gen")->required();
  attack_cmd->add_option("--c", attack.c, "Coalition size")->required();
  attack_cmd->add_option("--strategy", attack.strategy, "minority|majority|uniform|coinflip|wca")->required();
  attack_cmd->add_option("--seed", attack.seed, "Attack seed")->required();
  attack_cmd->add_option("--out-dir", attack.out_dir, "Output directory")->capture_default_str();
  add_wca_flags(attack_cmd, attack.wca);

  ScoreFlags score;
  auto* score_cmd = app.add_subcommand("score", "Score every user against a pirated sequence");
  score_cmd->add_option("--code", score.code, "Code container written by gen")->required();
  score_cmd->add_option("--attack", score.attack, "attack.json written by attack")->required();
  score_cmd->add_option("--decoders", score.decoders, "Subset of tardos,informed,map")
      ->delimiter(',')
      ->capture_default_str();
  score_cmd->add_option("--cmax", score.cmax, "Largest coalition size chased by MAP")->capture_default_str();
  score_cmd->add_option("--cmin", score.cmin, "Smallest coalition size summed by MAP")->capture_default_str();
  score_cmd->add_option("--tardos-convention", score.tardos_convention, "zero_mean|literal")
      ->capture_default_str();
  score_cmd->add_option("--out-dir", score.out_dir, "Output directory")->capture_default_str();

  RocFlags roc;
  auto* roc_cmd = app.add_subcommand("roc", "Monte Carlo ROC estimation");
  roc_cmd->add_option("--config", roc.config, "JSON config or manifest; flags override it");
  roc_cmd->add_option("--m", roc.m, "Code length")->capture_default_str();
  roc_cmd->add_option("--n", roc.n, "Number of users")->capture_default_str();
  roc_cmd->add_option("--c", roc.c, "True coalition size")->capture_default_str();
  roc_cmd->add_option("--cmax", roc.cmax, "Largest coalition size chased by MAP")->capture_default_str();
  roc_cmd->add_option("--cmin", roc.cmin, "Smallest coalition size summed by MAP")->capture_default_str();
  roc_cmd->add_option("--strategy", roc.strategy, "minority|majority|uniform|coinflip|wca")
      ->capture_default_str();
  roc_cmd->add_option("--decoders", roc.decoders, "Subset of tardos,informed,map")
      ->delimiter(',')
      ->capture_default_str();
  roc_cmd->add_option("--R", roc.R, "Number of realizations")->capture_default_str();
  roc_cmd->add_option("--seed", roc.seed, "Master seed")->capture_default_str();
  roc_cmd->add_option("--threads", roc.threads, "Worker threads (0 = all cores)")->capture_default_str();
  roc_cmd->add_option("--cutoff", roc.cutoff, "Bias cutoff")->capture_default_str();
  roc_cmd->add_flag("--log-axes", roc.log_axes, "Logarithmic axes in the SVG");
  roc_cmd->add_option("--tardos-convention", roc.tardos_convention, "zero_mean|literal")
      ->capture_default_str();
  roc_cmd->add_option("--title", roc.title, "Plot title");
  roc_cmd->add_option("--out-dir", roc.out_dir, "Output directory")->capture_default_str();
  add_wca_flags(roc_cmd, roc.wca);

  WcaCmdFlags wca;
  auto* wca_cmd = app.add_subcommand("wca", "Optimize the worst-case attack channel");
  wca_cmd->add_option("--c", wca.c, "Coalition size")->required();
  wca_cmd->add_option("--out", wca.out_file, "Also write the result to this JSON file");
  add_wca_flags(wca_cmd, wca.wca);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*gen_cmd) cmd_gen(gen, out);
    if (*attack_cmd) cmd_attack(attack, out);
    if (*score_cmd) cmd_score(score, out);
    if (*roc_cmd) {
      if (!roc.config.empty()) apply_config_file(roc, roc_cmd);
      cmd_roc(roc, out);
    }
    if (*wca_cmd) return cmd_wca(wca, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace ttrace::cli
