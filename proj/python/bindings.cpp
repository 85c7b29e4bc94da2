#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>

#include "ttrace/codegen.hpp"
#include "ttrace/collusion.hpp"
#include "ttrace/decoders.hpp"
#include "ttrace/simulate.hpp"
#include "ttrace/wca.hpp"

namespace py = pybind11;
using namespace ttrace;

namespace {

using BitArray = py::array_t<Bit, py::array::c_style | py::array::forcecast>;

CodeMatrix to_code(const BitArray& a) {
  if (a.ndim() != 2) throw std::invalid_argument("code must be a 2-D array (m, n)");
  const auto m = static_cast<std::size_t>(a.shape(0));
  const auto n = static_cast<std::size_t>(a.shape(1));
  std::vector<Bit> bits(a.data(), a.data() + m * n);
  return CodeMatrix(m, n, std::move(bits));
}

TardosConvention convention(const std::string& s) {
  if (s == "zero_mean") return TardosConvention::zero_mean;
  if (s == "literal") return TardosConvention::literal;
  throw std::invalid_argument("unknown tardos convention: " + s);
}

DecoderInput input(const std::vector<Bit>& y, const std::vector<Bit>& x, const std::vector<double>& p,
                   std::size_t n) {
  return DecoderInput{y, x, p, n};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Tardos fingerprinting codes, collusion attacks and accusation decoders";

  m.def("arcsine_cdf", &arcsine_cdf, py::arg("p"));
  m.def(
      "sample_bias_vector",
      [](std::size_t length, double cutoff, std::uint64_t seed) {
        RandomStream rng(seed);
        const auto b = sample_bias_vector(length, cutoff, rng);
        return std::vector<double>(b.values().begin(), b.values().end());
      },
      py::arg("m"), py::arg("cutoff") = 0.0, py::arg("seed") = 0);
  m.def(
      "generate_code",
      [](const std::vector<double>& p, std::size_t n, std::uint64_t seed) {
        RandomStream rng(seed);
        const auto code = generate_code(BiasVector(p), n, rng);
        BitArray out({code.m(), code.n()});
        std::memcpy(out.mutable_data(), code.bits().data(), code.bits().size());
        return out;
      },
      py::arg("p"), py::arg("n"), py::arg("seed") = 0);

  m.def(
      "sample_coalition",
      [](std::size_t n, std::size_t c, std::uint64_t seed) {
        RandomStream rng(seed);
        const auto coal = sample_coalition(n, c, rng);
        return std::vector<std::size_t>(coal.members().begin(), coal.members().end());
      },
      py::arg("n"), py::arg("c"), py::arg("seed") = 0);
  m.def(
      "tally",
      [](const BitArray& code, const std::vector<std::size_t>& members) {
        const auto cm = to_code(code);
        return tally(cm, Coalition(cm.n(), members)).t;
      },
      py::arg("code"), py::arg("members"));
  m.def(
      "strategy_theta",
      [](const std::string& strategy, std::size_t c) {
        const auto ch = strategy_theta(parse_strategy(strategy), c);
        return std::vector<double>(ch.values().begin(), ch.values().end());
      },
      py::arg("strategy"), py::arg("c"));
  m.def(
      "forge",
      [](const std::vector<unsigned>& t, const std::vector<double>& theta, std::uint64_t seed) {
        RandomStream rng(seed);
        const auto channel = CollusionChannel::stationary(theta);
        return forge(TallyVector{t, static_cast<unsigned>(channel.c())}, channel, rng).y;
      },
      py::arg("t"), py::arg("theta"), py::arg("seed") = 0);

  m.def(
      "tardos_weight",
      [](Bit y, Bit x, double p, const std::string& conv) { return tardos_weight(y, x, p, convention(conv)); },
      py::arg("y"), py::arg("x"), py::arg("p"), py::arg("convention") = "zero_mean");
  m.def(
      "tardos_score",
      [](const std::vector<Bit>& y, const std::vector<Bit>& x, const std::vector<double>& p,
         const std::string& conv) { return tardos_score(input(y, x, p, 0), convention(conv)); },
      py::arg("y"), py::arg("x"), py::arg("p"), py::arg("convention") = "zero_mean");
  m.def("guilty_symbol_lik", &guilty_symbol_lik, py::arg("y"), py::arg("x"), py::arg("p"), py::arg("c"));
  m.def("innocent_symbol_lik", &innocent_symbol_lik, py::arg("y"), py::arg("p"), py::arg("c"));
  m.def("brute_force_lik", &brute_force_lik, py::arg("y"), py::arg("x"), py::arg("p"), py::arg("c"),
        py::arg("guilty"));
  m.def("generalized_max", py::overload_cast<double, double>(&generalized_max), py::arg("a"), py::arg("b"));
  m.def(
      "map_blind_score",
      [](const std::vector<Bit>& y, const std::vector<Bit>& x, const std::vector<double>& p, std::size_t n,
         unsigned c_max, unsigned c_min) { return map_blind_score(input(y, x, p, n), MapConfig{c_max, c_min}); },
      py::arg("y"), py::arg("x"), py::arg("p"), py::arg("n"), py::arg("c_max") = 10, py::arg("c_min") = 2);
  m.def(
      "informed_score",
      [](const std::vector<Bit>& y, const std::vector<Bit>& x, const std::vector<double>& p,
         const std::vector<double>& theta) {
        const auto channel = CollusionChannel::stationary(theta);
        return informed_score(input(y, x, p, 0), channel, static_cast<unsigned>(channel.c()));
      },
      py::arg("y"), py::arg("x"), py::arg("p"), py::arg("theta"));

  m.def(
      "gauss_chebyshev",
      [](std::size_t nodes) {
        auto q = gauss_chebyshev(nodes);
        return py::make_tuple(q.nodes, q.weights);
      },
      py::arg("nodes") = 128);
  m.def(
      "mutual_information",
      [](const std::vector<double>& theta, std::size_t nodes) {
        return mutual_information(ThetaVector(theta), gauss_chebyshev(nodes));
      },
      py::arg("theta"), py::arg("nodes") = 128);
  m.def(
      "optimize_wca",
      [](std::size_t c, std::size_t nodes, double tol) {
        const auto r = optimize_wca(c, gauss_chebyshev(nodes), WcaOptions{.tol = tol});
        py::dict d;
        d["theta"] = std::vector<double>(r.theta.values().begin(), r.theta.values().end());
        d["mutual_information"] = r.mutual_information;
        d["converged"] = r.converged;
        d["sweeps"] = r.sweeps;
        return d;
      },
      py::arg("c"), py::arg("nodes") = 128, py::arg("tol") = 1e-8);

  m.def(
      "run_monte_carlo",
      [](std::size_t length, std::size_t n, unsigned c, unsigned c_max, unsigned c_min,
         const std::string& strategy, const std::vector<std::string>& decoders, std::size_t realizations,
         std::uint64_t seed, unsigned threads, std::optional<std::vector<double>> wca_theta) {
        ExperimentConfig cfg;
        cfg.m = length;
        cfg.n = n;
        cfg.c_true = c;
        cfg.map = MapConfig{c_max, c_min};
        cfg.strategy = parse_strategy(strategy);
        cfg.decoders.clear();
        for (const auto& d : decoders) cfg.decoders.push_back(parse_decoder(d));
        cfg.realizations = realizations;
        cfg.seed = seed;
        cfg.threads = threads;
        cfg.wca_theta = std::move(wca_theta);
        ScoreTable table = [&] {
          py::gil_scoped_release release;
          return run_monte_carlo(cfg);
        }();
        py::dict out;
        for (Decoder d : cfg.decoders) {
          const auto roc = estimate_roc(table, d);
          py::dict entry;
          entry["max_innocent"] = table.max_innocent(d);
          entry["max_colluder"] = table.max_colluder(d);
          entry["auc"] = roc.auc;
          out[py::str(std::string(to_string(d)))] = entry;
        }
        return out;
      },
      py::arg("m") = 300, py::arg("n") = 1000, py::arg("c") = 6, py::arg("c_max") = 10, py::arg("c_min") = 2,
      py::arg("strategy") = "coinflip", py::arg("decoders") = std::vector<std::string>{"tardos", "informed", "map"},
      py::arg("realizations") = 2000, py::arg("seed") = 1, py::arg("threads") = 0,
      py::arg("wca_theta") = py::none());
  m.def(
      "estimate_roc",
      [](const std::vector<double>& max_innocent, const std::vector<double>& max_colluder) {
        if (max_innocent.size() != max_colluder.size() || max_innocent.empty())
          throw std::invalid_argument("score lists must be non-empty and of equal length");
        ScoreTable table({Decoder::tardos}, max_innocent.size());
        for (std::size_t r = 0; r < max_innocent.size(); ++r) table.at(r, 0) = {max_innocent[r], max_colluder[r]};
        const auto roc = estimate_roc(table, Decoder::tardos);
        std::vector<double> tau, pfa, pfn;
        for (const auto& pt : roc.points) {
          tau.push_back(pt.tau);
          pfa.push_back(pt.pfa);
          pfn.push_back(pt.pfn);
        }
        py::dict d;
        d["tau"] = tau;
        d["pfa"] = pfa;
        d["pfn"] = pfn;
        d["auc"] = roc.auc;
        return d;
      },
      py::arg("max_innocent"), py::arg("max_colluder"));
}
