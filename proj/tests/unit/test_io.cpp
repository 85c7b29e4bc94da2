#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "temp_dir.hpp"
#include "ttrace/io.hpp"

using namespace ttrace;
namespace fs = std::filesystem;

namespace {

io::CodeBundle sample_bundle(double cutoff = 0.0) {
  RandomStream rng(21);
  auto bias = sample_bias_vector(7, cutoff, rng);
  auto code = generate_code(bias, 5, rng);
  return {std::move(bias), std::move(code), 21};
}

std::string to_text(const io::CodeBundle& b) {
  std::ostringstream os;
  io::write_code(os, b);
  return os.str();
}

}  // namespace

TEST(CodeContainer, RoundTripsBitExactly) {
  for (double cutoff : {0.0, 0.01}) {
    const auto b = sample_bundle(cutoff);
    std::istringstream in(to_text(b));
    const auto back = io::read_code(in);
    EXPECT_EQ(back.bias, b.bias);
    EXPECT_EQ(back.bias.cutoff(), cutoff);
    EXPECT_EQ(back.code, b.code);
    EXPECT_EQ(back.seed, 21u);
  }
}

TEST(CodeContainer, SaveAndLoadFile) {
  test::TempDir dir;
  const auto b = sample_bundle();
  io::save_code(dir.path() / "c.ttc", b);
  const auto back = io::load_code(dir.path() / "c.ttc");
  EXPECT_EQ(back.code, b.code);
  EXPECT_THROW(io::load_code(dir.path() / "missing.ttc"), std::runtime_error);
}

TEST(CodeContainer, RejectsMalformedInput) {
  const std::string good = to_text(sample_bundle());
  auto expect_bad = [](const std::string& text) {
    std::istringstream in(text);
    EXPECT_THROW(io::read_code(in), std::runtime_error) << text.substr(0, 40);
  };
  expect_bad("");
  expect_bad("ttrace-code 2\n");
  expect_bad(good.substr(0, good.size() / 2));
  expect_bad("ttrace-code 1\nm 1\nn 3\ncutoff 0x0p+0\nseed 1\n0x1p-1 0101\n");
  expect_bad("ttrace-code 1\nm 1\nn 3\ncutoff 0x0p+0\nseed 1\n0x1p-1 012\n");
  expect_bad("ttrace-code 1\nm 1\nn 3\ncutoff 0x0p+0\nseed 1\nhalf 010\n");
  expect_bad("ttrace-code 1\nn 3\nm 1\ncutoff 0x0p+0\nseed 1\n0x1p-1 010\n");
}

TEST(ChannelJson, RoundTripsBothKinds) {
  const auto st = strategy_theta(Strategy::majority, 4);
  const auto j = io::channel_to_json(st);
  EXPECT_EQ(j.at("kind"), "stationary");
  const auto back = io::channel_from_json(j);
  EXPECT_TRUE(back.is_stationary());
  EXPECT_TRUE(std::equal(back.values().begin(), back.values().end(), st.values().begin(), st.values().end()));

  const auto pp = CollusionChannel::per_position(2, 2, {0, .2, 1, 0, .7, 1});
  const auto back2 = io::channel_from_json(io::channel_to_json(pp));
  EXPECT_FALSE(back2.is_stationary());
  EXPECT_EQ(back2.g(1, 1), 0.7);

  auto bad = j;
  bad["c"] = 5;
  EXPECT_THROW(io::channel_from_json(bad), std::invalid_argument);
  bad = j;
  bad["kind"] = "markov";
  EXPECT_THROW(io::channel_from_json(bad), std::invalid_argument);
}

TEST(BitStrings, RoundTrip) {
  const std::vector<Bit> bits{1, 0, 0, 1, 1};
  EXPECT_EQ(io::bits_to_string(bits), "10011");
  EXPECT_EQ(io::bits_from_string("10011"), bits);
  EXPECT_THROW(io::bits_from_string("10a"), std::invalid_argument);
}

TEST(FormatDouble, ShortestRoundTrip) {
  EXPECT_EQ(io::format_double(0.1), "0.1");
  EXPECT_EQ(io::format_double(1.0), "1");
  EXPECT_EQ(io::format_double(-std::numeric_limits<double>::infinity()), "-inf");
  const double v = 0.1 + 0.2;
  EXPECT_EQ(std::stod(io::format_double(v)), v);
}

TEST(Csv, ScoreTableAndRocLayout) {
  ScoreTable t({Decoder::tardos, Decoder::map}, 2);
  t.at(0, 0) = {1.5, 2.0};
  t.at(0, 1) = {-3.0, 0.25};
  t.at(1, 0) = {0.5, 0.5};
  t.at(1, 1) = {1.0, 4.0};
  std::ostringstream os;
  io::write_score_table_csv(os, t);
  EXPECT_EQ(os.str(),
            "realization,decoder,max_innocent,max_colluder\n"
            "0,tardos,1.5,2\n"
            "0,map,-3,0.25\n"
            "1,tardos,0.5,0.5\n"
            "1,map,1,4\n");

  std::ostringstream roc;
  io::write_roc_csv(roc, estimate_roc(t, Decoder::tardos));
  EXPECT_EQ(roc.str(),
            "tau,pfa,pfn\n"
            "-inf,1,0\n"
            "0.5,1,0\n"
            "1.5,0.5,0.5\n"
            "2,0,0.5\n"
            "inf,0,1\n");
}

TEST(WcaCache, MissThenHitReturnsSameResult) {
  test::TempDir dir;
  const io::WcaCache cache(dir.path() / "cache");
  EXPECT_EQ(io::WcaCache::key(4, 64, 1e-8), "wca_c4_q64_tol1e-08");
  EXPECT_FALSE(cache.load(4, 64, 1e-8));

  bool hit = true;
  const auto first = cache.get_or_compute(4, 64, 1e-8, &hit);
  EXPECT_FALSE(hit);
  EXPECT_TRUE(fs::exists(cache.path_for(io::WcaCache::key(4, 64, 1e-8))));
  const auto second = cache.get_or_compute(4, 64, 1e-8, &hit);
  EXPECT_TRUE(hit);
  EXPECT_TRUE(std::equal(first.theta.values().begin(), first.theta.values().end(),
                         second.theta.values().begin(), second.theta.values().end()));
  EXPECT_EQ(first.mutual_information, second.mutual_information);
  EXPECT_EQ(first.sweeps, second.sweeps);
  // A different tolerance is a different entry.
  EXPECT_FALSE(cache.load(4, 64, 1e-6));
}
