#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <vector>

#include "m2msim/channel.hpp"
#include "m2msim/errors.hpp"

using namespace m2m;

namespace {

Node Receiver(NodeId id, Position p, NodeKind kind = NodeKind::UE) {
  Node n;
  n.id = id;
  n.kind = kind;
  n.position = p;
  return n;
}

struct Scene {
  NetworkLayout layout;
  std::vector<Node> roster;
};

// 7-site layout plus the given receivers appended after the sector nodes.
Scene MakeScene(const std::vector<std::pair<Position, NodeKind>>& receivers) {
  Scene s{BuildLayout(7, 500.0, false), {}};
  s.roster = MakeSectorNodes(s.layout);
  for (const auto& [p, kind] : receivers) {
    s.roster.push_back(Receiver(static_cast<NodeId>(s.roster.size()), p, kind));
  }
  return s;
}

double Correlation(const std::vector<double>& a, const std::vector<double>& b) {
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

double StdDev(const std::vector<double>& a) {
  const double n = static_cast<double>(a.size());
  const double m = std::accumulate(a.begin(), a.end(), 0.0) / n;
  double s = 0.0;
  for (double x : a) {
    s += (x - m) * (x - m);
  }
  return std::sqrt(s / (n - 1.0));
}

struct ShadowSample {
  std::vector<double> site0;
  std::vector<double> site1;
};

ShadowSample DrawShadowing(double rho, std::size_t count, std::uint64_t seed) {
  const NetworkLayout layout = BuildLayout(7, 500.0, false);
  std::vector<Node> receivers;
  for (std::size_t i = 0; i < count; ++i) {
    receivers.push_back(Receiver(static_cast<NodeId>(i), {0.0, 0.0}));
  }
  Rng rng(seed);
  const ShadowingMap map = SampleShadowing(layout, receivers, 8.0, rho, rng);
  ShadowSample out;
  for (std::size_t i = 0; i < count; ++i) {
    out.site0.push_back(map.At(0, static_cast<NodeId>(i)));
    out.site1.push_back(map.At(1, static_cast<NodeId>(i)));
  }
  return out;
}

}  // namespace

TEST_CASE("noise power per RB") {
  LinkBudgetConstants c;
  CHECK(c.NoisePowerDbm() == doctest::Approx(-174.0 + 10.0 * std::log10(180e3) + 9.0));
  CHECK(c.NoisePowerDbm() == doctest::Approx(-112.447).epsilon(1e-5));
}

TEST_CASE("shadowing statistics at rho = 0.5") {
  const ShadowSample s = DrawShadowing(0.5, 100000, 11);
  CHECK(std::abs(StdDev(s.site0) - 8.0) <= 0.1);
  CHECK(std::abs(StdDev(s.site1) - 8.0) <= 0.1);
  CHECK(std::abs(Correlation(s.site0, s.site1) - 0.5) <= 0.05);
}

TEST_CASE("shadowing correlation limits") {
  const ShadowSample one = DrawShadowing(1.0, 1000, 5);
  for (std::size_t i = 0; i < one.site0.size(); ++i) {
    CHECK(one.site0[i] == doctest::Approx(one.site1[i]));
  }
  const ShadowSample zero = DrawShadowing(0.0, 100000, 6);
  CHECK(std::abs(Correlation(zero.site0, zero.site1)) <= 0.05);
  CHECK_THROWS_AS(DrawShadowing(1.5, 10, 1), ConfigError);
}

TEST_CASE("shadowing is shared by the sectors of a site") {
  Scene scene = MakeScene({{{100.0, 50.0}, NodeKind::UE}, {{-300.0, 200.0}, NodeKind::MTCD}});
  Rng rng(9);
  ShadowingMap map = SampleShadowing(scene.layout, scene.roster, 8.0, 0.5, rng);
  const ChannelState channel(scene.layout, scene.roster, std::move(map), {});
  for (NodeId rx = 21; rx < 23; ++rx) {
    for (std::size_t site = 0; site < 7; ++site) {
      const double a = channel.ShadowingDb(site * 3, rx);
      CHECK(channel.ShadowingDb(site * 3 + 1, rx) == a);
      CHECK(channel.ShadowingDb(site * 3 + 2, rx) == a);
    }
  }
}

TEST_CASE("sector nodes receive no shadowing draw") {
  const NetworkLayout layout = BuildLayout(1, 500.0, false);
  std::vector<Node> roster = MakeSectorNodes(layout);
  roster.push_back(Receiver(3, {10.0, 10.0}));
  Rng a(4);
  const ShadowingMap withSectors = SampleShadowing(layout, roster, 8.0, 0.5, a);
  Rng b(4);
  const ShadowingMap ueOnly = SampleShadowing(layout, std::span<const Node>(roster).subspan(3), 8.0, 0.5, b);
  CHECK(withSectors.At(0, 3) == ueOnly.At(0, 3));
  CHECK(withSectors.At(0, 0) == 0.0);
}

TEST_CASE("channel state rejects malformed rosters") {
  Scene scene = MakeScene({{{100.0, 0.0}, NodeKind::UE}});
  scene.roster.back().id = 99;
  CHECK_THROWS_AS(ChannelState(scene.layout, scene.roster, {}, {}), ContractViolation);
  Scene missing = MakeScene({});
  missing.roster.pop_back();
  CHECK_THROWS_AS(ChannelState(missing.layout, missing.roster, {}, {}), ContractViolation);
}

TEST_CASE("macro gain composition") {
  Scene scene = MakeScene({{{200.0, 0.0}, NodeKind::UE}});
  scene.roster.push_back(Receiver(22, {200.0, 0.0}, NodeKind::MTCD));
  scene.roster.back().indoor = true;
  ChannelConfig config;
  const ChannelState channel(scene.layout, scene.roster, {}, config);
  // sector 0 has boresight 30 degrees, the receiver sits at azimuth 0
  const double expected = AntennaGainDb(30.0, 0.0) - PathlossMacroDb(0.2);
  CHECK(channel.MacroGainDb(0, 21) == doctest::Approx(expected));
  CHECK(channel.MacroGainDb(0, 22) == doctest::Approx(expected - config.penetrationLossDb));
  CHECK(channel.PathlossDb(0, 21) >= 0.0);
}

TEST_CASE("single transmitter SINR equals SNR") {
  Scene scene = MakeScene({{{150.0, 80.0}, NodeKind::UE}});
  const ChannelState channel(scene.layout, scene.roster, {}, {});
  const Transmission t{LinkKind::ENB_UE, 0, 21, 29.0};
  const double snr = channel.RxPowerDbm(t) - channel.Config().link.NoisePowerDbm();
  const std::vector<Transmission> alone{t};
  CHECK(SinrDb(t, alone, channel) == doctest::Approx(snr));
}

TEST_CASE("two equal interferers give -3 dB") {
  Scene scene = MakeScene({{{150.0, 80.0}, NodeKind::UE}});
  ChannelConfig config;
  config.link.thermalNoiseDbmPerHz = -400.0;
  const ChannelState channel(scene.layout, scene.roster, {}, config);
  const NodeId rx = 21;
  const double target = -60.0;
  auto at = [&](NodeId tx) {
    return Transmission{LinkKind::ENB_UE, tx, rx, target - channel.LinkGainDb(tx, rx)};
  };
  const Transmission serving = at(0);
  Transmission i1 = at(4);
  Transmission i2 = at(8);
  i1.rx = i2.rx = 30;  // other receivers; only their power at rx matters
  const std::vector<Transmission> cell{serving, i1, i2};
  CHECK(SinrDb(serving, cell, channel) == doctest::Approx(-10.0 * std::log10(2.0)).epsilon(1e-9));
}

TEST_CASE("asymmetric interference rules") {
  Scene scene = MakeScene({{{150.0, 80.0}, NodeKind::UE},
                           {{160.0, 85.0}, NodeKind::MTCD},
                           {{165.0, 85.0}, NodeKind::MTCD}});
  const ChannelState channel(scene.layout, scene.roster, {}, {});
  const Transmission ue{LinkKind::ENB_UE, 0, 21, 29.0};
  const Transmission pair{LinkKind::MTCD_MTCD, 22, 23, 14.0};
  const std::vector<Transmission> ueOnly{ue};
  const std::vector<Transmission> both{ue, pair};
  CHECK(SinrDb(ue, both, channel) == SinrDb(ue, ueOnly, channel));

  const std::vector<Transmission> pairOnly{pair};
  const double pairSnr = SinrDb(pair, pairOnly, channel);
  const double pairSinr = SinrDb(pair, both, channel);
  CHECK(pairSinr < pairSnr);
  const double expected =
      channel.RxPowerDbm(pair) -
      LinearToDb(DbToLinear(channel.Config().link.NoisePowerDbm()) + DbToLinear(29.0 + channel.LinkGainDb(0, 23)));
  CHECK(pairSinr == doctest::Approx(expected));

  CHECK(Interferes(LinkKind::ENB_UE, LinkKind::MTCD_MTCD));
  CHECK(Interferes(LinkKind::ENB_MTCG, LinkKind::ENB_UE));
  CHECK(Interferes(LinkKind::MTCD_MTCD, LinkKind::MTCD_MTCD));
  CHECK_FALSE(Interferes(LinkKind::MTCD_MTCD, LinkKind::ENB_UE));
  CHECK_FALSE(Interferes(LinkKind::MTCD_MTCD, LinkKind::MTCG_MTCD));
  CHECK_FALSE(Interferes(LinkKind::MTCG_MTCD, LinkKind::ENB_MTCD));
  CHECK_FALSE(Interferes(LinkKind::MTCG_MTCD, LinkKind::MTCD_MTCD));
}

TEST_CASE("SINR per RB requires the serving link to hold the RB") {
  Scene scene = MakeScene({{{150.0, 80.0}, NodeKind::UE}});
  const ChannelState channel(scene.layout, scene.roster, {}, {});
  ResourceGrid grid(2, 4);
  const Transmission t{LinkKind::ENB_UE, 0, 21, 29.0};
  grid.Assign(1, 2, t);
  CHECK_NOTHROW(SinrPerRb(grid, 1, 2, t, channel));
  CHECK_THROWS_AS(SinrPerRb(grid, 1, 3, t, channel), ContractViolation);
  CHECK_THROWS_AS(SinrPerRb(grid, 0, 2, t, channel), ContractViolation);
}

TEST_CASE("adding interferers never raises SINR") {
  std::vector<std::pair<Position, NodeKind>> receivers;
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> coord(-700.0, 700.0);
  for (int i = 0; i < 30; ++i) {
    receivers.push_back({{coord(rng), coord(rng)}, i % 2 == 0 ? NodeKind::UE : NodeKind::MTCD});
  }
  Scene scene = MakeScene(receivers);
  const ChannelState channel(scene.layout, scene.roster, {}, {});
  std::uniform_int_distribution<int> sector(0, 20);
  for (NodeId rx = 21; rx < 51; ++rx) {
    const Transmission serving{LinkKind::ENB_UE, static_cast<NodeId>(sector(rng)), rx, 29.0};
    std::vector<Transmission> cell{serving};
    const double snr = SinrDb(serving, cell, channel);
    double previous = snr;
    for (int k = 0; k < 6; ++k) {
      cell.push_back({LinkKind::ENB_MTCD, static_cast<NodeId>(sector(rng)), 21, 29.0});
      const double sinr = SinrDb(serving, cell, channel);
      CHECK(sinr <= previous + 1e-12);
      CHECK(sinr <= snr + 1e-12);
      previous = sinr;
    }
  }
}

TEST_CASE("full-load SINR matches an explicit all-sector cell") {
  Scene scene = MakeScene({{{120.0, -40.0}, NodeKind::UE}});
  const ChannelState channel(scene.layout, scene.roster, {}, {});
  std::vector<Transmission> cell;
  for (NodeId s = 0; s < 21; ++s) {
    cell.push_back({LinkKind::ENB_UE, s, s == 2 ? NodeId{21} : NodeId{100 + s}, 29.0});
  }
  CHECK(FullLoadSinrDb(2, 21, channel, 29.0) == doctest::Approx(SinrDb(cell[2], cell, channel)));
}

TEST_CASE("rate mapping") {
  LinkBudgetConstants c;
  CHECK(RatePerRb(-10.01, c) == 0.0);
  CHECK(RatePerRb(-30.0, c) == 0.0);
  CHECK(RatePerRb(0.0, c) == doctest::Approx(135000.0));
  CHECK(RatePerRb(40.0, c) == doctest::Approx(180000.0 * 6.0));
  CHECK(RatePerRb(60.0, c) == RatePerRb(40.0, c));
  double previous = 0.0;
  for (double s = -15.0; s < 50.0; s += 0.25) {
    const double r = RatePerRb(s, c);
    CHECK(r >= previous);
    previous = r;
  }
}

TEST_CASE("power split per RB") {
  CHECK(PowerPerRbDbm(46.0, 50) == doctest::Approx(46.0 - 10.0 * std::log10(50.0)));
  CHECK(PowerPerRbDbm(14.0, 1) == 14.0);
  CHECK(PowerPerRbDbm(14.0, 0) == 14.0);
}

TEST_CASE("link budget dump") {
  Scene scene = MakeScene({{{150.0, 80.0}, NodeKind::UE}, {{151.0, 80.0}, NodeKind::MTCD}});
  const ChannelState channel(scene.layout, scene.roster, {}, {});
  const std::vector<Transmission> links{{LinkKind::ENB_UE, 0, 21, 29.0}, {LinkKind::MTCD_MTCD, 22, 21, 14.0}};
  std::ostringstream out;
  WriteLinkBudget(out, links, channel);
  std::string line;
  std::istringstream in(out.str());
  std::getline(in, line);
  CHECK(line == "tx,rx,kind,pathloss_db,shadowing_db,antenna_db,rx_power_dbm");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(std::count(line.begin(), line.end(), ',') == 6);
  }
  CHECK(rows == 2);
}
