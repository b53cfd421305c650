#include "m2msim/config.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

#include "m2msim/errors.hpp"

namespace m2m {

using Json = nlohmann::ordered_json;

namespace {

Json UtilityToJson(const UtilitySpec& u) {
  return Json{{"class", std::string(ToString(u.appClass))},
              {"r0", u.r0},
              {"r_max", u.rMax},
              {"threshold", u.threshold},
              {"midpoint", u.midpoint},
              {"shape", u.shape}};
}

// Reads the known keys of one JSON object, rejecting anything else.
class Section {
 public:
  Section(const Json& node, std::string path) : m_node(node), m_path(std::move(path)) {
    if (!node.is_object()) {
      throw ConfigError("'" + Where() + "' must be an object");
    }
  }

  template <typename T>
  void Read(const std::string& key, T& target) {
    m_known.push_back(key);
    const auto it = m_node.find(key);
    if (it == m_node.end()) {
      return;
    }
    if constexpr (std::is_same_v<T, bool>) {
      if (!it->is_boolean()) {
        throw ConfigError("'" + Key(key) + "' must be true or false");
      }
    } else if constexpr (std::is_unsigned_v<T>) {
      if (!it->is_number_unsigned()) {
        throw ConfigError("'" + Key(key) + "' must be a non-negative integer");
      }
    } else if constexpr (std::is_integral_v<T>) {
      if (!it->is_number_integer()) {
        throw ConfigError("'" + Key(key) + "' must be an integer");
      }
    }
    try {
      target = it->template get<T>();
    } catch (const nlohmann::json::exception&) {
      throw ConfigError("'" + Key(key) + "' has the wrong type");
    }
    if constexpr (std::is_floating_point_v<T>) {
      if (!it->is_number()) {
        throw ConfigError("'" + Key(key) + "' must be a number");
      }
    }
  }

  void Child(const std::string& key, const std::function<void(Section&)>& body) {
    m_known.push_back(key);
    const auto it = m_node.find(key);
    if (it != m_node.end()) {
      Section child(*it, Key(key));
      body(child);
      child.Finish();
    }
  }

  void Finish() const {
    for (const auto& [key, value] : m_node.items()) {
      if (std::find(m_known.begin(), m_known.end(), key) == m_known.end()) {
        throw ConfigError("unknown key '" + Key(key) + "'");
      }
    }
  }

  std::string Key(const std::string& key) const { return m_path.empty() ? key : m_path + "." + key; }

 private:
  std::string Where() const { return m_path.empty() ? "<root>" : m_path; }

  const Json& m_node;
  std::string m_path;
  std::vector<std::string> m_known;
};

void ReadUtility(Section& s, UtilitySpec& u) {
  std::string name(ToString(u.appClass));
  s.Read("class", name);
  const auto parsed = ParseAppClass(name);
  if (!parsed) {
    throw ConfigError("'" + s.Key("class") + "' must be one of ELASTIC, HARD_REAL_TIME, DELAY_ADAPTIVE, RATE_ADAPTIVE");
  }
  u.appClass = *parsed;
  s.Read("r0", u.r0);
  s.Read("r_max", u.rMax);
  s.Read("threshold", u.threshold);
  s.Read("midpoint", u.midpoint);
  s.Read("shape", u.shape);
}

void ValidateUtility(const UtilitySpec& u, const std::string& key) {
  try {
    u.Validate();
  } catch (const ConfigError& e) {
    throw ConfigError("'" + key + "': " + e.what());
  }
}

std::pair<std::size_t, std::size_t> LineColumn(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

}  // namespace

Json ConfigToJson(const DropConfig& c) {
  const ChannelConfig& ch = c.radio.channel;
  Json tree;
  tree["layout"] = Json{{"num_sites", c.layout.numSites},
                        {"isd_m", c.layout.isd},
                        {"wraparound", c.layout.wraparound},
                        {"min_distance_m", c.layout.minDistanceM},
                        {"shadowed_attachment", c.layout.shadowedAttachment},
                        {"apartment_size_m", c.layout.blocks.apartmentSize},
                        {"stripe_separation_m", c.layout.blocks.stripeSeparation},
                        {"block_offset_fraction", c.layout.blocks.offsetFraction},
                        {"block_azimuth_deg", c.layout.blocks.azimuthDeg}};
  tree["population"] = Json{{"ues_per_sector", c.population.uesPerSector},
                            {"outdoor_mtcds_per_sector", c.population.outdoorMtcdsPerSector},
                            {"indoor_pairs_per_block", c.population.indoorPairsPerBlock},
                            {"mtcgs_per_sector", c.population.mtcgsPerSector},
                            {"duty", c.population.duty},
                            {"gateway_demand_bps", c.population.gatewayDemandBps}};
  tree["radio"] = Json{{"enb_tx_power_dbm", c.radio.enbMaxTxPowerDbm},
                       {"enb_antenna_gain_dbi", c.radio.enbAntennaGainDbi},
                       {"mtcd_tx_power_dbm", c.radio.mtcdMaxTxPowerDbm},
                       {"mtcg_tx_power_dbm", c.radio.mtcgMaxTxPowerDbm},
                       {"terminal_antenna_gain_dbi", c.radio.terminalAntennaGainDbi},
                       {"shadowing_sigma_db", c.radio.shadowingSigmaDb},
                       {"inter_site_correlation", c.radio.interSiteCorrelation},
                       {"beamwidth_deg", ch.antenna.beamwidthDeg},
                       {"max_attenuation_db", ch.antenna.maxAttenuationDb},
                       {"penetration_loss_db", ch.penetrationLossDb},
                       {"macro_min_distance_m", ch.macroMinDistanceM},
                       {"device_min_distance_m", ch.deviceMinDistanceM},
                       {"los_breakpoint_m", ch.losBreakpointM},
                       {"noise_figure_db", ch.link.noiseFigureDb},
                       {"thermal_noise_dbm_per_hz", ch.link.thermalNoiseDbmPerHz},
                       {"rb_bandwidth_hz", ch.link.rbBandwidthHz},
                       {"num_rbs", ch.link.numRbs},
                       {"rate_attenuation", ch.link.rateAttenuation},
                       {"max_spectral_efficiency", ch.link.maxSpectralEfficiency},
                       {"sinr_floor_db", ch.link.sinrFloorDb}};
  tree["utility"] = Json{{"ue", UtilityToJson(c.utility.ue)},
                         {"mtcd", UtilityToJson(c.utility.mtcd)},
                         {"pair", UtilityToJson(c.utility.pair)}};
  tree["graph"] = Json{{"threshold_db", c.graph.thresholdDb},
                       {"p0", c.graph.p0},
                       {"iterations", c.graph.iterations},
                       {"move_probability", c.graph.moveProbability},
                       {"num_colors", c.graph.numColors}};
  tree["lambda"] = c.lambda;
  tree["num_drops"] = c.numDrops;
  tree["seed"] = c.seed;
  tree["allocation_mode"] = std::string(ToString(c.allocationMode));
  return tree;
}

DropConfig ConfigFromJson(const Json& tree) {
  DropConfig c;
  ChannelConfig& ch = c.radio.channel;
  Section root(tree, "");
  root.Child("layout", [&c](Section& s) {
    s.Read("num_sites", c.layout.numSites);
    s.Read("isd_m", c.layout.isd);
    s.Read("wraparound", c.layout.wraparound);
    s.Read("min_distance_m", c.layout.minDistanceM);
    s.Read("shadowed_attachment", c.layout.shadowedAttachment);
    s.Read("apartment_size_m", c.layout.blocks.apartmentSize);
    s.Read("stripe_separation_m", c.layout.blocks.stripeSeparation);
    s.Read("block_offset_fraction", c.layout.blocks.offsetFraction);
    s.Read("block_azimuth_deg", c.layout.blocks.azimuthDeg);
  });
  root.Child("population", [&c](Section& s) {
    s.Read("ues_per_sector", c.population.uesPerSector);
    s.Read("outdoor_mtcds_per_sector", c.population.outdoorMtcdsPerSector);
    s.Read("indoor_pairs_per_block", c.population.indoorPairsPerBlock);
    s.Read("mtcgs_per_sector", c.population.mtcgsPerSector);
    s.Read("duty", c.population.duty);
    s.Read("gateway_demand_bps", c.population.gatewayDemandBps);
  });
  root.Child("radio", [&c, &ch](Section& s) {
    s.Read("enb_tx_power_dbm", c.radio.enbMaxTxPowerDbm);
    s.Read("enb_antenna_gain_dbi", c.radio.enbAntennaGainDbi);
    s.Read("mtcd_tx_power_dbm", c.radio.mtcdMaxTxPowerDbm);
    s.Read("mtcg_tx_power_dbm", c.radio.mtcgMaxTxPowerDbm);
    s.Read("terminal_antenna_gain_dbi", c.radio.terminalAntennaGainDbi);
    s.Read("shadowing_sigma_db", c.radio.shadowingSigmaDb);
    s.Read("inter_site_correlation", c.radio.interSiteCorrelation);
    s.Read("beamwidth_deg", ch.antenna.beamwidthDeg);
    s.Read("max_attenuation_db", ch.antenna.maxAttenuationDb);
    s.Read("penetration_loss_db", ch.penetrationLossDb);
    s.Read("macro_min_distance_m", ch.macroMinDistanceM);
    s.Read("device_min_distance_m", ch.deviceMinDistanceM);
    s.Read("los_breakpoint_m", ch.losBreakpointM);
    s.Read("noise_figure_db", ch.link.noiseFigureDb);
    s.Read("thermal_noise_dbm_per_hz", ch.link.thermalNoiseDbmPerHz);
    s.Read("rb_bandwidth_hz", ch.link.rbBandwidthHz);
    s.Read("num_rbs", ch.link.numRbs);
    s.Read("rate_attenuation", ch.link.rateAttenuation);
    s.Read("max_spectral_efficiency", ch.link.maxSpectralEfficiency);
    s.Read("sinr_floor_db", ch.link.sinrFloorDb);
  });
  ch.antenna.peakGainDbi = c.radio.enbAntennaGainDbi;
  root.Child("utility", [&c](Section& s) {
    s.Child("ue", [&c](Section& u) { ReadUtility(u, c.utility.ue); });
    s.Child("mtcd", [&c](Section& u) { ReadUtility(u, c.utility.mtcd); });
    s.Child("pair", [&c](Section& u) { ReadUtility(u, c.utility.pair); });
  });
  root.Child("graph", [&c](Section& s) {
    s.Read("threshold_db", c.graph.thresholdDb);
    s.Read("p0", c.graph.p0);
    s.Read("iterations", c.graph.iterations);
    s.Read("move_probability", c.graph.moveProbability);
    s.Read("num_colors", c.graph.numColors);
  });
  root.Read("lambda", c.lambda);
  root.Read("num_drops", c.numDrops);
  root.Read("seed", c.seed);
  std::string mode(ToString(c.allocationMode));
  root.Read("allocation_mode", mode);
  if (mode == "GRAPH_BASED") {
    c.allocationMode = AllocationMode::GRAPH_BASED;
  } else if (mode == "FULL_REUSE") {
    c.allocationMode = AllocationMode::FULL_REUSE;
  } else {
    throw ConfigError("'allocation_mode' must be GRAPH_BASED or FULL_REUSE");
  }
  root.Finish();

  ValidateUtility(c.utility.ue, "utility.ue");
  ValidateUtility(c.utility.mtcd, "utility.mtcd");
  ValidateUtility(c.utility.pair, "utility.pair");
  c.Validate();
  return c;
}

void ApplyOverride(Json& tree, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw ConfigError("override '" + std::string(assignment) + "' is not key=value");
  }
  const std::string key(assignment.substr(0, eq));
  const std::string text(assignment.substr(eq + 1));
  Json value = Json::parse(text, nullptr, false);
  if (value.is_discarded()) {
    value = text;
  }
  Json* node = &tree;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) {
      throw ConfigError("override key '" + key + "' has an empty component");
    }
    if (!node->is_object()) {
      throw ConfigError("override key '" + key + "' descends into a non-section");
    }
    if (dot == std::string::npos) {
      (*node)[part] = std::move(value);
      return;
    }
    node = &(*node)[part];
    if (node->is_null()) {
      *node = Json::object();
    }
    start = dot + 1;
  }
}

DropConfig ParseConfigText(std::string_view text, std::span<const std::string> overrides, std::string_view sourceName) {
  Json tree = Json::object();
  if (text.find_first_not_of(" \t\r\n") != std::string_view::npos) {
    try {
      tree = Json::parse(text.begin(), text.end(), nullptr, true, true);
    } catch (const nlohmann::json::parse_error& e) {
      const auto [line, column] = LineColumn(text, e.byte);
      const std::string message = e.what();
      const auto colon = message.rfind(": ");
      throw ConfigError(std::string(sourceName) + ":" + std::to_string(line) + ":" + std::to_string(column) +
                        ": parse error" + (colon == std::string::npos ? "" : message.substr(colon)));
    }
  }
  for (const std::string& o : overrides) {
    ApplyOverride(tree, o);
  }
  return ConfigFromJson(tree);
}

DropConfig ParseConfig(const std::filesystem::path& path, std::span<const std::string> overrides) {
  if (path.empty()) {
    return ParseConfigText("{}", overrides);
  }
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file " + path.string());
  }
  std::ostringstream text;
  text << in.rdbuf();
  return ParseConfigText(text.str(), overrides, path.string());
}

}  // namespace m2m
