#include "m2msim/experiment.hpp"

#include <fstream>
#include <sstream>

#include "m2msim/config.hpp"
#include "m2msim/errors.hpp"

namespace m2m {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kSamplesHeader = "experiment,variant,lambda,mode,drop,population,node,rate_bps,utility";
constexpr std::string_view kCdfHeader = "experiment,variant,lambda,mode,population,value,cdf";

std::string LambdaVariant(int tenths) {
  return "lambda_" + std::to_string(tenths / 10) + "." + std::to_string(tenths % 10);
}

// Files created by one run, deleted again unless Commit() is reached.
class OutputTransaction {
 public:
  explicit OutputTransaction(fs::path dir) : m_dir(std::move(dir)) {
    m_createdDir = !fs::exists(m_dir);
    fs::create_directories(m_dir);
  }
  ~OutputTransaction() {
    if (m_committed) {
      return;
    }
    std::error_code ec;
    for (const fs::path& p : m_files) {
      fs::remove(p, ec);
    }
    if (m_createdDir) {
      fs::remove_all(m_dir, ec);
    }
  }
  OutputTransaction(const OutputTransaction&) = delete;
  OutputTransaction& operator=(const OutputTransaction&) = delete;

  std::ofstream Open(const std::string& name) {
    const fs::path p = m_dir / name;
    m_files.push_back(p);
    std::ofstream out(p);
    if (!out) {
      throw ConfigError("cannot write " + p.string());
    }
    out.precision(10);
    return out;
  }
  void Commit() { m_committed = true; }

 private:
  fs::path m_dir;
  bool m_createdDir = false;
  bool m_committed = false;
  std::vector<fs::path> m_files;
};

std::size_t Columns(const std::string& line) { return static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1; }

void CheckCsv(const fs::path& path, std::string_view header) {
  std::ifstream in(path);
  std::string line;
  if (!in || !std::getline(in, line) || line != header) {
    throw ContractViolation(path.string() + ": missing or malformed header");
  }
  const std::size_t columns = Columns(line);
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (Columns(line) != columns) {
      throw ContractViolation(path.string() + ":" + std::to_string(row) + ": expected " + std::to_string(columns) +
                              " columns");
    }
  }
}

void WriteDebug(OutputTransaction& out, const DropConfig& config, int verbosity) {
  DropDebug debug;
  RunDrop(config, 0, &debug);
  {
    auto f = out.Open("roster.csv");
    WriteRoster(f, debug.roster);
  }
  {
    auto f = out.Open("graph.txt");
    debug.graph.Write(f);
  }
  {
    auto f = out.Open("coloring_trace.csv");
    WriteColoringTrace(f, debug.coloringTrace);
  }
  if (verbosity >= 2) {
    auto grid = out.Open("allocation.csv");
    debug.grid.Write(grid);
    const NetworkLayout layout =
        BuildLayout(config.layout.numSites, config.layout.isd, config.layout.wraparound, config.layout.blocks);
    // Link budgets without shadowing; the drop's shadowing stays internal.
    const ChannelState channel(layout, debug.roster, ShadowingMap(debug.roster.size(), layout.NumSites()),
                               config.radio.channel);
    auto links = out.Open("links.csv");
    WriteLinkBudget(links, debug.links, channel);
  }
}

}  // namespace

std::string_view ToString(Experiment e) {
  switch (e) {
    case Experiment::LAMBDA_SWEEP:
      return "LAMBDA_SWEEP";
    case Experiment::WITH_WITHOUT_M2M:
      return "WITH_WITHOUT_M2M";
    case Experiment::GRAPH_VS_REUSE:
      return "GRAPH_VS_REUSE";
    case Experiment::CUSTOM:
      return "CUSTOM";
  }
  return "?";
}

std::optional<Experiment> ParseExperiment(std::string_view name) {
  for (Experiment e : {Experiment::LAMBDA_SWEEP, Experiment::WITH_WITHOUT_M2M, Experiment::GRAPH_VS_REUSE,
                       Experiment::CUSTOM}) {
    if (ToString(e) == name) {
      return e;
    }
  }
  return std::nullopt;
}

DropConfig WithoutM2m(DropConfig config) {
  config.population.outdoorMtcdsPerSector = 0;
  config.population.indoorPairsPerBlock = 0;
  config.population.mtcgsPerSector = 0;
  return config;
}

std::vector<DropConfig> ExperimentConfigs(const DropConfig& base, Experiment experiment,
                                          std::vector<std::string>* variants) {
  std::vector<DropConfig> configs;
  std::vector<std::string> names;
  switch (experiment) {
    case Experiment::LAMBDA_SWEEP:
      for (int tenths = 0; tenths <= 10; ++tenths) {
        DropConfig c = base;
        c.lambda = tenths / 10.0;
        configs.push_back(c);
        names.push_back(LambdaVariant(tenths));
      }
      break;
    case Experiment::WITH_WITHOUT_M2M:
      configs = {base, WithoutM2m(base)};
      names = {"with_m2m", "without_m2m"};
      break;
    case Experiment::GRAPH_VS_REUSE: {
      DropConfig graph = base;
      graph.allocationMode = AllocationMode::GRAPH_BASED;
      DropConfig reuse = base;
      reuse.allocationMode = AllocationMode::FULL_REUSE;
      configs = {graph, reuse};
      names = {"graph_based", "full_reuse"};
      break;
    }
    case Experiment::CUSTOM:
      configs = {base};
      names = {"custom"};
      break;
  }
  if (variants != nullptr) {
    *variants = std::move(names);
  }
  return configs;
}

std::vector<Campaign> RunCampaigns(const DropConfig& base, Experiment experiment, int workers) {
  std::vector<std::string> variants;
  const auto configs = ExperimentConfigs(base, experiment, &variants);
  std::vector<Campaign> campaigns;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    campaigns.push_back({variants[i], configs[i], RunCampaign(configs[i], workers)});
  }
  return campaigns;
}

std::string ExperimentVerdict(Experiment experiment, const std::vector<Campaign>& campaigns) {
  std::ostringstream out;
  out.precision(10);
  if (experiment == Experiment::WITH_WITHOUT_M2M && campaigns.size() == 2) {
    const double with = campaigns[0].report.aggregateCellUtility;
    const double without = campaigns[1].report.aggregateCellUtility;
    const double diff = with - without;
    out << "aggregate_with_m2m=" << with << '\n';
    out << "aggregate_without_m2m=" << without << '\n';
    out << "aggregate_difference=" << diff << '\n';
    out << "aggregate_difference_sign=" << (diff > 0 ? "positive" : diff < 0 ? "negative" : "zero") << '\n';
  } else if (experiment == Experiment::GRAPH_VS_REUSE && campaigns.size() == 2) {
    const auto& graph = campaigns[0].report;
    const auto& reuse = campaigns[1].report;
    if (graph.Has(Population::PAIR) && reuse.Has(Population::PAIR)) {
      const double g = graph.Summary(Population::PAIR).p10;
      const double r = reuse.Summary(Population::PAIR).p10;
      out << "pair_p10_graph_based=" << g << '\n';
      out << "pair_p10_full_reuse=" << r << '\n';
      out << "pair_p10_winner=" << (g > r ? "GRAPH_BASED" : g < r ? "FULL_REUSE" : "TIE") << '\n';
    } else {
      out << "pair_p10_winner=NO_PAIRS\n";
    }
  }
  return out.str();
}

std::vector<Campaign> RunExperiment(const RunManifest& manifest) {
  if (manifest.outputDir.empty()) {
    throw ConfigError("output directory is required");
  }
  if (manifest.workers < 1) {
    throw ConfigError("worker count must be >= 1");
  }
  std::vector<std::string> overrides = manifest.overrides;
  if (manifest.seed) {
    overrides.push_back("seed=" + std::to_string(*manifest.seed));
  }
  const DropConfig base = ParseConfig(manifest.configPath, overrides);

  OutputTransaction out(manifest.outputDir);
  {
    nlohmann::ordered_json echo;
    echo["experiment"] = std::string(ToString(manifest.experiment));
    echo["config_path"] = manifest.configPath.string();
    echo["seed"] = base.seed;
    echo["workers"] = manifest.workers;
    echo["verbosity"] = manifest.verbosity;
    echo["overrides"] = manifest.overrides;
    out.Open("manifest.json") << echo.dump(2) << '\n';
    out.Open("config.json") << ConfigToJson(base).dump(2) << '\n';
  }

  std::vector<Campaign> campaigns = RunCampaigns(base, manifest.experiment, manifest.workers);
  const std::string experiment(ToString(manifest.experiment));
  {
    auto samples = out.Open("samples.csv");
    auto summary = out.Open("summary.txt");
    summary << "experiment=" << experiment << '\n';
    summary << "seed=" << base.seed << '\n';
    bool header = true;
    for (const Campaign& c : campaigns) {
      const RunTag tag{experiment, c.config.lambda, c.config.allocationMode, c.variant};
      WriteSamplesCsv(samples, c.report, tag, header);
      header = false;
      auto cdf = out.Open("cdf_" + c.variant + ".csv");
      WriteCdfCsv(cdf, c.report, tag, true);
      WriteSummary(summary, c.report, c.variant + ".");
    }
    summary << ExperimentVerdict(manifest.experiment, campaigns);
  }
  if (manifest.verbosity >= 1) {
    WriteDebug(out, base, manifest.verbosity);
  }
  ValidateOutputDir(manifest.outputDir, base);
  out.Commit();
  return campaigns;
}

void ValidateOutputDir(const fs::path& dir, const DropConfig& config) {
  CheckCsv(dir / "samples.csv", kSamplesHeader);
  bool anyCdf = false;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (name.rfind("cdf_", 0) == 0 && entry.path().extension() == ".csv") {
      CheckCsv(entry.path(), kCdfHeader);
      anyCdf = true;
    }
  }
  if (!anyCdf) {
    throw ContractViolation(dir.string() + ": no CDF file");
  }
  std::ifstream summary(dir / "summary.txt");
  std::string line;
  while (std::getline(summary, line)) {
    if (line.find('=') == std::string::npos) {
      throw ContractViolation("summary.txt: line without '=': " + line);
    }
  }
  if (!(ParseConfig(dir / "config.json") == config)) {
    throw ContractViolation("config.json does not round-trip");
  }
}

}  // namespace m2m
