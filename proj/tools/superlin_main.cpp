// superlin — command-line front end.
//
// Subcommands:
//   analyze   run the full battery of linearity statistics on a dataset
//   simulate  draw synthetic experiment series and analyze them
//   power     detection-rate curves against the manipulation strength
//
// Exit codes: 0 success; 2 validation/usage error; 3 unreadable or
// malformed input; 1 unexpected internal error.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "superlin/errors.hpp"
#include "superlin/io.hpp"
#include "superlin/report.hpp"
#include "superlin/simulate.hpp"
#include "superlin/version.hpp"

namespace fs = std::filesystem;
using namespace superlin;

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(text.substr(start));
      return out;
    }
    out.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

double parse_double(const std::string& text, const std::string& what) {
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ValidationError(what + ": cannot parse number from '" + text + "'");
  }
  return value;
}

int parse_int(const std::string& text, const std::string& what) {
  int value = 0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ValidationError(what + ": cannot parse integer from '" + text + "'");
  }
  return value;
}

std::array<double, 3> parse_triple(const std::string& text,
                                   const std::string& what) {
  const std::vector<std::string> parts = split(text, ',');
  if (parts.size() != 3) {
    throw ValidationError(what + ": expected three comma-separated numbers");
  }
  return {parse_double(parts[0], what), parse_double(parts[1], what),
          parse_double(parts[2], what)};
}

std::array<int, 3> parse_cells(const std::string& text) {
  const std::vector<std::string> parts = split(text, ',');
  if (parts.size() == 1) {
    const int n = parse_int(parts[0], "--cells");
    return {n, n, n};
  }
  if (parts.size() == 3) {
    return {parse_int(parts[0], "--cells"), parse_int(parts[1], "--cells"),
            parse_int(parts[2], "--cells")};
  }
  throw ValidationError("--cells: expected one integer or three");
}

TestSelection parse_tests(const std::string& spec) {
  TestSelection t;
  t.chi2 = t.delta_f = t.v_hat = t.product = t.joint = false;
  for (const std::string& token : split(spec, ',')) {
    if (token == "chi2") {
      t.chi2 = true;
    } else if (token == "deltaF") {
      t.delta_f = true;
    } else if (token == "vhat") {
      t.v_hat = true;
    } else if (token == "product") {
      t.product = true;
    } else if (token == "joint") {
      t.joint = true;
    } else {
      throw ValidationError("--tests: unknown test '" + token +
                            "' (expected chi2, deltaF, vhat, product, joint)");
    }
  }
  return t;
}

OrderingPolicy parse_order(const std::string& spec) {
  OrderingPolicy policy;
  if (spec == "as-reported") {
    policy.kind = OrderingKind::AsReported;
    return policy;
  }
  if (spec == "increasing" || spec == "increasing-means") {
    policy.kind = OrderingKind::IncreasingMeans;
    return policy;
  }
  const std::string prefix = "exclude:";
  if (spec.rfind(prefix, 0) == 0) {
    policy.kind = OrderingKind::Exclude;
    for (const std::string& id : split(spec.substr(prefix.size()), ',')) {
      if (id.empty()) {
        throw ValidationError("--order: empty experiment id in exclude list");
      }
      policy.excluded_ids.push_back(id);
    }
    if (policy.excluded_ids.empty()) {
      throw ValidationError("--order: exclude needs at least one id");
    }
    return policy;
  }
  throw ValidationError(
      "--order: expected as-reported, increasing-means, or "
      "exclude:<id,id,...>");
}

ManipulationSpec parse_manipulation(const std::string& spec) {
  const std::size_t colon = spec.find(':');
  if (colon == std::string::npos) {
    throw ValidationError(
        "--manipulate: expected <strategy>:<strength>, e.g. "
        "middle-toward-linear:0.5");
  }
  const std::string name = spec.substr(0, colon);
  ManipulationSpec m;
  if (name == "middle-toward-linear") {
    m.strategy = ManipulationStrategy::MiddleTowardLinear;
  } else if (name == "variance-shrink") {
    m.strategy = ManipulationStrategy::VarianceShrink;
  } else {
    throw ValidationError("--manipulate: unknown strategy '" + name +
                          "' (expected middle-toward-linear or "
                          "variance-shrink)");
  }
  m.strength = parse_double(spec.substr(colon + 1), "--manipulate");
  return m;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ParseError("cannot read input file '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) {
    throw ParseError("cannot read input file '" + path + "'");
  }
  return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error("cannot write output file '" + path + "'");
  }
  out << content;
  out.flush();
  if (!out) {
    throw Error("cannot write output file '" + path + "'");
  }
}

Format detect_format(const std::string& format_flag, const std::string& path) {
  if (format_flag == "json") return Format::Json;
  if (format_flag == "csv") return Format::Csv;
  if (!format_flag.empty()) {
    throw ValidationError("--format: expected json or csv");
  }
  std::string ext = fs::path(path).extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (ext == ".json") return Format::Json;
  if (ext == ".csv") return Format::Csv;
  throw ValidationError(
      "cannot infer the input format from '" + path +
      "'; pass --format json or --format csv");
}

std::string sanitize_filename(const std::string& id) {
  std::string out;
  bool has_substance = false;
  for (char c : id) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '-' || c == '_' || c == '.';
    out += ok ? c : '_';
    if (ok && c != '.') has_substance = true;
  }
  if (!has_substance) out = "article";
  return out;
}

// --- analyze ---------------------------------------------------------------

struct AnalyzeOptions {
  std::string input;
  std::string format;
  std::string order = "as-reported";
  std::string tests = "chi2,deltaF,vhat,product,joint";
  double alpha = 0.05;
  std::uint64_t seed = 0;
  std::string output;
  std::string figure_dir;
  SearchConfig search;
};

void run_analyze(const AnalyzeOptions& opt) {
  const Format format = detect_format(opt.format, opt.input);
  const std::string bytes = read_file(opt.input);

  AnalysisConfig config;
  config.order = parse_order(opt.order);
  config.tests = parse_tests(opt.tests);
  config.alpha = opt.alpha;
  config.seed = opt.seed;
  config.search = opt.search;
  config.input_path = opt.input;
  config.input_format = format == Format::Json ? "json" : "csv";
  config.input_digest = "fnv1a64:" + fnv1a64_hex(bytes);

  const std::vector<ArticleDataset> datasets =
      format == Format::Json ? parse_json(bytes) : parse_csv(bytes);
  const AnalysisReport report = analyze(datasets, config);

  std::cout << report_text(report);
  if (!opt.output.empty()) {
    write_file(opt.output, report_json(report));
  }
  if (!opt.figure_dir.empty()) {
    std::error_code ec;
    fs::create_directories(opt.figure_dir, ec);
    if (ec) {
      throw Error("cannot create figure directory '" + opt.figure_dir + "'");
    }
    std::map<std::string, int> used;
    for (const ArticleReport& article : report.articles) {
      std::string name = sanitize_filename(article.id);
      const int count = ++used[name];
      if (count > 1) name += "-" + std::to_string(count);
      write_file((fs::path(opt.figure_dir) / (name + ".tsv")).string(),
                 figure_data_tsv(article));
    }
  }
}

// --- simulate --------------------------------------------------------------

struct SimulateOptions {
  std::string cells = "20";
  std::string means = "0,0,0";
  std::string sds = "1,1,1";
  int experiments = 1;
  long long replicates = 1;
  std::uint64_t seed = 0;
  std::string manipulate;
  std::string tests = "chi2,deltaF,vhat,product,joint";
  double alpha = 0.05;
  std::string output;
  std::string emit_data;
};

SimulationConfig build_sim_config(const SimulateOptions& opt) {
  SimulationConfig cfg;
  cfg.cells = parse_cells(opt.cells);
  cfg.true_means = parse_triple(opt.means, "--means");
  cfg.true_sds = parse_triple(opt.sds, "--sds");
  cfg.experiments_per_article = opt.experiments;
  cfg.replicates = opt.replicates;
  cfg.seed = opt.seed;
  if (!opt.manipulate.empty()) {
    cfg.manipulation = parse_manipulation(opt.manipulate);
  }
  validate(cfg);
  return cfg;
}

std::vector<ArticleDataset> draw_datasets(const SimulationConfig& cfg) {
  std::vector<ArticleDataset> out;
  out.reserve(static_cast<std::size_t>(cfg.replicates));
  char buf[24];
  for (long long rep = 0; rep < cfg.replicates; ++rep) {
    ArticleDataset article;
    std::snprintf(buf, sizeof(buf), "sim-%06lld", rep + 1);
    article.id = buf;
    for (int j = 0; j < cfg.experiments_per_article; ++j) {
      article.experiments.push_back(
          simulate_experiment(cfg, static_cast<std::uint64_t>(rep),
                              static_cast<std::uint64_t>(j)));
    }
    out.push_back(std::move(article));
  }
  return out;
}

void run_simulate(const SimulateOptions& opt) {
  const SimulationConfig cfg = build_sim_config(opt);
  const std::vector<ArticleDataset> datasets = draw_datasets(cfg);
  const std::string data_csv = emit_csv(datasets);

  AnalysisConfig config;
  config.tests = parse_tests(opt.tests);
  config.alpha = opt.alpha;
  config.seed = opt.seed;
  config.input_format = "synthetic";
  config.input_digest = "fnv1a64:" + fnv1a64_hex(data_csv);

  const AnalysisReport report = analyze(datasets, config);
  std::cout << report_text(report);
  if (!opt.output.empty()) {
    write_file(opt.output, report_json(report));
  }
  if (!opt.emit_data.empty()) {
    std::string ext = fs::path(opt.emit_data).extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    write_file(opt.emit_data,
               ext == ".json" ? emit_json(datasets) : data_csv);
  }
}

// --- power -----------------------------------------------------------------

struct PowerOptions {
  std::string cells = "20";
  std::string means = "0,0,0";
  std::string sds = "1,1,1";
  int experiments = 1;
  long long replicates = 1000;
  std::uint64_t seed = 0;
  std::string strategy = "middle-toward-linear";
  std::string lambdas = "0,0.25,0.5,0.75,1";
  std::string rules = "chi2,fisher,product,joint";
  double alpha = 0.05;
  double v_star = 6.0;
  std::string output;
};

std::vector<DetectionRule> parse_rules(const std::string& spec) {
  std::vector<DetectionRule> out;
  for (const std::string& token : split(spec, ',')) {
    if (token == "chi2") {
      out.push_back(DetectionRule::Chi2Article);
    } else if (token == "fisher") {
      out.push_back(DetectionRule::DeltaFFisherArticle);
    } else if (token == "product") {
      out.push_back(DetectionRule::VProduct);
    } else if (token == "joint") {
      out.push_back(DetectionRule::VHatJoint);
    } else {
      throw ValidationError("--rules: unknown rule '" + token +
                            "' (expected chi2, fisher, product, joint)");
    }
  }
  return out;
}

void run_power(const PowerOptions& opt) {
  PowerConfig pcfg;
  pcfg.base.cells = parse_cells(opt.cells);
  pcfg.base.true_means = parse_triple(opt.means, "--means");
  pcfg.base.true_sds = parse_triple(opt.sds, "--sds");
  pcfg.base.experiments_per_article = opt.experiments;
  pcfg.base.replicates = opt.replicates;
  pcfg.base.seed = opt.seed;
  pcfg.base.manipulation =
      parse_manipulation(opt.strategy + ":0");  // strategy carrier
  std::vector<double> lambdas;
  for (const std::string& token : split(opt.lambdas, ',')) {
    lambdas.push_back(parse_double(token, "--lambdas"));
  }
  pcfg.lambdas = std::move(lambdas);
  pcfg.rules = parse_rules(opt.rules);
  pcfg.alpha = opt.alpha;
  pcfg.v_star = opt.v_star;

  const std::vector<PowerRow> rows = power_curve(pcfg);
  std::string out = "rule\tlambda\trate\thalf_width\treplicates\n";
  for (const PowerRow& row : rows) {
    out += std::string(to_string(row.rule)) + "\t" + format_g17(row.lambda) +
           "\t" + format_g17(row.rate) + "\t" + format_g17(row.half_width) +
           "\t" + std::to_string(row.replicates) + "\n";
  }
  if (opt.output.empty()) {
    std::cout << out;
  } else {
    write_file(opt.output, out);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"superlin — detecting improbably linear three-condition "
               "experiment series"};
  app.set_version_flag("--version", std::string(kToolkitName) + " " +
                                        std::string(kToolkitVersion));
  app.require_subcommand(1);

  AnalyzeOptions an;
  CLI::App* analyze_cmd =
      app.add_subcommand("analyze", "Analyze a dataset of summary statistics");
  analyze_cmd->add_option("--input", an.input, "Input file (JSON or CSV)")
      ->required();
  analyze_cmd->add_option("--format", an.format,
                          "Input format: json or csv (default: by extension)");
  analyze_cmd->add_option(
      "--order", an.order,
      "Condition ordering: as-reported, increasing-means, or "
      "exclude:<id,id,...> (default: as-reported)");
  analyze_cmd->add_option("--tests", an.tests,
                          "Comma list from chi2, deltaF, vhat, product, joint "
                          "(default: all)");
  analyze_cmd->add_option("--alpha", an.alpha,
                          "Significance level (default: 0.05)");
  analyze_cmd->add_option("--seed", an.seed,
                          "Seed echoed into the report (default: 0)");
  analyze_cmd->add_option("--output", an.output,
                          "Write the machine-readable JSON report here");
  analyze_cmd->add_option("--figure-data", an.figure_dir,
                          "Write per-article figure TSV files into this "
                          "directory");
  analyze_cmd->add_option("--search-step", an.search.lattice_step,
                          "Correlation-search lattice step (default: 0.05)");
  analyze_cmd->add_option("--search-tol", an.search.step_tol,
                          "Correlation-search step tolerance (default: 1e-4)");
  analyze_cmd->add_option("--search-budget", an.search.eval_budget,
                          "Correlation-search refinement budget "
                          "(default: 10000)");

  SimulateOptions sim;
  CLI::App* simulate_cmd = app.add_subcommand(
      "simulate", "Draw synthetic experiment series and analyze them");
  simulate_cmd->add_option("--cells", sim.cells,
                           "Cell sizes: one integer or n1,n2,n3 "
                           "(default: 20)");
  simulate_cmd->add_option("--means", sim.means,
                           "True condition means (default: 0,0,0)");
  simulate_cmd->add_option("--sds", sim.sds,
                           "True condition sds (default: 1,1,1)");
  simulate_cmd->add_option("--experiments", sim.experiments,
                           "Experiments per article (default: 1)");
  simulate_cmd->add_option("--replicates", sim.replicates,
                           "Number of simulated articles (default: 1)");
  simulate_cmd->add_option("--seed", sim.seed, "RNG seed (default: 0)");
  simulate_cmd->add_option("--manipulate", sim.manipulate,
                           "Apply <strategy>:<strength> to every experiment; "
                           "strategies: middle-toward-linear, "
                           "variance-shrink");
  simulate_cmd->add_option("--tests", sim.tests,
                           "Comma list from chi2, deltaF, vhat, product, "
                           "joint (default: all)");
  simulate_cmd->add_option("--alpha", sim.alpha,
                           "Significance level (default: 0.05)");
  simulate_cmd->add_option("--output", sim.output,
                           "Write the machine-readable JSON report here");
  simulate_cmd->add_option("--emit-data", sim.emit_data,
                           "Write the simulated summary data here "
                           "(CSV, or JSON for a .json path)");

  PowerOptions pw;
  CLI::App* power_cmd = app.add_subcommand(
      "power", "Detection rates against the manipulation strength");
  power_cmd->add_option("--cells", pw.cells,
                        "Cell sizes: one integer or n1,n2,n3 (default: 20)");
  power_cmd->add_option("--means", pw.means,
                        "True condition means (default: 0,0,0)");
  power_cmd->add_option("--sds", pw.sds,
                        "True condition sds (default: 1,1,1)");
  power_cmd->add_option("--experiments", pw.experiments,
                        "Experiments per article (default: 1)");
  power_cmd->add_option("--replicates", pw.replicates,
                        "Articles per lambda (default: 1000)");
  power_cmd->add_option("--seed", pw.seed, "RNG seed (default: 0)");
  power_cmd->add_option("--strategy", pw.strategy,
                        "middle-toward-linear or variance-shrink "
                        "(default: middle-toward-linear)");
  power_cmd->add_option("--lambdas", pw.lambdas,
                        "Comma list of strengths "
                        "(default: 0,0.25,0.5,0.75,1)");
  power_cmd->add_option("--rules", pw.rules,
                        "Comma list from chi2, fisher, product, joint "
                        "(default: all)");
  power_cmd->add_option("--alpha", pw.alpha,
                        "Significance level (default: 0.05)");
  power_cmd->add_option("--v-star", pw.v_star,
                        "Evidential-value rejection threshold (default: 6)");
  power_cmd->add_option("--output", pw.output,
                        "Write the TSV table here (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (analyze_cmd->parsed()) {
      run_analyze(an);
    } else if (simulate_cmd->parsed()) {
      run_simulate(sim);
    } else if (power_cmd->parsed()) {
      run_power(pw);
    }
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
