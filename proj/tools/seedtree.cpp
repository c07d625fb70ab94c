// Experiment driver: single simulations, parameter sweeps, trace generation
// and ingestion, and matching-model dumps.

#include <fstream>
#include <iostream>
#include <numeric>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "seedtree/experiment.hpp"
#include "seedtree/matching.hpp"
#include "seedtree/trace.hpp"
#include "seedtree/tree.hpp"

namespace {

using namespace seedtree;

// Writes through to stdout when path is "-".
void with_output(const std::string& path, const std::function<void(std::ostream&)>& body) {
  if (path == "-") {
    body(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  body(out);
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path);
}

void warn_degenerate(std::uint32_t capacity, double occupancy) {
  if (static_cast<double>(capacity) * occupancy < 1.0) {
    std::cerr << "warning: capacity*occupancy < 1; the root starts empty and "
                 "items initialize deeper\n";
  }
}

struct CommonOptions {
  std::uint64_t items = 4095;
  std::uint64_t requests = 100000;
  std::uint64_t seed = 1;
  std::uint32_t repeats = 1;
  std::string trace_path;
  std::string format = "items";
  std::string output = "-";
  std::string algo = "sha512";
  bool validate = false;
};

void add_trace_options(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--items,-n", opts.items, "Distinct items for synthetic traces");
  cmd->add_option("--requests,-m", opts.requests, "Requests per run for synthetic traces");
  cmd->add_option("--seed,-s", opts.seed, "Base experiment seed");
  cmd->add_option("--trace", opts.trace_path, "Serve a trace file instead of generating one");
  cmd->add_option("--format", opts.format, "Trace file format: items | pairs")
      ->check(CLI::IsMember({"items", "pairs"}));
}

ExperimentConfig make_config(const CommonOptions& opts, std::uint32_t capacity, double occupancy,
                             double locality) {
  ExperimentConfig config;
  config.capacity = capacity;
  config.occupancy = occupancy;
  config.seed = opts.seed;
  config.repeats = opts.repeats;
  config.algo = parse_digest_algo(opts.algo);
  config.validate = opts.validate;
  config.trace.path = opts.trace_path;
  if (!opts.trace_path.empty()) config.trace.format = parse_trace_format(opts.format);
  config.trace.n_items = opts.items;
  config.trace.requests = opts.requests;
  config.trace.locality = locality;
  return config;
}

int cmd_simulate(const CommonOptions& opts, std::uint32_t capacity, double occupancy,
                 double locality, unsigned threads) {
  const ExperimentConfig config = make_config(opts, capacity, occupancy, locality);
  validate_config(config);
  warn_degenerate(config.capacity, config.occupancy);
  const std::vector<ResultRow> rows = run_experiment(config, threads);
  const std::vector<std::string> meta{describe_config(config)};
  with_output(opts.output, [&](std::ostream& out) { write_csv(out, rows, meta); });
  return 0;
}

int cmd_sweep(const CommonOptions& opts, const std::vector<std::uint32_t>& capacities,
              const std::vector<double>& occupancies, const std::vector<double>& localities,
              unsigned threads) {
  SweepGrid grid;
  grid.base = make_config(opts, capacities.empty() ? 4 : capacities.front(),
                          occupancies.empty() ? 0.5 : occupancies.front(),
                          localities.empty() ? 0.0 : localities.front());
  grid.capacities = capacities;
  grid.occupancies = occupancies;
  grid.localities = localities;
  for (std::uint32_t c : capacities) {
    for (double f : occupancies) warn_degenerate(c, f);
  }
  const std::vector<ResultRow> rows = run_sweep(grid, threads);
  std::vector<std::string> meta{describe_config(grid.base)};
  meta.push_back("sweep: " + std::to_string(capacities.size()) + " capacities x " +
                 std::to_string(occupancies.size()) + " occupancies x " +
                 std::to_string(localities.size()) + " localities x " +
                 std::to_string(grid.base.repeats) + " repeats");
  with_output(opts.output, [&](std::ostream& out) { write_csv(out, rows, meta); });
  return 0;
}

int cmd_gen_trace(std::uint64_t items, std::uint64_t requests, double locality,
                  std::uint64_t seed, const std::string& output) {
  const Trace trace = generate_trace(items, requests, locality, seed);
  with_output(output, [&](std::ostream& out) { emit_trace(trace, out); });
  std::cerr << "generated " << trace.requests.size() << " requests over " << trace.n_items
            << " items (stage-2 repeat fraction "
            << format_double(trace.meta.stage2_repeat_fraction) << ", "
            << trace.meta.stage3_replacements << " repair replacements)\n";
  return 0;
}

int cmd_ingest(const std::string& trace_path, const std::string& format,
               const std::string& output) {
  const Trace trace = ingest_trace(trace_path, parse_trace_format(format));
  with_output(output, [&](std::ostream& out) { emit_trace(trace, out); });
  std::cerr << "ingested " << trace.requests.size() << " requests over " << trace.n_items
            << " items from " << trace_path << "\n";
  return 0;
}

int cmd_export_matchings(const CommonOptions& opts, std::uint32_t capacity, double occupancy) {
  std::uint64_t n_items = opts.items;
  if (!opts.trace_path.empty()) {
    n_items = ingest_trace(opts.trace_path, parse_trace_format(opts.format)).n_items;
  }
  warn_degenerate(capacity, occupancy);
  std::vector<ItemId> items(n_items);
  std::iota(items.begin(), items.end(), ItemId{0});
  const SeedTree tree(std::move(items),
                      {capacity, occupancy, opts.seed, parse_digest_algo(opts.algo), false});
  const MatchingSet ms = export_matchings(tree);
  with_output(opts.output, [&](std::ostream& out) { write_matching_dump(ms, out); });
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SeedTree: self-adjusting capacity-c tree simulator"};
  app.require_subcommand(1);

  CommonOptions opts;
  std::uint32_t capacity = 4;
  double occupancy = 0.5;
  double locality = 0.0;
  std::vector<std::uint32_t> capacities{2, 4, 8, 16};
  std::vector<double> occupancies{0.5};
  std::vector<double> localities{0.0, 0.3, 0.6, 0.9};
  unsigned threads = 0;
  std::uint64_t gen_items = 65535;
  std::uint64_t gen_requests = 1000000;

  CLI::App* simulate = app.add_subcommand("simulate", "Run one configuration");
  simulate->add_option("--capacity,-c", capacity, "Items per node");
  simulate->add_option("--occupancy,-f", occupancy, "Initial fill fraction in (0,1)");
  simulate->add_option("--locality,-p", locality, "Temporal locality in [0, 0.9]");
  simulate->add_option("--repeats,-r", opts.repeats, "Independent runs (seed + run index)");
  simulate->add_option("--threads", threads, "Worker threads (0 = hardware)");
  simulate->add_option("--output,-o", opts.output, "CSV path or - for stdout");
  simulate->add_option("--algo", opts.algo, "Address digest: sha512 | sha256")
      ->check(CLI::IsMember({"sha512", "sha256"}));
  simulate->add_flag("--validate", opts.validate, "Scan all invariants after every access");
  add_trace_options(simulate, opts);

  CLI::App* sweep = app.add_subcommand("sweep", "Cross-product parameter sweep");
  sweep->add_option("--capacity,-c", capacities, "Capacity list")->delimiter(',');
  sweep->add_option("--occupancy,-f", occupancies, "Occupancy list")->delimiter(',');
  sweep->add_option("--locality,-p", localities, "Locality list")->delimiter(',');
  sweep->add_option("--repeats,-r", opts.repeats, "Runs per cell");
  sweep->add_option("--threads", threads, "Worker threads (0 = hardware)");
  sweep->add_option("--output,-o", opts.output, "CSV path or - for stdout");
  sweep->add_option("--algo", opts.algo, "Address digest: sha512 | sha256")
      ->check(CLI::IsMember({"sha512", "sha256"}));
  sweep->add_flag("--validate", opts.validate, "Scan all invariants after every access");
  add_trace_options(sweep, opts);

  CLI::App* gen = app.add_subcommand("gen-trace", "Write a synthetic trace file");
  gen->add_option("--items,-n", gen_items, "Distinct items");
  gen->add_option("--requests,-m", gen_requests, "Trace length");
  gen->add_option("--locality,-p", locality, "Temporal locality in [0, 0.9]");
  gen->add_option("--seed,-s", opts.seed, "Generator seed");
  gen->add_option("--output,-o", opts.output, "Canonical trace path or -")->required();

  CLI::App* ingest = app.add_subcommand("ingest", "Convert a trace file to canonical form");
  ingest->add_option("--trace", opts.trace_path, "Input trace file")->required();
  ingest->add_option("--format", opts.format, "items | pairs")
      ->check(CLI::IsMember({"items", "pairs"}));
  ingest->add_option("--output,-o", opts.output, "Canonical trace path or -")->required();

  CLI::App* expm = app.add_subcommand("export-matchings", "Dump a fresh init as 2+c matchings");
  expm->add_option("--items,-n", opts.items, "Distinct items");
  expm->add_option("--capacity,-c", capacity, "Items per node");
  expm->add_option("--occupancy,-f", occupancy, "Initial fill fraction in (0,1)");
  expm->add_option("--seed,-s", opts.seed, "Experiment seed");
  expm->add_option("--trace", opts.trace_path, "Take the item universe from a trace file");
  expm->add_option("--format", opts.format, "items | pairs")
      ->check(CLI::IsMember({"items", "pairs"}));
  expm->add_option("--output,-o", opts.output, "Dump path or -");
  expm->add_option("--algo", opts.algo, "Address digest: sha512 | sha256")
      ->check(CLI::IsMember({"sha512", "sha256"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) return cmd_simulate(opts, capacity, occupancy, locality, threads);
    if (sweep->parsed()) return cmd_sweep(opts, capacities, occupancies, localities, threads);
    if (gen->parsed()) return cmd_gen_trace(gen_items, gen_requests, locality, opts.seed, opts.output);
    if (ingest->parsed()) return cmd_ingest(opts.trace_path, opts.format, opts.output);
    if (expm->parsed()) return cmd_export_matchings(opts, capacity, occupancy);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
