// ncmi: simulate, bound, group and trace cooperative packet recovery.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ncmi/ncmi.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitInvariant = 3;

std::vector<std::string> split_list(const std::vector<std::string>& items) {
  std::vector<std::string> out;
  for (const auto& item : items) {
    std::stringstream ss(item);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      if (!tok.empty()) out.push_back(tok);
    }
  }
  return out;
}

struct SimulateArgs {
  std::size_t devices = 5;
  std::vector<std::size_t> packets{20};
  std::vector<std::string> losses{"uniform:0.3,0.5"};
  std::vector<std::string> schemes;
  long long runs = 100;
  std::uint64_t seed = 1;
  std::size_t payload_len = ncmi::kDefaultPayloadLen;
  std::size_t threads = 1;
  std::string out;
};

int cmd_simulate(const SimulateArgs& args) {
  ncmi::ExperimentConfig cfg;
  if (args.runs < 1) {
    std::cerr << "error: --runs must be >= 1\n";
    return kExitConfig;
  }
  cfg.runs = static_cast<std::size_t>(args.runs);
  cfg.n_devices = args.devices;
  cfg.m_totals = args.packets;
  cfg.seed = args.seed;
  cfg.payload_len = args.payload_len;
  cfg.threads = args.threads;

  // Uniform models carry a comma, so --loss is not comma-split.
  cfg.losses.clear();
  for (const auto& text : args.losses) {
    const auto loss = ncmi::parse_loss(text);
    if (!loss) {
      std::cerr << "error: bad --loss '" << text << "' (fixed:<p> or uniform:<lo>,<hi>)\n";
      return kExitConfig;
    }
    cfg.losses.push_back(*loss);
  }
  if (!args.schemes.empty()) {
    cfg.schemes.clear();
    for (const auto& name : split_list(args.schemes)) {
      const auto s = ncmi::parse_scheme(name);
      if (!s) {
        std::cerr << "error: unknown scheme '" << name << "'\n";
        return kExitConfig;
      }
      cfg.schemes.push_back(*s);
    }
  }

  std::cerr << "seed=" << cfg.seed << '\n';
  std::string csv;
  try {
    csv = ncmi::format_csv(ncmi::run_experiment(cfg));
  } catch (const ncmi::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ncmi::ExperimentFailure& e) {
    std::cerr << (e.invariant() ? "invariant violation: " : "error: ") << e.what() << '\n';
    return kExitInvariant;
  }

  if (args.out.empty()) {
    std::cout << csv;
  } else {
    std::ofstream f(args.out, std::ios::binary);
    if (!f) {
      std::cerr << "error: cannot write '" << args.out << "'\n";
      return kExitConfig;
    }
    f << csv;
  }
  return 0;
}

struct InstanceArgs {
  std::string instance;
  std::string scheme = "ncmi-b";
  std::uint64_t seed = 1;
  std::size_t payload_len = ncmi::kDefaultPayloadLen;
};

bool load(const InstanceArgs& args, ncmi::Rng& rng, ncmi::Instance& inst) {
  try {
    inst = ncmi::load_instance(args.instance, args.payload_len, rng);
    return true;
  } catch (const ncmi::ParseError& e) {
    std::cerr << "error: " << args.instance << ": " << e.what() << '\n';
    return false;
  }
}

int cmd_bounds(const InstanceArgs& args) {
  ncmi::Rng rng(args.seed);
  ncmi::Instance inst;
  if (!load(args, rng, inst)) return kExitConfig;
  std::cout << ncmi::format_bounds(ncmi::bound_report(inst));
  return 0;
}

int cmd_group(const InstanceArgs& args) {
  ncmi::Rng rng(args.seed);
  ncmi::Instance inst;
  if (!load(args, rng, inst)) return kExitConfig;
  std::cout << ncmi::format_grouping(ncmi::group(inst));
  return 0;
}

int cmd_trace(const InstanceArgs& args) {
  const auto scheme = ncmi::parse_scheme(args.scheme);
  if (!scheme) {
    std::cerr << "error: unknown scheme '" << args.scheme << "'\n";
    return kExitConfig;
  }
  ncmi::Rng rng(args.seed);
  ncmi::Instance inst;
  if (!load(args, rng, inst)) return kExitConfig;
  std::cerr << "seed=" << args.seed << '\n';
  try {
    const ncmi::RunResult r = ncmi::run_scheme(*scheme, inst, rng);
    std::cout << ncmi::format_trace(r, inst.n_packets);
  } catch (const ncmi::InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << '\n';
    return kExitInvariant;
  }
  return 0;
}

// Reads `key = value` lines into flag tokens; keys are simulate flag names.
// A key given on the command line wins over the file.
bool expand_config(std::vector<std::string>& args) {
  std::string path;
  std::vector<std::string> rest;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (path.empty()) return true;
  std::ifstream in(path);
  if (!in) {
    std::cerr << "error: cannot read config '" << path << "'\n";
    return false;
  }
  static const std::set<std::string> kKeys = {"devices", "packets", "loss",        "schemes",
                                              "runs",    "seed",    "payload-len", "threads",
                                              "out"};
  auto given = [&rest](const std::string& flag) {
    for (const auto& a : rest) {
      if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
    }
    return false;
  };
  auto trim = [](std::string t) {
    const auto b = t.find_first_not_of(" \t\r");
    const auto e = t.find_last_not_of(" \t\r");
    t = b == std::string::npos ? "" : t.substr(b, e - b + 1);
    if (t.size() >= 2 && t.front() == '"' && t.back() == '"') t = t.substr(1, t.size() - 2);
    return t;
  };
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string body = trim(line.substr(0, line.find('#')));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    const std::string key = eq == std::string::npos ? "" : trim(body.substr(0, eq));
    if (!kKeys.contains(key)) {
      std::cerr << "error: " << path << ":" << lineno << ": unknown key '" << key << "'\n";
      return false;
    }
    const std::string flag = "--" + key;
    if (given(flag)) continue;
    std::stringstream values(trim(body.substr(eq + 1)));
    std::string v;
    while (values >> v) {
      rest.push_back(flag);
      rest.push_back(v);
    }
  }
  args = std::move(rest);
  return true;
}

void add_instance_options(CLI::App* cmd, InstanceArgs& args) {
  cmd->add_option("--instance", args.instance, "Instance file")->required();
  cmd->add_option("--payload-len", args.payload_len, "Synthetic payload bytes per packet");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cooperative packet recovery over cellular and local links"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Run seeded experiments, CSV on stdout");
  std::string config_path;
  simulate->add_option("--config", config_path, "key = value file, keys as flag names; flags override it");
  simulate->add_option("--devices", sim.devices, "Number of devices")->check(CLI::PositiveNumber);
  simulate->add_option("--packets", sim.packets, "Packets in stage 1 (repeat for a sweep)");
  simulate->add_option("--loss", sim.losses, "fixed:<p> or uniform:<lo>,<hi> (repeatable)");
  simulate->add_option("--schemes", sim.schemes, "Comma-separated scheme names");
  simulate->add_option("--runs", sim.runs, "Runs per sweep point");
  simulate->add_option("--seed", sim.seed, "Experiment seed");
  simulate->add_option("--payload-len", sim.payload_len, "Synthetic payload bytes per packet");
  simulate->add_option("--threads", sim.threads, "Worker threads");
  simulate->add_option("--out", sim.out, "Write CSV here instead of stdout");

  InstanceArgs bounds_args;
  auto* bounds = app.add_subcommand("bounds", "Print completion-time bounds for an instance");
  add_instance_options(bounds, bounds_args);

  InstanceArgs group_args;
  auto* grouping = app.add_subcommand("group", "Print the M_c / M_l / M_d grouping");
  add_instance_options(grouping, group_args);

  InstanceArgs trace_args;
  auto* trace = app.add_subcommand("trace", "Print a per-slot trace of one scheme");
  add_instance_options(trace, trace_args);
  trace->add_option("--scheme", trace_args.scheme, "no-nc|si-cellular|si-local|ncmi-b|ncmi-i");
  trace->add_option("--seed", trace_args.seed, "Run seed");

  std::vector<std::string> args(argv + 1, argv + argc);
  if (!args.empty() && args.front() == "simulate" && !expand_config(args)) return kExitConfig;
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  if (*simulate) return cmd_simulate(sim);
  if (*bounds) return cmd_bounds(bounds_args);
  if (*grouping) return cmd_group(group_args);
  if (*trace) return cmd_trace(trace_args);
  return kExitConfig;
}
