#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "ncmi/bounds.hpp"
#include "ncmi/core.hpp"
#include "ncmi/schemes.hpp"

namespace ncmi {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Derives a child seed; used for run seeds and per-scheme streams.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(seed ^ splitmix64(index + 0x632BE59BD9B4E019ull));
}

struct LossModel {
  enum class Kind { Fixed, PerDeviceUniform };
  Kind kind = Kind::Fixed;
  double lo = 0.0;  // the fixed probability when kind == Fixed
  double hi = 0.0;

  static LossModel fixed(double p) { return {Kind::Fixed, p, p}; }
  static LossModel uniform(double lo, double hi) { return {Kind::PerDeviceUniform, lo, hi}; }

  bool valid() const {
    return lo >= 0.0 && hi < 1.0 && lo <= hi && (kind == Kind::PerDeviceUniform || lo == hi);
  }
  std::string kind_name() const { return kind == Kind::Fixed ? "fixed" : "uniform"; }
  std::string param_text() const {
    char buf[64];
    if (kind == Kind::Fixed) {
      std::snprintf(buf, sizeof buf, "%g", lo);
    } else {
      std::snprintf(buf, sizeof buf, "%g:%g", lo, hi);
    }
    return buf;
  }
};

// "fixed:<p>" or "uniform:<lo>,<hi>"
inline std::optional<LossModel> parse_loss(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) return std::nullopt;
  const std::string kind = text.substr(0, colon);
  const std::string rest = text.substr(colon + 1);
  try {
    std::size_t used = 0;
    if (kind == "fixed") {
      const double p = std::stod(rest, &used);
      if (used != rest.size()) return std::nullopt;
      const LossModel m = LossModel::fixed(p);
      return m.valid() ? std::optional(m) : std::nullopt;
    }
    if (kind == "uniform") {
      const auto comma = rest.find(',');
      if (comma == std::string::npos) return std::nullopt;
      const std::string a = rest.substr(0, comma);
      const std::string b = rest.substr(comma + 1);
      const double lo = std::stod(a, &used);
      if (used != a.size()) return std::nullopt;
      const double hi = std::stod(b, &used);
      if (used != b.size()) return std::nullopt;
      const LossModel m = LossModel::uniform(lo, hi);
      return m.valid() ? std::optional(m) : std::nullopt;
    }
  } catch (const std::exception&) {
  }
  return std::nullopt;
}

// Stage-1 broadcast of m_total packets.  RNG order: per-device loss
// probabilities (uniform model only), then losses device by device, then payloads.
inline Instance stage1(std::size_t m_total, std::size_t n_devices, const LossModel& loss, Rng& rng,
                       std::size_t payload_len = kDefaultPayloadLen) {
  std::vector<double> p(n_devices, loss.lo);
  if (loss.kind == LossModel::Kind::PerDeviceUniform) {
    std::uniform_real_distribution<double> draw(loss.lo, loss.hi);
    for (auto& x : p) x = draw(rng);
  }
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::vector<std::set<std::size_t>> received(n_devices);
  for (std::size_t n = 0; n < n_devices; ++n) {
    for (std::size_t m = 0; m < m_total; ++m) {
      if (coin(rng) >= p[n]) received[n].insert(m);
    }
  }
  return derive_from_stage1(received, m_total, payload_len, rng);
}

struct ExperimentConfig {
  std::size_t n_devices = 5;
  std::vector<std::size_t> m_totals{20};
  std::vector<LossModel> losses{LossModel::uniform(0.3, 0.5)};
  std::vector<Scheme> schemes{kAllSchemes.begin(), kAllSchemes.end()};
  std::size_t runs = 100;
  std::uint64_t seed = 1;
  std::size_t payload_len = kDefaultPayloadLen;
  std::size_t threads = 1;
  // When set, every run uses this instance instead of a stage-1 draw.
  std::optional<Instance> instance;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// A run failed; carries what is needed to replay it.
class ExperimentFailure : public Error {
 public:
  ExperimentFailure(const std::string& what, std::uint64_t run_seed, bool invariant)
      : Error(what), run_seed_(run_seed), invariant_(invariant) {}
  std::uint64_t run_seed() const noexcept { return run_seed_; }
  bool invariant() const noexcept { return invariant_; }

 private:
  std::uint64_t run_seed_;
  bool invariant_;
};

// Everything measured on one paired instance.
struct RunRecord {
  std::uint64_t run_seed = 0;
  std::size_t lost = 0;  // M = |union of Wants|
  std::uint64_t lower = 0;
  std::uint64_t upper_b = 0;
  std::uint64_t upper_i = 0;
  std::vector<std::size_t> completion;  // parallel to the scheme list
};

// Runs every scheme on one instance; each scheme gets its own stream derived
// from run_seed so its result does not depend on which other schemes run.
inline RunRecord evaluate_instance(const Instance& inst, const std::vector<Scheme>& schemes,
                                   std::uint64_t run_seed) {
  RunRecord rec;
  rec.run_seed = run_seed;
  rec.lost = inst.n_packets;
  const BoundReport b = bound_report(inst);
  rec.lower = b.lower;
  rec.upper_b = b.upper_b;
  rec.upper_i = b.upper_i;
  for (Scheme s : schemes) {
    Rng rng(mix_seed(run_seed, 1 + static_cast<std::uint64_t>(s)));
    const RunResult r = run_scheme(s, inst, rng);
    const std::uint64_t t = r.completion_time;
    const bool checked = s == Scheme::NcmiB || s == Scheme::NcmiI;
    const std::uint64_t upper = s == Scheme::NcmiB ? b.upper_b : b.upper_i;
    if (checked && (t < b.lower || t > upper)) {
      throw InvariantViolation(std::string(scheme_name(s)) + ": T=" + std::to_string(t) +
                               " outside [" + std::to_string(b.lower) + "," +
                               std::to_string(upper) + "]");
    }
    rec.completion.push_back(r.completion_time);
  }
  return rec;
}

struct AggregateRow {
  Scheme scheme = Scheme::NcmiB;
  std::size_t m_total = 0;
  LossModel loss;
  std::size_t runs = 0;
  std::uint64_t seed = 0;
  double mean_lost = 0;
  double mean_t = 0;
  double std_t = 0;
  double ci95 = 0;
  double lower_mean = 0;
  double upper_b_mean = 0;
  double upper_i_mean = 0;
};

struct SweepPoint {
  std::size_t m_total = 0;
  LossModel loss;
  std::vector<RunRecord> runs;  // ordered by run index
};

struct ExperimentResult {
  std::vector<Scheme> schemes;
  std::vector<SweepPoint> points;
  std::vector<AggregateRow> rows;
};

inline double mean_of(const std::vector<double>& xs) {
  double s = 0;
  for (double x : xs) s += x;
  return xs.empty() ? 0.0 : s / static_cast<double>(xs.size());
}

inline double sample_std(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  const double mu = mean_of(xs);
  double ss = 0;
  for (double x : xs) ss += (x - mu) * (x - mu);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

namespace detail {

inline std::vector<RunRecord> run_point(const ExperimentConfig& cfg, std::size_t m_total,
                                        const LossModel& loss) {
  std::vector<RunRecord> out(cfg.runs);
  std::vector<std::exception_ptr> errors(cfg.runs);
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t r = next++; r < cfg.runs; r = next++) {
      const std::uint64_t run_seed = mix_seed(cfg.seed, r);
      try {
        Rng rng(run_seed);
        const Instance inst =
            cfg.instance ? *cfg.instance : stage1(m_total, cfg.n_devices, loss, rng, cfg.payload_len);
        out[r] = evaluate_instance(inst, cfg.schemes, run_seed);
      } catch (...) {
        errors[r] = std::current_exception();
      }
    }
  };
  const std::size_t n_threads = std::max<std::size_t>(1, std::min(cfg.threads, cfg.runs));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  // Report the lowest failing run so failures are reproducible regardless of threading.
  for (std::size_t r = 0; r < cfg.runs; ++r) {
    if (!errors[r]) continue;
    const std::uint64_t run_seed = mix_seed(cfg.seed, r);
    const std::string where = " [run=" + std::to_string(r) + " seed=" + std::to_string(run_seed) +
                              " m_total=" + std::to_string(m_total) + " loss=" +
                              loss.kind_name() + ":" + loss.param_text() + "]";
    try {
      std::rethrow_exception(errors[r]);
    } catch (const InvariantViolation& e) {
      throw ExperimentFailure(e.what() + where, run_seed, true);
    } catch (const std::exception& e) {
      throw ExperimentFailure(e.what() + where, run_seed, false);
    }
  }
  return out;
}

}  // namespace detail

inline ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  if (cfg.runs < 1) throw ConfigError("runs must be >= 1");
  if (cfg.n_devices < 1) throw ConfigError("devices must be >= 1");
  if (cfg.schemes.empty()) throw ConfigError("no schemes selected");
  if (cfg.m_totals.empty()) throw ConfigError("no packet counts given");
  if (cfg.losses.empty()) throw ConfigError("no loss model given");
  for (const auto& l : cfg.losses) {
    if (!l.valid()) throw ConfigError("loss probabilities must satisfy 0 <= lo <= hi < 1");
  }

  ExperimentResult result;
  result.schemes = cfg.schemes;
  for (const auto& loss : cfg.losses) {
    for (std::size_t m_total : cfg.m_totals) {
      SweepPoint point{m_total, loss, detail::run_point(cfg, m_total, loss)};

      std::vector<double> lost, lower, ub, ui;
      for (const auto& r : point.runs) {
        lost.push_back(static_cast<double>(r.lost));
        lower.push_back(static_cast<double>(r.lower));
        ub.push_back(static_cast<double>(r.upper_b));
        ui.push_back(static_cast<double>(r.upper_i));
      }
      for (std::size_t k = 0; k < cfg.schemes.size(); ++k) {
        std::vector<double> ts;
        for (const auto& r : point.runs) ts.push_back(static_cast<double>(r.completion[k]));
        AggregateRow row;
        row.scheme = cfg.schemes[k];
        row.m_total = m_total;
        row.loss = loss;
        row.runs = cfg.runs;
        row.seed = cfg.seed;
        row.mean_lost = mean_of(lost);
        row.mean_t = mean_of(ts);
        row.std_t = sample_std(ts);
        row.ci95 = 1.96 * row.std_t / std::sqrt(static_cast<double>(ts.size()));
        row.lower_mean = mean_of(lower);
        row.upper_b_mean = mean_of(ub);
        row.upper_i_mean = mean_of(ui);
        result.rows.push_back(row);
      }
      result.points.push_back(std::move(point));
    }
  }
  return result;
}

inline constexpr const char* kCsvHeader =
    "scheme,m_total,mean_lost_M,loss_kind,loss_param,runs,seed,mean_T,std_T,ci95,lower_mean,"
    "upperB_mean,upperI_mean";

inline std::string format_csv(const ExperimentResult& result) {
  std::ostringstream out;
  out << kCsvHeader << '\n';
  char buf[512];
  for (const auto& r : result.rows) {
    std::snprintf(buf, sizeof buf, "%s,%zu,%.6f,%s,%s,%zu,%llu,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f\n",
                  std::string(scheme_name(r.scheme)).c_str(), r.m_total, r.mean_lost,
                  r.loss.kind_name().c_str(), r.loss.param_text().c_str(), r.runs,
                  static_cast<unsigned long long>(r.seed), r.mean_t, r.std_t, r.ci95, r.lower_mean,
                  r.upper_b_mean, r.upper_i_mean);
    out << buf;
  }
  return out.str();
}

}  // namespace ncmi
