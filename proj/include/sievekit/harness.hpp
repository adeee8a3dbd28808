#pragma once

#include <json.hpp>

#include <atomic>
#include <chrono>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace sievekit::harness {

using nlohmann::json;

/// SIEVEKIT_THREADS if set to a positive integer, else the hardware
/// concurrency (at least 1).
int worker_count();

/// Calls fn(i) for every i in [0, n) on up to `workers` threads and returns
/// the results in index order. The first exception thrown by a trial is
/// rethrown after all workers stop.
template <typename F>
auto run_trials(std::size_t n, F&& fn, int workers = worker_count()) {
  using T = decltype(fn(std::size_t{}));
  std::vector<T> out(n);
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        out[i] = fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = n;
      }
    }
  };
  const std::size_t threads = std::min<std::size_t>(std::max(workers, 1), std::max<std::size_t>(n, 1));
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(work);
  }
  if (error) std::rethrow_exception(error);
  return out;
}

struct TrialOutcome {
  std::size_t id = 0;
  bool success = false;
  json metrics = json::object();  // norms, distances, beta, counters
  double wall_ms = 0.0;
};

struct ExperimentRecord {
  std::string id;  // experiment name
  json config;     // every resolved parameter, including the seed
  std::vector<TrialOutcome> trials;
  json summary;
};

void to_json(json& j, const TrialOutcome& t);
void from_json(const json& j, TrialOutcome& t);
void to_json(json& j, const ExperimentRecord& r);
void from_json(const json& j, ExperimentRecord& r);

/// Same trial ids, success flags and metrics (wall time is ignored).
bool same_outcomes(const ExperimentRecord& a, const ExperimentRecord& b);

using ProgressSink = std::function<void(const json&)>;

/// Empty dims / params and zero trials select the experiment's defaults.
struct ExperimentOptions {
  std::string name;
  std::vector<int> dims;
  std::size_t trials = 0;
  std::uint64_t seed = 1;
  std::vector<double> params;
  bool verify = true;  // oracle checks; skipped with a warning above the oracle dimension
  int workers = 0;     // 0: worker_count()
  ProgressSink progress{};
};

const std::vector<std::string>& experiment_names();

/// Runs a named experiment. Seeds: lattice j uses
/// subseed(subseed(seed, 0), j), preprocessing for group g uses
/// subseed(subseed(seed, 1), g), trial i uses subseed(subseed(seed, 2), i).
/// Throws std::invalid_argument for an unknown name.
ExperimentRecord run_experiment(const ExperimentOptions& options);

/// Reruns the configuration stored in `record`.
ExperimentRecord replay(const ExperimentRecord& record, int workers = 0);

/// Least-squares line y = slope x + intercept.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

/// Wall-clock milliseconds spent in fn().
template <typename F>
double timed_ms(F&& fn) {
  const auto start = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace sievekit::harness
