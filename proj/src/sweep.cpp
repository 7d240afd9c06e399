// Copyright (c) 2026 the dcen authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dcen/sweep.hpp"

#include <atomic>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <mutex>
#include <thread>

#include "dcen/svg_plot.hpp"

namespace dcen {

namespace fs = std::filesystem;

namespace {

const char* const kSweepParams[] = {"lambda1", "lambda2", "sigma", "K", "augmentation_row"};

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t hash_bytes(std::uint64_t h, const void* data, std::size_t n) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) h = mix64(h ^ p[i]);
  return h;
}

std::string cell_dir_name(const std::string& param, double value, int repeat) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "cell_%s_%g_r%d", param.c_str(), value, repeat);
  return buf;
}

}  // namespace

void validate_sweep_spec(const SweepSpec& spec) {
  bool known = false;
  for (const char* p : kSweepParams) known = known || spec.param == p;
  if (!known) throw std::invalid_argument("sweep: unknown parameter '" + spec.param + "'");
  if (spec.values.empty()) throw std::invalid_argument("sweep: values must be non-empty");
  if (spec.repeats < 1) throw std::invalid_argument("sweep: repeats must be >= 1");
  if (spec.param == "augmentation_row") {
    for (double v : spec.values) {
      const int row = static_cast<int>(v);
      if (static_cast<double>(row) != v || row < 0 || row >= augmentation_preset_count())
        throw std::invalid_argument("sweep: augmentation_row values must index presets 0.." +
                                    std::to_string(augmentation_preset_count() - 1));
    }
  }
  if (spec.param == "sigma") {
    for (double v : spec.values)
      if (v < 0.0 || v > 100.0) throw std::invalid_argument("sweep: sigma values outside [0,100]");
  }
  if (spec.param == "K") {
    for (double v : spec.values)
      if (static_cast<double>(static_cast<int>(v)) != v || v < 1.0)
        throw std::invalid_argument("sweep: K values must be positive integers");
  }
}

std::uint64_t sweep_cell_seed(std::uint64_t base_seed, const std::string& param, double value,
                              int repeat) {
  std::uint64_t h = mix64(base_seed ^ 0xA5C1D3E7F90B2468ULL);
  h = hash_bytes(h, param.data(), param.size());
  char value_repr[40];
  std::snprintf(value_repr, sizeof(value_repr), "%.9g", value);
  h = hash_bytes(h, value_repr, std::strlen(value_repr));
  h = hash_bytes(h, &repeat, sizeof(repeat));
  return h;
}

TrainConfig sweep_cell_config(const SweepSpec& spec, double value, int repeat) {
  TrainConfig cfg = spec.base;
  if (spec.param == "lambda1") cfg.lambda1 = value;
  else if (spec.param == "lambda2") cfg.lambda2 = value;
  else if (spec.param == "sigma") cfg.sigma_pct = value;
  else if (spec.param == "K") cfg.arch.depth_k = static_cast<int>(value);
  else if (spec.param == "augmentation_row")
    cfg.augmentation = augmentation_preset(static_cast<int>(value), cfg.augmentation.out_size);
  else throw std::invalid_argument("sweep: unknown parameter '" + spec.param + "'");
  cfg.seed = sweep_cell_seed(spec.base.seed, spec.param, value, repeat);
  return cfg;
}

std::vector<SweepCell> run_sweep(const SweepSpec& spec, const GZSLDataset& ds,
                                 const fs::path& out_dir, int workers) {
  validate_sweep_spec(spec);
  fs::create_directories(out_dir);

  struct Job {
    double value;
    int repeat;
  };
  std::vector<Job> jobs;
  for (double v : spec.values)
    for (int r = 0; r < spec.repeats; ++r) jobs.push_back({v, r});

  std::vector<SweepCell> cells(jobs.size());
  std::vector<char> done(jobs.size(), 0);

  std::ofstream csv(out_dir / "sweep.csv");
  if (!csv) throw std::runtime_error("sweep: cannot write sweep.csv");
  csv << "param,value,repeat,mca_u,mca_s,h\n";
  csv.flush();

  std::mutex mu;
  std::size_t flushed = 0;
  auto flush_ready = [&]() {  // caller holds mu
    char line[160];
    while (flushed < jobs.size() && done[flushed]) {
      const SweepCell& c = cells[flushed];
      std::snprintf(line, sizeof(line), "%s,%.9g,%d,%.9g,%.9g,%.9g\n", spec.param.c_str(),
                    c.value, c.repeat, c.report.mca_u, c.report.mca_s, c.report.h);
      csv << line;
      csv.flush();
      ++flushed;
    }
  };

  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      try {
        const TrainConfig cfg = sweep_cell_config(spec, jobs[i].value, jobs[i].repeat);
        const fs::path cell_dir =
            out_dir / cell_dir_name(spec.param, jobs[i].value, jobs[i].repeat);
        TrainState state = train(ds, cfg, cell_dir);
        SweepCell cell;
        cell.value = jobs[i].value;
        cell.repeat = jobs[i].repeat;
        cell.report = evaluate_gzsl(state.encoders, ds);
        std::lock_guard<std::mutex> lock(mu);
        cells[i] = std::move(cell);
        done[i] = 1;
        flush_ready();
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  const int n_workers = std::max(1, std::min<int>(workers, static_cast<int>(jobs.size())));
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n_workers; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  // Mean H per value, in the order values were given.
  std::vector<double> xs, ys;
  for (double v : spec.values) {
    double sum = 0.0;
    int count = 0;
    for (const SweepCell& c : cells)
      if (c.value == v) {
        sum += c.report.h;
        ++count;
      }
    xs.push_back(v);
    ys.push_back(sum / count);
  }
  write_line_plot_svg(out_dir / "sweep_h.svg", "mean H vs " + spec.param, spec.param, "H",
                      xs, ys);
  return cells;
}

}  // namespace dcen
