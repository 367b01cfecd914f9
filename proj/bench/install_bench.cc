// Copyright 2026 The srmc Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include <memory>

#include "srmc/config.h"
#include "srmc/experiment.h"

namespace {

srmc::ScenarioConfig bench_config() {
  srmc::ScenarioConfig c;
  c.topology = {4, 4, 48, 48, 16};
  c.tenants = 600;
  c.groups = 20000;
  c.placements = {12};
  return c;
}

const srmc::Workload& workload() {
  static const srmc::ScenarioConfig cfg = bench_config();
  static const auto w = std::make_unique<srmc::Workload>(
      cfg, 12, srmc::SizeDistribution::kWve);
  return *w;
}

void run(benchmark::State& state, srmc::ExecMode mode) {
  const srmc::Workload& w = workload();
  const auto enc = bench_config().encoding(w.topo, 12);
  srmc::InstallOptions opt;
  opt.mode = mode;
  for (auto _ : state) {
    auto res = srmc::run_install(w, enc, opt);
    benchmark::DoNotOptimize(res.packets);
  }
  state.SetItemsProcessed(state.iterations() * w.num_groups());
  state.counters["workers"] =
      mode == srmc::ExecMode::kSerial ? 1 : srmc::worker_count();
}

void BM_InstallSerial(benchmark::State& state) {
  run(state, srmc::ExecMode::kSerial);
}
void BM_InstallParallel(benchmark::State& state) {
  run(state, srmc::ExecMode::kParallel);
}

BENCHMARK(BM_InstallSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_InstallParallel)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
