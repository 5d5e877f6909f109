// Copyright 2026 The wordprobe Authors.
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

#include <benchmark/benchmark.h>

#include <sstream>
#include <string>

#include "wordprobe/embedding_table.h"
#include "wordprobe/synthetic.h"

namespace wordprobe {
namespace {

std::string TableText(int rows, int dim) {
  SyntheticSpec spec;
  spec.dim = dim;
  spec.train = static_cast<std::size_t>(rows);
  spec.dev = 1;
  spec.test = 1;
  spec.separable = false;
  const EmbeddingTable table = GenerateSynthetic(spec).second;
  std::ostringstream out;
  WriteEmbeddingText(table, out, /*with_header=*/false);
  return out.str();
}

void BM_ParseText(benchmark::State& state) {
  const std::string text = TableText(static_cast<int>(state.range(0)),
                                     static_cast<int>(state.range(1)));
  for (auto _ : state) {
    std::istringstream in(text);
    auto parsed = ParseEmbeddingText(in);
    benchmark::DoNotOptimize(parsed.first.size());
  }
  state.SetBytesProcessed(static_cast<int64_t>(state.iterations()) *
                          static_cast<int64_t>(text.size()));
}
BENCHMARK(BM_ParseText)->Args({1000, 50})->Args({10000, 300})->Unit(benchmark::kMillisecond);

void BM_WriteText(benchmark::State& state) {
  std::istringstream in(TableText(static_cast<int>(state.range(0)), 300));
  const EmbeddingTable table = ParseEmbeddingText(in).first;
  for (auto _ : state) {
    std::ostringstream out;
    WriteEmbeddingText(table, out, true);
    benchmark::DoNotOptimize(out.tellp());
  }
}
BENCHMARK(BM_WriteText)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace wordprobe
