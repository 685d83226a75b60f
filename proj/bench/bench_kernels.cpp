// Copyright 2026 The wordalign Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <map>

#include "wordalign/alignment.hpp"
#include "wordalign/synth.hpp"

namespace {

using namespace wordalign;

struct Fixture {
  SynthPage page;
  StateSpace states;
  HmmModel model;
  std::vector<WordEmbedding> state_embeddings;
  std::vector<WordEmbedding> word_embeddings;
};

// A 20x10-word page with the first `n` proposals as states.
const Fixture &fixture(std::size_t n) {
  static std::map<std::size_t, Fixture> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  Fixture f;
  SynthConfig cfg;
  cfg.seed = 3;
  cfg.lines = 20;
  cfg.words_per_line_min = cfg.words_per_line_max = 10;
  f.page = generate_page(cfg);
  std::vector<std::size_t> idx(std::min(n, f.page.proposals.entries.size()));
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  AlignmentParams params;
  f.states = state_space_from_indices(f.page.proposals, idx, f.page.transcript, params);
  f.model = build_model(f.states, f.page.transcript, params);
  for (auto i : f.states.states) f.state_embeddings.push_back(f.page.proposals.entries[i].embedding);
  for (const auto &w : f.page.transcript.unique_words()) f.word_embeddings.push_back(dctow(w));
  return cache.emplace(n, std::move(f)).first->second;
}

template <auto Fn>
void forward_backward(benchmark::State &state) {
  const auto &f = fixture(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Fn(f.model));
}

template <auto Fn>
void viterbi(benchmark::State &state) {
  const auto &f = fixture(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Fn(f.model));
}

template <auto Fn>
void transitions(benchmark::State &state) {
  const auto &f = fixture(static_cast<std::size_t>(state.range(0)));
  Matrix same, brk;
  for (auto _ : state) {
    Fn(f.states.boxes, 0.01, same, brk);
    benchmark::DoNotOptimize(same.data());
  }
}

template <auto Fn>
void emissions(benchmark::State &state) {
  const auto &f = fixture(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(Fn(f.state_embeddings, f.word_embeddings, ExponentSign::kNegative));
}

}  // namespace

BENCHMARK(forward_backward<wordalign::kernels::serial::forward_backward>)
    ->Name("forward_backward/serial")->Arg(100)->Arg(500)->Unit(benchmark::kMillisecond);
BENCHMARK(forward_backward<wordalign::kernels::parallel::forward_backward>)
    ->Name("forward_backward/parallel")->Arg(100)->Arg(500)->Unit(benchmark::kMillisecond);
BENCHMARK(viterbi<wordalign::kernels::serial::viterbi>)
    ->Name("viterbi/serial")->Arg(100)->Arg(500)->Unit(benchmark::kMillisecond);
BENCHMARK(viterbi<wordalign::kernels::parallel::viterbi>)
    ->Name("viterbi/parallel")->Arg(100)->Arg(500)->Unit(benchmark::kMillisecond);
BENCHMARK(transitions<wordalign::kernels::serial::transition_matrices>)
    ->Name("transition_matrices/serial")->Arg(100)->Arg(500)->Unit(benchmark::kMillisecond);
BENCHMARK(transitions<wordalign::kernels::parallel::transition_matrices>)
    ->Name("transition_matrices/parallel")->Arg(100)->Arg(500)->Unit(benchmark::kMillisecond);
BENCHMARK(emissions<wordalign::kernels::serial::emission_matrix>)
    ->Name("emission_matrix/serial")->Arg(100)->Arg(500)->Unit(benchmark::kMillisecond);
BENCHMARK(emissions<wordalign::kernels::parallel::emission_matrix>)
    ->Name("emission_matrix/parallel")->Arg(100)->Arg(500)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
