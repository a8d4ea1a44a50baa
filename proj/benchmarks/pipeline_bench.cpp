#include <benchmark/benchmark.h>

#include "qflake/classifiers.hpp"
#include "qflake/profiles.hpp"
#include "qflake/resample.hpp"
#include "qflake/synth.hpp"
#include "qflake/text.hpp"

namespace {

using namespace qflake;

// Paper-sized document-term matrix from the synthetic generator.
struct Features {
  Matrix x;
  Labels y;
};

const Features& features() {
  static const Features f = [] {
    const auto entries = synthesize_corpus();
    std::vector<TokenSequence> docs;
    Features out;
    for (const auto& e : entries) {
      docs.push_back(tokenize(e.text));
      out.y.push_back(e.label);
    }
    out.x = transform(docs, fit_vocabulary(docs)).to_matrix();
    return out;
  }();
  return f;
}

void BM_Vectorize(benchmark::State& state) {
  const auto entries = synthesize_corpus();
  for (auto _ : state) {
    std::vector<TokenSequence> docs;
    for (const auto& e : entries) docs.push_back(tokenize(e.text));
    benchmark::DoNotOptimize(transform(docs, fit_vocabulary(docs)));
  }
}
BENCHMARK(BM_Vectorize)->Unit(benchmark::kMillisecond);

void BM_Smote(benchmark::State& state) {
  const auto& f = features();
  for (auto _ : state) benchmark::DoNotOptimize(smote_resample(f.x, f.y, 5, 1));
}
BENCHMARK(BM_Smote)->Unit(benchmark::kMillisecond);

void BM_PcaFit(benchmark::State& state) {
  const auto& f = features();
  const auto k = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(pca_fit(f.x, k));
}
BENCHMARK(BM_PcaFit)->Arg(150)->Arg(220)->Unit(benchmark::kMillisecond);

void BM_Train(benchmark::State& state) {
  const auto& f = features();
  const auto family = static_cast<Family>(state.range(0));
  const ClassifierSpec spec = builtin_profile(family, Profile::PaperVanilla).model;
  state.SetLabel(std::string(to_string(family)));
  for (auto _ : state) benchmark::DoNotOptimize(train(f.x, f.y, spec));
}
BENCHMARK(BM_Train)
    ->Arg(static_cast<int>(Family::XGB))
    ->Arg(static_cast<int>(Family::DT))
    ->Arg(static_cast<int>(Family::RF))
    ->Arg(static_cast<int>(Family::SVM))
    ->Unit(benchmark::kMillisecond);

void BM_KnnScore(benchmark::State& state) {
  const auto& f = features();
  const PcaModel pca = pca_fit(f.x, 150);
  const Matrix reduced = pca_transform(pca, f.x);
  const TrainedModel model =
      train(reduced, f.y, builtin_profile(Family::KNN, Profile::PaperVanilla).model);
  for (auto _ : state) benchmark::DoNotOptimize(score(model, reduced));
}
BENCHMARK(BM_KnnScore)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
