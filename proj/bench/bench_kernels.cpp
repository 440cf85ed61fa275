// Times each serial kernel against its OpenMP counterpart on a synthetic
// corpus and checks that both produce identical output.
//
//   bench_kernels [--per-class N] [--reps R] [--threads T]

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include <omp.h>

#include "CLI11.hpp"

#include "dtc/classifiers.hpp"
#include "dtc/kernels.hpp"
#include "dtc/vectorizer.hpp"
#include "support/synthetic.hpp"

using namespace dtc;

namespace {

double best_ms(int reps, const std::function<void()>& fn) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    best = std::min(best, std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count());
  }
  return best;
}

void row(const char* name, double serial, double parallel, bool same) {
  std::printf("%-18s %10.2f %10.2f %8.2fx  %s\n", name, serial, parallel, serial / parallel, same ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"serial vs parallel kernel timings"};
  std::size_t per_class = 800;
  int reps = 3;
  int threads = 0;
  app.add_option("--per-class", per_class, "Synthetic reviews per class");
  app.add_option("--reps", reps, "Repetitions; the best time is reported")->check(CLI::PositiveNumber);
  app.add_option("--threads", threads, "OpenMP threads (0: runtime default)");
  CLI11_PARSE(app, argc, argv);
  if (threads > 0) omp_set_num_threads(threads);

  const auto corpus = testing::synthetic_corpus(per_class, 7);
  std::vector<std::string> texts;
  std::vector<Label> labels;
  for (const auto& r : corpus.reviews) {
    texts.push_back(r.text);
    labels.push_back(r.label);
  }
  const textprep::PrepConfig prep;
  const vectorizer::VectorizerConfig vc;

  std::printf("%zu documents, %d threads\n", texts.size(), kernels::max_threads());
  std::printf("%-18s %10s %10s %9s\n", "kernel", "serial ms", "omp ms", "speedup");
  bool all_same = true;

  std::vector<vectorizer::TokenSequence> docs_s, docs_p;
  const double pre_s = best_ms(reps, [&] { docs_s = kernels::serial::preprocess_corpus(texts, prep); });
  const double pre_p = best_ms(reps, [&] { docs_p = kernels::parallel::preprocess_corpus(texts, prep); });
  row("preprocess", pre_s, pre_p, docs_s == docs_p);
  all_same = all_same && docs_s == docs_p;

  kernels::TermCounts counts_s, counts_p;
  const double cnt_s = best_ms(reps, [&] { counts_s = kernels::serial::count_terms(docs_s, vc.ngram_range); });
  const double cnt_p = best_ms(reps, [&] { counts_p = kernels::parallel::count_terms(docs_s, vc.ngram_range); });
  row("count_terms", cnt_s, cnt_p, counts_s == counts_p);
  all_same = all_same && counts_s == counts_p;

  const auto fit = vectorizer::fit_vocabulary(docs_s, vc);
  std::vector<FeatureVector> X_s, X_p;
  const double tr_s = best_ms(reps, [&] { X_s = kernels::serial::transform_corpus(docs_s, fit.vocab, fit.idf, vc); });
  const double tr_p = best_ms(reps, [&] { X_p = kernels::parallel::transform_corpus(docs_s, fit.vocab, fit.idf, vc); });
  row("transform_corpus", tr_s, tr_p, X_s == X_p);
  all_same = all_same && X_s == X_p;

  std::vector<double> gram_s, gram_p;
  const double gr_s = best_ms(reps, [&] { gram_s = kernels::serial::rbf_gram(X_s, 1.0); });
  const double gr_p = best_ms(reps, [&] { gram_p = kernels::parallel::rbf_gram(X_s, 1.0); });
  row("rbf_gram", gr_s, gr_p, gram_s == gram_p);
  all_same = all_same && gram_s == gram_p;

  classifiers::Hyperparams h;
  h.epochs = 5;
  const auto model = classifiers::fit_kernel_svm(X_s, labels, h);
  std::vector<double> sc_s, sc_p;
  const double sb_s = best_ms(reps, [&] { sc_s = kernels::serial::score_batch(model, X_s); });
  const double sb_p = best_ms(reps, [&] { sc_p = kernels::parallel::score_batch(model, X_s); });
  row("score_batch (SVM)", sb_s, sb_p, sc_s == sc_p);
  all_same = all_same && sc_s == sc_p;

  return all_same ? 0 : 1;
}
