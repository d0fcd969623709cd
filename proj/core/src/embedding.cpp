// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 Relarec Contributors

#include "relarec/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "relarec/binio.hpp"
#include "relarec/error.hpp"
#include "relarec/rng.hpp"

namespace relarec {

namespace {

constexpr char kMagic[] = "REMB";
constexpr std::uint32_t kFormatVersion = 1;

double sigmoid(double x) {
  if (x > 40.0) return 1.0;
  if (x < -40.0) return 0.0;
  return 1.0 / (1.0 + std::exp(-x));
}

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

// Training corpus in id form: per-doc vocabulary token streams.
struct TrainData {
  std::vector<std::vector<std::uint32_t>> docs;
  std::vector<double> noise_cdf;  // cumulative unigram^0.75 weights
  std::size_t vocab = 0;
  std::size_t positions = 0;  // per epoch
};

TrainData prepare(const std::vector<const Document*>& docs,
                  const TextPipeline& pipe, std::uint32_t min_count) {
  std::vector<std::vector<std::string>> stems(docs.size());
  std::unordered_map<std::string, std::uint64_t> counts;
  for (std::size_t d = 0; d < docs.size(); ++d) {
    std::string text = docs[d]->title;
    text += '\n';
    text += docs[d]->abstract;
    stems[d] = pipe.stems(text);
    for (const auto& s : stems[d]) ++counts[s];
  }

  // stable word ids: sort retained vocabulary lexicographically
  std::vector<std::string> words;
  for (const auto& [w, n] : counts)
    if (n >= min_count) words.push_back(w);
  std::sort(words.begin(), words.end());

  std::unordered_map<std::string, std::uint32_t> ids;
  ids.reserve(words.size());
  for (std::uint32_t i = 0; i < words.size(); ++i) ids.emplace(words[i], i);

  TrainData data;
  data.vocab = words.size();
  data.docs.resize(docs.size());
  for (std::size_t d = 0; d < docs.size(); ++d)
    for (const auto& s : stems[d])
      if (auto it = ids.find(s); it != ids.end()) {
        data.docs[d].push_back(it->second);
        ++data.positions;
      }

  data.noise_cdf.resize(words.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < words.size(); ++i) {
    acc += std::pow(static_cast<double>(counts[words[i]]), 0.75);
    data.noise_cdf[i] = acc;
  }
  return data;
}

std::uint32_t draw_noise(const std::vector<double>& cdf, Rng& rng) {
  const double u = rng.uniform01() * cdf.back();
  auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  if (it == cdf.end()) --it;
  return static_cast<std::uint32_t>(it - cdf.begin());
}

// One position's update against `out`; returns this position's loss.
// Word-vector changes go through `emit`, so callers choose between
// in-place updates and thread-local deltas.
template <typename Emit>
double train_position(std::vector<double>& dvec, std::uint32_t target,
                      const std::vector<std::vector<double>>& out,
                      const std::vector<double>& noise_cdf,
                      std::uint32_t negative, double alpha, Rng& rng,
                      Emit&& emit) {
  const std::size_t dim = dvec.size();
  std::vector<double> grad_v(dim, 0.0);
  double loss = 0.0;

  const double f_pos = sigmoid(dot(dvec.data(), out[target].data(), dim));
  loss -= std::log(std::max(f_pos, 1e-300));
  {
    const double g = (1.0 - f_pos) * alpha;
    for (std::size_t i = 0; i < dim; ++i) grad_v[i] += g * out[target][i];
    emit(target, g, dvec);
  }
  for (std::uint32_t s = 0; s < negative; ++s) {
    const std::uint32_t noise = draw_noise(noise_cdf, rng);
    if (noise == target) continue;  // skip, do not redraw
    const double f = sigmoid(dot(dvec.data(), out[noise].data(), dim));
    loss -= std::log(std::max(1.0 - f, 1e-300));
    const double g = -f * alpha;
    for (std::size_t i = 0; i < dim; ++i) grad_v[i] += g * out[noise][i];
    emit(noise, g, dvec);
  }
  for (std::size_t i = 0; i < dim; ++i) dvec[i] += grad_v[i];
  return loss;
}

}  // namespace

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size())
    throw Error("dimension mismatch: " + std::to_string(a.size()) + " vs " +
                std::to_string(b.size()));
  double ab = 0.0, aa = 0.0, bb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab += a[i] * b[i];
    aa += a[i] * a[i];
    bb += b[i] * b[i];
  }
  if (aa == 0.0 || bb == 0.0) throw Error("undefined similarity");
  return ab / (std::sqrt(aa) * std::sqrt(bb));
}

EmbeddingModel EmbeddingModel::train(const CorpusStore& corpus,
                                     const TextPipeline& pipe,
                                     const EmbeddingHyperparams& params,
                                     std::uint64_t seed,
                                     std::string_view corpus_tag) {
  auto docs = corpus.select(corpus_tag);
  if (docs.size() < 2)
    throw Error("need at least 2 documents to train embeddings");
  if (params.dim < 2) throw Error("embedding dimension must be at least 2");
  if (params.epochs < 1) throw Error("epochs must be at least 1");

  EmbeddingModel model;
  model.params_ = params;
  model.seed_ = seed;
  for (const Document* doc : docs) {
    model.doc_ordinals_.emplace(doc->doc_id, model.doc_ids_.size());
    model.doc_ids_.push_back(doc->doc_id);
  }

  TrainData data = prepare(docs, pipe, params.min_count);
  model.vocab_size_ = data.vocab;
  const std::size_t dim = params.dim;

  Rng rng(seed);
  model.doc_vectors_.resize(docs.size());
  for (auto& v : model.doc_vectors_) {
    v.resize(dim);
    for (auto& x : v) x = (rng.uniform01() - 0.5) / static_cast<double>(dim);
  }
  if (data.vocab == 0 || data.positions == 0) {
    // nothing to predict; vectors stay at initialization
    model.loss_curve_.assign(params.epochs, 0.0);
    return model;
  }
  std::vector<std::vector<double>> out(data.vocab,
                                       std::vector<double>(dim, 0.0));

  const double total =
      static_cast<double>(params.epochs) * static_cast<double>(data.positions);
  auto learning_rate = [&](std::size_t processed) {
    const double progress = static_cast<double>(processed) / total;
    const double alpha =
        params.alpha_start + (params.alpha_end - params.alpha_start) * progress;
    return std::max(alpha, params.alpha_end);
  };

  if (params.threads <= 1) {
    std::size_t processed = 0;
    for (std::uint32_t epoch = 0; epoch < params.epochs; ++epoch) {
      double epoch_loss = 0.0;
      for (std::size_t d = 0; d < data.docs.size(); ++d) {
        auto& dvec = model.doc_vectors_[d];
        for (std::uint32_t target : data.docs[d]) {
          const double alpha = learning_rate(processed++);
          epoch_loss += train_position(
              dvec, target, out, data.noise_cdf, params.negative, alpha, rng,
              [&](std::uint32_t word, double g, const std::vector<double>& v) {
                auto& wvec = out[word];
                for (std::size_t i = 0; i < dim; ++i) wvec[i] += g * v[i];
              });
        }
      }
      model.loss_curve_.push_back(epoch_loss /
                                  static_cast<double>(data.positions));
    }
    return model;
  }

  // Parallel mode: per-epoch document chunks; word-vector updates are
  // buffered per thread and merged between epochs, so no data races but
  // also no bitwise match with the single-threaded schedule.
  const std::size_t nthreads =
      std::min<std::size_t>(params.threads, data.docs.size());
  std::vector<std::size_t> doc_base(data.docs.size() + 1, 0);
  for (std::size_t d = 0; d < data.docs.size(); ++d)
    doc_base[d + 1] = doc_base[d] + data.docs[d].size();

  for (std::uint32_t epoch = 0; epoch < params.epochs; ++epoch) {
    const std::size_t epoch_base =
        static_cast<std::size_t>(epoch) * data.positions;
    std::vector<std::vector<std::vector<double>>> deltas(
        nthreads,
        std::vector<std::vector<double>>(data.vocab,
                                         std::vector<double>(dim, 0.0)));
    std::vector<double> losses(nthreads, 0.0);
    std::vector<std::thread> workers;
    for (std::size_t t = 0; t < nthreads; ++t) {
      workers.emplace_back([&, t] {
        Rng thread_rng(seed ^ (0x9e3779b97f4a7c15ull * (t + 1)) ^ epoch);
        auto& delta = deltas[t];
        for (std::size_t d = t; d < data.docs.size(); d += nthreads) {
          auto& dvec = model.doc_vectors_[d];
          std::size_t processed = epoch_base + doc_base[d];
          for (std::uint32_t target : data.docs[d]) {
            const double alpha = learning_rate(processed++);
            losses[t] += train_position(
                dvec, target, out, data.noise_cdf, params.negative, alpha,
                thread_rng,
                [&](std::uint32_t word, double g,
                    const std::vector<double>& v) {
                  auto& wdelta = delta[word];
                  for (std::size_t i = 0; i < dim; ++i) wdelta[i] += g * v[i];
                });
          }
        }
      });
    }
    for (auto& w : workers) w.join();
    for (std::size_t t = 0; t < nthreads; ++t)
      for (std::size_t w = 0; w < data.vocab; ++w)
        for (std::size_t i = 0; i < dim; ++i) out[w][i] += deltas[t][w][i];
    double epoch_loss = 0.0;
    for (double l : losses) epoch_loss += l;
    model.loss_curve_.push_back(epoch_loss /
                                static_cast<double>(data.positions));
  }
  return model;
}

bool EmbeddingModel::contains_doc(std::string_view doc_id) const {
  return doc_ordinals_.count(std::string(doc_id)) != 0;
}

const std::vector<double>& EmbeddingModel::vector_of(
    std::string_view doc_id) const {
  auto it = doc_ordinals_.find(std::string(doc_id));
  if (it == doc_ordinals_.end())
    throw NotFoundError("document not in model: " + std::string(doc_id));
  return doc_vectors_[it->second];
}

std::vector<ScoredDoc> EmbeddingModel::recommend(std::string_view doc_id,
                                                 std::size_t k) const {
  const auto& query = vector_of(doc_id);
  std::vector<ScoredDoc> out;
  out.reserve(doc_ids_.size() - 1);
  for (std::size_t d = 0; d < doc_ids_.size(); ++d) {
    if (doc_ids_[d] == doc_id) continue;
    out.push_back({doc_ids_[d], cosine(query, doc_vectors_[d])});
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.doc_id < b.doc_id;
  });
  if (out.size() > k) out.resize(k);
  return out;
}

void EmbeddingModel::save(const std::string& path) const {
  BinaryWriter out(path);
  out.magic(kMagic, kFormatVersion);
  out.str(std::string(mode()));
  out.u32(params_.dim);
  out.u32(params_.epochs);
  out.u32(params_.negative);
  out.u32(params_.min_count);
  out.f64(params_.alpha_start);
  out.f64(params_.alpha_end);
  out.u64(seed_);
  out.u64(vocab_size_);
  out.f64_vec(loss_curve_);
  out.u64(doc_ids_.size());
  for (std::size_t d = 0; d < doc_ids_.size(); ++d) {
    out.str(doc_ids_[d]);
    out.f64_vec(doc_vectors_[d]);
  }
  out.close();
}

EmbeddingModel EmbeddingModel::load(const std::string& path) {
  BinaryReader in(path);
  in.magic(kMagic, kFormatVersion);
  EmbeddingModel model;
  if (in.str() != "pv-dbow")
    throw IoError("unsupported embedding mode in " + path);
  model.params_.dim = in.u32();
  model.params_.epochs = in.u32();
  model.params_.negative = in.u32();
  model.params_.min_count = in.u32();
  model.params_.alpha_start = in.f64();
  model.params_.alpha_end = in.f64();
  model.seed_ = in.u64();
  model.vocab_size_ = in.u64();
  model.loss_curve_ = in.f64_vec();
  const std::uint64_t ndocs = in.u64();
  for (std::uint64_t d = 0; d < ndocs; ++d) {
    std::string id = in.str();
    model.doc_ordinals_.emplace(id, model.doc_ids_.size());
    model.doc_ids_.push_back(std::move(id));
    model.doc_vectors_.push_back(in.f64_vec());
    if (model.doc_vectors_.back().size() != model.params_.dim)
      throw IoError("vector dimension mismatch in " + path);
  }
  return model;
}

double EmbeddingModel::ns_loss(const std::vector<double>& v,
                               const std::vector<double>& pos,
                               const std::vector<std::vector<double>>& negs) {
  double loss = -std::log(
      std::max(sigmoid(dot(v.data(), pos.data(), v.size())), 1e-300));
  for (const auto& n : negs)
    loss -= std::log(std::max(
        1.0 - sigmoid(dot(v.data(), n.data(), v.size())), 1e-300));
  return loss;
}

void EmbeddingModel::ns_grads(const std::vector<double>& v,
                              const std::vector<double>& pos,
                              const std::vector<std::vector<double>>& negs,
                              std::vector<double>* grad_v,
                              std::vector<double>* grad_pos,
                              std::vector<std::vector<double>>* grad_negs) {
  const std::size_t dim = v.size();
  grad_v->assign(dim, 0.0);
  grad_pos->assign(dim, 0.0);
  grad_negs->assign(negs.size(), std::vector<double>(dim, 0.0));

  const double f_pos = sigmoid(dot(v.data(), pos.data(), dim));
  for (std::size_t i = 0; i < dim; ++i) {
    (*grad_v)[i] -= (1.0 - f_pos) * pos[i];
    (*grad_pos)[i] -= (1.0 - f_pos) * v[i];
  }
  for (std::size_t s = 0; s < negs.size(); ++s) {
    const double f = sigmoid(dot(v.data(), negs[s].data(), dim));
    for (std::size_t i = 0; i < dim; ++i) {
      (*grad_v)[i] += f * negs[s][i];
      (*grad_negs)[s][i] += f * v[i];
    }
  }
}

}  // namespace relarec
