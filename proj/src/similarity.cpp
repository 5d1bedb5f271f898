#include "amrex/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <mutex>
#include <sstream>

#include <httplib.h>
#include <json.hpp>

#include "amrex/errors.hpp"
#include "http_util.hpp"

namespace amrex {

using nlohmann::json;

EmbeddingVector::EmbeddingVector(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw ValueError("embedding vector must have positive dimension");
  for (double v : values_) {
    if (!std::isfinite(v)) throw ValueError("embedding vector has a non-finite component");
  }
}

double cosine(const EmbeddingVector& a, const EmbeddingVector& b) {
  if (a.dim() != b.dim()) {
    throw ValueError("cosine of vectors with dimensions " + std::to_string(a.dim()) + " and " +
                     std::to_string(b.dim()));
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  auto av = a.values();
  auto bv = b.values();
  for (std::size_t i = 0; i < av.size(); ++i) {
    dot += av[i] * bv[i];
    na += av[i] * av[i];
    nb += bv[i] * bv[i];
  }
  if (na == 0.0 || nb == 0.0) throw ValueError("cosine of a zero vector");
  double c = dot / (std::sqrt(na) * std::sqrt(nb));
  return std::clamp(c, -1.0, 1.0);
}

std::vector<std::optional<EmbeddingVector>> EmbeddingBackend::find_all(
    std::span<const std::string> texts) {
  std::vector<std::optional<EmbeddingVector>> out;
  out.reserve(texts.size());
  for (const auto& text : texts) out.push_back(find(text));
  return out;
}

namespace {

EmbeddingVector vector_from_json(const json& j) {
  if (!j.is_array()) throw ValueError("embedding is not an array");
  std::vector<double> values;
  values.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_number()) throw ValueError("embedding has a non-numeric component");
    values.push_back(v.get<double>());
  }
  return EmbeddingVector(std::move(values));
}

}  // namespace

std::unique_ptr<PrecomputedEmbeddings> PrecomputedEmbeddings::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open embeddings file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str(), path);
}

std::unique_ptr<PrecomputedEmbeddings> PrecomputedEmbeddings::parse(std::string_view jsonl,
                                                                   std::string origin) {
  auto out = std::make_unique<PrecomputedEmbeddings>();
  out->origin_ = std::move(origin);
  std::optional<std::size_t> dim;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= jsonl.size()) {
    auto end = jsonl.find('\n', start);
    if (end == std::string_view::npos) end = jsonl.size();
    auto line = jsonl.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    auto where = out->origin_ + ":" + std::to_string(line_no);
    try {
      json record = json::parse(line);
      auto vec = vector_from_json(record.at("vector"));
      if (dim && *dim != vec.dim()) {
        throw ConfigError(where + ": dimension " + std::to_string(vec.dim()) + " differs from " +
                          std::to_string(*dim));
      }
      dim = vec.dim();
      out->vectors_.insert_or_assign(record.at("text").get<std::string>(), std::move(vec));
    } catch (const json::exception& e) {
      throw ConfigError(where + ": " + e.what());
    } catch (const ValueError& e) {
      throw ConfigError(where + ": " + e.what());
    }
  }
  return out;
}

std::optional<EmbeddingVector> PrecomputedEmbeddings::find(const std::string& text) {
  auto it = vectors_.find(text);
  if (it == vectors_.end()) return std::nullopt;
  return it->second;
}

EmbeddingServiceClient::EmbeddingServiceClient(std::string base_url, double timeout_seconds)
    : base_url_(std::move(base_url)), timeout_seconds_(timeout_seconds) {
  detail::split_url(base_url_);
}

std::optional<EmbeddingVector> EmbeddingServiceClient::find(const std::string& text) {
  return find_all(std::span<const std::string>(&text, 1)).front();
}

std::vector<std::optional<EmbeddingVector>> EmbeddingServiceClient::find_all(
    std::span<const std::string> texts) {
  if (texts.empty()) return {};
  auto url = detail::split_url(base_url_);
  httplib::Client client(url.origin);
  auto secs = static_cast<time_t>(timeout_seconds_);
  auto usecs = static_cast<time_t>((timeout_seconds_ - static_cast<double>(secs)) * 1e6);
  client.set_connection_timeout(secs, usecs);
  client.set_read_timeout(secs, usecs);

  json body = {{"texts", json::array()}};
  for (const auto& t : texts) body["texts"].push_back(t);
  auto res = client.Post(url.prefix + "/embed", body.dump(), "application/json");
  if (!res) {
    throw TransportError("embedding service " + base_url_ + " unreachable: " +
                         httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw TransportError("embedding service " + base_url_ + " returned HTTP " +
                         std::to_string(res->status));
  }
  std::vector<std::optional<EmbeddingVector>> out;
  try {
    json reply = json::parse(res->body);
    const auto& vectors = reply.at("vectors");
    if (!vectors.is_array() || vectors.size() != texts.size()) {
      throw TransportError("embedding service returned " + std::to_string(vectors.size()) +
                           " vectors for " + std::to_string(texts.size()) + " texts");
    }
    for (const auto& v : vectors) out.emplace_back(vector_from_json(v));
  } catch (const json::exception& e) {
    throw TransportError(std::string("malformed embedding service response: ") + e.what());
  } catch (const ValueError& e) {
    throw TransportError(std::string("malformed embedding service response: ") + e.what());
  }
  return out;
}

HashingEmbedder::HashingEmbedder(std::size_t dim) : dim_(dim) {
  if (dim_ == 0) throw ConfigError("hash backend dimension must be positive");
}

std::optional<EmbeddingVector> HashingEmbedder::find(const std::string& text) {
  std::string padded = "\x02" + text + "\x03";
  std::vector<double> values(dim_, 0.0);
  for (std::size_t i = 0; i + 3 <= padded.size(); ++i) {
    std::uint64_t h = 1469598103934665603ULL;
    for (std::size_t k = i; k < i + 3; ++k) {
      h ^= static_cast<unsigned char>(padded[k]);
      h *= 1099511628211ULL;
    }
    values[h % dim_] += 1.0;
  }
  return EmbeddingVector(std::move(values));
}

Embedder::Embedder(std::vector<std::unique_ptr<EmbeddingBackend>> chain) : chain_(std::move(chain)) {
  if (chain_.empty()) throw ConfigError("similarity backend chain is empty");
}

Embedder Embedder::from_spec(std::string_view spec) {
  std::vector<std::unique_ptr<EmbeddingBackend>> chain;
  std::size_t start = 0;
  while (start <= spec.size()) {
    auto end = spec.find(',', start);
    if (end == std::string_view::npos) end = spec.size();
    std::string part(spec.substr(start, end - start));
    start = end + 1;
    if (part.empty()) continue;
    if (part == "hash") {
      chain.push_back(std::make_unique<HashingEmbedder>());
    } else if (part.starts_with("hash:")) {
      std::size_t dim = 0;
      try {
        dim = std::stoul(part.substr(5));
      } catch (const std::exception&) {
        throw ConfigError("bad hash backend dimension in '" + part + "'");
      }
      chain.push_back(std::make_unique<HashingEmbedder>(dim));
    } else if (part.starts_with("file:")) {
      chain.push_back(PrecomputedEmbeddings::load(part.substr(5)));
    } else if (part.starts_with("service:")) {
      chain.push_back(std::make_unique<EmbeddingServiceClient>(part.substr(8)));
    } else if (part.starts_with("http://")) {
      chain.push_back(std::make_unique<EmbeddingServiceClient>(part));
    } else {
      throw ConfigError("unknown similarity backend '" + part + "'");
    }
  }
  return Embedder(std::move(chain));
}

std::string Embedder::describe() const {
  std::string out;
  for (const auto& backend : chain_) {
    if (!out.empty()) out += ',';
    out += backend->describe();
  }
  return out;
}

EmbeddingVector Embedder::admit(const std::string& text, EmbeddingVector vector) {
  std::unique_lock lock(mutex_);
  if (auto it = cache_.find(text); it != cache_.end()) return it->second;
  if (dim_ && *dim_ != vector.dim()) {
    throw ConfigError("backend returned dimension " + std::to_string(vector.dim()) +
                      " but this run already uses " + std::to_string(*dim_));
  }
  dim_ = vector.dim();
  cache_.emplace(text, vector);
  return vector;
}

EmbeddingVector Embedder::embed(const std::string& text) {
  if (text.empty()) throw ValueError("cannot embed empty text");
  {
    std::shared_lock lock(mutex_);
    if (auto it = cache_.find(text); it != cache_.end()) return it->second;
  }
  for (auto& backend : chain_) {
    if (auto vec = backend->find(text)) return admit(text, std::move(*vec));
  }
  throw EmbeddingMiss(text);
}

void Embedder::prefetch(std::span<const std::string> texts) {
  std::vector<std::string> pending;
  {
    std::shared_lock lock(mutex_);
    for (const auto& t : texts) {
      if (!t.empty() && !cache_.count(t)) pending.push_back(t);
    }
  }
  std::sort(pending.begin(), pending.end());
  pending.erase(std::unique(pending.begin(), pending.end()), pending.end());
  for (auto& backend : chain_) {
    if (pending.empty()) break;
    auto found = backend->find_all(pending);
    std::vector<std::string> still_missing;
    for (std::size_t i = 0; i < pending.size(); ++i) {
      if (found[i]) {
        admit(pending[i], std::move(*found[i]));
      } else {
        still_missing.push_back(pending[i]);
      }
    }
    pending = std::move(still_missing);
  }
}

double Embedder::similarity(const std::string& a, const std::string& b) {
  return cosine(embed(a), embed(b));
}

}  // namespace amrex
