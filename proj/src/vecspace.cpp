#include "portrait/vecspace.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace portrait {

SparseVector::SparseVector(std::map<std::string, double> weights) {
  entries_.reserve(weights.size());
  double sq = 0;
  for (auto& [term, w] : weights) {
    if (!std::isfinite(w) || w < 0) throw std::invalid_argument("invalid weight for term '" + term + "'");
    if (w == 0) continue;
    sq += w * w;
    entries_.emplace_back(term, w);
  }
  norm_ = std::sqrt(sq);
}

double SparseVector::weight(const std::string& term) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), term,
                             [](const Entry& e, const std::string& t) { return e.first < t; });
  return it != entries_.end() && it->first == term ? it->second : 0.0;
}

SparseVector SparseVector::scaled(double factor) const {
  std::map<std::string, double> w;
  for (const auto& [term, x] : entries_) w.emplace(term, x * factor);
  return SparseVector(std::move(w));
}

double dot(const SparseVector& u, const SparseVector& v) {
  const auto& a = u.entries();
  const auto& b = v.entries();
  double sum = 0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    const int c = a[i].first.compare(b[j].first);
    if (c == 0) {
      sum += a[i].second * b[j].second;
      ++i;
      ++j;
    } else if (c < 0) {
      ++i;
    } else {
      ++j;
    }
  }
  return sum;
}

double cosine(const SparseVector& u, const SparseVector& v) {
  if (u.norm() == 0 || v.norm() == 0) return 0.0;
  return std::clamp(dot(u, v) / (u.norm() * v.norm()), 0.0, 1.0);
}

IdfTable::IdfTable(std::int64_t doc_count, std::map<std::string, std::int64_t> doc_freq)
    : doc_count_(doc_count), doc_freq_(std::move(doc_freq)) {
  if (doc_count_ <= 0) throw std::invalid_argument("IdfTable needs a positive document count");
  for (const auto& [term, df] : doc_freq_)
    if (df < 1 || df > doc_count_) throw std::invalid_argument("document frequency out of range for '" + term + "'");
}

IdfTable IdfTable::from_documents(std::span<const std::set<std::string>> docs) {
  std::map<std::string, std::int64_t> df;
  for (const auto& d : docs)
    for (const auto& t : d) ++df[t];
  if (docs.empty()) return IdfTable{};
  return IdfTable(static_cast<std::int64_t>(docs.size()), std::move(df));
}

double IdfTable::idf(const std::string& term) const {
  auto it = doc_freq_.find(term);
  if (it == doc_freq_.end()) return 0.0;
  return std::log(static_cast<double>(doc_count_) / static_cast<double>(it->second));
}

SparseVector tfidf_vector(const std::map<std::string, std::int64_t>& counts, const IdfTable& table) {
  std::map<std::string, double> w;
  for (const auto& [term, count] : counts) {
    const double x = static_cast<double>(count) * table.idf(term);
    if (x > 0) w.emplace(term, x);
  }
  return SparseVector(std::move(w));
}

}  // namespace portrait
