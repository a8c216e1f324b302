#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace portrait {

// Sparse term -> weight vector. Entries are kept sorted by term, weights are
// strictly positive and the Euclidean norm is cached at construction.
class SparseVector {
 public:
  using Entry = std::pair<std::string, double>;

  SparseVector() = default;
  // Drops zero weights. Throws std::invalid_argument on negative or non-finite weights.
  explicit SparseVector(std::map<std::string, double> weights);

  const std::vector<Entry>& entries() const { return entries_; }
  double norm() const { return norm_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  double weight(const std::string& term) const;

  SparseVector scaled(double factor) const;

  bool operator==(const SparseVector&) const = default;

 private:
  std::vector<Entry> entries_;
  double norm_ = 0;
};

double dot(const SparseVector& u, const SparseVector& v);

// dot(u, v) / (|u| |v|), 0 when either vector is zero, clamped into [0, 1].
double cosine(const SparseVector& u, const SparseVector& v);

class IdfTable {
 public:
  IdfTable() = default;
  // Throws std::invalid_argument if doc_count is 0 or any df is outside 1..doc_count.
  IdfTable(std::int64_t doc_count, std::map<std::string, std::int64_t> doc_freq);

  // One document per term set.
  static IdfTable from_documents(std::span<const std::set<std::string>> docs);

  std::int64_t doc_count() const { return doc_count_; }
  const std::map<std::string, std::int64_t>& doc_freq() const { return doc_freq_; }
  bool empty() const { return doc_count_ == 0; }

  // ln(N / df); terms never seen are treated as df = N and get 0.
  double idf(const std::string& term) const;

 private:
  std::int64_t doc_count_ = 0;
  std::map<std::string, std::int64_t> doc_freq_;
};

// weight(t) = count(t) * idf(t).
SparseVector tfidf_vector(const std::map<std::string, std::int64_t>& counts, const IdfTable& table);

}  // namespace portrait
