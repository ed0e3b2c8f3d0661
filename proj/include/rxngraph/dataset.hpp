// Copyright 2026 the rxngraph authors
// SPDX-License-Identifier: Apache-2.0
//
// Labeled reaction datasets: TSV loading ("smirks<TAB>label" per line, label
// optional), content digests, seeded splits, and the class-balanced
// subsampling used for fixed-size-per-class protocols.

#ifndef RXNGRAPH_DATASET_HPP
#define RXNGRAPH_DATASET_HPP

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "rxngraph/chem.hpp"
#include "rxngraph/errors.hpp"
#include "rxngraph/rng.hpp"
#include "rxngraph/smiles.hpp"

namespace rxngraph {

struct DataRecord {
  Reaction rxn;
  bool has_label = false;
  int label = 0;
  bool has_target = false;
  double target = 0.0;
};

struct Dataset {
  std::vector<DataRecord> records;
  std::string digest;  // 16-hex-digit content hash of the source text

  int num_classes() const {
    int k = 0;
    for (const auto& r : records)
      if (r.has_label) k = std::max(k, r.label + 1);
    return k;
  }

  static Dataset from_text(std::string_view text) {
    Dataset ds;
    ds.digest = digest_of(text);
    std::size_t line_no = 0, start = 0;
    while (start <= text.size()) {
      std::size_t end = text.find('\n', start);
      if (end == std::string_view::npos) end = text.size();
      std::string_view line = text.substr(start, end - start);
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      if (!line.empty()) {
        try {
          ds.records.push_back(parse_line(line));
        } catch (const InputError& e) {
          throw InputError("line " + std::to_string(line_no) + ": " + e.what());
        }
      }
      if (end == text.size()) break;
      start = end + 1;
    }
    return ds;
  }

  static Dataset load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open dataset file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_text(buf.str());
  }

  static std::string digest_of(std::string_view text) {
    const std::uint64_t h = hash_bytes(text);
    char out[17];
    std::snprintf(out, sizeof out, "%016llx", static_cast<unsigned long long>(h));
    return out;
  }

 private:
  static DataRecord parse_line(std::string_view line) {
    DataRecord rec;
    const std::size_t tab = line.find('\t');
    const std::string_view smirks = line.substr(0, tab);
    rec.rxn = parse_reaction(smirks);
    if (tab == std::string_view::npos) return rec;
    std::string_view label = line.substr(tab + 1);
    if (label.empty()) return rec;
    double value = 0;
    const auto* end = label.data() + label.size();
    auto [p, ec] = std::from_chars(label.data(), end, value);
    if (ec != std::errc() || p != end)
      throw InputError("bad label field '" + std::string(label) + "'");
    rec.has_target = true;
    rec.target = value;
    if (value == std::floor(value) && std::abs(value) < 1e9) {
      rec.has_label = true;
      rec.label = static_cast<int>(value);
    }
    return rec;
  }
};

struct SplitIndices {
  std::vector<int> train, valid, test;
};

// Disjoint, exhaustive, reproducible from the seed alone.
inline SplitIndices split_dataset(std::size_t n, double train_frac,
                                  double valid_frac, std::uint64_t seed) {
  if (train_frac < 0 || valid_frac < 0 || train_frac + valid_frac > 1.0)
    throw InputError("split_dataset: fractions out of range");
  std::vector<int> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = static_cast<int>(i);
  Rng rng(seed);
  rng.shuffle(idx);
  const std::size_t n_train = static_cast<std::size_t>(train_frac * n);
  const std::size_t n_valid = static_cast<std::size_t>(valid_frac * n);
  SplitIndices s;
  s.train.assign(idx.begin(), idx.begin() + n_train);
  s.valid.assign(idx.begin() + n_train, idx.begin() + n_train + n_valid);
  s.test.assign(idx.begin() + n_train + n_valid, idx.end());
  return s;
}

// Fixed-size per-class train/test subsets (e.g. 200 train / 800 test per
// class). Classes without enough examples are an error.
inline std::pair<Dataset, Dataset> balanced_subsample(const Dataset& ds,
                                                      int per_class_train,
                                                      int per_class_test,
                                                      std::uint64_t seed) {
  std::map<int, std::vector<int>> by_class;
  for (std::size_t i = 0; i < ds.records.size(); ++i) {
    if (!ds.records[i].has_label)
      throw InputError("balanced_subsample: unlabeled record");
    by_class[ds.records[i].label].push_back(static_cast<int>(i));
  }
  Rng rng(seed);
  Dataset train, test;
  train.digest = ds.digest + "-train";
  test.digest = ds.digest + "-test";
  for (auto& [cls, idx] : by_class) {
    if (static_cast<int>(idx.size()) < per_class_train + per_class_test)
      throw InputError("balanced_subsample: class " + std::to_string(cls) +
                       " has too few examples");
    rng.shuffle(idx);
    for (int i = 0; i < per_class_train; ++i)
      train.records.push_back(ds.records[idx[i]]);
    for (int i = 0; i < per_class_test; ++i)
      test.records.push_back(ds.records[idx[per_class_train + i]]);
  }
  return {std::move(train), std::move(test)};
}

}  // namespace rxngraph

#endif  // RXNGRAPH_DATASET_HPP
