// Copyright 2026 The relemb Authors. All Rights Reserved.
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

#include "relemb/analogy.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>

#include "json.hpp"
#include "relemb/error.h"
#include "relemb/io.h"

namespace relemb {
namespace {

double l2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double dot_product(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (size_t k = 0; k < x.size(); ++k) s += x[k] * y[k];
  return s;
}

// All scoring goes through these so the open-vocabulary solver (which caches
// row norms) reproduces the standalone measures exactly.
MeasureScore cos_with_norms(std::span<const double> x, std::span<const double> y,
                            double nx, double ny) {
  if (nx == 0.0 || ny == 0.0) return {0.0, true};
  return {dot_product(x, y) / (nx * ny), false};
}

double positive(double cos) { return (cos + 1.0) / 2.0; }

std::string lowercase(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

bool is_syntactic(std::string_view section) {
  return section.substr(0, 4) == "gram";
}

// Scores candidate d for a fixed question with the stem's vectors bound.
class QuestionScorer {
 public:
  QuestionScorer(Measure measure, double epsilon, std::span<const double> a,
                 std::span<const double> b, std::span<const double> c)
      : measure_(measure), epsilon_(epsilon), a_(a), b_(b), c_(c) {
    switch (measure_) {
      case Measure::kCosAdd:
        work_.resize(a.size());
        for (size_t k = 0; k < a.size(); ++k) work_[k] = b[k] - a[k] + c[k];
        work_norm_ = l2(work_);
        break;
      case Measure::kCosMult:
        na_ = l2(a);
        nb_ = l2(b);
        nc_ = l2(c);
        break;
      case Measure::kPairDiff:
        work_.resize(a.size());
        for (size_t k = 0; k < a.size(); ++k) work_[k] = b[k] - a[k];
        work_norm_ = l2(work_);
        offset_.resize(a.size());
        break;
    }
  }

  MeasureScore operator()(std::span<const double> d, double nd) {
    switch (measure_) {
      case Measure::kCosAdd:
        return cos_with_norms(work_, d, work_norm_, nd);
      case Measure::kCosMult: {
        const auto sb = cos_with_norms(b_, d, nb_, nd);
        const auto sc = cos_with_norms(c_, d, nc_, nd);
        const auto sa = cos_with_norms(a_, d, na_, nd);
        const double v = positive(sb.value) * positive(sc.value) /
                         (positive(sa.value) + epsilon_);
        return {v, sa.degenerate || sb.degenerate || sc.degenerate};
      }
      case Measure::kPairDiff: {
        for (size_t k = 0; k < d.size(); ++k) offset_[k] = d[k] - c_[k];
        return cos_with_norms(work_, offset_, work_norm_, l2(offset_));
      }
    }
    return {};
  }

  MeasureScore operator()(std::span<const double> d) { return (*this)(d, l2(d)); }

 private:
  Measure measure_;
  double epsilon_;
  std::span<const double> a_, b_, c_;
  std::vector<double> work_, offset_;
  double work_norm_ = 0.0, na_ = 0.0, nb_ = 0.0, nc_ = 0.0;
};

std::vector<double> row_norms(const EmbeddingMatrix& m) {
  std::vector<double> norms(m.rows());
  for (WordId w = 0; w < m.rows(); ++w) norms[w] = l2(m.row(w));
  return norms;
}

std::optional<std::vector<RankedWord>> rank_open(const OpenQuestion& q,
                                                 const EmbeddingMatrix& emb,
                                                 const std::vector<double>& norms,
                                                 Measure measure,
                                                 double epsilon) {
  const auto a = emb.vocab().find(q.a);
  const auto b = emb.vocab().find(q.b);
  const auto c = emb.vocab().find(q.c);
  if (!a || !b || !c) return std::nullopt;
  QuestionScorer scorer(measure, epsilon, emb.row(*a), emb.row(*b), emb.row(*c));
  std::vector<RankedWord> ranked;
  ranked.reserve(emb.rows());
  for (WordId w = 0; w < emb.rows(); ++w) {
    if (w == *a || w == *b || w == *c) continue;
    ranked.push_back({w, scorer(emb.row(w), norms[w]).value});
  }
  std::sort(ranked.begin(), ranked.end(), [](const auto& x, const auto& y) {
    if (x.score != y.score) return x.score > y.score;
    return x.word < y.word;
  });
  return ranked;
}

}  // namespace

const char* measure_name(Measure m) {
  switch (m) {
    case Measure::kCosAdd:
      return "cosadd";
    case Measure::kCosMult:
      return "cosmult";
    case Measure::kPairDiff:
      return "pairdiff";
  }
  return "?";
}

Measure parse_measure(std::string_view name) {
  const std::string n = lowercase(name);
  if (n == "cosadd") return Measure::kCosAdd;
  if (n == "cosmult") return Measure::kCosMult;
  if (n == "pairdiff") return Measure::kPairDiff;
  throw UsageError("unknown measure '" + std::string(name) +
                   "' (expected cosadd, cosmult or pairdiff)");
}

double cosine(std::span<const double> x, std::span<const double> y) {
  return cos_with_norms(x, y, l2(x), l2(y)).value;
}

MeasureScore cos_add(std::span<const double> a, std::span<const double> b,
                     std::span<const double> c, std::span<const double> d) {
  return QuestionScorer(Measure::kCosAdd, kCosMultEpsilon, a, b, c)(d);
}

MeasureScore cos_mult(std::span<const double> a, std::span<const double> b,
                      std::span<const double> c, std::span<const double> d,
                      double epsilon) {
  return QuestionScorer(Measure::kCosMult, epsilon, a, b, c)(d);
}

MeasureScore pair_diff(std::span<const double> a, std::span<const double> b,
                       std::span<const double> c, std::span<const double> d) {
  return QuestionScorer(Measure::kPairDiff, kCosMultEpsilon, a, b, c)(d);
}

MeasureScore score(Measure m, std::span<const double> a,
                   std::span<const double> b, std::span<const double> c,
                   std::span<const double> d, double epsilon) {
  return QuestionScorer(m, epsilon, a, b, c)(d);
}

AnalogyDataset load_google(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open dataset " + path.string());
  AnalogyDataset ds;
  ds.name = path.stem().string();
  std::string section = "default";
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto f = io::split_ws(line);
    if (f.empty()) continue;
    if (f[0] == ":" || f[0].front() == ':') {
      std::string name = f[0] == ":" ? (f.size() > 1 ? std::string(f[1]) : "")
                                     : std::string(f[0].substr(1));
      if (name.empty()) {
        throw DataError(path.string() + ":" + std::to_string(lineno) +
                        ": empty section name");
      }
      section = name;
      continue;
    }
    if (f.size() != 4) {
      throw DataError(path.string() + ":" + std::to_string(lineno) +
                      ": expected 4 words, got " + std::to_string(f.size()));
    }
    ds.open.push_back({lowercase(f[0]), lowercase(f[1]), lowercase(f[2]),
                       lowercase(f[3]), section});
  }
  return ds;
}

AnalogyDataset load_choice_tsv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open dataset " + path.string());
  AnalogyDataset ds;
  ds.name = path.stem().string();
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const std::string ctx = path.string() + ":" + std::to_string(lineno);
    const auto f = io::split(line, '\t');
    if (f.size() < 7 || f.size() % 2 == 0) {
      throw DataError(ctx + ": expected a, b, >= 2 candidate pairs and a gold index");
    }
    ChoiceQuestion q;
    q.a = lowercase(f[0]);
    q.b = lowercase(f[1]);
    for (size_t i = 2; i + 1 < f.size(); i += 2) {
      q.candidates.emplace_back(lowercase(f[i]), lowercase(f[i + 1]));
    }
    const auto gold = io::parse_int(f.back(), ctx);
    if (gold < 0 || static_cast<size_t>(gold) >= q.candidates.size()) {
      throw DataError(ctx + ": gold index out of range");
    }
    q.gold = static_cast<size_t>(gold);
    ds.choice.push_back(std::move(q));
  }
  return ds;
}

std::optional<std::vector<RankedWord>> solve_open_vocab(
    const OpenQuestion& q, const EmbeddingMatrix& embeddings, Measure measure,
    double epsilon) {
  return rank_open(q, embeddings, row_norms(embeddings), measure, epsilon);
}

ChoiceAnswer solve_multiple_choice(const ChoiceQuestion& q,
                                   const EmbeddingMatrix& embeddings,
                                   Measure measure, double epsilon) {
  if (q.candidates.size() < 2) {
    throw DataError("multiple-choice question needs at least 2 candidates");
  }
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  ChoiceAnswer ans;
  ans.scores.assign(q.candidates.size(), kNegInf);
  const auto& vocab = embeddings.vocab();
  const auto a = vocab.find(q.a);
  const auto b = vocab.find(q.b);
  if (!a || !b) {
    ans.flagged = true;
    return ans;
  }
  bool any = false;
  for (size_t i = 0; i < q.candidates.size(); ++i) {
    const auto c = vocab.find(q.candidates[i].first);
    const auto d = vocab.find(q.candidates[i].second);
    if (!c || !d) continue;
    any = true;
    ans.scores[i] = score(measure, embeddings.row(*a), embeddings.row(*b),
                          embeddings.row(*c), embeddings.row(*d), epsilon)
                        .value;
  }
  if (!any) {
    ans.flagged = true;
    return ans;
  }
  for (size_t i = 1; i < ans.scores.size(); ++i) {
    if (ans.scores[i] > ans.scores[ans.chosen]) ans.chosen = i;
  }
  return ans;
}

EvaluationReport evaluate(const AnalogyDataset& dataset,
                          const EmbeddingMatrix& embeddings, Measure measure,
                          double epsilon) {
  EvaluationReport r;
  r.dataset = dataset.name;
  r.measure = measure_name(measure);
  std::map<std::string, CategoryResult> categories, sections;
  std::vector<std::string> section_order;

  if (!dataset.open.empty()) {
    const auto norms = row_norms(embeddings);
    for (const auto& q : dataset.open) {
      bool correct = false;
      const auto gold = embeddings.vocab().find(q.d);
      auto ranked = rank_open(q, embeddings, norms, measure, epsilon);
      if (!ranked || !gold) {
        ++r.flagged;
      } else {
        correct = !ranked->empty() && ranked->front().word == *gold;
      }
      ++r.total;
      ++r.answered;
      r.correct += correct;
      const std::string cat = is_syntactic(q.section) ? "syntactic" : "semantic";
      auto& c = categories[cat];
      c.name = cat;
      ++c.total;
      c.correct += correct;
      if (!sections.contains(q.section)) section_order.push_back(q.section);
      auto& s = sections[q.section];
      s.name = q.section;
      ++s.total;
      s.correct += correct;
    }
  }
  for (const auto& q : dataset.choice) {
    const auto ans = solve_multiple_choice(q, embeddings, measure, epsilon);
    ++r.total;
    ++r.answered;
    r.flagged += ans.flagged || std::any_of(ans.scores.begin(), ans.scores.end(),
                                            [](double s) { return std::isinf(s); });
    r.correct += ans.chosen == q.gold;
  }
  r.accuracy = r.total == 0 ? 0.0 : static_cast<double>(r.correct) / r.total;
  for (const char* name : {"semantic", "syntactic"}) {
    if (auto it = categories.find(name); it != categories.end()) {
      r.categories.push_back(it->second);
    }
  }
  for (const auto& s : section_order) r.sections.push_back(sections[s]);
  return r;
}

void write_report_jsonl(std::ostream& out,
                        std::span<const EvaluationReport> reports) {
  auto cats = [](const std::vector<CategoryResult>& list) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : list) {
      arr.push_back({{"name", c.name},
                     {"total", c.total},
                     {"correct", c.correct},
                     {"accuracy", c.accuracy()}});
    }
    return arr;
  };
  for (const auto& r : reports) {
    nlohmann::json j = {{"dataset", r.dataset},   {"measure", r.measure},
                        {"total", r.total},       {"answered", r.answered},
                        {"correct", r.correct},   {"flagged", r.flagged},
                        {"accuracy", r.accuracy}, {"categories", cats(r.categories)},
                        {"sections", cats(r.sections)}};
    out << j.dump() << '\n';
  }
}

std::vector<EvaluationReport> read_report_jsonl(std::istream& in) {
  std::vector<EvaluationReport> out;
  std::string line;
  auto cats = [](const nlohmann::json& arr) {
    std::vector<CategoryResult> list;
    for (const auto& c : arr) {
      list.push_back({c.at("name").get<std::string>(), c.at("total").get<size_t>(),
                      c.at("correct").get<size_t>()});
    }
    return list;
  };
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      EvaluationReport r;
      r.dataset = j.at("dataset").get<std::string>();
      r.measure = j.at("measure").get<std::string>();
      r.total = j.at("total").get<size_t>();
      r.answered = j.at("answered").get<size_t>();
      r.correct = j.at("correct").get<size_t>();
      r.flagged = j.at("flagged").get<size_t>();
      r.accuracy = j.at("accuracy").get<double>();
      r.categories = cats(j.at("categories"));
      r.sections = cats(j.at("sections"));
      out.push_back(std::move(r));
    } catch (const nlohmann::json::exception& e) {
      throw DataError(std::string("malformed report record: ") + e.what());
    }
  }
  return out;
}

void write_report_table(std::ostream& out,
                        std::span<const EvaluationReport> reports) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-20s %-9s %8s %8s %8s %9s %9s %9s\n",
                "dataset", "measure", "total", "correct", "flagged", "sem%",
                "syn%", "total%");
  out << buf;
  for (const auto& r : reports) {
    auto pct = [&](const char* name) -> std::string {
      for (const auto& c : r.categories) {
        if (c.name == name) {
          char b[32];
          std::snprintf(b, sizeof b, "%.2f", 100.0 * c.accuracy());
          return b;
        }
      }
      return "-";
    };
    std::snprintf(buf, sizeof buf, "%-20s %-9s %8zu %8zu %8zu %9s %9s %9.2f\n",
                  r.dataset.c_str(), r.measure.c_str(), r.total, r.correct,
                  r.flagged, pct("semantic").c_str(), pct("syntactic").c_str(),
                  100.0 * r.accuracy);
    out << buf;
  }
}

}  // namespace relemb
