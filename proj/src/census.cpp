#include "reeblab/census.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <map>

namespace reeblab {

const char* side_name(Side s) {
  switch (s) {
    case Side::S1: return "S1";
    case Side::S2: return "S2";
    case Side::Crossing: return "crossing";
  }
  return "?";
}

std::size_t CensusTable::count_n(double t) const {
  if (t > t_max + 1e-9)
    fail(ErrorCode::HorizonExceeded, "count past the census horizon");
  std::size_t n = 0;
  for (const auto& r : records)
    if (r.length <= t + 1e-12) ++n;
  return n;
}

std::size_t CensusTable::count_p(double t) const {
  if (t > t_max + 1e-9)
    fail(ErrorCode::HorizonExceeded, "count past the census horizon");
  std::size_t p = 0;
  for (const auto& r : records) {
    if (!r.primitive) continue;
    // two orientations per geodesic, one orbit per iterate
    auto iterates = static_cast<std::size_t>(std::floor(t / r.length + 1e-12));
    p += 2 * iterates;
  }
  return p;
}

std::size_t count_N(const CensusTable& census, double t) {
  return census.count_n(t);
}

bool conjugate_into_handle(const SurfaceGroup& group, const Word& w, int handle) {
  for (const Word& m : group.conjugacy_class_words(w))
    if (uses_only_handle(m, handle)) return true;
  return false;
}

bool is_boundary_parallel(const SurfaceGroup& group, const Word& w) {
  Word m = group.cyclic_dehn_reduce(w);
  if (m.empty()) return false;
  Word boundary = parse_word("abAB");
  Word canon = group.conjugacy_canonical(m, true);
  Word power;
  // powers of the boundary word never get shorter, so only a few matter
  for (std::size_t k = 1; 4 * k <= m.size() + 8; ++k) {
    power = concat(power, boundary);
    if (group.conjugacy_canonical(power, true) == canon) return true;
  }
  return false;
}

namespace {

Side classify_side(const SurfaceGroup& group, const Word& canonical) {
  if (conjugate_into_handle(group, canonical, 1)) return Side::S1;
  if (conjugate_into_handle(group, canonical, 2)) return Side::S2;
  return Side::Crossing;
}

bool class_primitive(const SurfaceGroup& group, const Word& canonical) {
  for (const Word& m : group.conjugacy_class_words(canonical))
    if (is_proper_power(m)) return false;
  return true;
}

}  // namespace

CensusTable enumerate_classes(const FuchsianSurface& surface, double t_max,
                              const CensusOptions& opts) {
  const double l_min = surface.min_generator_length();
  const int radius =
      static_cast<int>(std::ceil(t_max / l_min)) + 2 + opts.extra_margin;
  const SurfaceGroup& group = surface.group();

  std::array<Mobius, 8> letters;
  std::array<Letter, 8> codes;
  for (int i = 0; i < 4; ++i) {
    letters[static_cast<std::size_t>(i)] = surface.generator(static_cast<Letter>(i + 1));
    codes[static_cast<std::size_t>(i)] = static_cast<Letter>(i + 1);
    letters[static_cast<std::size_t>(i + 4)] = surface.generator(static_cast<Letter>(-(i + 1)));
    codes[static_cast<std::size_t>(i + 4)] = static_cast<Letter>(-(i + 1));
  }

  // The word ball splits over two-letter prefixes; workers collect raw
  // class candidates independently and a single-threaded sorted merge
  // deduplicates, so the result is identical for any worker count.
  struct Candidate {
    Word free_canon;
    Word word;
    double length;
  };
  std::vector<std::pair<Word, Mobius>> roots;
  for (std::size_t i = 0; i < 8; ++i) {
    Word w;
    w.letters.push_back(codes[i]);
    roots.emplace_back(w, letters[i]);
    for (std::size_t jj = 0; jj < 8; ++jj) {
      if (codes[jj] == -codes[i]) continue;
      Word w2 = w;
      w2.letters.push_back(codes[jj]);
      roots.emplace_back(w2, letters[i] * letters[jj]);
    }
  }

  std::vector<std::vector<Candidate>> found(roots.size());
  std::vector<std::size_t> node_counts(roots.size(), 0);
  parallel_for(roots.size(), [&](std::size_t r) {
    struct Node {
      Mobius g;
      Word w;
    };
    std::vector<Node> stack{{roots[r].second, roots[r].first}};
    // one-letter roots only contribute their own word; longer words are
    // covered by the two-letter roots
    bool leaf_only = roots[r].first.size() == 1;
    std::size_t nodes = 0;
    while (!stack.empty()) {
      Node n = std::move(stack.back());
      stack.pop_back();
      ++nodes;
      if (n.w.letters.front() != -n.w.letters.back()) {
        double tr = std::abs(n.g.trace());
        if (tr > 2.0 + 1e-9) {
          double len = 2.0 * std::acosh(0.5 * tr);
          if (len <= t_max + 1e-9)
            found[r].push_back({free_conjugacy_canonical(n.w, true), n.w, len});
        }
      }
      if (leaf_only || static_cast<int>(n.w.size()) >= radius) continue;
      for (std::size_t i = 0; i < 8; ++i) {
        if (n.w.letters.back() == -codes[i]) continue;
        Node child{n.g * letters[i], n.w};
        child.w.letters.push_back(codes[i]);
        stack.push_back(std::move(child));
      }
    }
    node_counts[r] = nodes;
  });

  std::size_t total_nodes = 0;
  for (std::size_t c : node_counts) total_nodes += c;
  if (total_nodes > opts.node_budget)
    fail(ErrorCode::BudgetExceeded, "census word ball exceeded node budget");

  std::map<Word, Word> canonical_cache;
  std::map<Word, ConjugacyClassRecord> classes;
  for (const auto& bucket : found) {
    for (const auto& cand : bucket) {
      auto it = canonical_cache.find(cand.free_canon);
      Word canon;
      if (it != canonical_cache.end()) {
        canon = it->second;
      } else {
        canon = group.conjugacy_canonical(cand.word, true);
        canonical_cache.emplace(cand.free_canon, canon);
      }
      auto cit = classes.find(canon);
      if (cit == classes.end()) {
        ConjugacyClassRecord rec;
        rec.cyclic_word = canon;
        // evaluate the canonical word so every member of the class reports
        // the identical floating-point length
        double ctr = std::abs(surface.evaluate(canon).trace());
        rec.trace = ctr;
        rec.length = 2.0 * std::acosh(0.5 * ctr);
        rec.primitive = class_primitive(group, canon);
        rec.side = classify_side(group, canon);
        rec.boundary_parallel =
            rec.side != Side::Crossing && is_boundary_parallel(group, canon);
        classes.emplace(canon, rec);
      } else if (std::abs(cit->second.length - cand.length) > 1e-6) {
        fail(ErrorCode::AssertionFailed,
             "conjugates with different translation lengths");
      }
    }
  }

  // Powers of the separating boundary class are word-thin: the k-th power
  // needs 4k letters for translation length k * l_sep, which outruns any
  // generator-based ball radius. They are known in closed form, so insert
  // them directly; the widened-ball stability rerun cross-checks the rest.
  {
    Word boundary = parse_word("abAB");
    Word power;
    for (int k = 1;; ++k) {
      power = concat(power, boundary);
      double tr = std::abs(surface.evaluate(power).trace());
      if (!(tr > 2.0 + 1e-9)) break;
      double len = 2.0 * std::acosh(0.5 * tr);
      if (len > t_max + 1e-9) break;
      Word canon = group.conjugacy_canonical(power, true);
      if (classes.count(canon)) continue;
      ConjugacyClassRecord rec;
      rec.cyclic_word = canon;
      double ctr = std::abs(surface.evaluate(canon).trace());
      rec.trace = ctr;
      rec.length = 2.0 * std::acosh(0.5 * ctr);
      rec.primitive = k == 1;
      rec.side = classify_side(group, canon);
      rec.boundary_parallel = true;
      classes.emplace(canon, rec);
    }
  }

  CensusTable table;
  table.t_max = t_max;
  for (auto& [canon, rec] : classes) {
    (void)canon;
    table.records.push_back(rec);
  }
  std::sort(table.records.begin(), table.records.end(),
            [](const ConjugacyClassRecord& l, const ConjugacyClassRecord& r) {
              if (l.length != r.length) return l.length < r.length;
              return l.cyclic_word < r.cyclic_word;
            });
  return table;
}

std::vector<ConjugacyClassRecord> enumerate_handle_classes(
    const FuchsianSurface& surface, int handle, int max_word_len) {
  std::array<Mobius, 4> letters;
  std::array<Letter, 4> codes;
  for (int i = 0; i < 2; ++i) {
    int gi = (handle - 1) * 2 + i;
    letters[static_cast<std::size_t>(i)] = surface.generator(static_cast<Letter>(gi + 1));
    codes[static_cast<std::size_t>(i)] = static_cast<Letter>(gi + 1);
    letters[static_cast<std::size_t>(i + 2)] =
        surface.generator(static_cast<Letter>(-(gi + 1)));
    codes[static_cast<std::size_t>(i + 2)] = static_cast<Letter>(-(gi + 1));
  }
  std::map<Word, ConjugacyClassRecord> classes;
  struct Node {
    Mobius g;
    Word w;
  };
  std::vector<Node> stack{{Mobius::identity(), Word{}}};
  while (!stack.empty()) {
    Node n = std::move(stack.back());
    stack.pop_back();
    if (!n.w.empty() && n.w.letters.front() != -n.w.letters.back()) {
      Word canon = free_conjugacy_canonical(n.w, true);
      if (!classes.count(canon)) {
        double tr = std::abs(n.g.trace());
        ConjugacyClassRecord rec;
        rec.cyclic_word = canon;
        rec.trace = tr;
        rec.length = tr > 2.0 + 1e-9 ? 2.0 * std::acosh(0.5 * tr) : 0.0;
        rec.primitive = !is_proper_power(canon);
        rec.side = handle == 1 ? Side::S1 : Side::S2;
        rec.boundary_parallel =
            free_conjugacy_canonical(parse_word(handle == 1 ? "abAB" : "cdCD"), true) ==
            canon;
        classes.emplace(canon, rec);
      }
    }
    if (static_cast<int>(n.w.size()) >= max_word_len) continue;
    for (std::size_t i = 0; i < 4; ++i) {
      if (!n.w.empty() && n.w.letters.back() == -codes[i]) continue;
      Node child{n.g * letters[i], n.w};
      child.w.letters.push_back(codes[i]);
      stack.push_back(std::move(child));
    }
  }
  std::vector<ConjugacyClassRecord> out;
  for (auto& [canon, rec] : classes) {
    (void)canon;
    out.push_back(rec);
  }
  std::sort(out.begin(), out.end(),
            [](const ConjugacyClassRecord& l, const ConjugacyClassRecord& r) {
              if (l.length != r.length) return l.length < r.length;
              return l.cyclic_word < r.cyclic_word;
            });
  return out;
}

GrowthFit fit_log_linear(const std::vector<double>& ts,
                         const std::vector<double>& logs) {
  if (ts.size() < 2 || ts.size() != logs.size())
    fail(ErrorCode::InsufficientData, "need at least two points for a fit");
  Eigen::MatrixXd A(ts.size(), 2);
  Eigen::VectorXd y(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) {
    A(static_cast<long>(i), 0) = ts[i];
    A(static_cast<long>(i), 1) = 1.0;
    y(static_cast<long>(i)) = logs[i];
  }
  Eigen::Vector2d sol = A.colPivHouseholderQr().solve(y);
  GrowthFit fit;
  fit.a = sol(0);
  fit.b = sol(1);
  fit.t_lo = *std::min_element(ts.begin(), ts.end());
  fit.t_hi = *std::max_element(ts.begin(), ts.end());
  fit.residual = std::sqrt((A * sol - y).squaredNorm() / static_cast<double>(ts.size()));
  return fit;
}

GrowthFit fit_growth(const CensusTable& census, double t_lo, double t_hi,
                     double grid_step) {
  std::vector<double> ts, logs;
  for (double t = t_lo; t <= t_hi + 1e-9; t += grid_step) {
    std::size_t n = census.count_n(std::min(t, census.t_max));
    if (n >= 1) {
      ts.push_back(t);
      logs.push_back(std::log(static_cast<double>(n)));
    }
  }
  if (ts.size() < 5)
    fail(ErrorCode::InsufficientData, "growth fit needs 5 grid points with N >= 1");
  return fit_log_linear(ts, logs);
}

CensusTable filter_subsurface(const CensusTable& census, Side side) {
  CensusTable out;
  out.t_max = census.t_max;
  for (const auto& r : census.records)
    if (r.side == side && !r.boundary_parallel) out.records.push_back(r);
  return out;
}

}  // namespace reeblab
