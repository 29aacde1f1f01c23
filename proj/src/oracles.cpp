#include "reeblab/oracles.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <set>

namespace reeblab::oracle {

double axis_displacement_length(const Mobius& m) {
  AxisEndpoints e = axis_endpoints(m);
  Complex z0;
  if (e.repelling && e.attracting) {
    double c = 0.5 * (*e.repelling + *e.attracting);
    double r = 0.5 * std::abs(*e.attracting - *e.repelling);
    z0 = Complex(c, r);
  } else {
    double x = e.repelling ? *e.repelling : *e.attracting;
    z0 = Complex(x, 1.0);
  }
  return hyp_distance(m.apply(z0), z0);
}

std::vector<Word> free_cyclic_classes(int handle, int max_len) {
  Letter base = static_cast<Letter>((handle - 1) * 2 + 1);
  std::array<Letter, 4> alphabet{base, static_cast<Letter>(base + 1),
                                 static_cast<Letter>(-base),
                                 static_cast<Letter>(-(base + 1))};
  std::set<Word> classes;
  std::vector<Word> stack{Word{}};
  while (!stack.empty()) {
    Word w = stack.back();
    stack.pop_back();
    if (!w.empty() && w.letters.front() != -w.letters.back()) {
      // canonical form: smallest among all rotations of the word and of its
      // inverse (plain scan, independent of the census path)
      Word best;
      bool first = true;
      std::array<Word, 2> variants{w, inverse(w)};
      for (const Word& v : variants) {
        for (std::size_t r = 0; r < v.size(); ++r) {
          Word rot;
          for (std::size_t i = 0; i < v.size(); ++i)
            rot.letters.push_back(v.letters[(r + i) % v.size()]);
          if (first || rot < best) {
            best = rot;
            first = false;
          }
        }
      }
      classes.insert(best);
    }
    if (static_cast<int>(w.size()) >= max_len) continue;
    for (Letter l : alphabet) {
      if (!w.empty() && w.letters.back() == -l) continue;
      Word child = w;
      child.letters.push_back(l);
      stack.push_back(child);
    }
  }
  return {classes.begin(), classes.end()};
}

bool conjugate_by_search(const SurfaceGroup& group, const Word& w1,
                         const Word& w2, int max_conjugator_len) {
  std::array<Letter, 8> alphabet{1, 2, 3, 4, -1, -2, -3, -4};
  std::vector<Word> stack{Word{}};
  while (!stack.empty()) {
    Word g = stack.back();
    stack.pop_back();
    Word candidate = concat(concat(g, w1), inverse(g));
    if (group.is_trivial(concat(candidate, inverse(w2)))) return true;
    if (static_cast<int>(g.size()) >= max_conjugator_len) continue;
    for (Letter l : alphabet) {
      if (!g.empty() && g.letters.back() == -l) continue;
      Word child = g;
      child.letters.push_back(l);
      stack.push_back(child);
    }
  }
  return false;
}

std::vector<long long> necklace_enumeration(const TransitionMatrix& M, int k_max) {
  // multi-edges matter: an entry m(u,v) = 2 contributes two distinct edges,
  // matching the closed-walk counts of the matrix powers
  struct Edge {
    int from, to;
  };
  std::vector<Edge> edges;
  for (int u = 0; u < M.size(); ++u)
    for (int v = 0; v < M.size(); ++v)
      for (int c = 0; c < M.m(u, v); ++c) edges.push_back({u, v});

  std::vector<long long> counts(static_cast<std::size_t>(k_max), 0);
  for (int k = 1; k <= k_max; ++k) {
    std::set<std::vector<int>> seen;
    std::vector<int> word(static_cast<std::size_t>(k), 0);
    std::function<void(int)> rec = [&](int pos) {
      if (pos == k) {
        if (edges[static_cast<std::size_t>(word[static_cast<std::size_t>(k - 1)])].to !=
            edges[static_cast<std::size_t>(word[0])].from)
          return;
        std::vector<int> best = word;
        for (int r = 1; r < k; ++r) {
          std::vector<int> rot;
          rot.reserve(static_cast<std::size_t>(k));
          for (int i = 0; i < k; ++i)
            rot.push_back(word[static_cast<std::size_t>((r + i) % k)]);
          best = std::min(best, rot);
        }
        seen.insert(best);
        return;
      }
      for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
        if (pos > 0 &&
            edges[static_cast<std::size_t>(word[static_cast<std::size_t>(pos - 1)])].to !=
                edges[static_cast<std::size_t>(e)].from)
          continue;
        word[static_cast<std::size_t>(pos)] = e;
        rec(pos + 1);
      }
    };
    rec(0);
    counts[static_cast<std::size_t>(k - 1)] = static_cast<long long>(seen.size());
  }
  return counts;
}

double box_time_quadrature(const TwistData& twist, const SurgeryParams& p,
                           double w, int steps) {
  double iw = twist.twist_integral(w);
  const double handoff = 1.5 * p.eta;
  double tau = 0.0;
  // dt + w ds + dr below the handoff, dt + w ds - dr above it
  auto slab = [&](double a, double b, double sign) {
    double h = (b - a) / steps;
    for (int k = 0; k < steps; ++k) {
      double tm = a + (k + 0.5) * h;
      tau += h * (1.0 + sign * twist.collar.deriv(tm) * iw);
    }
  };
  slab(-3.0 * p.eta, handoff, +1.0);
  slab(handoff, 3.0 * p.eta, -1.0);
  return tau;
}

}  // namespace reeblab::oracle
