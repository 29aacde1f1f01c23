#include "reeblab/words.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <set>

namespace reeblab {

namespace {

constexpr const char* kNames = "abcd";

Letter letter_from_char(char ch) {
  for (int i = 0; i < 4; ++i) {
    if (ch == kNames[i]) return static_cast<Letter>(i + 1);
    if (ch == std::toupper(kNames[i])) return static_cast<Letter>(-(i + 1));
  }
  fail(ErrorCode::BadParams, std::string("bad letter '") + ch + "'");
}

}  // namespace

Word parse_word(const std::string& s) {
  Word w;
  w.letters.reserve(s.size());
  for (char ch : s) w.letters.push_back(letter_from_char(ch));
  return w;
}

std::string word_to_string(const Word& w) {
  std::string s;
  s.reserve(w.size());
  for (Letter l : w.letters) {
    char base = kNames[std::abs(l) - 1];
    s.push_back(l > 0 ? base : static_cast<char>(std::toupper(base)));
  }
  return s;
}

Word inverse(const Word& w) {
  Word out;
  out.letters.reserve(w.size());
  for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it)
    out.letters.push_back(static_cast<Letter>(-*it));
  return out;
}

Word concat(const Word& x, const Word& y) {
  Word out = x;
  out.letters.insert(out.letters.end(), y.letters.begin(), y.letters.end());
  return out;
}

Word free_reduce(Word w) {
  std::vector<Letter> out;
  out.reserve(w.size());
  for (Letter l : w.letters) {
    if (!out.empty() && out.back() == -l)
      out.pop_back();
    else
      out.push_back(l);
  }
  w.letters = std::move(out);
  return w;
}

Word cyclic_reduce(Word w) {
  w = free_reduce(std::move(w));
  while (w.size() >= 2 && w.letters.front() == -w.letters.back()) {
    w.letters.erase(w.letters.begin());
    w.letters.pop_back();
  }
  return w;
}

bool is_reduced(const Word& w) {
  for (std::size_t i = 1; i < w.size(); ++i)
    if (w.letters[i] == -w.letters[i - 1]) return false;
  return true;
}

bool uses_only_handle(const Word& w, int handle) {
  for (Letter l : w.letters) {
    int g = std::abs(l);
    if (handle == 1 && g > 2) return false;
    if (handle == 2 && g < 3) return false;
  }
  return true;
}

bool is_proper_power(const Word& w) {
  std::size_t n = w.size();
  for (std::size_t p = 1; p <= n / 2; ++p) {
    if (n % p != 0) continue;
    bool periodic = true;
    for (std::size_t i = p; i < n && periodic; ++i)
      periodic = w.letters[i] == w.letters[i - p];
    if (periodic) return true;
  }
  return false;
}

// ---------------------------------------------------------------------------

SurfaceGroup::SurfaceGroup() {
  relator_ = parse_word("abABcdCD");
  Word rinv = inverse(relator_);
  for (const Word* base : {&relator_, &rinv}) {
    for (std::size_t r = 0; r < base->size(); ++r) {
      std::vector<Letter> rot;
      for (std::size_t i = 0; i < base->size(); ++i)
        rot.push_back(base->letters[(r + i) % base->size()]);
      variants_.push_back(rot);
    }
  }
}

namespace {

// Searches `host` (linear) for a subword equal to variant[j..j+len). On a
// hit, returns the position and the complement word that is equal to the
// matched piece in the group.
struct PieceHit {
  std::size_t pos;
  std::vector<Letter> replacement;
};

std::optional<PieceHit> find_piece(const std::vector<Letter>& host,
                                   const std::vector<std::vector<Letter>>& variants,
                                   std::size_t len) {
  if (host.size() < len) return std::nullopt;
  for (std::size_t pos = 0; pos + len <= host.size(); ++pos) {
    for (const auto& v : variants) {
      // relator variants are cyclic words of length 8; a piece may start
      // anywhere in the variant
      for (std::size_t j = 0; j + len <= v.size(); ++j) {
        bool match = true;
        for (std::size_t k = 0; k < len && match; ++k)
          match = host[pos + k] == v[j + k];
        if (!match) continue;
        // v = p.u.s with u the matched piece; u = inverse(s.p)
        std::vector<Letter> sp;
        for (std::size_t k = j + len; k < v.size(); ++k) sp.push_back(v[k]);
        for (std::size_t k = 0; k < j; ++k) sp.push_back(v[k]);
        std::vector<Letter> repl;
        for (auto it = sp.rbegin(); it != sp.rend(); ++it)
          repl.push_back(static_cast<Letter>(-*it));
        return PieceHit{pos, std::move(repl)};
      }
    }
  }
  return std::nullopt;
}

std::vector<Letter> splice(const std::vector<Letter>& host, std::size_t pos,
                           std::size_t len, const std::vector<Letter>& repl) {
  std::vector<Letter> out;
  out.reserve(host.size() - len + repl.size());
  out.insert(out.end(), host.begin(), host.begin() + static_cast<long>(pos));
  out.insert(out.end(), repl.begin(), repl.end());
  out.insert(out.end(), host.begin() + static_cast<long>(pos + len), host.end());
  return out;
}

}  // namespace

Word SurfaceGroup::dehn_reduce(Word w) const {
  w = free_reduce(std::move(w));
  const std::size_t rl = relator_.size();
  for (;;) {
    bool progressed = false;
    for (std::size_t len = std::min(w.size(), rl); len > rl / 2; --len) {
      auto hit = find_piece(w.letters, variants_, len);
      if (hit) {
        w.letters = splice(w.letters, hit->pos, len, hit->replacement);
        w = free_reduce(std::move(w));
        progressed = true;
        break;
      }
    }
    if (!progressed) return w;
  }
}

Word SurfaceGroup::cyclic_dehn_reduce(Word w) const {
  w = cyclic_reduce(std::move(w));
  const std::size_t rl = relator_.size();
  for (;;) {
    if (w.empty()) return w;
    // scan the doubled word so pieces may wrap around
    std::vector<Letter> doubled = w.letters;
    doubled.insert(doubled.end(), w.letters.begin(), w.letters.end());
    bool progressed = false;
    for (std::size_t len = std::min(w.size(), rl); len > rl / 2 && !progressed;
         --len) {
      auto hit = find_piece(doubled, variants_, len);
      if (hit && hit->pos < w.size()) {
        // rotate so the piece is a prefix, then splice linearly
        std::vector<Letter> rot;
        for (std::size_t i = 0; i < w.size(); ++i)
          rot.push_back(w.letters[(hit->pos + i) % w.size()]);
        w.letters = splice(rot, 0, std::min(len, w.size()), hit->replacement);
        w = cyclic_reduce(std::move(w));
        progressed = true;
      }
    }
    if (!progressed) return w;
  }
}

std::vector<Word> SurfaceGroup::closure(const Word& minimal) const {
  const std::size_t rl = relator_.size();
  std::set<Word> seen;
  std::vector<Word> frontier{minimal};
  seen.insert(minimal);
  std::size_t budget = 20000;
  while (!frontier.empty()) {
    Word w = frontier.back();
    frontier.pop_back();
    std::vector<Word> next;
    // rotations
    for (std::size_t r = 1; r < w.size(); ++r) {
      Word rot;
      for (std::size_t i = 0; i < w.size(); ++i)
        rot.letters.push_back(w.letters[(r + i) % w.size()]);
      next.push_back(std::move(rot));
    }
    // exact-half relator swaps (length preserved)
    if (w.size() >= rl / 2) {
      std::vector<Letter> doubled = w.letters;
      doubled.insert(doubled.end(), w.letters.begin(), w.letters.end());
      for (std::size_t pos = 0; pos < w.size(); ++pos) {
        for (const auto& v : variants_) {
          for (std::size_t j = 0; j + rl / 2 <= v.size(); ++j) {
            bool match = true;
            for (std::size_t k = 0; k < rl / 2 && match; ++k)
              match = doubled[pos + k] == v[j + k];
            if (!match) continue;
            std::vector<Letter> sp;
            for (std::size_t k = j + rl / 2; k < v.size(); ++k) sp.push_back(v[k]);
            for (std::size_t k = 0; k < j; ++k) sp.push_back(v[k]);
            std::vector<Letter> repl;
            for (auto it = sp.rbegin(); it != sp.rend(); ++it)
              repl.push_back(static_cast<Letter>(-*it));
            std::vector<Letter> rot;
            for (std::size_t i = 0; i < w.size(); ++i)
              rot.push_back(w.letters[(pos + i) % w.size()]);
            Word swapped{splice(rot, 0, rl / 2, repl)};
            swapped = cyclic_reduce(std::move(swapped));
            if (swapped.size() == w.size()) next.push_back(std::move(swapped));
          }
        }
      }
    }
    for (Word& n : next) {
      if (seen.count(n)) continue;
      if (seen.size() >= budget)
        fail(ErrorCode::BudgetExceeded, "conjugacy closure exceeded budget");
      seen.insert(n);
      frontier.push_back(std::move(n));
    }
  }
  return {seen.begin(), seen.end()};
}

Word SurfaceGroup::conjugacy_canonical(const Word& w, bool identify_inverse) const {
  Word m = cyclic_dehn_reduce(w);
  if (m.empty()) return m;
  std::vector<Word> cl = closure(m);
  Word best = *std::min_element(cl.begin(), cl.end());
  if (identify_inverse) {
    Word mi = cyclic_dehn_reduce(inverse(m));
    if (!mi.empty()) {
      std::vector<Word> cli = closure(mi);
      Word besti = *std::min_element(cli.begin(), cli.end());
      if (besti < best) best = besti;
    }
  }
  return best;
}

std::vector<Word> SurfaceGroup::conjugacy_class_words(const Word& w) const {
  Word m = cyclic_dehn_reduce(w);
  if (m.empty()) return {m};
  return closure(m);
}

bool SurfaceGroup::conjugate(const Word& w1, const Word& w2) const {
  Word m1 = cyclic_dehn_reduce(w1);
  Word m2 = cyclic_dehn_reduce(w2);
  if (m1.size() != m2.size()) return false;
  if (m1.empty()) return true;
  return conjugacy_canonical(m1) == conjugacy_canonical(m2);
}

// ---------------------------------------------------------------------------

bool free_conjugate(const Word& w1, const Word& w2) {
  Word m1 = cyclic_reduce(w1);
  Word m2 = cyclic_reduce(w2);
  if (m1.size() != m2.size()) return false;
  if (m1.empty()) return true;
  for (std::size_t r = 0; r < m1.size(); ++r) {
    bool same = true;
    for (std::size_t i = 0; i < m1.size() && same; ++i)
      same = m1.letters[(r + i) % m1.size()] == m2.letters[i];
    if (same) return true;
  }
  return false;
}

Word free_conjugacy_canonical(const Word& w, bool identify_inverse) {
  Word m = cyclic_reduce(w);
  if (m.empty()) return m;
  Word best = m;
  auto consider = [&best](const Word& base) {
    for (std::size_t r = 0; r < base.size(); ++r) {
      Word rot;
      for (std::size_t i = 0; i < base.size(); ++i)
        rot.letters.push_back(base.letters[(r + i) % base.size()]);
      if (rot < best) best = rot;
    }
  };
  consider(m);
  if (identify_inverse) consider(cyclic_reduce(inverse(m)));
  return best;
}

}  // namespace reeblab
