#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "reeblab/util.hpp"

namespace reeblab {

// Letters over the genus-2 alphabet: a,b,c,d are 1..4, inverses negative.
// a,b generate the first handle subgroup, c,d the second.
using Letter = std::int8_t;

struct Word {
  std::vector<Letter> letters;

  Word() = default;
  explicit Word(std::vector<Letter> ls) : letters(std::move(ls)) {}

  bool empty() const { return letters.empty(); }
  std::size_t size() const { return letters.size(); }

  bool operator==(const Word& o) const { return letters == o.letters; }
  bool operator<(const Word& o) const {
    if (letters.size() != o.letters.size())
      return letters.size() < o.letters.size();
    return letters < o.letters;
  }
};

Word parse_word(const std::string& s);   // "abAB" style, uppercase = inverse
std::string word_to_string(const Word& w);

Word inverse(const Word& w);
Word concat(const Word& x, const Word& y);
Word free_reduce(Word w);
Word cyclic_reduce(Word w);
bool is_reduced(const Word& w);

// true when every letter lies in the given handle alphabet (1 = {a,b},
// 2 = {c,d}).
bool uses_only_handle(const Word& w, int handle);

// w is a proper power of a shorter cyclic word (string periodicity).
bool is_proper_power(const Word& w);

// ---------------------------------------------------------------------------
// The surface group <a,b,c,d | [a,b][c,d]>. The relator has length 8 and
// satisfies the metric small-cancellation condition, so the word and
// conjugacy problems are solved by Dehn reduction plus half-relator swaps.

class SurfaceGroup {
 public:
  SurfaceGroup();

  const Word& relator() const { return relator_; }

  // Dehn-reduce a linear word: repeatedly replace any subword that covers
  // more than half of a relator cyclic variant by the shorter complement.
  Word dehn_reduce(Word w) const;

  bool is_trivial(const Word& w) const { return dehn_reduce(w).empty(); }

  // Dehn-reduce a cyclic word to minimal length.
  Word cyclic_dehn_reduce(Word w) const;

  // Canonical representative of the conjugacy class of w: lexicographic
  // minimum over the closure of the cyclically reduced minimal form under
  // rotations and exact-half relator swaps.
  Word conjugacy_canonical(const Word& w, bool identify_inverse = false) const;

  // All minimal-length cyclic words conjugate to w (the closure above).
  std::vector<Word> conjugacy_class_words(const Word& w) const;

  bool conjugate(const Word& w1, const Word& w2) const;

 private:
  struct Piece {
    // relator variant split as u * s with |u| = piece length; u equals
    // inverse(s) in the group.
    std::vector<Letter> match;
    std::vector<Letter> replacement;
  };

  // closure under rotations + half swaps, all of the same minimal length
  std::vector<Word> closure(const Word& minimal) const;

  Word relator_;
  std::vector<std::vector<Letter>> variants_;  // rotations of R and R^-1
};

// Conjugacy in the free group on the full alphabet: cyclic reduction plus
// rotation matching. Used for handle subgroups.
bool free_conjugate(const Word& w1, const Word& w2);
Word free_conjugacy_canonical(const Word& w, bool identify_inverse = false);

}  // namespace reeblab
