#pragma once

// Free groups F_n = <a_1, ..., a_n> of finite rank.
//
// Reduced words are hash-consed: every word of a given rank is a node of a
// shared prefix trie, which is exactly the Cayley tree of F_n rooted at e.
// Equality and hashing are pointer operations, and right multiplication by a
// generator is a single child/parent step.

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace wreath {

/// a_index^sign, index in 1..n.
struct Generator {
  int index = 1;
  int sign = 1;

  constexpr Generator inverse() const { return {index, -sign}; }
  constexpr int code() const { return sign * index; }
  static constexpr Generator from_code(int code) {
    return code > 0 ? Generator{code, 1} : Generator{-code, -1};
  }
  friend constexpr bool operator==(Generator, Generator) = default;
};

class RankMismatch : public std::invalid_argument {
 public:
  RankMismatch(int lhs, int rhs)
      : std::invalid_argument("free group rank mismatch: " +
                              std::to_string(lhs) + " vs " +
                              std::to_string(rhs)) {}
};

class WordParseError : public std::invalid_argument {
 public:
  WordParseError(const std::string& what, std::size_t position)
      : std::invalid_argument(what + " at position " +
                              std::to_string(position)),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

namespace detail {

inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

class WordArena;

struct WordNode {
  const WordArena* owner = nullptr;
  const WordNode* parent = nullptr;
  int code = 0;  // last letter, 0 for the root
  int rank = 0;
  std::size_t depth = 0;
  std::uint64_t hash = 0;
  std::unique_ptr<std::atomic<WordNode*>[]> children;

  explicit WordNode(int rank_) : rank(rank_) {
    children = std::make_unique<std::atomic<WordNode*>[]>(2 * rank);
    for (int i = 0; i < 2 * rank; ++i) children[i].store(nullptr);
  }

  static std::size_t slot(int code, int rank) {
    return code > 0 ? static_cast<std::size_t>(code - 1)
                    : static_cast<std::size_t>(rank - code - 1);
  }
};

/// Owns every interned word of one rank. Child creation is lock-free, so
/// concurrent workers may share an arena.
class WordArena {
 public:
  explicit WordArena(int rank) : rank_(rank), root_(new WordNode(rank)) {
    root_->owner = this;
    root_->hash = mix64(static_cast<std::uint64_t>(rank));
  }
  ~WordArena() { destroy(root_); }
  WordArena(const WordArena&) = delete;
  WordArena& operator=(const WordArena&) = delete;

  int rank() const { return rank_; }
  const WordNode* root() const { return root_; }

  const WordNode* child(const WordNode* node, int code) const {
    auto& cell = node->children[WordNode::slot(code, rank_)];
    WordNode* existing = cell.load(std::memory_order_acquire);
    if (existing != nullptr) return existing;
    auto* fresh = new WordNode(rank_);
    fresh->owner = this;
    fresh->parent = node;
    fresh->code = code;
    fresh->depth = node->depth + 1;
    fresh->hash = mix64(node->hash ^ mix64(static_cast<std::uint64_t>(
                                         static_cast<std::int64_t>(code))));
    if (cell.compare_exchange_strong(existing, fresh,
                                     std::memory_order_acq_rel)) {
      return fresh;
    }
    delete fresh;
    return existing;
  }

  static WordArena& for_rank(int rank) {
    static constexpr int kFast = 64;
    static std::atomic<WordArena*> fast[kFast] = {};
    if (rank < kFast) {
      if (auto* a = fast[rank].load(std::memory_order_acquire)) return *a;
    }
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<WordArena>> arenas;
    std::lock_guard lock(mutex);
    auto& slot = arenas[rank];
    if (!slot) slot = std::make_unique<WordArena>(rank);
    if (rank < kFast) fast[rank].store(slot.get(), std::memory_order_release);
    return *slot;
  }

 private:
  static void destroy(WordNode* node) {
    std::vector<WordNode*> stack{node};
    while (!stack.empty()) {
      WordNode* top = stack.back();
      stack.pop_back();
      for (int i = 0; i < 2 * top->rank; ++i) {
        if (auto* c = top->children[i].load()) stack.push_back(c);
      }
      delete top;
    }
  }

  int rank_;
  WordNode* root_;
};

}  // namespace detail

/// A freely reduced word in F_n. Cheap to copy; equal words share a node.
class Word {
 public:
  Word() = default;  // null word; only valid as a placeholder

  static Word identity(int rank) {
    if (rank < 1) throw std::invalid_argument("free group rank must be >= 1");
    return Word(detail::WordArena::for_rank(rank).root());
  }
  static Word generator(int rank, int index, int sign = 1) {
    return identity(rank).times(Generator{index, sign});
  }
  static Word from_letters(int rank, const std::vector<Generator>& letters) {
    Word w = identity(rank);
    for (auto g : letters) w = w.times(g);
    return w;
  }

  bool valid() const { return node_ != nullptr; }
  int rank() const { return node_->rank; }
  std::size_t length() const { return node_->depth; }
  bool is_identity() const { return node_->depth == 0; }
  std::uint64_t hash() const { return node_->hash; }

  /// Last letter; undefined on e.
  Generator last() const { return Generator::from_code(node_->code); }
  /// w with its last letter removed, i.e. w * last()^-1.
  Word prefix() const { return Word(node_->parent); }

  /// Right multiplication by one generator, with free reduction.
  Word times(Generator g) const {
    if (g.index < 1 || g.index > rank()) {
      throw std::out_of_range("generator a" + std::to_string(g.index) +
                              " out of range for rank " +
                              std::to_string(rank()));
    }
    if (node_->depth > 0 && node_->code == -g.code()) return prefix();
    return Word(arena().child(node_, g.code()));
  }

  std::vector<Generator> letters() const {
    std::vector<Generator> out(node_->depth);
    const detail::WordNode* n = node_;
    for (std::size_t i = node_->depth; i > 0; --i) {
      out[i - 1] = Generator::from_code(n->code);
      n = n->parent;
    }
    return out;
  }

  /// Ancestor of length k (the length-k prefix).
  Word truncated(std::size_t k) const {
    const detail::WordNode* n = node_;
    while (n->depth > k) n = n->parent;
    return Word(n);
  }

  friend bool operator==(Word a, Word b) { return a.node_ == b.node_; }
  friend bool operator!=(Word a, Word b) { return a.node_ != b.node_; }

  std::string render() const;

  const detail::WordNode* node() const { return node_; }

 private:
  explicit Word(const detail::WordNode* node) : node_(node) {}
  const detail::WordArena& arena() const { return *node_->owner; }

  const detail::WordNode* node_ = nullptr;
};

/// Generator order a1 < a1^-1 < a2 < a2^-1 < ...
inline int generator_order_key(int code) {
  return code > 0 ? 2 * code : -2 * code + 1;
}

/// Longest common prefix of two words of the same rank.
inline Word common_prefix(Word u, Word v) {
  while (u.length() > v.length()) u = u.prefix();
  while (v.length() > u.length()) v = v.prefix();
  while (u != v) {
    u = u.prefix();
    v = v.prefix();
  }
  return u;
}

/// Shortlex order: length first, then letters from the left.
inline bool shortlex_less(Word a, Word b) {
  if (a == b) return false;
  if (a.length() != b.length()) return a.length() < b.length();
  const detail::WordNode* x = a.node();
  const detail::WordNode* y = b.node();
  while (x->parent != y->parent) {
    x = x->parent;
    y = y->parent;
  }
  return generator_order_key(x->code) < generator_order_key(y->code);
}

struct ShortlexLess {
  bool operator()(Word a, Word b) const { return shortlex_less(a, b); }
};

inline void require_same_rank(Word u, Word v) {
  if (u.rank() != v.rank()) throw RankMismatch(u.rank(), v.rank());
}

inline Word multiply(Word u, Word v) {
  require_same_rank(u, v);
  for (auto g : v.letters()) u = u.times(g);
  return u;
}

inline Word invert(Word u) {
  Word out = Word::identity(u.rank());
  for (Word w = u; !w.is_identity(); w = w.prefix()) {
    out = out.times(w.last().inverse());
  }
  return out;
}

/// Word-metric distance |u^-1 v| in the Cayley tree.
inline std::size_t distance(Word u, Word v) {
  require_same_rank(u, v);
  Word c = common_prefix(u, v);
  return u.length() + v.length() - 2 * c.length();
}

/// The unique Cayley-tree path from u to v, endpoints included.
inline std::vector<Word> geodesic(Word u, Word v) {
  require_same_rank(u, v);
  Word c = common_prefix(u, v);
  std::vector<Word> path;
  for (Word w = u; w != c; w = w.prefix()) path.push_back(w);
  path.push_back(c);
  std::vector<Word> tail;
  for (Word w = v; w != c; w = w.prefix()) tail.push_back(w);
  path.insert(path.end(), tail.rbegin(), tail.rend());
  return path;
}

/// All reduced words of length <= radius, in breadth-first (shortlex) order.
inline std::vector<Word> ball(int rank, int radius) {
  if (radius < 0) throw std::invalid_argument("ball radius must be >= 0");
  std::vector<Word> out{Word::identity(rank)};
  std::size_t begin = 0;
  for (int r = 0; r < radius; ++r) {
    const std::size_t end = out.size();
    for (std::size_t i = begin; i < end; ++i) {
      const Word w = out[i];
      for (int idx = 1; idx <= rank; ++idx) {
        for (int sign : {1, -1}) {
          const int code = sign * idx;
          if (!w.is_identity() && w.last().code() == -code) continue;
          out.push_back(w.times(Generator::from_code(code)));
        }
      }
    }
    begin = end;
  }
  return out;
}

/// Closed-form |ball(rank, radius)|.
inline std::uint64_t ball_size(int rank, int radius) {
  if (rank == 1) return 2 * static_cast<std::uint64_t>(radius) + 1;
  std::uint64_t total = 1;
  std::uint64_t sphere = 2 * static_cast<std::uint64_t>(rank);
  for (int r = 1; r <= radius; ++r) {
    total += sphere;
    sphere *= 2 * static_cast<std::uint64_t>(rank) - 1;
  }
  return total;
}

/// Positively oriented Cayley edge [base, base * a_gen].
struct CayleyEdge {
  Word base;
  int gen = 1;

  Word head() const { return base.times(Generator{gen, 1}); }

  /// The edge joining u and v, which must be adjacent.
  static CayleyEdge between(Word u, Word v) {
    require_same_rank(u, v);
    if (v.length() == u.length() + 1 && v.prefix() == u) {
      const Generator g = v.last();
      return g.sign > 0 ? CayleyEdge{u, g.index} : CayleyEdge{v, g.index};
    }
    if (u.length() == v.length() + 1 && u.prefix() == v) {
      const Generator g = u.last();
      return g.sign > 0 ? CayleyEdge{v, g.index} : CayleyEdge{u, g.index};
    }
    throw std::invalid_argument("words " + u.render() + " and " + v.render() +
                                " are not adjacent");
  }

  friend bool operator==(const CayleyEdge& a, const CayleyEdge& b) {
    return a.base == b.base && a.gen == b.gen;
  }
};

inline std::string Word::render() const {
  if (is_identity()) return "e";
  std::string out;
  for (auto g : letters()) {
    if (!out.empty()) out += '*';
    out += 'a';
    out += std::to_string(g.index);
    if (g.sign < 0) out += "^-1";
  }
  return out;
}

inline std::ostream& operator<<(std::ostream& os, Word w) {
  return os << w.render();
}

/// Parses `e | term ("*" term)*`, term = `a INT ("^-1")?`, and reduces.
inline Word parse_word(std::string_view text, int rank) {
  Word w = Word::identity(rank);
  std::size_t pos = 0;
  auto skip_space = [&] {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
  };
  if (text == "e") return w;
  if (text.empty()) throw WordParseError("empty word", 0);
  while (true) {
    if (pos >= text.size() || text[pos] != 'a') {
      throw WordParseError("expected 'a'", pos);
    }
    ++pos;
    const std::size_t digits = pos;
    if (pos >= text.size() || text[pos] < '1' || text[pos] > '9') {
      throw WordParseError("expected generator index", pos);
    }
    long index = 0;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
      index = index * 10 + (text[pos] - '0');
      if (index > 1'000'000) throw WordParseError("index too large", digits);
      ++pos;
    }
    int sign = 1;
    if (text.substr(pos, 3) == "^-1") {
      sign = -1;
      pos += 3;
    }
    if (index > rank) {
      throw WordParseError("generator a" + std::to_string(index) +
                               " out of range 1.." + std::to_string(rank),
                           digits);
    }
    w = w.times(Generator{static_cast<int>(index), sign});
    skip_space();
    if (pos == text.size()) return w;
    if (text[pos] != '*') throw WordParseError("expected '*'", pos);
    ++pos;
    skip_space();
  }
}

}  // namespace wreath

template <>
struct std::hash<wreath::Word> {
  std::size_t operator()(wreath::Word w) const noexcept {
    return static_cast<std::size_t>(w.hash());
  }
};
