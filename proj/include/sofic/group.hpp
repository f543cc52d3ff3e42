#pragma once

// Concrete countable groups and their elements: Z, Z/nZ, S_n, direct
// products, and free groups as reduced words. Elements are self-describing
// values; equality of payloads is equality of elements.

#include <algorithm>
#include <cassert>
#include <compare>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace sofic {

class GroupElement {
public:
  // Free words store letters as signed 1-based generator indices:
  // +k is generator k, -k its inverse. Always kept reduced.
  struct Cyclic {
    std::int64_t r;
    std::int64_t n;
    auto operator<=>(const Cyclic&) const = default;
  };
  struct Word : std::vector<int> {  // distinct from Perm for the variant
    using std::vector<int>::vector;
  };
  using Perm = std::vector<int>;  // one-line images, 0-based
  using Tuple = std::vector<GroupElement>;
  using Payload = std::variant<std::int64_t, Cyclic, Perm, Word, Tuple>;

  GroupElement() : payload_(std::int64_t{0}) {}

  static GroupElement integer(std::int64_t k) { return GroupElement(Payload(k)); }
  static GroupElement residue(std::int64_t r, std::int64_t n) {
    if (n <= 0) throw std::invalid_argument("residue: modulus must be positive");
    return GroupElement(Payload(Cyclic{((r % n) + n) % n, n}));
  }
  static GroupElement permutation(Perm images) {
    Perm sorted = images;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < static_cast<int>(sorted.size()); ++i)
      if (sorted[i] != i) throw std::invalid_argument("permutation: not a bijection");
    return GroupElement(Payload(std::move(images)));
  }
  static GroupElement word(Word letters) {
    return GroupElement(Payload(reduce(std::move(letters))));
  }
  static GroupElement generator_word(int gen_index) {
    return word({gen_index + 1});
  }
  static GroupElement tuple(Tuple parts) { return GroupElement(Payload(std::move(parts))); }

  const Payload& payload() const { return payload_; }

  bool is_identity() const {
    return std::visit(
        [](const auto& p) -> bool {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, std::int64_t>) return p == 0;
          else if constexpr (std::is_same_v<T, Cyclic>) return p.r == 0;
          else if constexpr (std::is_same_v<T, Perm>) {
            for (int i = 0; i < static_cast<int>(p.size()); ++i)
              if (p[i] != i) return false;
            return true;
          } else if constexpr (std::is_same_v<T, Word>) return p.empty();
          else {
            for (const auto& q : p)
              if (!q.is_identity()) return false;
            return true;
          }
        },
        payload_);
  }

  GroupElement operator*(const GroupElement& o) const {
    if (payload_.index() != o.payload_.index())
      throw std::invalid_argument("group element kind mismatch in multiplication");
    switch (payload_.index()) {
      case 0:
        return integer(std::get<std::int64_t>(payload_) + std::get<std::int64_t>(o.payload_));
      case 1: {
        const auto& a = std::get<Cyclic>(payload_);
        const auto& b = std::get<Cyclic>(o.payload_);
        if (a.n != b.n) throw std::invalid_argument("cyclic modulus mismatch");
        return residue(a.r + b.r, a.n);
      }
      case 2: {
        const auto& a = std::get<Perm>(payload_);
        const auto& b = std::get<Perm>(o.payload_);
        if (a.size() != b.size()) throw std::invalid_argument("permutation size mismatch");
        Perm c(a.size());
        for (size_t i = 0; i < a.size(); ++i) c[i] = a[b[i]];  // (ab)(i) = a(b(i))
        return GroupElement(Payload(std::move(c)));
      }
      case 3: {
        Word w = std::get<Word>(payload_);
        const Word& v = std::get<Word>(o.payload_);
        w.insert(w.end(), v.begin(), v.end());
        return word(std::move(w));
      }
      default: {
        const auto& a = std::get<Tuple>(payload_);
        const auto& b = std::get<Tuple>(o.payload_);
        if (a.size() != b.size()) throw std::invalid_argument("tuple arity mismatch");
        Tuple c;
        c.reserve(a.size());
        for (size_t i = 0; i < a.size(); ++i) c.push_back(a[i] * b[i]);
        return tuple(std::move(c));
      }
    }
  }

  GroupElement inverse() const {
    return std::visit(
        [](const auto& p) -> GroupElement {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, std::int64_t>) return integer(-p);
          else if constexpr (std::is_same_v<T, Cyclic>) return residue(-p.r, p.n);
          else if constexpr (std::is_same_v<T, Perm>) {
            Perm inv(p.size());
            for (int i = 0; i < static_cast<int>(p.size()); ++i) inv[p[i]] = i;
            return GroupElement(Payload(std::move(inv)));
          } else if constexpr (std::is_same_v<T, Word>) {
            Word w(p.rbegin(), p.rend());
            for (int& l : w) l = -l;
            return GroupElement(Payload(std::move(w)));
          } else {
            Tuple c;
            c.reserve(p.size());
            for (const auto& q : p) c.push_back(q.inverse());
            return tuple(std::move(c));
          }
        },
        payload_);
  }

  friend bool operator==(const GroupElement& a, const GroupElement& b) {
    return a.payload_ == b.payload_;
  }
  friend bool operator<(const GroupElement& a, const GroupElement& b) {
    if (a.payload_.index() != b.payload_.index())
      return a.payload_.index() < b.payload_.index();
    return std::visit(
        [&](const auto& pa) -> bool {
          using T = std::decay_t<decltype(pa)>;
          const auto& pb = std::get<T>(b.payload_);
          if constexpr (std::is_same_v<T, Cyclic>)
            return std::tie(pa.n, pa.r) < std::tie(pb.n, pb.r);
          else
            return pa < pb;
        },
        a.payload_);
  }

  // Element strings: decimal integers for Z and cyclic residues, reduced
  // words like "ab^-1a" for free groups, comma-joined tuples for products,
  // bracketed one-line images for symmetric groups.
  std::string str() const {
    return std::visit(
        [](const auto& p) -> std::string {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, std::int64_t>) return std::to_string(p);
          else if constexpr (std::is_same_v<T, Cyclic>) return std::to_string(p.r);
          else if constexpr (std::is_same_v<T, Perm>) {
            std::string s = "[";
            for (size_t i = 0; i < p.size(); ++i) {
              if (i) s += ' ';
              s += std::to_string(p[i] + 1);
            }
            return s + "]";
          } else if constexpr (std::is_same_v<T, Word>) {
            if (p.empty()) return "e";
            std::string s;
            for (int l : p) {
              s += static_cast<char>('a' + std::abs(l) - 1);
              if (l < 0) s += "^-1";
            }
            return s;
          } else {
            std::string s;
            for (size_t i = 0; i < p.size(); ++i) {
              if (i) s += ',';
              s += p[i].str();
            }
            return s;
          }
        },
        payload_);
  }

private:
  explicit GroupElement(Payload p) : payload_(std::move(p)) {}

  static Word reduce(Word w) {
    Word out;
    for (int l : w) {
      if (l == 0) throw std::invalid_argument("free word letter 0");
      if (!out.empty() && out.back() == -l) out.pop_back();
      else out.push_back(l);
    }
    return out;
  }

  Payload payload_;
};

struct Group {
  enum class Kind { Integers, Cyclic, Symmetric, Free, Product };

  Kind kind = Kind::Integers;
  std::int64_t n = 0;  // modulus (Cyclic), letters (Symmetric), rank (Free)
  std::vector<Group> factors;

  static Group integers() { return {Kind::Integers, 0, {}}; }
  static Group cyclic(std::int64_t n) { return {Kind::Cyclic, n, {}}; }
  static Group symmetric(std::int64_t n) { return {Kind::Symmetric, n, {}}; }
  static Group free_group(std::int64_t rank) { return {Kind::Free, rank, {}}; }
  static Group product(std::vector<Group> fs) { return {Kind::Product, 0, std::move(fs)}; }

  GroupElement identity() const {
    switch (kind) {
      case Kind::Integers: return GroupElement::integer(0);
      case Kind::Cyclic: return GroupElement::residue(0, n);
      case Kind::Symmetric: {
        GroupElement::Perm id(static_cast<size_t>(n));
        std::iota(id.begin(), id.end(), 0);
        return GroupElement::permutation(std::move(id));
      }
      case Kind::Free: return GroupElement::word({});
      case Kind::Product: {
        GroupElement::Tuple t;
        for (const auto& f : factors) t.push_back(f.identity());
        return GroupElement::tuple(std::move(t));
      }
    }
    throw std::logic_error("unreachable");
  }

  std::vector<GroupElement> generators() const {
    switch (kind) {
      case Kind::Integers: return {GroupElement::integer(1)};
      case Kind::Cyclic: return {GroupElement::residue(1, n)};
      case Kind::Symmetric: {
        // adjacent transpositions
        std::vector<GroupElement> gens;
        for (std::int64_t i = 0; i + 1 < n; ++i) {
          GroupElement::Perm p(static_cast<size_t>(n));
          std::iota(p.begin(), p.end(), 0);
          std::swap(p[i], p[i + 1]);
          gens.push_back(GroupElement::permutation(std::move(p)));
        }
        return gens;
      }
      case Kind::Free: {
        std::vector<GroupElement> gens;
        for (std::int64_t i = 0; i < n; ++i) gens.push_back(GroupElement::generator_word(static_cast<int>(i)));
        return gens;
      }
      case Kind::Product: {
        std::vector<GroupElement> gens;
        for (size_t i = 0; i < factors.size(); ++i) {
          for (const auto& g : factors[i].generators()) {
            GroupElement::Tuple t;
            for (size_t j = 0; j < factors.size(); ++j)
              t.push_back(j == i ? g : factors[j].identity());
            gens.push_back(GroupElement::tuple(std::move(t)));
          }
        }
        return gens;
      }
    }
    throw std::logic_error("unreachable");
  }

  GroupElement parse_element(const std::string& s) const {
    switch (kind) {
      case Kind::Integers: return GroupElement::integer(std::stoll(s));
      case Kind::Cyclic: return GroupElement::residue(std::stoll(s), n);
      case Kind::Free: {
        if (s == "e") return GroupElement::word({});
        GroupElement::Word w;
        size_t i = 0;
        while (i < s.size()) {
          char c = s[i];
          if (c < 'a' || c >= 'a' + n) throw std::invalid_argument("bad free-word letter: " + s);
          int l = c - 'a' + 1;
          ++i;
          if (i + 2 < s.size() + 1 && s.compare(i, 3, "^-1") == 0) {
            l = -l;
            i += 3;
          }
          w.push_back(l);
        }
        return GroupElement::word(std::move(w));
      }
      case Kind::Symmetric: {
        if (s.empty() || s.front() != '[' || s.back() != ']')
          throw std::invalid_argument("bad permutation string: " + s);
        GroupElement::Perm p;
        std::istringstream in(s.substr(1, s.size() - 2));
        int v;
        while (in >> v) p.push_back(v - 1);
        return GroupElement::permutation(std::move(p));
      }
      case Kind::Product: {
        GroupElement::Tuple t;
        size_t pos = 0;
        for (size_t i = 0; i < factors.size(); ++i) {
          size_t comma = (i + 1 == factors.size()) ? s.size() : s.find(',', pos);
          if (comma == std::string::npos) throw std::invalid_argument("bad tuple string: " + s);
          t.push_back(factors[i].parse_element(s.substr(pos, comma - pos)));
          pos = comma + 1;
        }
        return GroupElement::tuple(std::move(t));
      }
    }
    throw std::logic_error("unreachable");
  }
};

}  // namespace sofic
