#include "symdyn/vertex.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "symdyn/error.hpp"

namespace symdyn {

VertexId::VertexId(std::initializer_list<std::int64_t> coords) {
  if (coords.size() > kMaxCoords) throw InvalidArgument("vertex has too many coordinates");
  arity_ = static_cast<std::uint8_t>(coords.size());
  std::copy(coords.begin(), coords.end(), coords_.begin());
}

VertexId VertexId::from_span(std::span<const std::int64_t> coords) {
  if (coords.size() > kMaxCoords) throw InvalidArgument("vertex has too many coordinates");
  VertexId v;
  v.arity_ = static_cast<std::uint8_t>(coords.size());
  std::copy(coords.begin(), coords.end(), v.coords_.begin());
  return v;
}

VertexId VertexId::appended(std::int64_t c) const {
  if (arity_ >= kMaxCoords) throw InvalidArgument("vertex has too many coordinates");
  VertexId v = *this;
  v.coords_[v.arity_++] = c;
  return v;
}

VertexId VertexId::truncated() const {
  VertexId v = *this;
  if (v.arity_ > 0) v.coords_[--v.arity_] = 0;
  return v;
}

VertexId VertexId::with(std::size_t i, std::int64_t c) const {
  VertexId v = *this;
  v.coords_[i] = c;
  return v;
}

std::string VertexId::to_string() const {
  if (arity_ == 1) return std::to_string(coords_[0]);
  std::string s = "(";
  for (std::size_t i = 0; i < arity_; ++i) {
    if (i) s += ',';
    s += std::to_string(coords_[i]);
  }
  return s + ")";
}

std::size_t VertexHash::operator()(const VertexId& v) const noexcept {
  // splitmix-style mixing per coordinate
  std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ v.arity();
  for (std::size_t i = 0; i < v.arity(); ++i) {
    std::uint64_t x = static_cast<std::uint64_t>(v[i]) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    h ^= x ^ (x >> 31);
  }
  return static_cast<std::size_t>(h);
}

void canonicalize(VertexSet& s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
}

VertexSet make_set(std::vector<VertexId> v) {
  canonicalize(v);
  return v;
}

VertexSet set_union(const VertexSet& a, const VertexSet& b) {
  VertexSet out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

VertexSet set_difference(const VertexSet& a, const VertexSet& b) {
  VertexSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool is_subset(const VertexSet& a, const VertexSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

bool contains(const VertexSet& s, const VertexId& v) {
  return std::binary_search(s.begin(), s.end(), v);
}

std::string to_string(const VertexSet& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ' ';
    out += s[i].to_string();
  }
  return out + "}";
}

VertexId parse_vertex(const std::string& text) {
  std::vector<std::int64_t> coords;
  std::size_t i = 0;
  auto skip = [&] {
    while (i < text.size() && (text[i] == ' ' || text[i] == '(' || text[i] == ')' || text[i] == ',')) ++i;
  };
  skip();
  while (i < text.size()) {
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data() + i, text.data() + text.size(), value);
    if (ec != std::errc()) throw InvalidArgument("cannot parse vertex '" + text + "'");
    coords.push_back(value);
    i = static_cast<std::size_t>(ptr - text.data());
    if (i < text.size() && text[i] != ',' && text[i] != ')' && text[i] != ' ')
      throw InvalidArgument("cannot parse vertex '" + text + "'");
    skip();
  }
  if (coords.empty()) throw InvalidArgument("empty vertex '" + text + "'");
  return VertexId::from_span(coords);
}

}  // namespace symdyn
