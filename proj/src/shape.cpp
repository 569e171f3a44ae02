#include "mhsos/shape.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace mhsos {

Shape::Shape(std::vector<Block> blocks) : blocks_(std::move(blocks)) {
  if (blocks_.empty()) throw std::invalid_argument("shape needs at least one block");
  offsets_.reserve(blocks_.size() + 1);
  offsets_.push_back(0);
  for (const auto& b : blocks_) {
    if (b.dim < 1) throw std::invalid_argument("block dimension must be >= 1");
    if (b.degree < 0) throw std::invalid_argument("block degree must be >= 0");
    offsets_.push_back(offsets_.back() + static_cast<std::size_t>(b.dim));
  }
}

Shape Shape::from_lists(std::span<const int> dims, std::span<const int> degrees) {
  if (dims.size() != degrees.size()) {
    throw std::invalid_argument("N and K must have the same number of blocks");
  }
  std::vector<Block> blocks;
  for (std::size_t i = 0; i < dims.size(); ++i) blocks.push_back({dims[i], degrees[i]});
  return Shape(std::move(blocks));
}

std::vector<int> Shape::dims() const {
  std::vector<int> out;
  for (const auto& b : blocks_) out.push_back(b.dim);
  return out;
}

std::vector<int> Shape::degrees() const {
  std::vector<int> out;
  for (const auto& b : blocks_) out.push_back(b.degree);
  return out;
}

int Shape::max_dim() const {
  int m = 0;
  for (const auto& b : blocks_) m = std::max(m, b.dim);
  return m;
}

std::uint64_t Shape::dim_P() const {
  std::uint64_t d = 1;
  for (const auto& b : blocks_) {
    std::uint64_t c = binomial(b.dim + b.degree - 1, b.degree);
    if (c != 0 && d > std::numeric_limits<std::uint64_t>::max() / c) {
      throw std::overflow_error("dim P overflows 64 bits");
    }
    d *= c;
  }
  return d;
}

bool Shape::all_even() const {
  return std::all_of(blocks_.begin(), blocks_.end(), [](const Block& b) { return b.degree % 2 == 0; });
}

bool Shape::same_dims(const Shape& other) const {
  if (num_blocks() != other.num_blocks()) return false;
  for (std::size_t i = 0; i < num_blocks(); ++i) {
    if (blocks_[i].dim != other.blocks_[i].dim) return false;
  }
  return true;
}

Shape Shape::with_degrees(std::span<const int> degrees) const {
  if (degrees.size() != blocks_.size()) throw std::invalid_argument("degree list has wrong block count");
  std::vector<Block> blocks = blocks_;
  for (std::size_t i = 0; i < blocks.size(); ++i) blocks[i].degree = degrees[i];
  return Shape(std::move(blocks));
}

Shape Shape::half() const {
  std::vector<int> deg;
  for (const auto& b : blocks_) {
    if (b.degree % 2 != 0) throw std::domain_error("half shape requires even degrees, got " + to_string());
    deg.push_back(b.degree / 2);
  }
  return with_degrees(deg);
}

std::string Shape::to_string() const {
  std::ostringstream os;
  os << "N=";
  for (std::size_t i = 0; i < blocks_.size(); ++i) os << (i ? "," : "") << blocks_[i].dim;
  os << " K=";
  for (std::size_t i = 0; i < blocks_.size(); ++i) os << (i ? "," : "") << blocks_[i].degree;
  return os.str();
}

namespace {

std::vector<int> parse_int_list(std::string_view s, std::string_view what) {
  std::vector<int> out;
  while (!s.empty()) {
    auto comma = s.find(',');
    std::string_view item = s.substr(0, comma);
    int v = 0;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (ec != std::errc() || ptr != item.data() + item.size() || item.empty()) {
      throw std::invalid_argument("malformed " + std::string(what) + " list entry '" + std::string(item) + "'");
    }
    out.push_back(v);
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

}  // namespace

Shape parse_shape(std::string_view text) {
  std::string cleaned;
  for (char c : text) {
    if (c == ';' || c == '\t') c = ' ';
    if (c != '(' && c != ')') cleaned.push_back(c);
  }
  std::istringstream is(cleaned);
  std::string token;
  std::vector<int> dims, degrees;
  bool have_n = false, have_k = false;
  while (is >> token) {
    if (token.rfind("N=", 0) == 0) {
      dims = parse_int_list(std::string_view(token).substr(2), "N");
      have_n = true;
    } else if (token.rfind("K=", 0) == 0) {
      degrees = parse_int_list(std::string_view(token).substr(2), "K");
      have_k = true;
    } else {
      throw std::invalid_argument("unexpected token '" + token + "' in shape literal");
    }
  }
  if (!have_n || !have_k) throw std::invalid_argument("shape literal needs both N=... and K=...");
  return Shape::from_lists(dims, degrees);
}

std::uint64_t binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (std::int64_t i = 1; i <= k; ++i) {
    r = r * static_cast<unsigned __int128>(n - k + i) / static_cast<unsigned __int128>(i);
    if (r > std::numeric_limits<std::uint64_t>::max()) throw std::overflow_error("binomial overflows 64 bits");
  }
  return static_cast<std::uint64_t>(r);
}

}  // namespace mhsos
