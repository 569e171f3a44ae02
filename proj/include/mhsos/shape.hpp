#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mhsos {

/// One block of variables: `dim` variables, homogeneous of total degree `degree`.
struct Block {
  int dim = 1;
  int degree = 0;
  friend bool operator==(const Block&, const Block&) = default;
};

/// The pair (N, K): block dimensions and blockwise degrees.
///
/// Degrees are stored as full degrees (the "2k_i"). Odd degrees are accepted so the
/// polynomial algebra can form products such as (x1+x2)(x1-x2); everything that needs the
/// product-of-spheres machinery checks `all_even()` itself.
class Shape {
 public:
  Shape() = default;
  explicit Shape(std::vector<Block> blocks);

  static Shape from_lists(std::span<const int> dims, std::span<const int> degrees);

  std::size_t num_blocks() const { return blocks_.size(); }
  std::size_t num_vars() const { return offsets_.empty() ? 0 : offsets_.back(); }
  const Block& block(std::size_t i) const { return blocks_.at(i); }
  std::span<const Block> blocks() const { return blocks_; }

  /// Index of the first variable of block i; offset(num_blocks()) == num_vars().
  std::size_t offset(std::size_t i) const { return offsets_.at(i); }

  std::vector<int> dims() const;
  std::vector<int> degrees() const;
  int max_dim() const;

  /// dim P_{N,K} = prod C(n_i + d_i - 1, d_i).
  std::uint64_t dim_P() const;

  bool all_even() const;
  bool same_dims(const Shape& other) const;

  /// Same block dimensions, new degrees.
  Shape with_degrees(std::span<const int> degrees) const;
  /// Degrees halved; throws std::domain_error on an odd degree.
  Shape half() const;

  /// "N=3,2 K=2,3"
  std::string to_string() const;

  friend bool operator==(const Shape& a, const Shape& b) { return a.blocks_ == b.blocks_; }

 private:
  std::vector<Block> blocks_;
  std::vector<std::size_t> offsets_;
};

/// Parses the literal "N=3,2 K=2,3" (whitespace or ';' between the two parts).
Shape parse_shape(std::string_view text);

/// Exact C(n, k) with overflow check; 0 when k < 0 or k > n.
std::uint64_t binomial(std::int64_t n, std::int64_t k);

}  // namespace mhsos
