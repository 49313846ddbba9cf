#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ramcast/random.hpp"

namespace ramcast::gf2 {

inline constexpr int kMaxGenerationSize = 64;

// Bit i holds the coefficient of packet i of the generation.
using CoefficientVector = std::uint64_t;

constexpr CoefficientVector low_mask(int bits) {
  return bits >= 64 ? ~CoefficientVector{0} : (CoefficientVector{1} << bits) - 1;
}

/// K x j binary matrix stored column-major: column c is the coefficient
/// vector of the c-th received coded packet.
class BinaryMatrix {
 public:
  explicit BinaryMatrix(int rows);
  BinaryMatrix(int rows, std::vector<CoefficientVector> columns);

  static BinaryMatrix identity(int K);

  int rows() const { return rows_; }
  int cols() const { return static_cast<int>(columns_.size()); }
  CoefficientVector column(int c) const { return columns_.at(static_cast<std::size_t>(c)); }
  const std::vector<CoefficientVector>& columns() const { return columns_; }
  bool bit(int row, int col) const { return (column(col) >> row) & 1U; }

  void append_column(CoefficientVector column);

 private:
  int rows_;
  std::vector<CoefficientVector> columns_;
};

/// Span of the vectors inserted so far, kept as an echelon basis keyed by
/// leading bit.
class SubspaceBasis {
 public:
  // Returns true when `v` was outside the span (the rank grew).
  bool insert(CoefficientVector v);
  bool contains(CoefficientVector v) const;
  int rank() const { return rank_; }
  void clear();

 private:
  CoefficientVector reduce(CoefficientVector v) const;

  CoefficientVector pivots_[64] = {};
  int rank_ = 0;
};

int rank(const BinaryMatrix& m);
bool is_innovative(const BinaryMatrix& m, CoefficientVector col);

/// F_K(j): probability that a uniformly random K x j binary matrix has rank
/// K, i.e. that j received coded packets suffice to decode.
double rank_cdf(int K, long long j);
// f_K(j) = F_K(j) - F_K(j - 1).
double rank_pmf(int K, long long j);

struct RankDistribution {
  int K = 1;
  std::vector<double> cdf;  // cdf[j] = F_K(j), j = 0 .. tail_cutoff
  std::vector<double> pmf;
  double expected_n = 0.0;
  long long tail_cutoff = 0;

  double overhead() const { return expected_n / K; }
};

RankDistribution rank_distribution(int K, long long max_j);

/// E[N], the mean number of received coded packets needed to decode a
/// generation of size K. The series sum_j (1 - F_K(j)) is cut off once its
/// term falls below `tol` and the remainder is closed with a geometric tail
/// of ratio 1/2 (exact for K = 1).
double expected_decode_count(int K, double tol = 1e-12);

/// Fixed-length bit string. Payload bits never influence timing; packets are
/// only carried around in encode/decode round trips.
class Packet {
 public:
  Packet() = default;
  explicit Packet(std::size_t bits);
  static Packet from_bits(std::string_view bits);

  std::size_t size() const { return bits_; }
  bool bit(std::size_t i) const;
  void set(std::size_t i, bool value);
  Packet& operator^=(const Packet& other);
  std::string to_bits() const;

  bool operator==(const Packet&) const = default;

 private:
  std::size_t bits_ = 0;
  std::vector<std::uint64_t> words_;
};

struct CodedPacket {
  CoefficientVector coefficients = 0;
  Packet payload;
};

class CodingError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Fair coin per coefficient; the all-zero vector is allowed.
CoefficientVector random_coefficients(int K, Rng& rng);

/// XOR of the packets selected by `coefficients`. Throws CodingError on
/// mismatched packet lengths or an empty generation.
CodedPacket encode(std::span<const Packet> generation, CoefficientVector coefficients);
CodedPacket encode(std::span<const Packet> generation, Rng& rng);

/// Recovers the K source packets from received coefficient columns and their
/// payloads by Gauss-Jordan elimination. Throws CodingError if the matrix has
/// rank below K or the payload count does not match.
std::vector<Packet> decode(const BinaryMatrix& coefficients, std::span<const Packet> payloads);

}  // namespace ramcast::gf2
