#include "ramcast/gf2.hpp"

#include <bit>
#include <cmath>

#include <fmt/format.h>

namespace ramcast::gf2 {
namespace {

void check_generation_size(int K) {
  if (K < 1 || K > kMaxGenerationSize) {
    throw std::invalid_argument(
        fmt::format("generation size K = {} must lie in [1, {}]", K, kMaxGenerationSize));
  }
}

}  // namespace

BinaryMatrix::BinaryMatrix(int rows) : rows_(rows) { check_generation_size(rows); }

BinaryMatrix::BinaryMatrix(int rows, std::vector<CoefficientVector> columns)
    : rows_(rows), columns_(std::move(columns)) {
  check_generation_size(rows);
  for (auto c : columns_) {
    if ((c & ~low_mask(rows_)) != 0) {
      throw std::invalid_argument("column has bits set beyond the row count");
    }
  }
}

BinaryMatrix BinaryMatrix::identity(int K) {
  BinaryMatrix m(K);
  for (int i = 0; i < K; ++i) m.append_column(CoefficientVector{1} << i);
  return m;
}

void BinaryMatrix::append_column(CoefficientVector column) {
  if ((column & ~low_mask(rows_)) != 0) {
    throw std::invalid_argument("column has bits set beyond the row count");
  }
  columns_.push_back(column);
}

CoefficientVector SubspaceBasis::reduce(CoefficientVector v) const {
  while (v != 0) {
    const int lead = 63 - std::countl_zero(v);
    if (pivots_[lead] == 0) return v;
    v ^= pivots_[lead];
  }
  return 0;
}

bool SubspaceBasis::insert(CoefficientVector v) {
  v = reduce(v);
  if (v == 0) return false;
  pivots_[63 - std::countl_zero(v)] = v;
  ++rank_;
  return true;
}

bool SubspaceBasis::contains(CoefficientVector v) const { return reduce(v) == 0; }

void SubspaceBasis::clear() {
  for (auto& p : pivots_) p = 0;
  rank_ = 0;
}

int rank(const BinaryMatrix& m) {
  SubspaceBasis basis;
  for (auto c : m.columns()) basis.insert(c);
  return basis.rank();
}

bool is_innovative(const BinaryMatrix& m, CoefficientVector col) {
  if ((col & ~low_mask(m.rows())) != 0) {
    throw std::invalid_argument("column length does not match the matrix");
  }
  SubspaceBasis basis;
  for (auto c : m.columns()) basis.insert(c);
  return !basis.contains(col);
}

double rank_cdf(int K, long long j) {
  check_generation_size(K);
  if (j < K) return 0.0;
  double product = 1.0;
  for (int i = 0; i < K; ++i) {
    product *= 1.0 - std::ldexp(1.0, static_cast<int>(std::max<long long>(i - j, -1100)));
  }
  return product;
}

double rank_pmf(int K, long long j) { return rank_cdf(K, j) - rank_cdf(K, j - 1); }

RankDistribution rank_distribution(int K, long long max_j) {
  check_generation_size(K);
  if (max_j < 0) throw std::invalid_argument("max_j must be >= 0");
  RankDistribution dist;
  dist.K = K;
  dist.tail_cutoff = max_j;
  dist.cdf.resize(static_cast<std::size_t>(max_j) + 1);
  dist.pmf.resize(dist.cdf.size());
  for (long long j = 0; j <= max_j; ++j) {
    dist.cdf[static_cast<std::size_t>(j)] = rank_cdf(K, j);
    dist.pmf[static_cast<std::size_t>(j)] = rank_pmf(K, j);
  }
  dist.expected_n = expected_decode_count(K);
  return dist;
}

double expected_decode_count(int K, double tol) {
  check_generation_size(K);
  if (!(tol > 0.0 && tol < 1.0)) throw std::invalid_argument("tolerance must lie in (0, 1)");
  // E[N] = sum_{j >= 0} Pr(N > j) = sum_j (1 - F_K(j)).
  double total = 0.0;
  long long j = 0;
  double survival = 1.0;
  for (;; ++j) {
    survival = 1.0 - rank_cdf(K, j);
    total += survival;
    if (j >= K && survival < tol) break;
  }
  // 1 - F_K(j + 1) <= (1 - F_K(j)) / 2 asymptotically.
  return total + survival;
}

Packet::Packet(std::size_t bits) : bits_(bits), words_((bits + 63) / 64, 0) {}

Packet Packet::from_bits(std::string_view bits) {
  Packet p(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] != '0' && bits[i] != '1') {
      throw CodingError(fmt::format("'{}' is not a bit string", bits));
    }
    p.set(i, bits[i] == '1');
  }
  return p;
}

bool Packet::bit(std::size_t i) const { return (words_.at(i / 64) >> (i % 64)) & 1U; }

void Packet::set(std::size_t i, bool value) {
  const std::uint64_t mask = std::uint64_t{1} << (i % 64);
  auto& word = words_.at(i / 64);
  word = value ? (word | mask) : (word & ~mask);
}

Packet& Packet::operator^=(const Packet& other) {
  if (other.bits_ != bits_) {
    throw CodingError(fmt::format("packet lengths differ ({} vs {} bits)", bits_, other.bits_));
  }
  for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= other.words_[w];
  return *this;
}

std::string Packet::to_bits() const {
  std::string out(bits_, '0');
  for (std::size_t i = 0; i < bits_; ++i) out[i] = bit(i) ? '1' : '0';
  return out;
}

CoefficientVector random_coefficients(int K, Rng& rng) {
  check_generation_size(K);
  return rng() & low_mask(K);
}

CodedPacket encode(std::span<const Packet> generation, CoefficientVector coefficients) {
  if (generation.empty()) throw CodingError("cannot encode an empty generation");
  const int K = static_cast<int>(generation.size());
  check_generation_size(K);
  if ((coefficients & ~low_mask(K)) != 0) {
    throw CodingError("coefficient vector is longer than the generation");
  }
  CodedPacket coded{coefficients, Packet(generation.front().size())};
  for (int i = 0; i < K; ++i) {
    if (generation[i].size() != generation.front().size()) {
      throw CodingError(fmt::format("packet {} has {} bits, expected {}", i, generation[i].size(),
                                    generation.front().size()));
    }
    if ((coefficients >> i) & 1U) coded.payload ^= generation[i];
  }
  return coded;
}

CodedPacket encode(std::span<const Packet> generation, Rng& rng) {
  if (generation.empty()) throw CodingError("cannot encode an empty generation");
  return encode(generation, random_coefficients(static_cast<int>(generation.size()), rng));
}

std::vector<Packet> decode(const BinaryMatrix& coefficients, std::span<const Packet> payloads) {
  if (static_cast<std::size_t>(coefficients.cols()) != payloads.size()) {
    throw CodingError(fmt::format("{} coefficient columns but {} payloads", coefficients.cols(),
                                  payloads.size()));
  }
  const int K = coefficients.rows();

  struct Equation {
    CoefficientVector coefficients;
    Packet payload;
  };
  std::vector<Equation> equations;
  equations.reserve(payloads.size());
  for (int c = 0; c < coefficients.cols(); ++c) {
    equations.push_back({coefficients.column(c), payloads[static_cast<std::size_t>(c)]});
  }

  // Gauss-Jordan: after step b, equation b is the only one with bit b set.
  for (int b = 0; b < K; ++b) {
    std::size_t pivot = static_cast<std::size_t>(b);
    while (pivot < equations.size() && !((equations[pivot].coefficients >> b) & 1U)) ++pivot;
    if (pivot == equations.size()) {
      throw CodingError(fmt::format("coefficient matrix has rank {} < K = {}",
                                    rank(coefficients), K));
    }
    std::swap(equations[static_cast<std::size_t>(b)], equations[pivot]);
    const auto& row = equations[static_cast<std::size_t>(b)];
    for (std::size_t e = 0; e < equations.size(); ++e) {
      if (e != static_cast<std::size_t>(b) && ((equations[e].coefficients >> b) & 1U)) {
        equations[e].coefficients ^= row.coefficients;
        equations[e].payload ^= row.payload;
      }
    }
  }

  std::vector<Packet> packets;
  packets.reserve(static_cast<std::size_t>(K));
  for (int b = 0; b < K; ++b) packets.push_back(equations[static_cast<std::size_t>(b)].payload);
  return packets;
}

}  // namespace ramcast::gf2
