#pragma once

#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "msdict/params.hpp"

#if defined(__BMI2__)
#include <immintrin.h>
#endif

namespace msdict {

// Word-access instrumentation. Every load or store of a first-level block
// charges the words it spans; the spare charges slot and queue probes.
struct ProbeCounter {
  std::uint64_t words = 0;
  std::uint64_t slot_probes = 0;
  std::uint64_t queue_probes = 0;
  std::uint64_t relocations = 0;

  void reset() { *this = ProbeCounter{}; }
  friend bool operator==(const ProbeCounter&, const ProbeCounter&) = default;
};

namespace bits {

inline constexpr std::uint64_t low_mask(unsigned len) {
  return len >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << len) - 1;
}

namespace detail {
consteval std::array<std::uint8_t, 2048> make_select_in_byte() {
  std::array<std::uint8_t, 2048> t{};
  for (unsigned byte = 0; byte < 256; ++byte) {
    for (unsigned k = 0; k < 8; ++k) {
      unsigned seen = 0;
      std::uint8_t pos = 8;
      for (unsigned i = 0; i < 8; ++i) {
        if ((byte >> i) & 1u) {
          if (seen == k) {
            pos = static_cast<std::uint8_t>(i);
            break;
          }
          ++seen;
        }
      }
      t[byte | (k << 8)] = pos;
    }
  }
  return t;
}
inline constexpr auto kSelectInByte = make_select_in_byte();
}  // namespace detail

// Position of the k-th (0-based) set bit of x; 64 when x has <= k ones.
inline unsigned select64(std::uint64_t x, unsigned k) {
  if (k >= static_cast<unsigned>(std::popcount(x))) return 64;
#if defined(__BMI2__)
  return static_cast<unsigned>(std::countr_zero(_pdep_u64(std::uint64_t{1} << k, x)));
#else
  constexpr std::uint64_t kOnes = 0x0101010101010101ULL;
  constexpr std::uint64_t kHigh = 0x8080808080808080ULL;
  std::uint64_t sums = x - ((x >> 1) & 0x5555555555555555ULL);
  sums = (sums & 0x3333333333333333ULL) + ((sums >> 2) & 0x3333333333333333ULL);
  sums = (sums + (sums >> 4)) & 0x0F0F0F0F0F0F0F0FULL;
  sums *= kOnes;
  const std::uint64_t k_step = std::uint64_t{k} * kOnes;
  const std::uint64_t geq = ((k_step | kHigh) - sums) & kHigh;
  const unsigned place = static_cast<unsigned>(std::popcount(geq)) * 8;
  const unsigned byte_rank = k - static_cast<unsigned>(((sums << 8) >> place) & 0xFF);
  return place + detail::kSelectInByte[((x >> place) & 0xFF) | (byte_rank << 8)];
#endif
}

}  // namespace bits

// A first-level block copied out of its arena. Operations run on the copy
// and write it back, so each one touches a bounded number of words.
struct Block {
  std::array<std::uint64_t, kMaxBlockWords + 1> w{};

  std::uint64_t get(std::size_t off, unsigned len) const {
    if (len == 0) return 0;
    const std::size_t i = off / 64;
    const unsigned s = off % 64;
    std::uint64_t v = w[i] >> s;
    if (s != 0 && s + len > 64) v |= w[i + 1] << (64 - s);
    return v & bits::low_mask(len);
  }

  void set(std::size_t off, unsigned len, std::uint64_t value) {
    if (len == 0) return;
    value &= bits::low_mask(len);
    const std::size_t i = off / 64;
    const unsigned s = off % 64;
    const std::uint64_t m = bits::low_mask(len);
    w[i] = (w[i] & ~(m << s)) | (value << s);
    if (s != 0 && s + len > 64) {
      const unsigned spill = s + len - 64;
      w[i + 1] = (w[i + 1] & ~bits::low_mask(spill)) | (value >> (64 - s));
    }
  }

  bool test(std::size_t off) const { return (w[off / 64] >> (off % 64)) & 1u; }

  // memmove over bit ranges.
  void move(std::size_t src, std::size_t dst, std::size_t len) {
    if (len == 0 || src == dst) return;
    if (dst > src) {
      std::size_t done = 0;
      while (done < len) {
        const unsigned chunk = static_cast<unsigned>(std::min<std::size_t>(64, len - done));
        const std::size_t at = len - done - chunk;
        set(dst + at, chunk, get(src + at, chunk));
        done += chunk;
      }
    } else {
      for (std::size_t at = 0; at < len; at += 64) {
        const unsigned chunk = static_cast<unsigned>(std::min<std::size_t>(64, len - at));
        set(dst + at, chunk, get(src + at, chunk));
      }
    }
  }

  void clear_range(std::size_t off, std::size_t len) {
    for (std::size_t at = 0; at < len; at += 64) {
      const unsigned chunk = static_cast<unsigned>(std::min<std::size_t>(64, len - at));
      set(off + at, chunk, 0);
    }
  }

  std::size_t popcount(std::size_t len) const {
    std::size_t c = 0;
    for (std::size_t i = 0; i * 64 < len; ++i) {
      const unsigned chunk = static_cast<unsigned>(std::min<std::size_t>(64, len - i * 64));
      c += static_cast<std::size_t>(std::popcount(w[i] & bits::low_mask(chunk)));
    }
    return c;
  }

  // Position of the k-th zero within the first len bits, or len.
  std::size_t select0(std::size_t len, std::size_t k) const {
    for (std::size_t i = 0; i * 64 < len; ++i) {
      const unsigned chunk = static_cast<unsigned>(std::min<std::size_t>(64, len - i * 64));
      const std::uint64_t zeros = ~w[i] & bits::low_mask(chunk);
      const auto c = static_cast<std::size_t>(std::popcount(zeros));
      if (k < c) return i * 64 + bits::select64(zeros, static_cast<unsigned>(k));
      k -= c;
    }
    return len;
  }

  friend bool operator==(const Block&, const Block&) = default;
};

// Flat bit-addressed storage for m equally sized blocks.
class BitArena {
 public:
  BitArena() = default;
  BitArena(std::size_t blocks, std::size_t stride_bits)
      : stride_(stride_bits), words_((blocks * stride_bits + 63) / 64 + 1, 0) {}

  std::size_t stride_bits() const { return stride_; }
  std::span<const std::uint64_t> words() const { return words_; }
  std::span<std::uint64_t> words() { return words_; }

  // Copies block i into a Block aligned at bit 0.
  Block load(std::size_t i, ProbeCounter* probes) const {
    Block b;
    const std::size_t off = i * stride_;
    const std::size_t first = off / 64;
    const unsigned s = off % 64;
    const std::size_t block_words = (stride_ + 63) / 64;
    for (std::size_t k = 0; k < block_words; ++k) {
      std::uint64_t v = words_[first + k] >> s;
      if (s != 0) v |= words_[first + k + 1] << (64 - s);
      b.w[k] = v;
    }
    if (stride_ % 64 != 0) b.w[block_words - 1] &= bits::low_mask(stride_ % 64);
    const std::size_t span_words = (s + stride_ + 63) / 64;
    if (probes != nullptr) probes->words += span_words;
    return b;
  }

  void store(std::size_t i, const Block& b, ProbeCounter* probes) {
    const std::size_t off = i * stride_;
    std::size_t done = 0;
    std::size_t k = 0;
    while (done < stride_) {
      const unsigned chunk = static_cast<unsigned>(std::min<std::size_t>(64, stride_ - done));
      write_bits(off + done, chunk, b.w[k++]);
      done += chunk;
    }
    if (probes != nullptr) probes->words += (off % 64 + stride_ + 63) / 64;
  }

 private:
  void write_bits(std::size_t off, unsigned len, std::uint64_t value) {
    const std::size_t i = off / 64;
    const unsigned s = off % 64;
    const std::uint64_t m = bits::low_mask(len);
    value &= m;
    words_[i] = (words_[i] & ~(m << s)) | (value << s);
    if (s != 0 && s + len > 64) {
      const unsigned spill = s + len - 64;
      words_[i + 1] = (words_[i + 1] & ~bits::low_mask(spill)) | (value >> (64 - s));
    }
  }

  std::size_t stride_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace msdict
