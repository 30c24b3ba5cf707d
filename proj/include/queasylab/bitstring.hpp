#pragma once

#include <cstdint>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace queasylab {

/// A finite sequence of bits, packed 64 per word. Bit i of the sequence is
/// stored at words()[i / 64], bit position (i % 64). Bit 0 is the first bit
/// of the written-out string, so "10" has bit 0 = 1, bit 1 = 0.
class BitString {
  public:
    BitString() = default;

    static BitString zeros(std::size_t n) {
        BitString b;
        b.len_ = n;
        b.words_.assign((n + 63) / 64, 0);
        return b;
    }

    /// Builds from a character string of '0'/'1'.
    static BitString from_string(std::string_view s) {
        BitString b;
        for (char c : s) {
            if (c == '0')
                b.push_back(false);
            else if (c == '1')
                b.push_back(true);
            else
                throw std::invalid_argument("BitString: expected only '0'/'1'");
        }
        return b;
    }

    /// Low `len` bits of `w`, in stream order (bit i of the string = bit i of w).
    static BitString from_word(std::uint64_t w, std::size_t len) {
        if (len > 64) throw std::invalid_argument("BitString::from_word: len > 64");
        BitString b;
        b.len_ = len;
        if (len > 0) b.words_.push_back(len == 64 ? w : (w & ((std::uint64_t{1} << len) - 1)));
        return b;
    }

    /// The length-n binary numeral of v, most significant digit first.
    /// from_value(5, 4) == "0101".
    static BitString from_value(std::uint64_t v, std::size_t n) {
        BitString b;
        for (std::size_t i = 0; i < n; ++i) b.push_back(((v >> (n - 1 - i)) & 1) != 0);
        return b;
    }

    std::size_t size() const { return len_; }
    bool empty() const { return len_ == 0; }

    bool operator[](std::size_t i) const {
        return ((words_[i >> 6] >> (i & 63)) & 1) != 0;
    }

    void push_back(bool bit) {
        if ((len_ & 63) == 0) words_.push_back(0);
        if (bit) words_[len_ >> 6] |= std::uint64_t{1} << (len_ & 63);
        ++len_;
    }

    void append(const BitString& other) {
        for (std::size_t i = 0; i < other.size(); ++i) push_back(other[i]);
    }

    void set(std::size_t i, bool bit) {
        if (bit)
            words_[i >> 6] |= std::uint64_t{1} << (i & 63);
        else
            words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
    }

    const std::uint64_t* words() const {
        static const std::uint64_t kEmpty = 0;
        return words_.empty() ? &kEmpty : words_.data();
    }

    std::string to_string() const {
        std::string s;
        s.reserve(len_);
        for (std::size_t i = 0; i < len_; ++i) s.push_back((*this)[i] ? '1' : '0');
        return s;
    }

    /// Value of the bits read as a binary numeral (bit 0 = most significant).
    /// Requires size() <= 64.
    std::uint64_t to_value() const {
        if (len_ > 64) throw std::invalid_argument("BitString::to_value: too long");
        std::uint64_t v = 0;
        for (std::size_t i = 0; i < len_; ++i) v = (v << 1) | ((*this)[i] ? 1 : 0);
        return v;
    }

    /// Hex form: bits padded on the right with zeros to a multiple of four,
    /// each group of four read most-significant-first. "00001111" -> "0f".
    std::string to_hex() const {
        static const char* digits = "0123456789abcdef";
        std::string s;
        for (std::size_t i = 0; i < len_; i += 4) {
            unsigned v = 0;
            for (std::size_t j = 0; j < 4; ++j) {
                v <<= 1;
                if (i + j < len_ && (*this)[i + j]) v |= 1;
            }
            s.push_back(digits[v]);
        }
        return s;
    }

    /// Inverse of to_hex given the original bit count. n defaults to 4*digits.
    static BitString from_hex(std::string_view hex, std::size_t n = SIZE_MAX) {
        if (n == SIZE_MAX) n = hex.size() * 4;
        if (n > hex.size() * 4) throw std::invalid_argument("BitString::from_hex: n too large");
        BitString b;
        for (std::size_t i = 0; i < n; ++i) {
            char c = hex[i / 4];
            unsigned v;
            if (c >= '0' && c <= '9')
                v = static_cast<unsigned>(c - '0');
            else if (c >= 'a' && c <= 'f')
                v = static_cast<unsigned>(c - 'a') + 10;
            else if (c >= 'A' && c <= 'F')
                v = static_cast<unsigned>(c - 'A') + 10;
            else
                throw std::invalid_argument("BitString::from_hex: bad digit");
            b.push_back(((v >> (3 - (i % 4))) & 1) != 0);
        }
        return b;
    }

    bool operator==(const BitString& o) const {
        if (len_ != o.len_) return false;
        for (std::size_t w = 0; w < words_.size(); ++w)
            if (words_[w] != o.words_[w]) return false;
        return true;
    }
    bool operator!=(const BitString& o) const { return !(*this == o); }

    /// Length-then-lexicographic order; the order every shortest-program
    /// search and enumeration in this project uses.
    bool length_lex_less(const BitString& o) const {
        if (len_ != o.len_) return len_ < o.len_;
        for (std::size_t i = 0; i < len_; ++i) {
            bool a = (*this)[i], b = o[i];
            if (a != b) return !a;
        }
        return false;
    }

  private:
    std::vector<std::uint64_t> words_;
    std::size_t len_ = 0;
};

}  // namespace queasylab
