#ifndef TREELOGIC_BITVEC_HPP
#define TREELOGIC_BITVEC_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace treelogic {

// Fixed-size bit vector sized at construction. Used for node types over the
// Lean and for node sets during model checking.
class Bitvec {
public:
    Bitvec() = default;
    explicit Bitvec(std::size_t nbits)
        : nbits_(nbits), words_((nbits + 63) / 64, 0) {}

    std::size_t size() const { return nbits_; }

    bool get(std::size_t i) const {
        return (words_[i >> 6] >> (i & 63)) & 1u;
    }
    void set(std::size_t i, bool v = true) {
        if (v)
            words_[i >> 6] |= (uint64_t{1} << (i & 63));
        else
            words_[i >> 6] &= ~(uint64_t{1} << (i & 63));
    }

    void clear() {
        for (auto& w : words_) w = 0;
    }

    bool any() const {
        for (auto w : words_)
            if (w) return true;
        return false;
    }

    std::size_t count() const {
        std::size_t n = 0;
        for (auto w : words_) n += static_cast<std::size_t>(__builtin_popcountll(w));
        return n;
    }

    bool operator==(const Bitvec& o) const {
        return nbits_ == o.nbits_ && words_ == o.words_;
    }
    bool operator!=(const Bitvec& o) const { return !(*this == o); }

    // Lexicographic on words; used only for deterministic tie-breaking.
    bool operator<(const Bitvec& o) const {
        if (nbits_ != o.nbits_) return nbits_ < o.nbits_;
        return words_ < o.words_;
    }

    Bitvec& operator|=(const Bitvec& o) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
        return *this;
    }
    Bitvec& operator&=(const Bitvec& o) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
        return *this;
    }

    std::size_t hash() const {
        std::size_t h = nbits_;
        for (auto w : words_)
            h ^= std::hash<uint64_t>{}(w) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        return h;
    }

private:
    std::size_t nbits_ = 0;
    std::vector<uint64_t> words_;
};

struct BitvecHash {
    std::size_t operator()(const Bitvec& b) const { return b.hash(); }
};

} // namespace treelogic

#endif
