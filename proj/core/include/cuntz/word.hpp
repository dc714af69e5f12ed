#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace cuntz {

using Letter = int;

/// Finite word over {0, ..., M-1}; the empty word is allowed.
///
/// Letters are applied left to right along the walk: for w = w1 w2 ... wn the
/// spectral point moves c -> g_{w1}(c) -> g_{w2}(g_{w1}(c)) -> ...
class Word {
public:
    Word() = default;
    explicit Word(std::vector<Letter> letters) : letters_(std::move(letters)) {}
    Word(std::initializer_list<Letter> letters) : letters_(letters) {}

    /// Digits ("301"), dot separated letters ("10.3") or "" / "-" for the empty word.
    static Word parse(std::string_view text);

    std::size_t size() const { return letters_.size(); }
    bool empty() const { return letters_.empty(); }
    Letter operator[](std::size_t i) const { return letters_[i]; }
    const std::vector<Letter>& letters() const { return letters_; }
    auto begin() const { return letters_.begin(); }
    auto end() const { return letters_.end(); }

    Word appended(Letter letter) const;
    Word suffix(std::size_t length) const;
    Word prefix(std::size_t length) const;
    bool ends_with(const Word& tail) const;
    Letter max_letter() const;

    /// Digit string when every letter is < 10, dot separated otherwise; "" when empty.
    std::string to_string() const;
    /// Like to_string() but renders the empty word as "()".
    std::string display() const;

    friend Word operator+(const Word& a, const Word& b);
    friend bool operator==(const Word&, const Word&) = default;

private:
    std::vector<Letter> letters_;
};

/// Shorter words first, lexicographic within a length.
struct LengthLexLess {
    bool operator()(const Word& a, const Word& b) const;
};

/// True when the word is nonempty and not a proper power u^k, k >= 2.
bool is_irreducible(const Word& w);

/// Visits all words of length <= max_length over an alphabet of the given size in
/// length-lex order, starting with the empty word.
void for_each_word(std::size_t alphabet, std::size_t max_length, const std::function<void(const Word&)>& visit);

/// All words of length <= max_length not ending in `tail`, length-lex ordered.
std::vector<Word> enumerate_omega_beta(std::size_t alphabet, const Word& tail, std::size_t max_length);

} // namespace cuntz
