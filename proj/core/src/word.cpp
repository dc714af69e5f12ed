#include "cuntz/word.hpp"

#include <algorithm>
#include <cctype>

#include "cuntz/error.hpp"

namespace cuntz {

Word Word::parse(std::string_view text)
{
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front())))
        text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back())))
        text.remove_suffix(1);
    if (text.empty() || text == "-" || text == "()")
        return {};

    std::vector<Letter> letters;
    if (text.find('.') != std::string_view::npos) {
        Letter current = 0;
        bool have_digit = false;
        for (char ch : text) {
            if (ch == '.') {
                if (!have_digit)
                    throw InputError("malformed word '" + std::string(text) + "'");
                letters.push_back(current);
                current = 0;
                have_digit = false;
            } else if (std::isdigit(static_cast<unsigned char>(ch))) {
                current = current * 10 + (ch - '0');
                have_digit = true;
            } else {
                throw InputError("malformed word '" + std::string(text) + "'");
            }
        }
        if (!have_digit)
            throw InputError("malformed word '" + std::string(text) + "'");
        letters.push_back(current);
    } else {
        for (char ch : text) {
            if (!std::isdigit(static_cast<unsigned char>(ch)))
                throw InputError("malformed word '" + std::string(text) + "'");
            letters.push_back(ch - '0');
        }
    }
    return Word(std::move(letters));
}

Word Word::appended(Letter letter) const
{
    Word out = *this;
    out.letters_.push_back(letter);
    return out;
}

Word Word::suffix(std::size_t length) const
{
    length = std::min(length, size());
    return Word(std::vector<Letter>(letters_.end() - static_cast<std::ptrdiff_t>(length), letters_.end()));
}

Word Word::prefix(std::size_t length) const
{
    length = std::min(length, size());
    return Word(std::vector<Letter>(letters_.begin(), letters_.begin() + static_cast<std::ptrdiff_t>(length)));
}

bool Word::ends_with(const Word& tail) const
{
    return tail.size() <= size() && std::equal(tail.letters_.rbegin(), tail.letters_.rend(), letters_.rbegin());
}

Letter Word::max_letter() const
{
    return letters_.empty() ? -1 : *std::max_element(letters_.begin(), letters_.end());
}

std::string Word::to_string() const
{
    std::string out;
    const bool dotted = max_letter() >= 10;
    for (std::size_t i = 0; i < letters_.size(); ++i) {
        if (dotted && i)
            out += '.';
        out += std::to_string(letters_[i]);
    }
    return out;
}

std::string Word::display() const { return empty() ? "()" : to_string(); }

Word operator+(const Word& a, const Word& b)
{
    Word out = a;
    out.letters_.insert(out.letters_.end(), b.letters_.begin(), b.letters_.end());
    return out;
}

bool LengthLexLess::operator()(const Word& a, const Word& b) const
{
    if (a.size() != b.size())
        return a.size() < b.size();
    return a.letters() < b.letters();
}

bool is_irreducible(const Word& w)
{
    const std::size_t n = w.size();
    if (n == 0)
        return false;
    for (std::size_t period = 1; period < n; ++period) {
        if (n % period != 0)
            continue;
        bool repeats = true;
        for (std::size_t i = period; i < n && repeats; ++i)
            repeats = w[i] == w[i - period];
        if (repeats)
            return false;
    }
    return true;
}

void for_each_word(std::size_t alphabet, std::size_t max_length, const std::function<void(const Word&)>& visit)
{
    std::vector<Word> layer{Word{}};
    visit(layer.front());
    for (std::size_t len = 1; len <= max_length && alphabet > 0; ++len) {
        std::vector<Word> next;
        next.reserve(layer.size() * alphabet);
        for (const auto& w : layer)
            for (std::size_t letter = 0; letter < alphabet; ++letter)
                next.push_back(w.appended(static_cast<Letter>(letter)));
        for (const auto& w : next)
            visit(w);
        layer = std::move(next);
    }
}

std::vector<Word> enumerate_omega_beta(std::size_t alphabet, const Word& tail, std::size_t max_length)
{
    if (!is_irreducible(tail))
        throw PreconditionError("word '" + tail.display() +
                                "' is not irreducible (empty, or a power u^k with k >= 2)");
    if (tail.max_letter() >= static_cast<Letter>(alphabet))
        throw PreconditionError("word '" + tail.display() + "' uses letters outside the alphabet");
    std::vector<Word> out;
    for_each_word(alphabet, max_length, [&](const Word& w) {
        if (!w.ends_with(tail))
            out.push_back(w);
    });
    return out;
}

} // namespace cuntz
