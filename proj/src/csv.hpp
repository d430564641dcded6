#pragma once

// Internal CSV helpers shared by the dataset and truth-table writers.

#include <array>
#include <charconv>
#include <cstddef>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace truthboost::csv {

/// Yields non-blank lines with trailing CR and surrounding blanks removed; tracks 1-based line numbers.
class LineReader {
public:
    explicit LineReader(std::istream &in) : in_(in) {}

    std::optional<std::string> next() {
        std::string line;
        while (std::getline(in_, line)) {
            ++line_;
            auto first = line.find_first_not_of(" \t\r");
            if (first == std::string::npos)
                continue;
            auto last = line.find_last_not_of(" \t\r");
            return line.substr(first, last - first + 1);
        }
        return std::nullopt;
    }

    std::size_t line_number() const noexcept { return line_; }

private:
    std::istream &in_;
    std::size_t line_ = 0;
};

inline std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        auto comma = line.find(',', start);
        auto field = line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
        while (!field.empty() && (field.front() == ' ' || field.front() == '\t'))
            field.remove_prefix(1);
        while (!field.empty() && (field.back() == ' ' || field.back() == '\t'))
            field.remove_suffix(1);
        fields.push_back(field);
        if (comma == std::string_view::npos)
            break;
        start = comma + 1;
    }
    return fields;
}

/// 17 significant digits: enough for an exact round trip of any double.
inline std::string format_double(double v) {
    std::array<char, 32> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
    return std::string(buf.data(), ptr);
}

}  // namespace truthboost::csv
