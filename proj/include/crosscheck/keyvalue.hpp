#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace crosscheck::kv {

// Line-oriented key-value tree:
//
//   # comment
//   key value tokens...
//   key {
//     nested ...
//   }
//
// Keys repeat freely; values are whitespace-separated tokens with double
// quotes for strings containing spaces.
struct Node {
    std::string key;
    std::vector<std::string> values;
    std::vector<Node> children;
    int line = 0;

    const Node* child(const std::string& key) const;
    std::vector<const Node*> all(const std::string& key) const;

    // Leaf accessors; `at` variants throw FormatError naming the key.
    std::optional<std::string> get(const std::string& key) const;
    std::string at(const std::string& key) const;
    double at_double(const std::string& key) const;
    std::optional<double> get_double(const std::string& key) const;
    long at_int(const std::string& key) const;
    std::optional<long> get_int(const std::string& key) const;

    double value_double(size_t index = 0) const;
    std::string joined_values() const;
};

class FormatError : public std::runtime_error {
public:
    FormatError(const std::string& msg, int line)
        : std::runtime_error(msg + " (line " + std::to_string(line) + ")"),
          line(line) {}
    int line;
};

Node parse(const std::string& text);
Node parse_file(const std::string& path);

}  // namespace crosscheck::kv
