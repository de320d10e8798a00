#include "crosscheck/keyvalue.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace crosscheck::kv {

const Node* Node::child(const std::string& key) const {
    for (const Node& n : children)
        if (n.key == key) return &n;
    return nullptr;
}

std::vector<const Node*> Node::all(const std::string& key) const {
    std::vector<const Node*> out;
    for (const Node& n : children)
        if (n.key == key) out.push_back(&n);
    return out;
}

std::optional<std::string> Node::get(const std::string& key) const {
    const Node* n = child(key);
    if (!n || n->values.empty()) return std::nullopt;
    return n->values[0];
}

std::string Node::at(const std::string& key) const {
    auto v = get(key);
    if (!v) throw FormatError("missing required key '" + key + "' in '" +
                              (this->key.empty() ? "file" : this->key) + "'",
                              line);
    return *v;
}

static double parse_double(const std::string& s, const std::string& key,
                           int line) {
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0')
        throw FormatError("key '" + key + "': expected a number, got '" + s + "'",
                          line);
    return v;
}

double Node::at_double(const std::string& key) const {
    return parse_double(at(key), key, line);
}

std::optional<double> Node::get_double(const std::string& key) const {
    auto v = get(key);
    if (!v) return std::nullopt;
    return parse_double(*v, key, line);
}

long Node::at_int(const std::string& key) const {
    double d = at_double(key);
    long l = static_cast<long>(d);
    if (static_cast<double>(l) != d)
        throw FormatError("key '" + key + "': expected an integer", line);
    return l;
}

std::optional<long> Node::get_int(const std::string& key) const {
    auto v = get_double(key);
    if (!v) return std::nullopt;
    long l = static_cast<long>(*v);
    if (static_cast<double>(l) != *v)
        throw FormatError("key '" + key + "': expected an integer", line);
    return l;
}

double Node::value_double(size_t index) const {
    if (index >= values.size())
        throw FormatError("key '" + key + "': missing value " +
                          std::to_string(index), line);
    return parse_double(values[index], key, line);
}

std::string Node::joined_values() const {
    std::string out;
    for (size_t i = 0; i < values.size(); ++i) {
        if (i) out += ' ';
        out += values[i];
    }
    return out;
}

namespace {

std::vector<std::string> tokenize(const std::string& line, int lineno) {
    std::vector<std::string> out;
    size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        if (i >= line.size() || line[i] == '#') break;
        if (line[i] == '"') {
            size_t close = line.find('"', i + 1);
            if (close == std::string::npos)
                throw FormatError("unterminated string", lineno);
            out.push_back(line.substr(i + 1, close - i - 1));
            i = close + 1;
        } else {
            size_t start = i;
            while (i < line.size() && line[i] != ' ' && line[i] != '\t' &&
                   line[i] != '#')
                ++i;
            out.push_back(line.substr(start, i - start));
        }
    }
    return out;
}

}  // namespace

Node parse(const std::string& text) {
    Node root;
    root.key = "";
    std::vector<Node*> stack{&root};
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::vector<std::string> toks = tokenize(line, lineno);
        if (toks.empty()) continue;
        if (toks.size() == 1 && toks[0] == "}") {
            if (stack.size() == 1)
                throw FormatError("unmatched '}'", lineno);
            stack.pop_back();
            continue;
        }
        bool open = !toks.empty() && toks.back() == "{";
        if (open) toks.pop_back();
        if (toks.empty()) throw FormatError("'{' needs a key", lineno);
        Node n;
        n.key = toks[0];
        n.values.assign(toks.begin() + 1, toks.end());
        n.line = lineno;
        stack.back()->children.push_back(std::move(n));
        if (open) stack.push_back(&stack.back()->children.back());
    }
    if (stack.size() != 1)
        throw FormatError("unclosed '{' block", lineno);
    return root;
}

Node parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return parse(ss.str());
    } catch (const FormatError& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

}  // namespace crosscheck::kv
