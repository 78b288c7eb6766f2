#pragma once

// Text format for instance bundles:
//
//   conflict-instance
//   version 1
//   n_vertices <n>
//   colour_universe_size <U>
//   lists
//   <v>: <c1> <c2> ...          (one line per vertex, ascending colours)
//   constraints <m>
//   <u> <v> <c_for_u> <c_for_v> (one line per constraint, u < v)
//   meta <k>
//   <key> <escaped value>
//   end
//
// Meta values escape backslash, newline and tab as \\, \n, \t.

#include "conflict/errors.hpp"
#include "conflict/instances.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace conflict {

namespace detail {

inline std::string escape_meta(const std::string & s)
{
    std::string out;
    for (char ch : s) {
        switch (ch) {
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        default: out += ch;
        }
    }
    return out;
}

inline std::string unescape_meta(const std::string & s, std::size_t line)
{
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] != '\\') {
            out += s[i];
            continue;
        }
        if (++i == s.size())
            throw ParseError(line, "dangling escape in meta value");
        switch (s[i]) {
        case '\\': out += '\\'; break;
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        default: throw ParseError(line, std::string("unknown escape \\") + s[i]);
        }
    }
    return out;
}

class LineReader {
  public:
    explicit LineReader(std::istream & in) : in_(in) {}

    std::string next(const char * what)
    {
        std::string text;
        if (!std::getline(in_, text))
            throw ParseError(line_ + 1, std::string("unexpected end of input, expected ") + what);
        ++line_;
        if (!text.empty() && text.back() == '\r')
            text.pop_back();
        return text;
    }

    std::size_t line() const { return line_; }

  private:
    std::istream & in_;
    std::size_t line_ = 0;
};

template <typename T>
T keyword_value(LineReader & r, const std::string & keyword)
{
    const auto text = r.next(keyword.c_str());
    std::istringstream fields(text);
    std::string word;
    T value{};
    if (!(fields >> word) || word != keyword)
        throw ParseError(r.line(), "expected '" + keyword + "'");
    if (!(fields >> value))
        throw ParseError(r.line(), "missing or malformed value for '" + keyword + "'");
    std::string rest;
    if (fields >> rest)
        throw ParseError(r.line(), "trailing text after '" + keyword + "'");
    return value;
}

} // namespace detail

inline void write_instance(std::ostream & out, const InstanceBundle & b)
{
    out << "conflict-instance\n";
    out << "version 1\n";
    out << "n_vertices " << b.graph.n_vertices() << '\n';
    out << "colour_universe_size " << b.colour_universe << '\n';
    out << "lists\n";
    for (VertexId v = 0; v < b.lists.n_vertices(); ++v) {
        out << v << ':';
        for (auto c : b.lists[v])
            out << ' ' << c;
        out << '\n';
    }
    out << "constraints " << b.graph.n_constraints() << '\n';
    for (const auto & block : b.graph.pairs())
        for (const auto & c : block.constraints)
            out << block.low << ' ' << block.high << ' ' << c.from_colour << ' ' << c.to_colour << '\n';
    out << "meta " << b.meta.size() << '\n';
    for (const auto & [key, value] : b.meta) {
        if (key.empty() || key.find_first_of(" \t\n\r") != std::string::npos)
            throw ParameterError("meta key '" + key + "' must be non-empty without whitespace");
        out << key << ' ' << detail::escape_meta(value) << '\n';
    }
    out << "end\n";
}

inline InstanceBundle read_instance(std::istream & in)
{
    detail::LineReader r(in);
    if (r.next("header") != "conflict-instance")
        throw ParseError(r.line(), "expected 'conflict-instance' header");
    const auto version = detail::keyword_value<int>(r, "version");
    if (version != 1)
        throw ParseError(r.line(), "unsupported version " + std::to_string(version));
    const auto n = detail::keyword_value<std::size_t>(r, "n_vertices");
    InstanceBundle b;
    b.colour_universe = detail::keyword_value<std::size_t>(r, "colour_universe_size");
    b.graph = MultiGraph(n);
    b.lists = ListAssignment(n);

    if (r.next("lists") != "lists")
        throw ParseError(r.line(), "expected 'lists'");
    for (VertexId v = 0; v < n; ++v) {
        const auto text = r.next("list record");
        const auto colon = text.find(':');
        if (colon == std::string::npos)
            throw ParseError(r.line(), "list record needs '<vertex>:'");
        std::size_t index = 0;
        try {
            std::size_t used = 0;
            index = std::stoul(text.substr(0, colon), &used);
            if (used != colon)
                throw std::invalid_argument("junk");
        }
        catch (const std::exception &) {
            throw ParseError(r.line(), "malformed vertex index in list record");
        }
        if (index != v)
            throw ParseError(r.line(), "list records out of order: expected vertex " + std::to_string(v));
        std::istringstream fields(text.substr(colon + 1));
        std::vector<Colour> colours;
        Colour c = 0;
        while (fields >> c)
            colours.push_back(c);
        if (!fields.eof())
            throw ParseError(r.line(), "malformed colour in list record");
        if (!std::is_sorted(colours.begin(), colours.end())
            || std::adjacent_find(colours.begin(), colours.end()) != colours.end())
            throw ParseError(r.line(), "list colours must be strictly ascending");
        b.lists.set(v, std::move(colours));
    }

    const auto m = detail::keyword_value<std::size_t>(r, "constraints");
    for (std::size_t k = 0; k < m; ++k) {
        const auto text = r.next("constraint record");
        std::istringstream fields(text);
        long long u = 0, v = 0;
        Colour cu = 0, cv = 0;
        std::string rest;
        if (!(fields >> u >> v >> cu >> cv) || (fields >> rest))
            throw ParseError(r.line(), "constraint record needs '<u> <v> <c_u> <c_v>'");
        if (u < 0 || v < 0 || static_cast<std::size_t>(u) >= n || static_cast<std::size_t>(v) >= n)
            throw ParseError(r.line(), "constraint endpoint out of range");
        try {
            b.graph.add_constraint(static_cast<VertexId>(u), static_cast<VertexId>(v), {cu, cv});
        }
        catch (const StructuralError & e) {
            throw ParseError(r.line(), e.what());
        }
    }

    const auto k = detail::keyword_value<std::size_t>(r, "meta");
    for (std::size_t i = 0; i < k; ++i) {
        const auto text = r.next("meta record");
        const auto space = text.find(' ');
        if (space == 0 || text.empty())
            throw ParseError(r.line(), "meta record needs a key");
        const auto key = text.substr(0, space);
        const auto value = space == std::string::npos ? std::string{} : text.substr(space + 1);
        b.meta[key] = detail::unescape_meta(value, r.line());
    }
    if (r.next("end") != "end")
        throw ParseError(r.line(), "expected 'end'");
    return b;
}

inline void save_instance(const std::string & path, const InstanceBundle & b)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open '" + path + "' for writing");
    write_instance(out, b);
    if (!out)
        throw std::runtime_error("write to '" + path + "' failed");
}

inline InstanceBundle load_instance(const std::string & path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open '" + path + "'");
    return read_instance(in);
}

} // namespace conflict
