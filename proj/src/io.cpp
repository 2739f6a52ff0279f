#include "proxytally/io.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <sstream>
#include <vector>

#include <json.hpp>

namespace proxytally {

namespace {

using nlohmann::json;

[[noreturn]] void parse_fail(const std::string &where, const std::string &what)
{
    throw Error(ErrorCode::ParseError, where + ": " + what);
}

std::string_view strip_bom(std::string_view s) noexcept
{
    if (s.size() >= 3 && s.substr(0, 3) == "\xEF\xBB\xBF")
        s.remove_prefix(3);
    return s;
}

bool is_space(char c) noexcept
{
    return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' || c == '\f';
}

std::string format_double(double v)
{
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

GraphSpec parse_json(std::string_view bytes)
{
    json doc;
    try {
        doc = json::parse(bytes.begin(), bytes.end());
    } catch (const json::parse_error &e) {
        parse_fail("offset " + std::to_string(e.byte), e.what());
    }
    if (!doc.is_object())
        parse_fail("offset 0", "top-level value must be an object");

    GraphSpec spec;
    const auto nodes = doc.find("nodes");
    if (nodes == doc.end() || !nodes->is_array())
        parse_fail("/nodes", "missing \"nodes\" array");
    for (std::size_t i = 0; i < nodes->size(); ++i) {
        const auto &n = (*nodes)[i];
        const std::string where = "/nodes/" + std::to_string(i);
        if (!n.is_object())
            parse_fail(where, "node entries must be objects");
        const auto id = n.find("id");
        if (id == n.end() || !id->is_string())
            parse_fail(where, "\"id\" must be a string");
        bool votes = false;
        if (const auto v = n.find("votes"); v != n.end()) {
            if (!v->is_boolean())
                parse_fail(where, "\"votes\" must be a boolean");
            votes = v->get<bool>();
        }
        spec.nodes.push_back({id->get<std::string>(), votes});
    }
    if (spec.nodes.empty())
        parse_fail("/nodes", "no nodes");

    if (const auto dels = doc.find("delegations"); dels != doc.end()) {
        if (!dels->is_array())
            parse_fail("/delegations", "\"delegations\" must be an array");
        for (std::size_t i = 0; i < dels->size(); ++i) {
            const auto &d = (*dels)[i];
            const std::string where = "/delegations/" + std::to_string(i);
            if (!d.is_object())
                parse_fail(where, "delegation entries must be objects");
            const auto from = d.find("from");
            const auto to = d.find("to");
            if (from == d.end() || !from->is_string() || to == d.end() || !to->is_string())
                parse_fail(where, "\"from\" and \"to\" must be strings");
            EdgeSpec e{from->get<std::string>(), to->get<std::string>(), std::nullopt};
            if (const auto w = d.find("weight"); w != d.end() && !w->is_null()) {
                if (!w->is_number())
                    parse_fail(where, "\"weight\" must be a number");
                e.weight = w->get<double>();
            }
            spec.edges.push_back(std::move(e));
        }
    }
    return spec;
}

GraphSpec parse_edgelist(std::string_view bytes)
{
    GraphSpec spec;
    std::size_t line_no = 0;
    while (!bytes.empty()) {
        ++line_no;
        const auto eol = bytes.find('\n');
        std::string_view line = bytes.substr(0, eol);
        bytes.remove_prefix(eol == std::string_view::npos ? bytes.size() : eol + 1);
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);

        std::vector<std::string_view> tokens;
        std::size_t pos = 0;
        while (pos < line.size()) {
            while (pos < line.size() && is_space(line[pos]))
                ++pos;
            const std::size_t start = pos;
            while (pos < line.size() && !is_space(line[pos]))
                ++pos;
            if (pos > start)
                tokens.push_back(line.substr(start, pos - start));
        }
        if (tokens.empty())
            continue;

        const std::string where = "line " + std::to_string(line_no);
        if (tokens.size() >= 2 && tokens[1] == "->") {
            if (tokens.size() != 3 && tokens.size() != 4)
                parse_fail(where, "expected `<from> -> <to> [weight]`");
            EdgeSpec e{std::string{tokens[0]}, std::string{tokens[2]}, std::nullopt};
            if (tokens.size() == 4) {
                double w = 0.0;
                const auto tok = tokens[3];
                const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), w);
                if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
                    parse_fail(where, "invalid weight '" + std::string{tok} + "'");
                e.weight = w;
            }
            spec.edges.push_back(std::move(e));
        } else if (tokens.size() == 2 && (tokens[0] == "voter" || tokens[0] == "node")) {
            spec.nodes.push_back({std::string{tokens[1]}, tokens[0] == "voter"});
        } else {
            parse_fail(where, "expected `voter <id>`, `node <id>` or `<from> -> <to> [weight]`");
        }
    }
    if (spec.nodes.empty())
        parse_fail("line " + std::to_string(line_no), "no nodes");
    return spec;
}

bool edgelist_safe(std::string_view id) noexcept
{
    if (id.empty() || id == "->")
        return false;
    for (char c : id) {
        if (is_space(c) || c == '#')
            return false;
    }
    return true;
}

std::string dot_quote(std::string_view s)
{
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\')
            out += '\\';
        out += c;
    }
    out += '"';
    return out;
}

} // namespace

InputFormat detect_format(std::string_view bytes) noexcept
{
    bytes = strip_bom(bytes);
    for (char c : bytes) {
        if (is_space(c))
            continue;
        return c == '{' ? InputFormat::Json : InputFormat::EdgeList;
    }
    return InputFormat::EdgeList;
}

GraphSpec parse_spec(std::string_view bytes, InputFormat format)
{
    bytes = strip_bom(bytes);
    return format == InputFormat::Json ? parse_json(bytes) : parse_edgelist(bytes);
}

DelegationGraph parse_input(std::string_view bytes, InputFormat format)
{
    return build_graph(parse_spec(bytes, format));
}

std::string emit_graph(const DelegationGraph &graph, InputFormat format)
{
    const bool weighted = graph.weight_mode() == WeightMode::Explicit;
    if (format == InputFormat::Json) {
        json nodes = json::array();
        for (const auto &n : graph.nodes())
            nodes.push_back({{"id", n.id}, {"votes", n.is_voter}});
        json dels = json::array();
        for (const auto &e : graph.edges()) {
            json d = {{"from", graph.id(e.from)}, {"to", graph.id(e.to)}};
            if (weighted)
                d["weight"] = e.weight;
            dels.push_back(std::move(d));
        }
        json doc = {{"nodes", std::move(nodes)}, {"delegations", std::move(dels)}};
        return doc.dump(2) + "\n";
    }

    std::ostringstream out;
    for (const auto &n : graph.nodes()) {
        if (!edgelist_safe(n.id))
            throw Error(ErrorCode::InvalidArgument, "node id '" + n.id + "' cannot be written as an edge list token");
        out << (n.is_voter ? "voter " : "node ") << n.id << '\n';
    }
    for (const auto &e : graph.edges()) {
        out << graph.id(e.from) << " -> " << graph.id(e.to);
        if (weighted)
            out << ' ' << format_double(e.weight);
        out << '\n';
    }
    return out.str();
}

std::string to_dot(const SimplifiedGraph &sg)
{
    const auto &g = sg.graph;
    std::ostringstream out;
    out << "digraph delegation {\n";
    out << "  node [shape=circle, style=filled];\n";
    for (const auto &n : g.nodes())
        out << "  " << dot_quote(n.id) << " [fillcolor=" << (n.is_voter ? "green" : "blue") << "];\n";
    for (const auto &e : g.edges()) {
        out << "  " << dot_quote(g.id(e.from)) << " -> " << dot_quote(g.id(e.to)) << " [label=\""
            << format_double(e.weight) << "\"];\n";
    }
    out << "}\n";
    return out.str();
}

} // namespace proxytally
