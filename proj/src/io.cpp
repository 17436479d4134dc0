#include "rewr/io.hpp"

#include <algorithm>
#include <istream>
#include <optional>
#include <set>
#include <sstream>
#include <tuple>
#include <vector>

namespace rewr {

ParseError::ParseError(std::size_t line, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

namespace {

std::optional<std::uint32_t> parse_u32(const std::string& token) {
    if (token.empty() || token.size() > 10) return std::nullopt;
    std::uint64_t value = 0;
    for (char c : token) {
        if (c < '0' || c > '9') return std::nullopt;
        value = value * 10 + static_cast<std::uint64_t>(c - '0');
    }
    if (value > 0xffffffffull) return std::nullopt;
    return static_cast<std::uint32_t>(value);
}

struct RawEdge {
    bool snd = false;
    NodeId src = 0, dst = 0;
    std::optional<Label> label;
};

}  // namespace

ParsedSystem parse_system(std::istream& in) {
    std::size_t lineno = 0;
    bool have_header = false;
    NodeId n_nodes = 0;
    std::optional<Label> labels_directive;
    std::size_t labels_line = 0;
    bool comm_directive = false;
    std::vector<RawEdge> edges;
    bool labelled = false;
    std::set<std::tuple<bool, NodeId, NodeId, std::uint64_t>> seen;

    std::string line;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        std::istringstream words(line);
        std::vector<std::string> tok;
        for (std::string w; words >> w;) tok.push_back(w);
        if (tok.empty()) continue;

        if (!have_header) {
            if (tok[0] != "ars" || tok.size() != 2)
                throw ParseError(lineno, "expected 'ars <n_nodes>' header");
            const auto n = parse_u32(tok[1]);
            if (!n) throw ParseError(lineno, "invalid node count '" + tok[1] + "'");
            if (*n == 0) throw ParseError(lineno, "node count must be positive");
            n_nodes = *n;
            have_header = true;
            continue;
        }

        if (tok[0] == "labels") {
            if (tok.size() != 2) throw ParseError(lineno, "expected 'labels <count>'");
            if (labels_directive) throw ParseError(lineno, "duplicate labels directive");
            const auto k = parse_u32(tok[1]);
            if (!k) throw ParseError(lineno, "invalid label count '" + tok[1] + "'");
            labels_directive = *k;
            labels_line = lineno;
            continue;
        }
        if (tok[0] == "comm") {
            if (tok.size() != 1) throw ParseError(lineno, "unexpected tokens after 'comm'");
            if (comm_directive) throw ParseError(lineno, "duplicate comm directive");
            comm_directive = true;
            continue;
        }
        if (tok[0] == "->" || tok[0] == "~>") {
            if (tok.size() != 3 && tok.size() != 4)
                throw ParseError(lineno, "expected '" + tok[0] + " <src> <dst> [label]'");
            RawEdge e;
            e.snd = tok[0] == "~>";
            const auto src = parse_u32(tok[1]), dst = parse_u32(tok[2]);
            if (!src) throw ParseError(lineno, "invalid node id '" + tok[1] + "'");
            if (!dst) throw ParseError(lineno, "invalid node id '" + tok[2] + "'");
            if (*src >= n_nodes || *dst >= n_nodes)
                throw ParseError(lineno, "node id out of range");
            e.src = *src;
            e.dst = *dst;
            if (tok.size() == 4) {
                const auto lbl = parse_u32(tok[3]);
                if (!lbl) throw ParseError(lineno, "invalid label '" + tok[3] + "'");
                e.label = *lbl;
            }
            const bool this_labelled = e.label.has_value();
            if (!edges.empty() && this_labelled != labelled)
                throw ParseError(lineno, "labels must appear on all edges or none");
            labelled = this_labelled;
            const std::uint64_t key =
                e.label ? static_cast<std::uint64_t>(*e.label) : 0xffffffffffffull;
            if (!seen.insert({e.snd, e.src, e.dst, key}).second)
                throw ParseError(lineno, "duplicate edge");
            edges.push_back(e);
            continue;
        }
        throw ParseError(lineno, "unrecognized line '" + tok[0] + "'");
    }

    if (!have_header) throw ParseError(1, "expected 'ars <n_nodes>' header");
    if (labels_directive && !edges.empty() && !labelled)
        throw ParseError(labels_line, "labels directive requires labelled edges");

    const bool comm = comm_directive || std::any_of(edges.begin(), edges.end(),
                                                    [](const RawEdge& e) { return e.snd; });
    const bool want_labels = labelled || labels_directive.has_value();

    Label max_label = 0;
    for (const RawEdge& e : edges)
        if (e.label) max_label = std::max(max_label, *e.label);
    Label k = labels_directive.value_or(edges.empty() ? 0 : max_label + 1);
    if (labels_directive && labelled && *labels_directive < max_label + 1)
        throw ParseError(labels_line, "label count too small for the edge labels");

    if (!want_labels) {
        std::vector<Edge> fwd, snd;
        for (const RawEdge& e : edges) (e.snd ? snd : fwd).push_back({e.src, e.dst});
        if (comm) return CommArs(n_nodes, std::move(fwd), std::move(snd));
        return Ars(n_nodes, std::move(fwd));
    }
    std::vector<LabelledEdge> fwd, snd;
    for (const RawEdge& e : edges) (e.snd ? snd : fwd).push_back({e.src, e.dst, *e.label});
    if (comm) return LabelledCommArs(n_nodes, k, std::move(fwd), std::move(snd));
    return LabelledArs(n_nodes, k, std::move(fwd));
}

ParsedSystem parse_system_from_string(const std::string& text) {
    std::istringstream in(text);
    return parse_system(in);
}

namespace {

void print_edges(std::string& out, const char* arrow, const std::vector<Edge>& edges) {
    for (const Edge& e : edges)
        out += std::string(arrow) + " " + std::to_string(e.src) + " " + std::to_string(e.dst) +
               "\n";
}

void print_edges(std::string& out, const char* arrow, const std::vector<LabelledEdge>& edges) {
    for (const LabelledEdge& e : edges)
        out += std::string(arrow) + " " + std::to_string(e.src) + " " + std::to_string(e.dst) +
               " " + std::to_string(e.label) + "\n";
}

template <typename EdgeT>
bool needs_labels_directive(Label label_count, const std::vector<EdgeT>& fwd,
                            const std::vector<EdgeT>& snd) {
    Label max_label = 0;
    bool any = false;
    for (const auto* list : {&fwd, &snd}) {
        for (const auto& e : *list) {
            max_label = std::max(max_label, e.label);
            any = true;
        }
    }
    return !any || label_count != max_label + 1;
}

}  // namespace

std::string print_system(const Ars& sys) {
    std::string out = "ars " + std::to_string(sys.n_nodes()) + "\n";
    print_edges(out, "->", sys.edges());
    return out;
}

std::string print_system(const CommArs& sys) {
    std::string out = "ars " + std::to_string(sys.n_nodes()) + "\n";
    if (sys.snd().empty()) out += "comm\n";
    print_edges(out, "->", sys.fwd());
    print_edges(out, "~>", sys.snd());
    return out;
}

std::string print_system(const LabelledArs& sys) {
    std::string out = "ars " + std::to_string(sys.n_nodes()) + "\n";
    if (needs_labels_directive(sys.label_count(), sys.edges(), std::vector<LabelledEdge>{}))
        out += "labels " + std::to_string(sys.label_count()) + "\n";
    print_edges(out, "->", sys.edges());
    return out;
}

std::string print_system(const LabelledCommArs& sys) {
    std::string out = "ars " + std::to_string(sys.n_nodes()) + "\n";
    if (sys.snd().empty()) out += "comm\n";
    if (needs_labels_directive(sys.label_count(), sys.fwd(), sys.snd()))
        out += "labels " + std::to_string(sys.label_count()) + "\n";
    print_edges(out, "->", sys.fwd());
    print_edges(out, "~>", sys.snd());
    return out;
}

std::string print_system(const ParsedSystem& sys) {
    return std::visit([](const auto& s) { return print_system(s); }, sys);
}

namespace {

std::string dot_edge(NodeId src, NodeId dst, const std::optional<Label>& label, bool dashed) {
    std::string out = "  " + std::to_string(src) + " -> " + std::to_string(dst);
    std::vector<std::string> attrs;
    if (label) attrs.push_back("label=\"" + std::to_string(*label) + "\"");
    if (dashed) attrs.push_back("style=dashed");
    if (!attrs.empty()) {
        out += " [" + attrs[0];
        for (std::size_t i = 1; i < attrs.size(); ++i) out += ", " + attrs[i];
        out += "]";
    }
    return out + ";\n";
}

struct DotEdges {
    std::vector<std::pair<Edge, std::optional<Label>>> fwd, snd;
};

DotEdges collect_edges(const Ars& s) {
    DotEdges d;
    for (const Edge& e : s.edges()) d.fwd.push_back({e, std::nullopt});
    return d;
}
DotEdges collect_edges(const CommArs& s) {
    DotEdges d;
    for (const Edge& e : s.fwd()) d.fwd.push_back({e, std::nullopt});
    for (const Edge& e : s.snd()) d.snd.push_back({e, std::nullopt});
    return d;
}
DotEdges collect_edges(const LabelledArs& s) {
    DotEdges d;
    for (const LabelledEdge& e : s.edges()) d.fwd.push_back({{e.src, e.dst}, e.label});
    return d;
}
DotEdges collect_edges(const LabelledCommArs& s) {
    DotEdges d;
    for (const LabelledEdge& e : s.fwd()) d.fwd.push_back({{e.src, e.dst}, e.label});
    for (const LabelledEdge& e : s.snd()) d.snd.push_back({{e.src, e.dst}, e.label});
    return d;
}

}  // namespace

std::string export_dot(const ParsedSystem& sys) {
    const NodeId n = std::visit([](const auto& s) { return s.n_nodes(); }, sys);
    const DotEdges edges = std::visit([](const auto& s) { return collect_edges(s); }, sys);
    std::string out = "digraph ars {\n  rankdir=TB;\n";
    for (NodeId v = 0; v < n; ++v) out += "  " + std::to_string(v) + ";\n";
    for (const auto& [e, label] : edges.fwd) out += dot_edge(e.src, e.dst, label, false);
    for (const auto& [e, label] : edges.snd) out += dot_edge(e.src, e.dst, label, true);
    out += "}\n";
    return out;
}

}  // namespace rewr
